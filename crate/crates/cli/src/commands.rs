use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::Result;
use serde_json::{json, Value};

use superconf::algebra::{jacobi_sweep, n1_embedding_residual, Sector};
use superconf::analysis::{
    classify_simplicity, crosscheck_lemma42_in_rabc, find_intertwiners, find_invariant_subspaces,
    prop44_negative_control, verify_k_action, verify_k_commutator, verify_lemma_4_2,
    verify_lemma_4_3, verify_prop44_constraints, IdentityCheck, Subspace, Verdict,
};
use superconf::arith::{int, parse_rational, IndexExpr, Rational};
use superconf::linalg::SparseVec;
use superconf::modules::{
    instantiate_window, parity_flip, verify_axioms_symbolic, Family, ModuleSpec, Perturbation, Slot,
    WindowedModule,
};
use superconf::rewrite::{character_series, verma_weight_dims};

use crate::report::{Report, Status};
use crate::UsageError;

pub const DEPTH_CAP: u32 = 12;
const MODULE_SECTOR: &str = "n2-ramond";

/// Flags shared by every command.
pub struct Context {
    pub seed: u64,
    pub timing: bool,
}

impl Context {
    fn timed<T>(&self, f: impl FnOnce() -> T) -> (T, Option<std::time::Duration>) {
        let start = Instant::now();
        let out = f();
        (out, self.timing.then(|| start.elapsed()))
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn parse_sector(s: &str) -> Result<Sector> {
    s.parse().map_err(|e: superconf::algebra::AlgebraError| usage(e.to_string()))
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse().map_err(|e: superconf::modules::ModuleError| usage(e.to_string()))
}

fn parse_q(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| usage(format!("--{name}: {e}")))
}

pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = || usage(format!("--window expects LO:HI with integers, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn build_spec(family: &str, a: &str, b: &str, c: &str, flip: bool) -> Result<ModuleSpec> {
    let family = parse_family(family)?;
    let spec = ModuleSpec::concrete(family, parse_q("a", a)?, parse_q("b", b)?, parse_q("c", c)?);
    Ok(if flip { parity_flip(&spec) } else { spec })
}

fn window(spec: &ModuleSpec, (lo, hi): (i64, i64), max_index: i64) -> Result<WindowedModule> {
    instantiate_window(spec, lo, hi, max_index).map_err(|e| usage(e.to_string()))
}

fn identity_report(c: &IdentityCheck) -> Report {
    let mut payload = serde_json::Map::new();
    payload.insert("residual".into(), json!(c.residual));
    for (k, v) in &c.details {
        payload.insert(k.clone(), json!(v));
    }
    Report::new(&c.name, MODULE_SECTOR, Status::from_pass(c.passed), Value::Object(payload))
}

pub fn verify_algebra(ctx: &Context, sectors: &[Sector], max_index: i64) -> Vec<Report> {
    sectors
        .iter()
        .map(|&s| {
            let (r, t) = ctx.timed(|| jacobi_sweep(s, max_index));
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|f| json!({ "x": f.x, "y": f.y, "z": f.z, "residual": f.residual }))
                .collect();
            Report::new(
                "super-jacobi",
                s.name(),
                Status::from_pass(r.passed()),
                json!({
                    "max_index": max_index.to_string(),
                    "triples": r.triples.to_string(),
                    "failure_count": r.failure_count.to_string(),
                    "failures": failures,
                }),
            )
            .with_timing(t)
        })
        .collect()
}

pub fn parse_perturbation(s: &str) -> Result<Perturbation> {
    match s {
        "rab-minus-on-minus" => Ok(Perturbation::RabMinusOnMinus),
        "rabc-raising-sign" => Ok(Perturbation::RabcRaisingSign),
        _ => Err(usage(format!("unknown perturbation {s:?}"))),
    }
}

fn perturbation_family(p: Perturbation) -> Family {
    match p {
        Perturbation::RabMinusOnMinus => Family::Rab,
        Perturbation::RabcRaisingSign => Family::Rabc,
    }
}

pub fn verify_modules(ctx: &Context, family: Option<&str>, perturb: Option<Perturbation>) -> Result<Vec<Report>> {
    let families = match family {
        Some(f) => vec![parse_family(f)?],
        None => vec![Family::A, Family::At, Family::Rab, Family::Rabc],
    };
    let mut out = Vec::new();
    for f in families {
        let mut spec = ModuleSpec::symbolic(f);
        if let Some(p) = perturb.filter(|p| perturbation_family(*p) == f) {
            spec = spec.with_perturbation(p);
        }
        let (r, t) = ctx.timed(|| verify_axioms_symbolic(&spec));
        let r = r?;
        let failures: Vec<Value> = r
            .failures
            .iter()
            .map(|x| json!({ "x": x.x, "y": x.y, "slot": x.slot.name(), "residual": x.residual }))
            .collect();
        let mut params = spec.parameter_strings();
        if let Some(p) = spec.perturbation {
            params.insert("perturbation".into(), serde_json::to_value(p)?.as_str().unwrap_or_default().to_string());
        }
        out.push(
            Report::new(
                "module-axioms",
                MODULE_SECTOR,
                Status::from_pass(r.passed()),
                json!({ "pairs_checked": r.checked.to_string(), "failures": failures }),
            )
            .with_parameters(params)
            .with_timing(t),
        );
    }
    Ok(out)
}

pub fn verify_lemmas(ctx: &Context) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let checks: [fn() -> Result<IdentityCheck, superconf::analysis::AnalysisError>; 5] = [
        verify_lemma_4_2,
        verify_lemma_4_3,
        verify_k_action,
        verify_k_commutator,
        crosscheck_lemma42_in_rabc,
    ];
    for check in checks {
        let (c, t) = ctx.timed(check);
        out.push(identity_report(&c?).with_timing(t));
    }
    for check in [verify_prop44_constraints, prop44_negative_control] {
        let (c, t) = ctx.timed(check);
        out.push(identity_report(&c).with_timing(t));
    }
    Ok(out)
}

pub fn verify_embedding(ctx: &Context, sectors: &[Sector], max_index: i64) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for &s in sectors {
        if !s.is_n2() {
            return Err(usage(format!("the N=1 embedding lives in N=2 sectors, not {}", s.name())));
        }
        let (res, t) = ctx.timed(|| -> Result<(usize, Vec<Value>)> {
            let lattice: Vec<IndexExpr> = (-max_index..=max_index)
                .map(|m| if s.is_ramond() { IndexExpr::int(m) } else { IndexExpr::half(2 * m + 1) })
                .collect();
            let mut pairs = 0;
            let mut failures = Vec::new();
            for p in &lattice {
                for q in &lattice {
                    pairs += 1;
                    let r = n1_embedding_residual(s, p, q)?;
                    if !r.is_zero() {
                        failures.push(json!({ "p": p.to_string(), "q": q.to_string(), "residual": r.to_string() }));
                    }
                }
            }
            Ok((pairs, failures))
        });
        let (pairs, failures) = res?;
        out.push(
            Report::new(
                "n1-embedding",
                s.name(),
                Status::from_pass(failures.is_empty()),
                json!({ "max_index": max_index.to_string(), "pairs": pairs.to_string(), "failures": failures }),
            )
            .with_timing(t),
        );
    }
    Ok(out)
}

fn subspace_json(w: &WindowedModule, s: &Subspace) -> Value {
    let basis: BTreeMap<String, Vec<String>> =
        w.interior_labels().map(|l| (l.to_string(), s.describe_at(w, l))).collect();
    json!({ "origin": s.origin, "interior_dim": s.interior_dims(w).values().map(|(e, o)| e + o).sum::<usize>().to_string(), "basis": basis })
}

pub fn classify(ctx: &Context, spec: &ModuleSpec, win: (i64, i64), max_index: i64) -> Result<Report> {
    window(spec, win, max_index)?;
    let (r, t) = ctx.timed(|| classify_simplicity(spec, win, max_index, ctx.seed));
    let r = r?;
    let status = match (r.coherent, r.verdict) {
        (false, _) => Status::Fail,
        (true, Verdict::Simple) => Status::Pass,
        (true, Verdict::NotSimple) => Status::Witness,
    };
    let maximal: Vec<Value> = r.witnesses.iter().filter(|w| w.maximal).map(|w| serde_json::to_value(w).unwrap()).collect();
    let payload = json!({
        "verdict": r.verdict.name(),
        "criterion": r.criterion,
        "composition": r.composition,
        "normalized": r.normalized,
        "window": { "lo": win.0.to_string(), "hi": win.1.to_string() },
        "max_index": max_index.to_string(),
        "coherent": r.coherent,
        "witness_count": r.witnesses.len().to_string(),
        "maximal_witnesses": maximal,
        "trivial_constituent_claimed": r.trivial_constituent_claimed,
        "trivial_vectors": r.trivial_vectors,
    });
    Ok(Report::new("classify", MODULE_SECTOR, status, payload)
        .with_parameters(spec.parameter_strings())
        .with_timing(t))
}

pub fn submodules(ctx: &Context, spec: &ModuleSpec, win: (i64, i64), max_index: i64) -> Result<Report> {
    let w = window(spec, win, max_index)?;
    let (s, t) = ctx.timed(|| find_invariant_subspaces(&w, ctx.seed));
    let all_invariant = s.closures.iter().all(|c| c.is_invariant(&w));
    let maximal: Vec<Value> = s.maximal().map(|c| subspace_json(&w, c)).collect();
    let status = if !all_invariant {
        Status::Fail
    } else if s.is_empty() {
        Status::Pass
    } else {
        Status::Witness
    };
    Ok(Report::new(
        "submodules",
        MODULE_SECTOR,
        status,
        json!({
            "window": { "lo": win.0.to_string(), "hi": win.1.to_string() },
            "max_index": max_index.to_string(),
            "seeds_tried": s.seeds_tried.to_string(),
            "closures": s.closures.len().to_string(),
            "invariant": all_invariant,
            "maximal": maximal,
        }),
    )
    .with_parameters(spec.parameter_strings())
    .with_timing(t))
}

pub fn parse_slots(s: &str) -> Result<Vec<Slot>> {
    s.split(',')
        .map(|x| match x.trim() {
            "v" => Ok(Slot::V),
            "v+" => Ok(Slot::VPlus),
            "v-" => Ok(Slot::VMinus),
            "v+-" => Ok(Slot::VPm),
            other => Err(usage(format!("unknown slot {other:?}; expected v, v+, v-, v+-"))),
        })
        .collect()
}

pub struct IntertwineArgs {
    pub source: ModuleSpec,
    pub target: ModuleSpec,
    pub sub: Option<Vec<Slot>>,
    pub window: (i64, i64),
    pub max_index: i64,
    pub parity_reversing: bool,
}

pub fn intertwine(ctx: &Context, args: &IntertwineArgs) -> Result<Report> {
    let w1 = window(&args.source, args.window, args.max_index)?;
    let w2 = window(&args.target, args.window, args.max_index)?;
    let src = match &args.sub {
        Some(slots) => {
            let mut s = Subspace::new("slots");
            for (k, b) in w1.basis.iter().enumerate() {
                if slots.contains(&b.slot) {
                    s.insert(&w1, &SparseVec::from([(k, int(1))]));
                }
            }
            s.as_module(&w1)?
        }
        None => w1.clone(),
    };
    let (space, t) = ctx.timed(|| find_intertwiners(&src, &w2, args.parity_reversing, ctx.seed));
    let space = space?;
    let describe_map = |m: &superconf::analysis::LinearMap| -> Vec<String> {
        m.iter()
            .filter(|((tt, _), _)| src.basis[*tt].label == 0)
            .map(|((tt, u), c)| format!("{} -> {}*{}", src.describe_vector(*tt), c, w2.describe_vector(*u)))
            .collect()
    };
    let mut params = BTreeMap::new();
    params.insert("source".to_string(), args.source.describe());
    params.insert("target".to_string(), args.target.describe());
    if let Some(slots) = &args.sub {
        params.insert("sub".to_string(), slots.iter().map(|s| s.name()).collect::<Vec<_>>().join(","));
    }
    params.insert("parity_reversing".to_string(), args.parity_reversing.to_string());
    let basis: Vec<Value> = space.basis.iter().map(|m| json!(describe_map(m))).collect();
    Ok(Report::new(
        "intertwine",
        MODULE_SECTOR,
        Status::from_pass(space.bijective),
        json!({
            "dimension": space.dim().to_string(),
            "bijective": space.bijective,
            "common_weights": space.common_weights.len().to_string(),
            "basis_at_label_0": basis,
        }),
    )
    .with_parameters(params)
    .with_timing(t))
}

fn level_name(sector: Sector, k: usize) -> String {
    if sector.is_ramond() {
        k.to_string()
    } else if k % 2 == 0 {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

pub fn character(ctx: &Context, sectors: &[Sector], depth: u32) -> Result<Vec<Report>> {
    if depth > DEPTH_CAP {
        return Err(usage(format!("--depth {depth} exceeds the cap {DEPTH_CAP}")));
    }
    Ok(sectors
        .iter()
        .map(|&s| {
            let ((dims, series), t) = ctx.timed(|| (verma_weight_dims(s, depth), character_series(s, depth)));
            let levels: Vec<String> = (0..dims.len()).map(|k| level_name(s, k)).collect();
            let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>();
            let matches = dims == series;
            let mut params = BTreeMap::new();
            params.insert("depth".to_string(), depth.to_string());
            Report::new(
                "character",
                s.name(),
                Status::from_pass(matches),
                json!({ "levels": levels, "dims": show(&dims), "oracle": show(&series), "match": matches }),
            )
            .with_parameters(params)
            .with_timing(t)
        })
        .collect())
}

/// The full battery: every verify target, characters and the published
/// classification and intertwiner examples.
pub fn full_report(ctx: &Context) -> Result<Vec<Report>> {
    let mut out = verify_algebra(ctx, &Sector::ALL, 6);
    out.extend(verify_modules(ctx, None, None)?);
    out.extend(verify_lemmas(ctx)?);
    out.extend(verify_embedding(ctx, &[Sector::N2Ramond, Sector::N2NeveuSchwarz], 6)?);
    out.extend(character(ctx, &Sector::ALL, 6)?);
    for (f, a, b, c) in [
        ("a", "1/3", "5", "0"),
        ("a", "0", "0", "0"),
        ("at", "0", "0", "3"),
        ("rab", "0", "1", "0"),
        ("rabc", "1/5", "1", "0"),
        ("rabc", "1/3", "0", "0"),
    ] {
        out.push(classify(ctx, &build_spec(f, a, b, c, false)?, (-8, 8), 3)?);
    }
    out.push(intertwine(
        ctx,
        &IntertwineArgs {
            source: build_spec("a", "1/3", "2", "0", false)?,
            target: build_spec("a", "4/3", "2", "0", false)?,
            sub: None,
            window: (-8, 8),
            max_index: 3,
            parity_reversing: false,
        },
    )?);
    out.push(intertwine(
        ctx,
        &IntertwineArgs {
            source: build_spec("rabc", "1/5", "1", "0", false)?,
            target: build_spec("rab", "1/5", "1", "0", false)?,
            sub: Some(vec![Slot::VMinus, Slot::VPm]),
            window: (-8, 8),
            max_index: 3,
            parity_reversing: false,
        },
    )?);
    out.push(intertwine(
        ctx,
        &IntertwineArgs {
            source: build_spec("rab", "1/3", "2", "0", false)?,
            target: build_spec("rab", "1/3", "2", "0", true)?,
            sub: None,
            window: (-8, 8),
            max_index: 3,
            parity_reversing: true,
        },
    )?);
    Ok(out)
}
