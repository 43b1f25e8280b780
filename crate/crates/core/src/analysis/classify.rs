use std::collections::BTreeMap;

use serde::Serialize;

use super::{find_intertwiners, find_invariant_subspaces, AnalysisError, Subspace, SubspaceSearch};
use crate::arith::{int, rat, Rational};
use crate::modules::{instantiate_window, Family, ModuleSpec, Quotient, Slot, WindowedModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Simple,
    NotSimple,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Simple => "simple",
            Verdict::NotSimple => "not-simple",
        }
    }
}

/// A proper invariant subspace found in the window, rendered for reports.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub origin: String,
    /// `(even, odd)` dimension per interior label.
    pub interior_dims: BTreeMap<String, [String; 2]>,
    /// Basis rows per interior label.
    pub basis: BTreeMap<String, Vec<String>>,
    pub maximal: bool,
}

impl Witness {
    fn new(w: &WindowedModule, s: &Subspace, maximal: bool) -> Self {
        Witness {
            origin: s.origin.clone(),
            interior_dims: s
                .interior_dims(w)
                .into_iter()
                .map(|(l, (e, o))| (l.to_string(), [e.to_string(), o.to_string()]))
                .collect(),
            basis: w.interior_labels().map(|l| (l.to_string(), s.describe_at(w, l))).collect(),
            maximal,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub module: String,
    /// Parameters after `a -> frac(a)`.
    pub normalized: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// The criterion that decided the verdict.
    pub criterion: String,
    /// Composition structure for not-simple verdicts.
    pub composition: Option<String>,
    /// A trivial constituent is asserted at these parameters.
    pub trivial_constituent_claimed: bool,
    /// Interior vectors of weight 0 killed by every generator.
    pub trivial_vectors: Vec<String>,
    pub witnesses: Vec<Witness>,
    /// The window search agrees with the verdict.
    pub coherent: bool,
}

/// Verdict from the published criteria for a concrete spec with `a`
/// already normalized, and the criterion text.
pub fn simplicity_criterion(spec: &ModuleSpec) -> Result<(Verdict, String, Option<String>), AnalysisError> {
    let (a, b, c) = spec.params()?;
    let (zero, one, two, half) = (int(0), int(1), int(2), rat(1, 2));
    let a0 = a == zero;
    let out = match spec.family {
        Family::A if a0 && (b == zero || b == one) => (
            Verdict::NotSimple,
            "a in Z and b in {0, 1}".to_string(),
            Some(if b == zero {
                "trivial submodule C v_0; simple quotient".to_string()
            } else {
                "simple submodule spanned by v_i, i != 0; trivial quotient C v_0".to_string()
            }),
        ),
        Family::A => (Verdict::Simple, "a not in Z or b not in {0, 1}".to_string(), None),
        Family::At if a0 && (b == zero || b == one) && c == zero => (
            Verdict::NotSimple,
            "a in Z, b in {0, 1} and c = 0".to_string(),
            Some(if b == zero {
                "trivial submodule C v_0; simple quotient".to_string()
            } else {
                "simple submodule spanned by v_i, i != 0; trivial quotient C v_0".to_string()
            }),
        ),
        Family::At => (Verdict::Simple, "a not in Z, b not in {0, 1} or c != 0".to_string(), None),
        Family::Rab if a0 && (b == one || b == half) => (
            Verdict::NotSimple,
            "a = 0 and b in {1, 1/2}".to_string(),
            Some(if b == one {
                "submodule spanned by all basis vectors except v+_0; trivial quotient C v+_0".to_string()
            } else {
                "trivial submodule C v-_0; simple quotient".to_string()
            }),
        ),
        Family::Rab => (Verdict::Simple, "a != 0 or b not in {1, 1/2}".to_string(), None),
        Family::Rabc => {
            let minus = &two * &b - &c == two;
            let plus = &two * &b + &c == two;
            let mut parts = Vec::new();
            if minus {
                parts.push("submodule span{v-, v+-} of R_{a,b} type; quotient span{v, v+}".to_string());
            }
            if plus {
                parts.push("submodule span{v+, v+- + 2(a+i)v} of R_{a,b} type; quotient span{v, v-}".to_string());
            }
            if minus || plus {
                (Verdict::NotSimple, "2b - c = 2 or 2b + c = 2".to_string(), Some(parts.join("; ")))
            } else {
                (Verdict::Simple, "2b - c != 2 and 2b + c != 2".to_string(), None)
            }
        }
    };
    Ok(out)
}

/// Classifies a concrete full module and corroborates the verdict on the
/// window `[lo, hi]` with generators up to `max_index`.
pub fn classify_simplicity(
    spec: &ModuleSpec,
    (lo, hi): (i64, i64),
    max_index: i64,
    seed: u64,
) -> Result<Classification, AnalysisError> {
    if spec.quotient != Quotient::Full || spec.perturbation.is_some() {
        return Err(AnalysisError::NotFullModule(spec.describe()));
    }
    let norm = spec.normalized()?;
    let (a, b, c) = norm.params()?;
    let (verdict, criterion, composition) = simplicity_criterion(&norm)?;
    let w = instantiate_window(&norm, lo, hi, max_index)?;
    let search: SubspaceSearch = find_invariant_subspaces(&w, seed);
    let witnesses: Vec<Witness> = search
        .closures
        .iter()
        .enumerate()
        .map(|(i, s)| Witness::new(&w, s, search.maximal.contains(&i)))
        .collect();
    let coherent = match verdict {
        Verdict::Simple => search.is_empty(),
        Verdict::NotSimple => !search.is_empty(),
    };
    let trivial_constituent_claimed = norm.family == Family::Rabc
        && b == int(1)
        && c == int(0)
        && (a == int(0) || a == rat(1, 2));
    Ok(Classification {
        module: spec.describe(),
        normalized: norm.parameter_strings(),
        verdict,
        criterion,
        composition,
        trivial_constituent_claimed,
        trivial_vectors: trivial_vectors(&w),
        witnesses,
        coherent,
    })
}

fn trivial_vectors(w: &WindowedModule) -> Vec<String> {
    let zero = int(0);
    let mut out = Vec::new();
    for l in w.interior_labels() {
        let block: Vec<usize> = (0..w.dim()).filter(|&k| w.basis[k].label == l).collect();
        if block.first().is_none_or(|&k| w.basis[k].weight != zero) {
            continue;
        }
        // Joint kernel of all generators on the weight-zero space.
        let mut eqs = Vec::new();
        for k in 0..w.matrices.len() {
            let mut rows: BTreeMap<usize, crate::linalg::SparseVec<usize>> = BTreeMap::new();
            for (n, &col) in block.iter().enumerate() {
                for (r, v) in &w.matrices[k].columns[col] {
                    rows.entry(*r).or_default().insert(n, v.clone());
                }
            }
            eqs.extend(rows.into_values());
        }
        for x in crate::linalg::nullspace(&eqs, block.len()) {
            let v = x.into_iter().map(|(n, c)| (block[n], c)).collect();
            out.push(super::subspace::describe_vector(w, &v));
        }
    }
    out
}

/// Result of scanning `Rab(a, b)` for a module isomorphic to a witness.
#[derive(Clone, Debug, Serialize)]
pub struct RabMatch {
    /// Every scanned `b` with a bijective intertwiner.
    pub matches: Vec<String>,
    /// Dimension of the intertwiner space per scanned `b`.
    pub dims: BTreeMap<String, String>,
    pub parity_reversing: bool,
}

impl RabMatch {
    pub fn unique(&self) -> Option<&str> {
        match self.matches.as_slice() {
            [b] => Some(b),
            _ => None,
        }
    }
}

/// Scans `candidates` for `b` such that the subspace of `w` spanned by the
/// given slots is isomorphic to `Rab(a, b)` on the same window.
pub fn match_rab_parameter(
    w: &WindowedModule,
    slots: &[Slot],
    candidates: &[Rational],
    parity_reversing: bool,
    seed: u64,
) -> Result<RabMatch, AnalysisError> {
    let mut sub = Subspace::new(format!("span of {:?}", slots.iter().map(|s| s.name()).collect::<Vec<_>>()));
    for (k, bv) in w.basis.iter().enumerate() {
        if slots.contains(&bv.slot) {
            sub.insert(w, &crate::linalg::SparseVec::from([(k, int(1))]));
        }
    }
    let sub_module = sub.as_module(w)?;
    let a = w.spec.params()?.0;
    let mut matches = Vec::new();
    let mut dims = BTreeMap::new();
    for b in candidates {
        let rab = ModuleSpec::concrete(Family::Rab, a.clone(), b.clone(), int(0));
        let target = instantiate_window(&rab, w.lo, w.hi, w.max_index)?;
        let space = find_intertwiners(&sub_module, &target, parity_reversing, seed)?;
        dims.insert(b.to_string(), space.dim().to_string());
        if space.bijective {
            matches.push(b.to_string());
        }
    }
    Ok(RabMatch { matches, dims, parity_reversing })
}
