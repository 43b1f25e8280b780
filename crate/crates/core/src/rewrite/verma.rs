use std::collections::BTreeMap;
use std::fmt;

use super::RewriteError;
use crate::algebra::{bracket, GenKind, Generator, Sector};
use crate::arith::{rat, IndexExpr, Poly};

/// Highest-weight data: `L_0 v = h v`, `H_0 v = hp v`, `C v = cc v`, and `v` is
/// killed by positive modes and by `G^+_0` in the N=2 Ramond sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VermaState {
    pub sector: Sector,
    pub h: Poly,
    pub hp: Poly,
    pub cc: Poly,
}

impl VermaState {
    pub fn new(sector: Sector, h: Poly, hp: Poly, cc: Poly) -> Self {
        VermaState { sector, h, hp, cc }
    }

    pub fn symbolic(sector: Sector) -> Self {
        VermaState::new(sector, Poly::var("h"), Poly::var("hp"), Poly::var("cc"))
    }
}

/// Normal-ordered product of creation operators applied to the highest-weight
/// vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial {
    factors: Vec<Generator>,
}

impl PbwMonomial {
    pub fn vacuum() -> Self {
        PbwMonomial { factors: Vec::new() }
    }

    /// Validates creators, normal order and squarefree odd factors.
    pub fn new(factors: Vec<Generator>) -> Result<Self, RewriteError> {
        let bad = || RewriteError::NotPbw(format!("{factors:?}"));
        if let Some(first) = factors.first() {
            let sector = first.sector;
            for g in &factors {
                if g.sector != sector || !is_creator(g) {
                    return Err(bad());
                }
                g.validate()?;
            }
            for w in factors.windows(2) {
                let (k0, k1) = (key(&w[0]), key(&w[1]));
                if k0 > k1 || (k0 == k1 && w[0].parity().is_odd()) {
                    return Err(bad());
                }
            }
        }
        Ok(PbwMonomial { factors })
    }

    pub fn factors(&self) -> &[Generator] {
        &self.factors
    }

    /// Twice the level `-sum(indices)`.
    pub fn doubled_level(&self) -> i64 {
        -self
            .factors
            .iter()
            .map(|g| g.index.concrete_doubled().expect("concrete"))
            .sum::<i64>()
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.factors {
            write!(f, "{g} ")?;
        }
        f.write_str("v")
    }
}

impl fmt::Debug for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite combination of PBW monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VermaVector {
    terms: BTreeMap<PbwMonomial, Poly>,
}

impl VermaVector {
    pub fn zero() -> Self {
        VermaVector::default()
    }

    pub fn monomial(m: PbwMonomial) -> Self {
        let mut v = VermaVector::zero();
        v.add_term(m, &Poly::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, Poly> {
        &self.terms
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &VermaVector, k: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * k));
        }
    }
}

impl fmt::Display for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn is_creator(g: &Generator) -> bool {
    if g.kind == GenKind::C {
        return false;
    }
    let d = g.index.concrete_doubled().expect("Verma computations use concrete indices");
    d < 0 || (d == 0 && g.sector.is_ramond() && matches!(g.kind, GenKind::GMinus | GenKind::G))
}

/// Normal order: index ascending, then `L < H < G+ < G- < G`.
fn key(g: &Generator) -> (IndexExpr, GenKind) {
    (g.index.clone(), g.kind)
}

/// Eigenvalue of a non-creating generator on the highest-weight vector.
fn evaluate(g: &Generator, st: &VermaState) -> Poly {
    if g.kind == GenKind::C {
        return st.cc.clone();
    }
    if !g.index.is_zero() {
        return Poly::zero();
    }
    match g.kind {
        GenKind::L => st.h.clone(),
        GenKind::H => st.hp.clone(),
        _ => Poly::zero(),
    }
}

type Work = BTreeMap<Vec<Generator>, Poly>;

fn push(work: &mut Work, f: Vec<Generator>, c: Poly) {
    if c.is_zero() {
        return;
    }
    let slot = work.entry(f.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        work.remove(&f);
    }
}

/// Straightens `word · v` into PBW monomials.
fn straighten(work: Work, st: &VermaState) -> Result<VermaVector, RewriteError> {
    let mut work = work;
    let mut out = VermaVector::zero();
    while let Some((factors, coef)) = work.pop_first() {
        let n = factors.len();
        let redex = (0..n.saturating_sub(1)).find(|&k| {
            let (x, y) = (&factors[k], &factors[k + 1]);
            match (is_creator(x), is_creator(y)) {
                (false, true) => true,
                (true, true) => key(x) > key(y) || (key(x) == key(y) && x.parity().is_odd()),
                _ => false,
            }
        });
        let Some(k) = redex else {
            match factors.last() {
                Some(g) if !is_creator(g) => {
                    let ev = evaluate(g, st);
                    push(&mut work, factors[..n - 1].to_vec(), &coef * &ev);
                }
                _ => out.add_term(PbwMonomial { factors }, &coef),
            }
            continue;
        };
        let (x, y) = (&factors[k], &factors[k + 1]);
        let br = bracket(x, y)?;
        let spliced = |mid: Option<Generator>| {
            let mut f = factors[..k].to_vec();
            f.extend(mid);
            f.extend_from_slice(&factors[k + 2..]);
            f
        };
        // x x = (1/2)[x, x] for odd x; otherwise x y = ±y x + [x, y]
        let half = x == y;
        let scale = if half { Poly::constant(rat(1, 2)) } else { Poly::one() };
        if !half {
            let mut swapped = factors.clone();
            swapped.swap(k, k + 1);
            let sign = Poly::from_int(x.parity().koszul(y.parity()));
            push(&mut work, swapped, &coef * &sign);
        }
        for (z, c) in br.body() {
            push(&mut work, spliced(Some(z.clone())), &(&coef * c) * &scale);
        }
        let central = br.central_coefficient();
        if !central.is_zero() {
            push(&mut work, spliced(None), &(&(&coef * &central) * &st.cc) * &scale);
        }
    }
    Ok(out)
}

/// `g · (m v)` in normal order.
pub fn verma_act(
    g: &Generator,
    m: &PbwMonomial,
    st: &VermaState,
) -> Result<VermaVector, RewriteError> {
    if g.sector != st.sector {
        return Err(RewriteError::SectorMismatch(g.to_string(), st.sector));
    }
    g.validate()?;
    if !g.index.is_concrete() {
        return Err(RewriteError::SymbolicIndex(g.to_string()));
    }
    let mut f = vec![g.clone()];
    f.extend(m.factors.iter().cloned());
    let mut work = Work::new();
    push(&mut work, f, Poly::one());
    straighten(work, st)
}

/// Linear extension of [`verma_act`].
pub fn verma_act_vector(
    g: &Generator,
    v: &VermaVector,
    st: &VermaState,
) -> Result<VermaVector, RewriteError> {
    let mut out = VermaVector::zero();
    for (m, c) in v.terms() {
        out.add_scaled(&verma_act(g, m, st)?, c);
    }
    Ok(out)
}

/// Creation operators with `-2 * index <= max_doubled_level`, in normal order.
fn creators(sector: Sector, max_doubled_level: i64) -> Vec<Generator> {
    let mut out = Vec::new();
    for d in -max_doubled_level..=0 {
        for &kind in sector.even_kinds().iter().chain(sector.odd_kinds()) {
            let g = Generator { kind, index: IndexExpr::half(d), sector };
            if g.validate().is_ok() && is_creator(&g) {
                out.push(g);
            }
        }
    }
    out.sort_by_key(key);
    out
}

fn enumerate(
    gens: &[Generator],
    start: usize,
    remaining: i64,
    current: &mut Vec<Generator>,
    visit: &mut dyn FnMut(&[Generator]),
) {
    if remaining == 0 {
        // zero-level factors may still follow
        visit(current);
    }
    for (pos, g) in gens.iter().enumerate().skip(start) {
        let cost = -g.index.concrete_doubled().expect("concrete");
        if cost > remaining {
            continue;
        }
        if cost == 0 && remaining != 0 {
            continue;
        }
        current.push(g.clone());
        let next = if g.parity().is_odd() { pos + 1 } else { pos };
        if cost == 0 {
            // only the odd Ramond zero mode has cost 0
            visit(current);
        } else {
            enumerate(gens, next, remaining - cost, current, visit);
        }
        current.pop();
    }
}

fn for_each_monomial(sector: Sector, doubled_level: i64, visit: &mut dyn FnMut(&[Generator])) {
    let gens = creators(sector, doubled_level);
    let mut current = Vec::new();
    enumerate(&gens, 0, doubled_level, &mut current, visit);
}

/// PBW monomials of level `doubled_level / 2`, in a deterministic order.
pub fn pbw_basis_at_level(sector: Sector, doubled_level: u32) -> Vec<PbwMonomial> {
    let mut out = Vec::new();
    for_each_monomial(sector, doubled_level as i64, &mut |f| {
        out.push(PbwMonomial { factors: f.to_vec() });
    });
    out.sort();
    out
}

/// PBW monomials of integer level `depth`.
pub fn pbw_basis(sector: Sector, depth: u32) -> Vec<PbwMonomial> {
    pbw_basis_at_level(sector, 2 * depth)
}

/// Number of PBW monomials at each level up to `depth`: integer levels for
/// Ramond sectors, steps of 1/2 for Neveu-Schwarz sectors.
pub fn verma_weight_dims(sector: Sector, depth: u32) -> Vec<u64> {
    let step = if sector.is_ramond() { 2 } else { 1 };
    (0..=2 * depth as i64)
        .step_by(step)
        .map(|d| {
            let mut count = 0u64;
            for_each_monomial(sector, d, &mut |_| count += 1);
            count
        })
        .collect()
}

/// Coefficients of the graded character, at the same levels as
/// [`verma_weight_dims`], from the product formula: each even mode
/// contributes `1/(1 - q^n)`, each odd mode `(1 + q^n)`.
pub fn character_series(sector: Sector, depth: u32) -> Vec<u64> {
    let len = 2 * depth as usize + 1;
    // indexed by doubled level
    let mut series = vec![0u64; len];
    series[0] = 1;
    let even = sector.even_kinds().len();
    let odd = sector.odd_kinds().len();
    for d in 1..len {
        let half_odd = d % 2 == 1;
        let evens = if half_odd { 0 } else { even };
        let odds = if half_odd == sector.is_ramond() { 0 } else { odd };
        for _ in 0..evens {
            for k in d..len {
                series[k] += series[k - d];
            }
        }
        for _ in 0..odds {
            for k in (d..len).rev() {
                series[k] += series[k - d];
            }
        }
    }
    if sector.is_ramond() {
        // odd zero modes each double the count
        let factor = 1u64 << odd.min(1);
        series.iter_mut().for_each(|x| *x *= factor);
        series.into_iter().step_by(2).collect()
    } else {
        series
    }
}
