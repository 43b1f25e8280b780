use std::collections::BTreeMap;
use std::fmt;

use super::{RewriteError, Word};
use crate::algebra::{bracket, GenKind, Generator, Sector};
use crate::arith::{IndexExpr, Poly};

/// A layer of vectors `u_j` with `L_m u_j = (a + bm + j) u_{m+j}`,
/// `H_m u_j = c u_{m+j}`, `G^-_m u_j = 0` and `C u_j = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLayer {
    pub sector: Sector,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
}

/// Which redex is contracted first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftInnermost,
    RightInnermost,
}

/// Combination of `G^+_{r_1} ... G^+_{r_k} u_j` with `r_1 < ... < r_k` in the
/// index order.
#[derive(Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub sector: Sector,
    terms: BTreeMap<(Vec<IndexExpr>, IndexExpr), Poly>,
}

impl NormalForm {
    pub fn zero(sector: Sector) -> Self {
        NormalForm { sector, terms: BTreeMap::new() }
    }

    /// The single base vector `u_j`.
    pub fn base(sector: Sector, j: IndexExpr) -> Self {
        let mut nf = NormalForm::zero(sector);
        nf.add_term(Vec::new(), j, &Poly::one());
        nf
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[IndexExpr], &IndexExpr, &Poly)> {
        self.terms.iter().map(|((w, j), c)| (w.as_slice(), j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, raising: &[IndexExpr], label: &IndexExpr) -> Poly {
        self.terms
            .get(&(raising.to_vec(), label.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn add_term(&mut self, raising: Vec<IndexExpr>, label: IndexExpr, coef: &Poly) {
        if coef.is_zero() {
            return;
        }
        let key = (raising, label);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &NormalForm, k: &Poly) {
        for ((w, j), c) in &other.terms {
            self.add_term(w.clone(), j.clone(), &(c * k));
        }
    }

    pub fn scaled(&self, k: &Poly) -> NormalForm {
        let mut out = NormalForm::zero(self.sector);
        out.add_scaled(self, k);
        out
    }

    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::from_int(-1));
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> NormalForm {
        let mut out = NormalForm::zero(self.sector);
        for ((w, j), c) in &self.terms {
            out.add_term(w.clone(), j.clone(), &f(c));
        }
        out
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, ((w, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*")?;
            for r in w {
                if r.is_concrete() {
                    write!(f, "G+_{r} ")?;
                } else {
                    write!(f, "G+_{{{r}}} ")?;
                }
            }
            write!(f, "u_{{{j}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Work = BTreeMap<(Vec<Generator>, IndexExpr), Poly>;

fn push(work: &mut Work, factors: Vec<Generator>, label: IndexExpr, coef: Poly) {
    if coef.is_zero() {
        return;
    }
    let key = (factors, label);
    let slot = work.entry(key.clone()).or_default();
    *slot += &coef;
    if slot.is_zero() {
        work.remove(&key);
    }
}

fn is_raising(g: &Generator) -> bool {
    g.kind == GenKind::GPlus
}

/// (length, non-raising factors left of raising ones, raising inversions).
fn measure(factors: &[Generator]) -> (usize, usize, usize) {
    let mut mixed = 0;
    let mut odd = 0;
    for (i, x) in factors.iter().enumerate() {
        for y in &factors[i + 1..] {
            match (is_raising(x), is_raising(y)) {
                (false, true) => mixed += 1,
                (true, true) if x.index >= y.index => odd += 1,
                _ => {}
            }
        }
    }
    (factors.len(), mixed, odd)
}

enum Redex {
    /// Rightmost factor is not raising and acts on the base vector.
    End,
    /// Adjacent pair starting at this position.
    Pair(usize),
}

fn find_redex(factors: &[Generator], strategy: Strategy) -> Option<Redex> {
    let n = factors.len();
    let pair_at = |k: usize| {
        let (x, y) = (&factors[k], &factors[k + 1]);
        is_raising(y) && (!is_raising(x) || x.index >= y.index)
    };
    let end = n > 0 && !is_raising(&factors[n - 1]);
    match strategy {
        Strategy::LeftInnermost => {
            if let Some(k) = (0..n.saturating_sub(1)).find(|&k| pair_at(k)) {
                return Some(Redex::Pair(k));
            }
            end.then_some(Redex::End)
        }
        Strategy::RightInnermost => {
            if end {
                return Some(Redex::End);
            }
            (0..n.saturating_sub(1)).rev().find(|&k| pair_at(k)).map(Redex::Pair)
        }
    }
}

impl BaseLayer {
    pub fn new(sector: Sector, a: Poly, b: Poly, c: Poly) -> Result<Self, RewriteError> {
        if !sector.is_n2() {
            return Err(RewriteError::NoBaseLayer(sector));
        }
        Ok(BaseLayer { sector, a, b, c })
    }

    /// Layer with indeterminate parameters `a`, `b`, `c`.
    pub fn symbolic(sector: Sector) -> Self {
        BaseLayer::new(sector, Poly::var("a"), Poly::var("b"), Poly::var("c"))
            .expect("symbolic layers are built for N=2 sectors")
    }

    /// Action of a single generator on `u_j`.
    pub fn act(&self, g: &Generator, j: &IndexExpr) -> Option<(Poly, IndexExpr)> {
        let target = &g.index + j;
        match g.kind {
            GenKind::L => {
                let coef = &(&self.a + &(&self.b * &g.index.to_poly())) + &j.to_poly();
                Some((coef, target))
            }
            GenKind::H => Some((self.c.clone(), target)),
            _ => None,
        }
    }

    fn check(&self, w: &Word) -> Result<(), RewriteError> {
        if w.sector != self.sector {
            return Err(RewriteError::SectorMismatch(w.to_string(), self.sector));
        }
        Ok(())
    }

    /// Fully reduces `w · u_j`.
    pub fn reduce_on_base(&self, w: &Word, j: &IndexExpr) -> Result<NormalForm, RewriteError> {
        self.reduce_with(w, j, Strategy::LeftInnermost)
    }

    pub fn reduce_with(
        &self,
        w: &Word,
        j: &IndexExpr,
        strategy: Strategy,
    ) -> Result<NormalForm, RewriteError> {
        self.reduce_combination(&[(Poly::one(), w.clone())], j, strategy)
    }

    /// Reduces `sum_k c_k w_k · u_j`.
    pub fn reduce_combination(
        &self,
        terms: &[(Poly, Word)],
        j: &IndexExpr,
        strategy: Strategy,
    ) -> Result<NormalForm, RewriteError> {
        let mut work = Work::new();
        for (c, w) in terms {
            self.check(w)?;
            push(&mut work, w.factors.clone(), j.clone(), c.clone());
        }
        self.run(work, strategy)
    }

    /// `w` applied to an already reduced vector.
    pub fn apply_word(
        &self,
        w: &Word,
        v: &NormalForm,
        strategy: Strategy,
    ) -> Result<NormalForm, RewriteError> {
        self.check(w)?;
        let mut work = Work::new();
        for (raising, label, c) in v.terms() {
            let mut factors = w.factors.clone();
            factors.extend(
                raising
                    .iter()
                    .map(|r| Generator { kind: GenKind::GPlus, index: r.clone(), sector: self.sector }),
            );
            push(&mut work, factors, label.clone(), c.clone());
        }
        self.run(work, strategy)
    }

    fn run(&self, mut work: Work, strategy: Strategy) -> Result<NormalForm, RewriteError> {
        let mut out = NormalForm::zero(self.sector);
        while let Some(((factors, label), coef)) = work.pop_first() {
            let Some(redex) = find_redex(&factors, strategy) else {
                let raising = factors.into_iter().map(|g| g.index).collect();
                out.add_term(raising, label, &coef);
                continue;
            };
            let before = measure(&factors);
            let mut emit = |f: Vec<Generator>, l: IndexExpr, c: Poly| {
                debug_assert!(measure(&f) < before, "rewrite step must decrease the measure");
                push(&mut work, f, l, c);
            };
            match redex {
                Redex::End => {
                    let mut rest = factors;
                    let g = rest.pop().expect("end redex needs a factor");
                    if let Some((c, target)) = self.act(&g, &label) {
                        emit(rest, target, &coef * &c);
                    }
                }
                Redex::Pair(k) => {
                    let x = &factors[k];
                    let y = &factors[k + 1];
                    if is_raising(x) {
                        // G+ G+ anticommute; equal indices square to zero
                        if x.index != y.index {
                            let mut swapped = factors.clone();
                            swapped.swap(k, k + 1);
                            emit(swapped, label, -&coef);
                        }
                    } else {
                        let sign = Poly::from_int(x.parity().koszul(y.parity()));
                        let mut swapped = factors.clone();
                        swapped.swap(k, k + 1);
                        emit(swapped, label.clone(), &coef * &sign);
                        // central terms act as zero on the layer
                        let br = bracket(x, y)?;
                        for (z, c) in br.body() {
                            let mut f = factors[..k].to_vec();
                            f.push(z.clone());
                            f.extend_from_slice(&factors[k + 2..]);
                            emit(f, label.clone(), &coef * c);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `K_{r,s} u_i` with `K_{r,s} = [G^+_r, G^-_s] = -2 L_{r+s} + (r - s) H_{r+s}`
/// (central part dropped): returns the coefficient and the label `r + s + i`.
pub fn k_action(
    r: &IndexExpr,
    s: &IndexExpr,
    layer: &BaseLayer,
    i: &IndexExpr,
) -> (Poly, IndexExpr) {
    let rs = r + s;
    let lin = &(&layer.a + &(&layer.b * &rs.to_poly())) + &i.to_poly();
    let coef = &lin.scale(&crate::arith::int(-2)) + &(&(r - s).to_poly() * &layer.c);
    (coef, &rs + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(kind: GenKind, idx: IndexExpr) -> Generator {
        Generator::new(kind, idx, Sector::N2Ramond).unwrap()
    }

    fn word(factors: Vec<Generator>) -> Word {
        Word::new(Sector::N2Ramond, factors).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::var(s)
    }

    #[test]
    fn annihilator_kills_base() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let w = word(vec![g(GenKind::GMinus, IndexExpr::int(0))]);
        assert!(layer.reduce_on_base(&w, &IndexExpr::var("i")).unwrap().is_zero());
    }

    #[test]
    fn zero_modes_give_k00() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let i = IndexExpr::var("i");
        let w = word(vec![g(GenKind::GMinus, IndexExpr::int(0)), g(GenKind::GPlus, IndexExpr::int(0))]);
        let nf = layer.reduce_on_base(&w, &i).unwrap();
        let expected = (&p("a") + &p("i")).scale(&crate::arith::int(-2));
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.coefficient(&[], &i), expected);
    }

    #[test]
    fn four_factor_example() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let i = IndexExpr::var("i");
        let w = word(vec![
            g(GenKind::GMinus, IndexExpr::int(1)),
            g(GenKind::GMinus, IndexExpr::int(0)),
            g(GenKind::GPlus, IndexExpr::int(0)),
            g(GenKind::GPlus, IndexExpr::int(1)),
        ]);
        let nf = layer.reduce_on_base(&w, &i).unwrap();
        let two_b = p("b").scale(&crate::arith::int(2));
        let d = &(&two_b + &p("c")) * &(&(&Poly::from_int(2) + &p("c")) - &two_b);
        assert_eq!(nf.len(), 1, "{nf}");
        assert_eq!(nf.coefficient(&[], &(&i + &IndexExpr::int(2))), d);
    }

    #[test]
    fn k_action_examples() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let (c, l) = k_action(&IndexExpr::int(1), &IndexExpr::int(2), &layer, &IndexExpr::int(0));
        let expected = &(&p("a").scale(&crate::arith::int(-2)) - &p("b").scale(&crate::arith::int(6))) - &p("c");
        assert_eq!(c, expected);
        assert_eq!(l, IndexExpr::int(3));
    }

    #[test]
    fn k_action_matches_reduction() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let (r, s, i) = (IndexExpr::var("r"), IndexExpr::var("s"), IndexExpr::var("i"));
        let w = word(vec![g(GenKind::GMinus, s.clone()), g(GenKind::GPlus, r.clone())]);
        let nf = layer.reduce_on_base(&w, &i).unwrap();
        let (c, l) = k_action(&r, &s, &layer, &i);
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.coefficient(&[], &l), c);
    }

    #[test]
    fn raising_words_sort_with_signs() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let i = IndexExpr::var("i");
        let w = word(vec![g(GenKind::GPlus, IndexExpr::int(2)), g(GenKind::GPlus, IndexExpr::int(-1))]);
        let nf = layer.reduce_on_base(&w, &i).unwrap();
        assert_eq!(nf.coefficient(&[IndexExpr::int(-1), IndexExpr::int(2)], &i), Poly::from_int(-1));
        let sq = word(vec![g(GenKind::GPlus, IndexExpr::int(2)), g(GenKind::GPlus, IndexExpr::int(2))]);
        assert!(layer.reduce_on_base(&sq, &i).unwrap().is_zero());
    }

    #[test]
    fn strategies_agree_on_mixed_word() {
        let layer = BaseLayer::symbolic(Sector::N2Ramond);
        let i = IndexExpr::var("i");
        let w = word(vec![
            g(GenKind::L, IndexExpr::int(1)),
            g(GenKind::GMinus, IndexExpr::int(-1)),
            g(GenKind::GPlus, IndexExpr::int(2)),
            g(GenKind::H, IndexExpr::int(0)),
            g(GenKind::GPlus, IndexExpr::int(0)),
        ]);
        let left = layer.reduce_with(&w, &i, Strategy::LeftInnermost).unwrap();
        let right = layer.reduce_with(&w, &i, Strategy::RightInnermost).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn n1_sector_has_no_layer() {
        assert!(BaseLayer::new(Sector::N1Ramond, Poly::zero(), Poly::zero(), Poly::zero()).is_err());
    }
}
