use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::rational::rat;
use super::{Poly, Symbol};

/// Linear index expression `sum k_j * x_j + d/2` with integer `k_j` and the
/// constant stored doubled, so that one integer lattice carries both integer
/// (Ramond) and half-odd-integer (Neveu-Schwarz) indices.
///
/// Always canonical: symbols sorted, zero coefficients dropped. The derived
/// order compares the symbolic part first, so concrete indices are ordered by
/// value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexExpr {
    terms: Vec<(Symbol, i64)>,
    doubled: i64,
}

impl IndexExpr {
    pub fn zero() -> Self {
        IndexExpr::default()
    }

    pub fn int(n: i64) -> Self {
        IndexExpr { terms: Vec::new(), doubled: 2 * n }
    }

    /// Constant `doubled / 2`.
    pub fn half(doubled: i64) -> Self {
        IndexExpr { terms: Vec::new(), doubled }
    }

    pub fn symbol(s: Symbol) -> Self {
        IndexExpr { terms: vec![(s, 1)], doubled: 0 }
    }

    pub fn var(name: &str) -> Self {
        IndexExpr::symbol(Symbol::new(name))
    }

    /// Builds the canonical form of an arbitrary term list.
    pub fn new<I: IntoIterator<Item = (Symbol, i64)>>(terms: I, doubled: i64) -> Self {
        let mut acc: BTreeMap<Symbol, i64> = BTreeMap::new();
        for (s, k) in terms {
            *acc.entry(s).or_default() += k;
        }
        IndexExpr {
            terms: acc.into_iter().filter(|(_, k)| *k != 0).collect(),
            doubled,
        }
    }

    /// Canonical form; values built through the public API are already canonical.
    pub fn normalize(&self) -> Self {
        IndexExpr::new(self.terms.iter().copied(), self.doubled)
    }

    pub fn terms(&self) -> &[(Symbol, i64)] {
        &self.terms
    }

    pub fn doubled_constant(&self) -> i64 {
        self.doubled
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.doubled == 0
    }

    pub fn is_concrete(&self) -> bool {
        self.terms.is_empty()
    }

    /// Doubled value of a concrete index.
    pub fn concrete_doubled(&self) -> Option<i64> {
        self.is_concrete().then_some(self.doubled)
    }

    /// Integer value of a concrete integral index.
    pub fn as_integer(&self) -> Option<i64> {
        match self.concrete_doubled() {
            Some(d) if d % 2 == 0 => Some(d / 2),
            _ => None,
        }
    }

    /// Constant part is a half-odd integer.
    pub fn has_half_odd_constant(&self) -> bool {
        self.doubled % 2 != 0
    }

    pub fn scale(&self, k: i64) -> Self {
        IndexExpr::new(self.terms.iter().map(|(s, c)| (*s, c * k)), self.doubled * k)
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::constant(rat(self.doubled, 2));
        for (s, k) in &self.terms {
            p += &Poly::symbol(*s).scale(&rat(*k, 1));
        }
        p
    }

    pub fn substitute(&self, bindings: &BTreeMap<Symbol, IndexExpr>) -> Self {
        let mut out = IndexExpr::half(self.doubled);
        for (s, k) in &self.terms {
            let image = match bindings.get(s) {
                Some(e) => e.scale(*k),
                None => IndexExpr::symbol(*s).scale(*k),
            };
            out = &out + &image;
        }
        out
    }

    /// Representative of `{e, -e}` whose leading coefficient is positive;
    /// used to canonicalize guards `e = 0`.
    pub fn sign_normalized(&self) -> Self {
        match self.terms.first() {
            Some((_, k)) if *k < 0 => -self,
            None if self.doubled < 0 => -self,
            _ => self.clone(),
        }
    }
}

impl Add<&IndexExpr> for &IndexExpr {
    type Output = IndexExpr;
    fn add(self, rhs: &IndexExpr) -> IndexExpr {
        IndexExpr::new(
            self.terms.iter().chain(rhs.terms.iter()).copied(),
            self.doubled + rhs.doubled,
        )
    }
}

impl Sub<&IndexExpr> for &IndexExpr {
    type Output = IndexExpr;
    fn sub(self, rhs: &IndexExpr) -> IndexExpr {
        self + &(-rhs)
    }
}

impl Neg for &IndexExpr {
    type Output = IndexExpr;
    fn neg(self) -> IndexExpr {
        IndexExpr {
            terms: self.terms.iter().map(|(s, k)| (*s, -k)).collect(),
            doubled: -self.doubled,
        }
    }
}

impl Add for IndexExpr {
    type Output = IndexExpr;
    fn add(self, rhs: IndexExpr) -> IndexExpr {
        &self + &rhs
    }
}

impl Sub for IndexExpr {
    type Output = IndexExpr;
    fn sub(self, rhs: IndexExpr) -> IndexExpr {
        &self - &rhs
    }
}

impl Neg for IndexExpr {
    type Output = IndexExpr;
    fn neg(self) -> IndexExpr {
        -&self
    }
}

impl From<i64> for IndexExpr {
    fn from(n: i64) -> Self {
        IndexExpr::int(n)
    }
}

fn fmt_const(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str(&fmt_const(self.doubled));
        }
        for (i, (s, k)) in self.terms.iter().enumerate() {
            let mag = k.abs();
            match (i, *k < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{mag}{s}")?;
            }
        }
        if self.doubled != 0 {
            let sign = if self.doubled < 0 { " - " } else { " + " };
            write!(f, "{sign}{}", fmt_const(self.doubled.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Idx({self})")
    }
}
