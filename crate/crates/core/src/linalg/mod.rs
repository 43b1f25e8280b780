//! Exact sparse linear algebra over the rationals: reduced row echelon
//! bases, membership and null spaces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::Rational;

/// Sparse vector keyed by an ordered coordinate type; no zero entries.
pub type SparseVec<K> = BTreeMap<K, Rational>;

pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let slot = y.entry(k.clone()).or_insert_with(Rational::zero);
        *slot += a * v;
        if slot.is_zero() {
            y.remove(k);
        }
    }
}

pub fn scale<K: Ord + Clone>(x: &SparseVec<K>, a: &Rational) -> SparseVec<K> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), v * a)).collect()
}

/// A reduced row echelon basis of a subspace: every row has leading entry 1
/// at its pivot and no other row has a nonzero entry there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for RowEchelon<K> {
    fn default() -> Self {
        RowEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> RowEchelon<K> {
    pub fn new() -> Self {
        RowEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows keyed by pivot.
    pub fn rows(&self) -> &BTreeMap<K, SparseVec<K>> {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = r.get(p).cloned() {
                axpy(&mut r, &(-c), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let row = scale(&r, &(Rational::one() / lead));
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                axpy(other, &(-c), &row);
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    /// Inserts every vector; returns how many raised the rank.
    pub fn extend<'a, I>(&mut self, vs: I) -> usize
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        vs.into_iter().filter(|v| self.insert(v)).count()
    }

    pub fn basis(&self) -> Vec<SparseVec<K>> {
        self.rows.values().cloned().collect()
    }
}

/// Basis of `{x : row . x = 0 for all rows}` in variables `0..nvars`, in
/// reduced form: each basis vector has a distinct free variable set to 1 and
/// the others set to 0.
pub fn nullspace(equations: &[SparseVec<usize>], nvars: usize) -> Vec<SparseVec<usize>> {
    let mut ech = RowEchelon::new();
    for e in equations {
        ech.insert(e);
    }
    let pivots: std::collections::BTreeSet<usize> = ech.pivots().copied().collect();
    let mut out = Vec::new();
    for free in (0..nvars).filter(|v| !pivots.contains(v)) {
        let mut x = SparseVec::new();
        x.insert(free, Rational::one());
        for (p, row) in ech.rows() {
            if let Some(c) = row.get(&free) {
                x.insert(*p, -c.clone());
            }
        }
        out.push(x);
    }
    out
}

/// Invertibility of a small dense square matrix by Gaussian elimination.
pub fn is_invertible(mut m: Vec<Vec<Rational>>) -> bool {
    let n = m.len();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] -= d;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn v(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|(k, c)| (*k, int(*c))).filter(|(_, c)| !c.is_zero()).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = RowEchelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 2), (1, 4)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn rows_are_fully_reduced() {
        let mut e = RowEchelon::new();
        e.insert(&v(&[(1, 1), (2, 1)]));
        e.insert(&v(&[(0, 2), (1, 4)]));
        for (p, row) in e.rows() {
            assert_eq!(row[p], int(1));
            for (q, other) in e.rows() {
                if q != p {
                    assert!(!other.contains_key(p));
                }
            }
        }
    }

    #[test]
    fn nullspace_solves_system() {
        // x0 + x1 = 0, x1 - 2 x2 = 0 in four variables
        let eqs = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, -2)])];
        let ns = nullspace(&eqs, 4);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for e in &eqs {
                let dot: Rational = e.iter().map(|(k, c)| c * x.get(k).cloned().unwrap_or_default()).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn invertibility() {
        assert!(is_invertible(vec![vec![int(0), int(1)], vec![int(1), int(0)]]));
        assert!(!is_invertible(vec![vec![int(1), rat(1, 2)], vec![int(2), int(1)]]));
        assert!(is_invertible(vec![]));
    }
}
