use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Parity;
use crate::arith::{int, Rational};
use crate::linalg::{RowEchelon, SparseVec};
use crate::modules::{GeneratorMatrix, ModuleError, Slot, WindowedModule};

/// A graded subspace of a windowed module: one reduced echelon basis per
/// label. Every stored row is supported on a single label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    /// How the subspace was obtained, e.g. `"closure of v-_2"`.
    pub origin: String,
    rows: BTreeMap<i64, RowEchelon<usize>>,
}

fn label_of(w: &WindowedModule, v: &SparseVec<usize>) -> Option<i64> {
    v.keys().next().map(|&k| w.basis[k].label)
}

impl Subspace {
    pub fn new(origin: impl Into<String>) -> Self {
        Subspace { origin: origin.into(), rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.values().map(RowEchelon::rank).sum()
    }

    pub fn rank_at(&self, label: i64) -> usize {
        self.rows.get(&label).map_or(0, RowEchelon::rank)
    }

    pub fn rows_at(&self, label: i64) -> Vec<SparseVec<usize>> {
        self.rows.get(&label).map(RowEchelon::basis).unwrap_or_default()
    }

    pub fn basis(&self) -> Vec<SparseVec<usize>> {
        self.rows.values().flat_map(RowEchelon::basis).collect()
    }

    /// Adds a label-homogeneous vector; returns its remainder when the
    /// subspace grew.
    pub fn insert(&mut self, w: &WindowedModule, v: &SparseVec<usize>) -> Option<SparseVec<usize>> {
        let label = label_of(w, v)?;
        debug_assert!(v.keys().all(|&k| w.basis[k].label == label));
        let ech = self.rows.entry(label).or_default();
        let r = ech.reduce(v);
        if r.is_empty() {
            return None;
        }
        ech.insert(&r);
        Some(r)
    }

    /// Membership for an arbitrary vector, split by label.
    pub fn contains(&self, w: &WindowedModule, v: &SparseVec<usize>) -> bool {
        let mut parts: BTreeMap<i64, SparseVec<usize>> = BTreeMap::new();
        for (&k, x) in v {
            parts.entry(w.basis[k].label).or_default().insert(k, x.clone());
        }
        parts.iter().all(|(l, p)| self.rows.get(l).is_some_and(|e| e.contains(p)))
    }

    pub fn contains_subspace(&self, w: &WindowedModule, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(w, v))
    }

    pub fn sum(&self, w: &WindowedModule, other: &Subspace) -> Subspace {
        let mut out = self.clone();
        out.origin = format!("({}) + ({})", self.origin, other.origin);
        for v in other.basis() {
            out.insert(w, &v);
        }
        out
    }

    /// `(even, odd)` dimensions at each interior label.
    pub fn interior_dims(&self, w: &WindowedModule) -> BTreeMap<i64, (usize, usize)> {
        w.interior_labels()
            .map(|l| {
                let mut d = (0, 0);
                for row in self.rows_at(l) {
                    let k = *row.keys().next().expect("rows are nonzero");
                    match w.basis[k].parity {
                        Parity::Even => d.0 += 1,
                        Parity::Odd => d.1 += 1,
                    }
                }
                (l, d)
            })
            .collect()
    }

    fn interior_rank(&self, w: &WindowedModule) -> usize {
        w.interior_labels().map(|l| self.rank_at(l)).sum()
    }

    /// Nonzero somewhere in the interior and missing some interior vector.
    pub fn is_proper(&self, w: &WindowedModule) -> bool {
        let r = self.interior_rank(w);
        r > 0 && r < interior_dim(w)
    }

    /// Every generator maps every interior row back into the subspace.
    pub fn is_invariant(&self, w: &WindowedModule) -> bool {
        w.interior_labels().all(|l| {
            self.rows_at(l)
                .iter()
                .all(|row| (0..w.matrices.len()).all(|k| self.contains(w, &w.apply(k, row))))
        })
    }

    /// At every interior label the subspace equals the span of the basis
    /// vectors in `slots`.
    pub fn spans_slots(&self, w: &WindowedModule, slots: &[Slot]) -> bool {
        w.interior_labels().all(|l| {
            let units: Vec<usize> = slots.iter().filter_map(|&s| w.position(s, l)).collect();
            self.rank_at(l) == units.len()
                && units.iter().all(|&p| self.contains(w, &unit(p)))
        })
    }

    /// The subspace as a module in its own basis: one basis vector per row,
    /// named by the row's pivot. Images of rows outside the interior are
    /// projected onto the pivots and the rows flagged as boundary.
    pub fn as_module(&self, w: &WindowedModule) -> Result<WindowedModule, ModuleError> {
        let rows: Vec<(usize, SparseVec<usize>)> = self
            .rows
            .values()
            .flat_map(|e| e.rows().iter().map(|(p, r)| (*p, r.clone())))
            .collect();
        let index: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(n, (p, _))| (*p, n)).collect();
        let basis = rows
            .iter()
            .map(|(p, _)| {
                let mut b = w.basis[*p].clone();
                b.boundary = b.boundary || !w.is_interior_label(b.label);
                b
            })
            .collect();
        let matrices = (0..w.matrices.len())
            .map(|k| GeneratorMatrix {
                generator: w.matrices[k].generator.clone(),
                columns: rows
                    .iter()
                    .map(|(_, r)| {
                        w.apply(k, r)
                            .into_iter()
                            .filter_map(|(j, c)| index.get(&j).map(|&n| (n, c)))
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        WindowedModule::from_parts(w.spec.clone(), (w.lo, w.hi, w.max_index), basis, matrices)
    }

    /// Rows at one label as readable combinations, e.g. `"v+-_2 + 4/5*v_2"`.
    pub fn describe_at(&self, w: &WindowedModule, label: i64) -> Vec<String> {
        self.rows_at(label).iter().map(|r| describe_vector(w, r)).collect()
    }
}

pub(crate) fn describe_vector(w: &WindowedModule, v: &SparseVec<usize>) -> String {
    let mut s = String::new();
    for (n, (&k, c)) in v.iter().enumerate() {
        let name = w.describe_vector(k);
        let (neg, mag) = (c.is_negative(), c.abs());
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(&name);
        } else {
            s.push_str(&format!("{mag}*{name}"));
        }
    }
    s
}

fn interior_dim(w: &WindowedModule) -> usize {
    w.basis.iter().filter(|b| w.is_interior_label(b.label)).count()
}

fn unit(k: usize) -> SparseVec<usize> {
    SparseVec::from([(k, Rational::one())])
}

/// Smallest subspace containing `seed` that is closed under every generator
/// applied to interior rows. Stops early once the whole interior is reached.
pub fn close(w: &WindowedModule, seed: &SparseVec<usize>, origin: impl Into<String>) -> Subspace {
    let full = interior_dim(w);
    let mut s = Subspace::new(origin);
    let mut queue = vec![seed.clone()];
    while let Some(v) = queue.pop() {
        let Some(row) = s.insert(w, &v) else { continue };
        let label = label_of(w, &row).expect("nonzero row");
        if !w.is_interior_label(label) {
            continue;
        }
        if s.interior_rank(w) == full {
            break;
        }
        for k in 0..w.matrices.len() {
            let img = w.apply(k, &row);
            if !img.is_empty() {
                queue.push(img);
            }
        }
    }
    s
}

/// Result of the seed-and-close search.
#[derive(Clone, Debug)]
pub struct SubspaceSearch {
    /// Every distinct proper closure found, including pairwise sums.
    pub closures: Vec<Subspace>,
    /// Indices into `closures` of the inclusion-maximal ones.
    pub maximal: Vec<usize>,
    pub seeds_tried: usize,
}

impl SubspaceSearch {
    pub fn maximal(&self) -> impl Iterator<Item = &Subspace> {
        self.maximal.iter().map(|&i| &self.closures[i])
    }

    pub fn is_empty(&self) -> bool {
        self.closures.is_empty()
    }
}

/// Rational square root when it exists.
fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Rational eigenvectors of a 2x2 matrix `[[p, q], [r, s]]` that is not
/// scalar.
fn eigenvectors_2x2(m: [[Rational; 2]; 2]) -> Vec<[Rational; 2]> {
    let [[p, q], [r, s]] = m;
    if q.is_zero() && r.is_zero() {
        return if p == s { Vec::new() } else { vec![[int(1), int(0)], [int(0), int(1)]] };
    }
    let disc = &(&p - &s) * &(&p - &s) + int(4) * &q * &r;
    let Some(root) = rational_sqrt(&disc) else { return Vec::new() };
    let mut out = Vec::new();
    for sign in [1, -1] {
        let lambda = (&p + &s + int(sign) * &root) / int(2);
        let v = if !q.is_zero() { [q.clone(), &lambda - &p] } else { [&lambda - &s, r.clone()] };
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Lines in a two-dimensional block that are eigenlines of some
/// weight-preserving composite `g_{-m} h_m` restricted to the block.
fn eigen_seeds(w: &WindowedModule, block: &[usize]) -> Vec<SparseVec<usize>> {
    let label = w.basis[block[0]].label;
    let mut out: Vec<SparseVec<usize>> = Vec::new();
    for (k1, m1) in w.matrices.iter().enumerate() {
        for (k2, m2) in w.matrices.iter().enumerate() {
            let Some(sum) = (m1.generator.index.clone() + m2.generator.index.clone()).as_integer() else {
                continue;
            };
            if sum != 0 || w.basis[block[0]].parity + m1.generator.parity() + m2.generator.parity() != w.basis[block[0]].parity {
                continue;
            }
            let mut mat = [[int(0), int(0)], [int(0), int(0)]];
            for (col, &b) in block.iter().enumerate() {
                let img = w.apply(k2, &w.apply(k1, &unit(b)));
                for (row, &b2) in block.iter().enumerate() {
                    mat[row][col] = img.get(&b2).cloned().unwrap_or_default();
                }
                debug_assert!(img.keys().all(|k| w.basis[*k].label == label));
            }
            for [x, y] in eigenvectors_2x2(mat) {
                let mut v = SparseVec::new();
                for (k, c) in [(block[0], x), (block[1], y)] {
                    if !c.is_zero() {
                        v.insert(k, c);
                    }
                }
                let v = normalize(v);
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn normalize(v: SparseVec<usize>) -> SparseVec<usize> {
    match v.values().next().cloned() {
        Some(lead) => v.into_iter().map(|(k, c)| (k, c / &lead)).collect(),
        None => v,
    }
}

pub const RANDOM_SEEDS: usize = 20;

/// Searches the window interior for proper graded invariant subspaces by
/// closing seeds from each interior weight space: unit vectors, the all-ones
/// vector, eigenlines of weight-preserving composites, and
/// [`RANDOM_SEEDS`] random integer vectors drawn from `seed`. Non-unit seeds
/// already inside a known proper closure are skipped; pairwise sums of
/// closures are added. An empty result is not a proof of simplicity.
pub fn find_invariant_subspaces(w: &WindowedModule, seed: u64) -> SubspaceSearch {
    let mut seeds: Vec<(SparseVec<usize>, String)> = Vec::new();
    let mut blocks = Vec::new();
    for l in w.interior_labels() {
        for parity in [Parity::Even, Parity::Odd] {
            let block = w.block(l, parity);
            if block.is_empty() {
                continue;
            }
            for &b in &block {
                seeds.push((unit(b), format!("closure of {}", w.describe_vector(b))));
            }
            if block.len() > 1 {
                let ones: SparseVec<usize> = block.iter().map(|&b| (b, int(1))).collect();
                seeds.push((ones.clone(), format!("closure of {}", describe_vector(w, &ones))));
            }
            if block.len() == 2 {
                for v in eigen_seeds(w, &block) {
                    let d = describe_vector(w, &v);
                    seeds.push((v, format!("closure of {d}")));
                }
            }
            blocks.push(block);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_SEEDS {
        if blocks.is_empty() {
            break;
        }
        let block = &blocks[rng.gen_range(0..blocks.len())];
        let mut v = SparseVec::new();
        for &b in block {
            let c: i64 = rng.gen_range(-9..=9);
            if c != 0 {
                v.insert(b, int(c));
            }
        }
        if v.is_empty() {
            v.insert(block[0], int(1));
        }
        seeds.push((v.clone(), format!("closure of {}", describe_vector(w, &v))));
    }

    let mut closures: Vec<Subspace> = Vec::new();
    let seeds_tried = seeds.len();
    for (v, origin) in seeds {
        // unit seeds always run so that nested witnesses are not shadowed
        if v.len() > 1 && closures.iter().any(|c| c.contains(w, &v)) {
            continue;
        }
        let c = close(w, &v, origin);
        if c.is_proper(w) && !closures.iter().any(|d| same_span(d, &c)) {
            closures.push(c);
        }
    }
    let n = closures.len();
    for i in 0..n {
        for j in i + 1..n {
            let s = closures[i].sum(w, &closures[j]);
            if s.is_proper(w) && !closures.iter().any(|d| same_span(d, &s)) {
                closures.push(s);
            }
        }
    }
    let maximal = (0..closures.len())
        .filter(|&i| {
            !(0..closures.len()).any(|j| {
                j != i
                    && closures[j].dim() > closures[i].dim()
                    && closures[j].contains_subspace(w, &closures[i])
            })
        })
        .collect();
    SubspaceSearch { closures, maximal, seeds_tried }
}

fn same_span(a: &Subspace, b: &Subspace) -> bool {
    a.rows == b.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::modules::{instantiate_window, Family, ModuleSpec};

    fn window(family: Family, a: Rational, b: Rational, c: Rational, lo: i64, hi: i64) -> WindowedModule {
        instantiate_window(&ModuleSpec::concrete(family, a, b, c), lo, hi, 3).unwrap()
    }

    #[test]
    fn a00_has_trivial_submodule() {
        let w = window(Family::A, int(0), int(0), int(0), -6, 6);
        let s = find_invariant_subspaces(&w, 7);
        let max: Vec<_> = s.maximal().collect();
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].dim(), 1);
        assert_eq!(max[0].describe_at(&w, 0), vec!["v_0"]);
        assert!(max[0].is_invariant(&w));
    }

    #[test]
    fn rabc_degenerate_witness_is_verbatim() {
        let w = window(Family::Rabc, rat(1, 5), int(1), int(0), -6, 6);
        let s = find_invariant_subspaces(&w, 7);
        assert!(s.closures.iter().any(|c| c.spans_slots(&w, &[Slot::VMinus, Slot::VPm])));
        assert!(s.closures.iter().all(|c| c.is_invariant(&w)));
    }

    #[test]
    fn rabc_simple_point_has_no_witness() {
        let w = window(Family::Rabc, rat(1, 3), int(0), int(0), -6, 6);
        assert!(find_invariant_subspaces(&w, 7).is_empty());
    }

    #[test]
    fn eigenvectors_of_small_matrices() {
        let m = [[int(2), int(1)], [int(0), int(3)]];
        let vs = eigenvectors_2x2(m.clone());
        assert_eq!(vs.len(), 2);
        for [x, y] in vs {
            let lx = &m[0][0] * &x + &m[0][1] * &y;
            let ly = &m[1][0] * &x + &m[1][1] * &y;
            assert_eq!(&lx * &y, &ly * &x);
        }
        assert!(eigenvectors_2x2([[int(0), int(1)], [int(2), int(0)]]).is_empty());
        assert!(eigenvectors_2x2([[int(5), int(0)], [int(0), int(5)]]).is_empty());
    }
}
