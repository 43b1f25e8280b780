use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalysisError;
use crate::arith::{int, Rational};
use crate::linalg::{axpy, is_invertible, nullspace, RowEchelon, SparseVec};
use crate::modules::WindowedModule;

/// A linear map between windows: entry `(t, u)` is the coefficient of target
/// basis vector `u` in the image of source basis vector `t`.
pub type LinearMap = SparseVec<(usize, usize)>;

/// Solutions of `phi(g t) = g phi(t)` restricted to interior rows.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub source: String,
    pub target: String,
    pub parity_reversing: bool,
    /// Reduced echelon basis; the first nonzero entry of each map is 1.
    pub basis: Vec<LinearMap>,
    /// Some combination of the basis is invertible on every common interior
    /// weight space.
    pub bijective: bool,
    /// Weights at which bijectivity was tested.
    pub common_weights: Vec<Rational>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_compatible(w1: &WindowedModule, w2: &WindowedModule) -> Result<(), AnalysisError> {
    if w1.max_index != w2.max_index {
        return Err(AnalysisError::IncompatibleWindows(format!(
            "max index {} vs {}",
            w1.max_index, w2.max_index
        )));
    }
    let g1: Vec<_> = w1.matrices.iter().map(|m| &m.generator).collect();
    let g2: Vec<_> = w2.matrices.iter().map(|m| &m.generator).collect();
    if g1 != g2 {
        return Err(AnalysisError::IncompatibleWindows("different acting generators".into()));
    }
    Ok(())
}

fn interior_weights(w: &WindowedModule) -> BTreeSet<Rational> {
    w.basis
        .iter()
        .filter(|b| w.is_interior_label(b.label))
        .map(|b| b.weight.clone())
        .collect()
}

/// Basis of the intertwiners `w1 -> w2`. Unknowns pair source and target
/// vectors of equal weight and equal parity (opposite when
/// `parity_reversing`); equations come from every generator applied to every
/// interior source vector whose weight is interior in `w2`. The solution
/// space is projected onto interior unknowns. `seed` drives the random
/// combination used for the bijectivity test.
pub fn find_intertwiners(
    w1: &WindowedModule,
    w2: &WindowedModule,
    parity_reversing: bool,
    seed: u64,
) -> Result<IntertwinerSpace, AnalysisError> {
    check_compatible(w1, w2)?;
    let targets_by_weight: BTreeMap<&Rational, Vec<usize>> =
        w2.basis.iter().enumerate().fold(BTreeMap::new(), |mut m, (u, b)| {
            m.entry(&b.weight).or_insert_with(Vec::new).push(u);
            m
        });
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    let mut by_source: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (t, bt) in w1.basis.iter().enumerate() {
        for &u in targets_by_weight.get(&bt.weight).into_iter().flatten() {
            let same = w2.basis[u].parity == bt.parity;
            if same != parity_reversing {
                by_source.entry(t).or_default().push((u, unknowns.len()));
                unknowns.push((t, u));
            }
        }
    }

    let w2_interior = interior_weights(w2);
    let mut equations: Vec<SparseVec<usize>> = Vec::new();
    for (t, bt) in w1.basis.iter().enumerate() {
        if !w1.is_interior_label(bt.label) || !w2_interior.contains(&bt.weight) {
            continue;
        }
        for (m1, m2) in w1.matrices.iter().zip(&w2.matrices) {
            let mut eqs: BTreeMap<usize, SparseVec<usize>> = BTreeMap::new();
            for (s, val) in &m1.columns[t] {
                for &(u, var) in by_source.get(s).into_iter().flatten() {
                    axpy(eqs.entry(u).or_default(), val, &SparseVec::from([(var, int(1))]));
                }
            }
            for &(u2, var) in by_source.get(&t).into_iter().flatten() {
                for (u, val) in &m2.columns[u2] {
                    axpy(eqs.entry(*u).or_default(), &-val.clone(), &SparseVec::from([(var, int(1))]));
                }
            }
            equations.extend(eqs.into_values().filter(|e| !e.is_empty()));
        }
    }

    let interior = |&(t, u): &(usize, usize)| {
        w1.is_interior_label(w1.basis[t].label) && w2.is_interior_label(w2.basis[u].label)
    };
    let mut ech: RowEchelon<(usize, usize)> = RowEchelon::new();
    for sol in nullspace(&equations, unknowns.len()) {
        let projected: LinearMap = sol
            .into_iter()
            .map(|(var, c)| (unknowns[var], c))
            .filter(|(k, _)| interior(k))
            .collect();
        ech.insert(&projected);
    }
    let basis = ech.basis();

    let w1_interior = interior_weights(w1);
    let common_weights: Vec<Rational> = w1_interior.intersection(&w2_interior).cloned().collect();
    let bijective = !basis.is_empty() && !common_weights.is_empty() && {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut phi = LinearMap::new();
        for b in &basis {
            axpy(&mut phi, &int(rng.gen_range(1..=97)), b);
        }
        common_weights.iter().all(|wt| {
            let rows: Vec<usize> = (0..w1.dim()).filter(|&t| &w1.basis[t].weight == wt).collect();
            let cols: Vec<usize> = (0..w2.dim()).filter(|&u| &w2.basis[u].weight == wt).collect();
            rows.len() == cols.len()
                && is_invertible(
                    rows.iter()
                        .map(|&t| {
                            cols.iter().map(|&u| phi.get(&(t, u)).cloned().unwrap_or_default()).collect()
                        })
                        .collect(),
                )
        })
    };
    Ok(IntertwinerSpace {
        source: w1.spec.describe(),
        target: w2.spec.describe(),
        parity_reversing,
        basis,
        bijective,
        common_weights,
    })
}

/// `psi ∘ phi` for `phi: W1 -> W2`, `psi: W2 -> W3`.
pub fn compose(phi: &LinearMap, psi: &LinearMap) -> LinearMap {
    let mut by_source: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
    for ((u, v), c) in psi {
        by_source.entry(*u).or_default().push((*v, c));
    }
    let mut out = LinearMap::new();
    for ((t, u), c) in phi {
        for (v, d) in by_source.get(u).into_iter().flatten() {
            let e = out.entry((*t, *v)).or_insert_with(Rational::zero);
            *e += c * *d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::modules::{instantiate_window, parity_flip, Family, ModuleSpec, Slot};

    fn window(spec: &ModuleSpec) -> WindowedModule {
        instantiate_window(spec, -8, 8, 3).unwrap()
    }

    #[test]
    fn shift_isomorphism() {
        let w1 = window(&ModuleSpec::concrete(Family::A, rat(1, 3), int(2), int(0)));
        let w2 = window(&ModuleSpec::concrete(Family::A, rat(4, 3), int(2), int(0)));
        let s = find_intertwiners(&w1, &w2, false, 1).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.bijective);
        // v_i -> w_{i-1}
        for ((t, u), c) in &s.basis[0] {
            assert_eq!(w2.basis[*u].label, w1.basis[*t].label - 1);
            assert_eq!(c, &int(1));
        }
    }

    #[test]
    fn parity_flip_involution() {
        let spec = ModuleSpec::concrete(Family::Rab, rat(1, 3), int(2), int(0));
        let w1 = window(&spec);
        let w2 = window(&parity_flip(&spec));
        let s = find_intertwiners(&w1, &w2, true, 1).unwrap();
        assert!(s.bijective);
        assert!(!find_intertwiners(&w1, &w2, false, 1).unwrap().bijective);
        let t = w1.position(Slot::VPlus, 0).unwrap();
        assert!(s.basis.iter().any(|b| b.contains_key(&(t, t))));
    }

    #[test]
    fn nonisomorphic_families_have_no_bijection() {
        let w1 = window(&ModuleSpec::concrete(Family::A, rat(1, 3), int(2), int(0)));
        let w2 = window(&ModuleSpec::concrete(Family::A, rat(1, 3), int(3), int(0)));
        assert!(!find_intertwiners(&w1, &w2, false, 1).unwrap().bijective);
    }

    #[test]
    fn composition_of_shifts() {
        let w = |a| window(&ModuleSpec::concrete(Family::A, a, int(2), int(0)));
        let (w0, w1, w2) = (w(rat(1, 3)), w(rat(4, 3)), w(rat(7, 3)));
        let p01 = &find_intertwiners(&w0, &w1, false, 1).unwrap().basis[0];
        let p12 = &find_intertwiners(&w1, &w2, false, 1).unwrap().basis[0];
        let p02 = &find_intertwiners(&w0, &w2, false, 1).unwrap().basis[0];
        let comp = compose(p01, p12);
        let common: Vec<_> = p02.keys().filter(|k| comp.contains_key(k)).collect();
        assert!(!common.is_empty());
        let ratio = &comp[common[0]] / &p02[common[0]];
        for k in common {
            assert_eq!(&comp[k], &(&p02[k] * &ratio));
        }
    }
}
