use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{act, Family, ModuleError, ModuleSpec, Quotient, Slot};
use crate::algebra::{GenKind, Generator, Parity, Sector};
use crate::arith::{int, is_integer, rat, to_i64, IndexExpr, Rational};
use crate::linalg::SparseVec;

/// One basis vector of a windowed realization. For sub-quotients the vector
/// may stand for a combination of family vectors; `slot` and `label` name its
/// leading coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub slot: Slot,
    pub label: i64,
    pub parity: Parity,
    pub weight: Rational,
    /// Some generator with `|index| <= max_index` maps it outside the window.
    pub boundary: bool,
}

/// Columns of a generator matrix: `columns[j]` is the image of basis vector
/// `j`, as `(row, value)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub generator: Generator,
    pub columns: Vec<Vec<(usize, Rational)>>,
}

/// Exact matrices of a module with concrete parameters on labels `lo..=hi`.
#[derive(Clone, Debug)]
pub struct WindowedModule {
    pub spec: ModuleSpec,
    pub lo: i64,
    pub hi: i64,
    pub max_index: i64,
    pub basis: Vec<BasisVector>,
    pub matrices: Vec<GeneratorMatrix>,
    positions: BTreeMap<(Slot, i64), usize>,
}

/// A kept basis vector and the family combination it stands for.
struct Kept {
    slot: Slot,
    label: i64,
    lift: Vec<(Slot, i64, Rational)>,
}

fn identity(slot: Slot, label: i64) -> Kept {
    Kept { slot, label, lift: vec![(slot, label, int(1))] }
}

fn realization(spec: &ModuleSpec, lo: i64, hi: i64) -> Result<Vec<Kept>, ModuleError> {
    let labels = lo..=hi;
    if spec.quotient == Quotient::Full {
        return Ok(labels
            .flat_map(|i| spec.family.slots().iter().map(move |&s| identity(s, i)))
            .collect());
    }
    let (a, b, c) = spec.params()?;
    let a_int = is_integer(&a).then(|| to_i64(&a)).flatten();
    let not_degenerate = || ModuleError::NotDegenerate(spec.describe());
    let two = int(2);
    let drop_one = |slot: Slot| -> Result<Vec<Kept>, ModuleError> {
        let zero_label = -a_int.ok_or_else(not_degenerate)?;
        Ok(labels
            .clone()
            .flat_map(|i| spec.family.slots().iter().map(move |&s| identity(s, i)))
            .filter(|k| !(k.slot == slot && k.label == zero_label))
            .collect())
    };
    match spec.family {
        Family::A | Family::At => {
            let b_ok = b.is_zero() || b == int(1);
            let c_ok = spec.family == Family::A || c.is_zero();
            if a_int.is_some() && b_ok && c_ok {
                drop_one(Slot::V)
            } else {
                Err(not_degenerate())
            }
        }
        Family::Rab => {
            if a_int.is_some() && b == int(1) {
                drop_one(Slot::VPlus)
            } else if a_int.is_some() && b == rat(1, 2) {
                drop_one(Slot::VMinus)
            } else {
                Err(not_degenerate())
            }
        }
        Family::Rabc => {
            if &two * &b - &c == two {
                // span{v^-, v^{+-}}; at b = 1, c = 0, a integral the vector
                // v^{+-}_{-a} spans a trivial submodule of it
                let trivial = (b == int(1) && c.is_zero()).then_some(a_int).flatten().map(|a| -a);
                Ok(labels
                    .flat_map(|i| [identity(Slot::VMinus, i), identity(Slot::VPm, i)])
                    .filter(|k| !(k.slot == Slot::VPm && Some(k.label) == trivial))
                    .collect())
            } else if &two * &b + &c == two {
                // span{v^+, w} with w_i = v^{+-}_i + 2(a + i) v_i
                Ok(labels
                    .flat_map(|i| {
                        let w = Kept {
                            slot: Slot::VPm,
                            label: i,
                            lift: vec![(Slot::VPm, i, int(1)), (Slot::V, i, &two * (&a + int(i)))],
                        };
                        [identity(Slot::VPlus, i), w]
                    })
                    .collect())
            } else {
                Err(not_degenerate())
            }
        }
    }
}

/// Generators acting on the family with `|index| <= max_index`; `C` acts as
/// zero and is omitted.
fn acting_generators(family: Family, max_index: i64) -> Vec<Generator> {
    let mut out = Vec::new();
    for &kind in family.kinds() {
        for m in -max_index..=max_index {
            out.push(Generator::at(kind, m, Sector::N2Ramond));
        }
    }
    out
}

/// Builds the exact matrices of `spec` on labels `lo..=hi` for all acting
/// generators with `|index| <= max_index`. Images leaving the window are
/// dropped and their sources flagged as boundary.
pub fn instantiate_window(
    spec: &ModuleSpec,
    lo: i64,
    hi: i64,
    max_index: i64,
) -> Result<WindowedModule, ModuleError> {
    let (a, _, _) = spec.params()?;
    if lo > hi || max_index < 1 || lo + max_index > hi - max_index {
        return Err(ModuleError::EmptyInterior(lo, hi, max_index));
    }
    let kept = realization(spec, lo, hi)?;
    let positions: BTreeMap<(Slot, i64), usize> =
        kept.iter().enumerate().map(|(n, k)| ((k.slot, k.label), n)).collect();
    let basis = kept
        .iter()
        .map(|k| BasisVector {
            slot: k.slot,
            label: k.label,
            parity: spec.slot_parity(k.slot),
            weight: &a + int(k.label),
            boundary: k.label - max_index < lo || k.label + max_index > hi,
        })
        .collect();
    let mut matrices = Vec::new();
    for g in acting_generators(spec.family, max_index) {
        let mut columns = Vec::with_capacity(kept.len());
        for k in &kept {
            let mut image: SparseVec<usize> = SparseVec::new();
            for (slot, label, coef) in &k.lift {
                let v = act(spec, &g, *slot, &IndexExpr::int(*label))?;
                for ((s, l), c) in v.terms() {
                    let l = l.as_integer().expect("concrete labels stay integral");
                    let Some(&row) = positions.get(&(*s, l)) else { continue };
                    let val = c.constant_value().expect("concrete parameters give constants");
                    let slot = image.entry(row).or_insert_with(Rational::zero);
                    *slot += coef * val;
                }
            }
            columns.push(image.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        matrices.push(GeneratorMatrix { generator: g, columns });
    }
    Ok(WindowedModule {
        spec: spec.clone(),
        lo,
        hi,
        max_index,
        basis,
        matrices,
        positions,
    })
}

impl WindowedModule {
    /// Assembles a windowed module from explicit basis and matrices, as for a
    /// subspace realized in its own basis. `(slot, label)` must be unique.
    pub fn from_parts(
        spec: ModuleSpec,
        (lo, hi, max_index): (i64, i64, i64),
        basis: Vec<BasisVector>,
        matrices: Vec<GeneratorMatrix>,
    ) -> Result<Self, ModuleError> {
        let positions: BTreeMap<(Slot, i64), usize> =
            basis.iter().enumerate().map(|(n, b)| ((b.slot, b.label), n)).collect();
        if positions.len() != basis.len() {
            return Err(ModuleError::Malformed("repeated (slot, label) in basis".into()));
        }
        if matrices.iter().any(|m| m.columns.len() != basis.len()) {
            return Err(ModuleError::Malformed("matrix width differs from basis size".into()));
        }
        Ok(WindowedModule { spec, lo, hi, max_index, basis, matrices, positions })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, slot: Slot, label: i64) -> Option<usize> {
        self.positions.get(&(slot, label)).copied()
    }

    pub fn interior_labels(&self) -> std::ops::RangeInclusive<i64> {
        self.lo + self.max_index..=self.hi - self.max_index
    }

    pub fn is_interior_label(&self, label: i64) -> bool {
        self.interior_labels().contains(&label)
    }

    pub fn matrix(&self, g: &Generator) -> Option<&GeneratorMatrix> {
        self.matrices.iter().find(|m| &m.generator == g)
    }

    /// Image of a sparse vector under matrix `k`.
    pub fn apply(&self, k: usize, v: &SparseVec<usize>) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (col, x) in v {
            for (row, val) in &self.matrices[k].columns[*col] {
                let e = out.entry(*row).or_insert_with(Rational::zero);
                *e += x * val;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Basis positions with the given label and parity.
    pub fn block(&self, label: i64, parity: Parity) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.label == label && b.parity == parity)
            .map(|(n, _)| n)
            .collect()
    }

    /// `(even, odd)` dimensions per label.
    pub fn weight_dims(&self) -> BTreeMap<i64, (usize, usize)> {
        let mut out: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for b in &self.basis {
            let e = out.entry(b.label).or_default();
            match b.parity {
                Parity::Even => e.0 += 1,
                Parity::Odd => e.1 += 1,
            }
        }
        out
    }

    /// Weights `a + i` with a nonzero weight space.
    pub fn support(&self) -> Vec<Rational> {
        let mut w: Vec<Rational> = self.basis.iter().map(|b| b.weight.clone()).collect();
        w.dedup();
        w
    }

    pub fn describe_vector(&self, n: usize) -> String {
        let b = &self.basis[n];
        format!("{}_{}", b.slot, b.label)
    }

    /// Documented JSON form: basis list and matrix triplets, every number an
    /// exact string.
    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .basis
            .iter()
            .map(|b| {
                json!({
                    "slot": b.slot.name(),
                    "label": b.label.to_string(),
                    "parity": b.parity.to_string(),
                    "weight": b.weight.to_string(),
                    "boundary": b.boundary,
                })
            })
            .collect();
        let matrices: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                let entries: Vec<Value> = m
                    .columns
                    .iter()
                    .enumerate()
                    .flat_map(|(col, entries)| {
                        entries.iter().map(move |(row, v)| {
                            json!([row.to_string(), col.to_string(), v.to_string()])
                        })
                    })
                    .collect();
                json!({ "generator": m.generator.to_string(), "entries": entries })
            })
            .collect();
        json!({
            "module": self.spec.describe(),
            "parameters": self.spec.parameter_strings(),
            "window": { "lo": self.lo.to_string(), "hi": self.hi.to_string() },
            "max_index": self.max_index.to_string(),
            "basis": basis,
            "matrices": matrices,
        })
    }

    /// Generator kinds present.
    pub fn kinds(&self) -> Vec<GenKind> {
        self.spec.family.kinds().to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::modules::parity_flip;

    fn spec(f: Family, a: Rational, b: Rational, c: Rational) -> ModuleSpec {
        ModuleSpec::concrete(f, a, b, c)
    }

    #[test]
    fn a00_column_of_v0_vanishes() {
        let w = instantiate_window(&spec(Family::A, int(0), int(0), int(0)), -5, 5, 2).unwrap();
        assert_eq!(w.dim(), 11);
        let v0 = w.position(Slot::V, 0).unwrap();
        for m in &w.matrices {
            assert!(m.columns[v0].is_empty(), "{}", m.generator);
        }
    }

    #[test]
    fn rabc_interior_dims() {
        let w = instantiate_window(&spec(Family::Rabc, rat(1, 3), int(0), int(0)), -4, 4, 1).unwrap();
        for (label, (e, o)) in w.weight_dims() {
            assert_eq!((e, o), (2, 2), "label {label}");
        }
    }

    #[test]
    fn matrices_match_symbolic_action() {
        let s = spec(Family::Rabc, rat(2, 7), rat(3, 2), rat(-1, 3));
        let w = instantiate_window(&s, -3, 3, 1).unwrap();
        let sym = ModuleSpec::symbolic(Family::Rabc);
        let mut vals = crate::arith::Bindings::new();
        vals.insert(crate::arith::Symbol::new("a"), Poly::constant(rat(2, 7)));
        vals.insert(crate::arith::Symbol::new("b"), Poly::constant(rat(3, 2)));
        vals.insert(crate::arith::Symbol::new("c"), Poly::constant(rat(-1, 3)));
        for m in &w.matrices {
            for (col, b) in w.basis.iter().enumerate() {
                let v = act(&sym, &m.generator, b.slot, &IndexExpr::int(b.label)).unwrap();
                for ((slot, label), c) in v.terms() {
                    let l = label.as_integer().unwrap();
                    let Some(row) = w.position(*slot, l) else { continue };
                    let expected = c.substitute(&vals).constant_value().unwrap();
                    let got = m.columns[col]
                        .iter()
                        .find(|(r, _)| *r == row)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default();
                    assert_eq!(got, expected);
                }
            }
        }
    }

    #[test]
    fn parity_flip_swaps_dims() {
        let s = spec(Family::Rab, rat(1, 3), int(2), int(0));
        let w = instantiate_window(&s, -3, 3, 1).unwrap();
        let wf = instantiate_window(&parity_flip(&s), -3, 3, 1).unwrap();
        for ((l, (e, o)), (lf, (ef, of))) in w.weight_dims().into_iter().zip(wf.weight_dims()) {
            assert_eq!(l, lf);
            assert_eq!((e, o), (of, ef));
        }
    }

    #[test]
    fn subquotients_need_degenerate_parameters() {
        let s = spec(Family::Rabc, rat(1, 3), int(0), int(0)).with_quotient(Quotient::SimpleSubquotient);
        assert!(instantiate_window(&s, -4, 4, 1).is_err());
        let s = spec(Family::Rabc, rat(1, 5), int(1), int(0)).with_quotient(Quotient::SimpleSubquotient);
        let w = instantiate_window(&s, -4, 4, 1).unwrap();
        assert!(w.basis.iter().all(|b| matches!(b.slot, Slot::VMinus | Slot::VPm)));
        let s = spec(Family::A, int(0), int(0), int(0)).with_quotient(Quotient::SimpleSubquotient);
        let w = instantiate_window(&s, -4, 4, 1).unwrap();
        assert_eq!(w.dim(), 8);
    }

    #[test]
    fn json_has_string_numbers() {
        let w = instantiate_window(&spec(Family::A, rat(1, 2), int(1), int(0)), -2, 2, 1).unwrap();
        let j = w.to_json();
        assert_eq!(j["basis"][0]["weight"], "-3/2");
        assert!(j["matrices"][0]["entries"][0][2].is_string());
    }
}
