use serde::Serialize;

use super::{Family, ModuleError, ModuleSpec, ModuleVector, Perturbation, Slot};
use crate::algebra::{bracket, GenKind, Generator, Sector};
use crate::arith::{int, rat, IndexExpr, Poly};

/// `g · slot_label` from the family's action table. `C` acts as zero.
pub fn act(
    spec: &ModuleSpec,
    g: &Generator,
    slot: Slot,
    label: &IndexExpr,
) -> Result<ModuleVector, ModuleError> {
    spec.check_generator(g)?;
    if !spec.family.slots().contains(&slot) {
        return Err(ModuleError::UnknownSlot(slot, spec.family));
    }
    let parity = spec.slot_parity(slot) + g.parity();
    let mut out = ModuleVector::zero(parity);
    if g.kind == GenKind::C {
        return Ok(out);
    }
    let (a, b, c) = (&spec.a, &spec.b, &spec.c);
    let m = g.index.to_poly();
    let i = label.to_poly();
    let t = &g.index + label;
    let one = Poly::one();
    let half = |p: &Poly| p.scale(&rat(1, 2));
    // a + i + (b + shift) m
    let lin = |shift: Poly| &(a + &i) + &(&(b + &shift) * &m);
    use GenKind::*;
    match (spec.family, g.kind, slot) {
        (Family::A | Family::At, L, Slot::V) => out.add_term(Slot::V, t, &lin(Poly::zero())),
        (Family::At, H, Slot::V) => out.add_term(Slot::V, t, c),

        (Family::Rab, L, Slot::VPlus) => out.add_term(Slot::VPlus, t, &lin(Poly::zero())),
        (Family::Rab, L, Slot::VMinus) => {
            out.add_term(Slot::VMinus, t, &lin(Poly::constant(rat(-1, 2))))
        }
        (Family::Rab, H, Slot::VPlus) => {
            out.add_term(Slot::VPlus, t, &(&Poly::from_int(2) - &b.scale(&int(2))))
        }
        (Family::Rab, H, Slot::VMinus) => {
            out.add_term(Slot::VMinus, t, &(&one - &b.scale(&int(2))))
        }
        (Family::Rab, GMinus, Slot::VPlus) => out.add_term(Slot::VMinus, t, &one),
        (Family::Rab, GPlus, Slot::VMinus) => {
            // -(2a + (4b - 2)m + 2i)
            let coef = &(&a.scale(&int(2)) + &(&(&b.scale(&int(4)) - &Poly::from_int(2)) * &m))
                + &i.scale(&int(2));
            out.add_term(Slot::VPlus, t, &(-&coef));
        }
        (Family::Rab, GPlus, Slot::VPlus) => {}
        (Family::Rab, GMinus, Slot::VMinus) => {
            if spec.perturbation == Some(Perturbation::RabMinusOnMinus) {
                out.add_term(Slot::VPlus, t, &one);
            }
        }

        (Family::Rabc, L, Slot::V) => out.add_term(Slot::V, t, &lin(Poly::zero())),
        (Family::Rabc, L, Slot::VPlus | Slot::VMinus) => {
            out.add_term(slot, t, &lin(Poly::constant(rat(-1, 2))))
        }
        (Family::Rabc, L, Slot::VPm) => {
            out.add_term(Slot::VPm, t.clone(), &lin(Poly::from_int(-1)));
            out.add_term(Slot::V, t, &half(&(&deg_minus(spec) * &m.pow(2))));
        }
        (Family::Rabc, H, Slot::V) => out.add_term(Slot::V, t, c),
        (Family::Rabc, H, Slot::VPlus) => out.add_term(Slot::VPlus, t, &(c + &one)),
        (Family::Rabc, H, Slot::VMinus) => out.add_term(Slot::VMinus, t, &(c - &one)),
        (Family::Rabc, H, Slot::VPm) => {
            out.add_term(Slot::VPm, t.clone(), c);
            out.add_term(Slot::V, t, &(-&(&m * &deg_minus(spec))));
        }
        (Family::Rabc, GPlus, Slot::V) => out.add_term(Slot::VPlus, t, &one),
        (Family::Rabc, GMinus, Slot::V) => out.add_term(Slot::VMinus, t, &one),
        (Family::Rabc, GPlus, Slot::VPlus) | (Family::Rabc, GMinus, Slot::VMinus) => {}
        (Family::Rabc, GPlus, Slot::VMinus) => {
            // (c + 2 - 2b) r
            let sign = if spec.perturbation == Some(Perturbation::RabcRaisingSign) { 2 } else { -2 };
            let k = &(c + &Poly::from_int(2)) + &b.scale(&int(sign));
            out.add_term(Slot::VPm, t.clone(), &one);
            out.add_term(Slot::V, t, &(&k * &m));
        }
        (Family::Rabc, GMinus, Slot::VPlus) => {
            // -(2a + 2k + (2b + c) r)
            let k = &(&a.scale(&int(2)) + &i.scale(&int(2))) + &(&(&b.scale(&int(2)) + c) * &m);
            out.add_term(Slot::VPm, t.clone(), &Poly::from_int(-1));
            out.add_term(Slot::V, t, &(-&k));
        }
        (Family::Rabc, GMinus, Slot::VPm) => {
            // -(2a + 2i + (2b + c - 2) r)
            let s = &(&b.scale(&int(2)) + c) - &Poly::from_int(2);
            let k = &(&a.scale(&int(2)) + &i.scale(&int(2))) + &(&s * &m);
            out.add_term(Slot::VMinus, t, &(-&k));
        }
        (Family::Rabc, GPlus, Slot::VPm) => {
            out.add_term(Slot::VPlus, t, &(&deg_minus(spec) * &m));
        }
        (f, _, _) => return Err(ModuleError::IncompatibleGenerator(g.to_string(), f)),
    }
    Ok(out)
}

/// `2b - c - 2`.
fn deg_minus(spec: &ModuleSpec) -> Poly {
    &(&spec.b.scale(&int(2)) - &spec.c) - &Poly::from_int(2)
}

/// Linear extension of [`act`].
pub fn act_vector(
    spec: &ModuleSpec,
    g: &Generator,
    v: &ModuleVector,
) -> Result<ModuleVector, ModuleError> {
    let mut out = ModuleVector::zero(v.parity + g.parity());
    for ((slot, label), coef) in v.terms() {
        out.add_scaled(&act(spec, g, *slot, label)?, coef);
    }
    Ok(out)
}

/// The parity-changed module: same table, grading swapped.
pub fn parity_flip(spec: &ModuleSpec) -> ModuleSpec {
    let mut out = spec.clone();
    out.parity_flipped = !out.parity_flipped;
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResidual {
    pub x: String,
    pub y: String,
    pub slot: Slot,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub family: String,
    pub checked: usize,
    /// Nonzero residuals only.
    pub failures: Vec<AxiomResidual>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates `x(y v) - (-1)^{|x||y|} y(x v) - [x, y] v` for every ordered pair
/// of acting kinds with indices `m`, `n` and every slot with label `i`.
/// Central terms of `[x, y]` act as zero.
pub fn verify_axioms_symbolic(spec: &ModuleSpec) -> Result<AxiomReport, ModuleError> {
    let sector = Sector::N2Ramond;
    let i = IndexExpr::var("i");
    let mut failures = Vec::new();
    let mut checked = 0;
    for &kx in spec.family.kinds() {
        for &ky in spec.family.kinds() {
            let x = Generator::new(kx, IndexExpr::var("m"), sector)?;
            let y = Generator::new(ky, IndexExpr::var("n"), sector)?;
            let br = bracket(&x, &y)?;
            let sign = Poly::from_int(x.parity().koszul(y.parity()));
            for &slot in spec.family.slots() {
                checked += 1;
                let v = ModuleVector::basis(spec, slot, i.clone());
                let mut r = act_vector(spec, &x, &act_vector(spec, &y, &v)?)?;
                r.add_scaled(&act_vector(spec, &y, &act_vector(spec, &x, &v)?)?, &(-&sign));
                for (z, c) in br.body() {
                    r.add_scaled(&act_vector(spec, z, &v)?, &(-c));
                }
                if !r.is_zero() {
                    failures.push(AxiomResidual {
                        x: x.to_string(),
                        y: y.to_string(),
                        slot,
                        residual: r.to_string(),
                    });
                }
            }
        }
    }
    Ok(AxiomReport { family: spec.describe(), checked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(kind: GenKind, i: i64) -> Generator {
        Generator::at(kind, i, Sector::N2Ramond)
    }

    fn p(s: &str) -> Poly {
        Poly::var(s)
    }

    #[test]
    fn rabc_raising_on_minus() {
        let spec = ModuleSpec::symbolic(Family::Rabc);
        let v = act(&spec, &gen(GenKind::GPlus, 1), Slot::VMinus, &IndexExpr::int(0)).unwrap();
        assert_eq!(v.coefficient(Slot::VPm, &IndexExpr::int(1)), Poly::one());
        let expected = &(&p("c") + &Poly::from_int(2)) - &p("b").scale(&int(2));
        assert_eq!(v.coefficient(Slot::V, &IndexExpr::int(1)), expected);
        assert_eq!(v.parity, crate::algebra::Parity::Even);
    }

    #[test]
    fn rab_raising_on_minus() {
        let spec = ModuleSpec::symbolic(Family::Rab);
        let v = act(&spec, &gen(GenKind::GPlus, 2), Slot::VMinus, &IndexExpr::int(3)).unwrap();
        // -(2a + 2(4b - 2) + 6)
        let expected = -&(&(&p("a").scale(&int(2)) + &p("b").scale(&int(8))) + &Poly::from_int(2));
        assert_eq!(v.coefficient(Slot::VPlus, &IndexExpr::int(5)), expected);
    }

    #[test]
    fn rabc_virasoro_on_pm() {
        let spec = ModuleSpec::symbolic(Family::Rabc);
        let m = IndexExpr::var("m");
        let i = IndexExpr::var("i");
        let g = Generator::new(GenKind::L, m.clone(), Sector::N2Ramond).unwrap();
        let v = act(&spec, &g, Slot::VPm, &i).unwrap();
        let t = &m + &i;
        let mp = p("m");
        let lin = &(&(&p("a") + &p("i")) + &(&p("b") * &mp)) - &mp;
        assert_eq!(v.coefficient(Slot::VPm, &t), lin);
        let quad = (&(&p("b").scale(&int(2)) - &p("c")) - &Poly::from_int(2)).scale(&rat(1, 2));
        assert_eq!(v.coefficient(Slot::V, &t), &quad * &mp.pow(2));
    }

    #[test]
    fn at_h_action_and_errors() {
        let spec = ModuleSpec::symbolic(Family::At);
        let v = act(&spec, &gen(GenKind::H, 3), Slot::V, &IndexExpr::var("i")).unwrap();
        assert_eq!(v.coefficient(Slot::V, &(&IndexExpr::var("i") + &IndexExpr::int(3))), p("c"));
        let a = ModuleSpec::symbolic(Family::A);
        assert!(act(&a, &gen(GenKind::H, 3), Slot::V, &IndexExpr::int(0)).is_err());
        let rab = ModuleSpec::symbolic(Family::Rab);
        assert!(act(&rab, &gen(GenKind::L, 0), Slot::VPm, &IndexExpr::int(0)).is_err());
    }

    #[test]
    fn h_zero_eigenvalues_on_rabc() {
        let spec = ModuleSpec::symbolic(Family::Rabc);
        let i = IndexExpr::var("i");
        for (slot, shift) in [(Slot::V, 0), (Slot::VPlus, 1), (Slot::VMinus, -1), (Slot::VPm, 0)] {
            let v = act(&spec, &gen(GenKind::H, 0), slot, &i).unwrap();
            assert_eq!(v.terms().len(), 1);
            assert_eq!(v.coefficient(slot, &i), &p("c") + &Poly::from_int(shift));
        }
    }

    #[test]
    fn all_families_satisfy_axioms() {
        for f in Family::ALL {
            let rep = verify_axioms_symbolic(&ModuleSpec::symbolic(f)).unwrap();
            assert!(rep.passed(), "{f}: {:?}", rep.failures.first());
        }
    }

    #[test]
    fn perturbed_tables_fail() {
        let rab = ModuleSpec::symbolic(Family::Rab).with_perturbation(Perturbation::RabMinusOnMinus);
        let rep = verify_axioms_symbolic(&rab).unwrap();
        assert!(rep.failures.iter().any(|f| f.x.starts_with("G-") && f.y.starts_with("G-")));
        let rabc = ModuleSpec::symbolic(Family::Rabc).with_perturbation(Perturbation::RabcRaisingSign);
        assert!(!verify_axioms_symbolic(&rabc).unwrap().passed());
    }

    #[test]
    fn parity_flip_is_involution() {
        let spec = ModuleSpec::symbolic(Family::Rab);
        assert_eq!(parity_flip(&parity_flip(&spec)), spec);
        assert_ne!(parity_flip(&spec).slot_parity(Slot::VPlus), spec.slot_parity(Slot::VPlus));
    }
}
