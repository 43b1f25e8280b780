use std::collections::BTreeMap;
use std::fmt;

use super::{GenKind, Generator, Sector};
use crate::arith::{IndexExpr, Poly, Rational};

/// A finite linear combination of generators with polynomial coefficients.
///
/// Central terms are stored per guard: `guard -> coefficient` means
/// `coefficient * [guard = 0] * C`. Guards that are concrete are resolved on
/// insertion, so a concrete element never carries a symbolic guard.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    body: BTreeMap<Generator, Poly>,
    central: BTreeMap<IndexExpr, Poly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut e = AlgebraElement::zero();
        if g.kind == GenKind::C {
            e.add_central(&Poly::one(), &IndexExpr::zero());
        } else {
            e.add_body(g, &Poly::one());
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_empty() && self.central.is_empty()
    }

    pub fn body(&self) -> &BTreeMap<Generator, Poly> {
        &self.body
    }

    pub fn central(&self) -> &BTreeMap<IndexExpr, Poly> {
        &self.central
    }

    /// Coefficient of the unconditional central term.
    pub fn central_coefficient(&self) -> Poly {
        self.central.get(&IndexExpr::zero()).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, g: &Generator) -> Poly {
        self.body.get(g).cloned().unwrap_or_default()
    }

    pub fn add_body(&mut self, g: Generator, coef: &Poly) {
        if coef.is_zero() {
            return;
        }
        debug_assert!(g.kind != GenKind::C);
        let slot = self.body.entry(g.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.body.remove(&g);
        }
    }

    /// Adds `coef * [guard = 0] * C`.
    pub fn add_central(&mut self, coef: &Poly, guard: &IndexExpr) {
        if coef.is_zero() {
            return;
        }
        let key = if guard.is_concrete() {
            if !guard.is_zero() {
                return;
            }
            IndexExpr::zero()
        } else {
            guard.sign_normalized()
        };
        let slot = self.central.entry(key.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.central.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, k: &Poly) {
        if k.is_zero() {
            return;
        }
        for (g, c) in &other.body {
            self.add_body(g.clone(), &(c * k));
        }
        for (guard, c) in &other.central {
            self.add_central(&(c * k), guard);
        }
    }

    pub fn add_element(&mut self, other: &AlgebraElement) {
        self.add_scaled(other, &Poly::one());
    }

    pub fn sub_element(&mut self, other: &AlgebraElement) {
        self.add_scaled(other, &Poly::from_int(-1));
    }

    pub fn scaled(&self, k: &Poly) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn scaled_rational(&self, q: &Rational) -> AlgebraElement {
        self.scaled(&Poly::constant(q.clone()))
    }

    /// Drops the central part.
    pub fn without_central(&self) -> AlgebraElement {
        AlgebraElement { body: self.body.clone(), central: BTreeMap::new() }
    }

    /// True when the body is empty and every guarded central coefficient
    /// vanishes on its guard hyperplane.
    pub fn is_zero_on_guards(&self) -> bool {
        if !self.body.is_empty() {
            return false;
        }
        self.central.iter().all(|(guard, c)| {
            if guard.is_zero() {
                return c.is_zero();
            }
            // solve the guard for a symbol with unit coefficient
            let Some(&(s, k)) = guard.terms().iter().rev().find(|(_, k)| k.abs() == 1) else {
                return false;
            };
            let rest = &guard.to_poly() - &Poly::symbol(s).scale(&crate::arith::int(k));
            let value = rest.scale(&crate::arith::int(-k));
            let mut b = crate::arith::Bindings::new();
            b.insert(s, value);
            c.substitute(&b).is_zero()
        })
    }

    /// Sector of the first generator present, if any.
    pub fn sector(&self) -> Option<Sector> {
        self.body.keys().next().map(|g| g.sector)
    }

    /// Substitutes index symbols, re-resolving guards that become concrete.
    pub fn substitute_indices(
        &self,
        bindings: &BTreeMap<crate::arith::Symbol, IndexExpr>,
    ) -> AlgebraElement {
        let poly_bindings: crate::arith::Bindings =
            bindings.iter().map(|(s, e)| (*s, e.to_poly())).collect();
        let mut out = AlgebraElement::zero();
        for (g, c) in &self.body {
            out.add_body(g.with_index(g.index.substitute(bindings)), &c.substitute(&poly_bindings));
        }
        for (guard, c) in &self.central {
            out.add_central(&c.substitute(&poly_bindings), &guard.substitute(bindings));
        }
        out
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, coef: &Poly, what: &str) -> fmt::Result {
    if !first {
        f.write_str(" + ")?;
    }
    match coef.constant_value() {
        Some(q) if q == crate::arith::int(1) => f.write_str(what),
        Some(q) if q == crate::arith::int(-1) => write!(f, "-{what}"),
        Some(q) => write!(f, "{q}*{what}"),
        None => write!(f, "({coef})*{what}"),
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (g, c) in &self.body {
            write_term(f, first, c, &g.to_string())?;
            first = false;
        }
        for (guard, c) in &self.central {
            let what = if guard.is_zero() {
                "C".to_string()
            } else {
                format!("[{guard} = 0]C")
            };
            write_term(f, first, c, &what)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concrete_guards_resolve() {
        let mut e = AlgebraElement::zero();
        e.add_central(&Poly::from_int(3), &IndexExpr::int(1));
        assert!(e.is_zero());
        e.add_central(&Poly::from_int(3), &IndexExpr::int(0));
        assert_eq!(e.central_coefficient(), Poly::from_int(3));
    }

    #[test]
    fn symbolic_guards_are_sign_normalized() {
        let m = IndexExpr::var("m");
        let n = IndexExpr::var("n");
        let mut e = AlgebraElement::zero();
        e.add_central(&Poly::one(), &(&m + &n));
        e.add_central(&Poly::from_int(-1), &(-&(&m + &n)));
        assert!(e.is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let g = Generator::at(GenKind::L, 2, Sector::N2Ramond);
        let mut e = AlgebraElement::generator(g.clone());
        e.sub_element(&AlgebraElement::generator(g));
        assert!(e.is_zero());
        assert_eq!(e.to_string(), "0");
    }

    #[test]
    fn substitution_resolves_guards() {
        let m = IndexExpr::var("m");
        let mut e = AlgebraElement::zero();
        e.add_central(&Poly::one(), &(&m + &IndexExpr::int(-2)));
        let mut b = BTreeMap::new();
        b.insert(crate::arith::Symbol::new("m"), IndexExpr::int(2));
        assert_eq!(e.substitute_indices(&b).central_coefficient(), Poly::one());
        b.insert(crate::arith::Symbol::new("m"), IndexExpr::int(3));
        assert!(e.substitute_indices(&b).is_zero());
    }
}
