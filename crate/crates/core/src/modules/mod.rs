//! The cuspidal module families `A_{a,b}`, `A_{a,b,c}`, `R_{a,b}` and
//! `R_{a,b,c}` over the N=2 Ramond algebra: symbolic action tables, the
//! module-axiom checker and windowed matrix realizations.

mod family;
mod window;

pub use family::{act, act_vector, parity_flip, verify_axioms_symbolic, AxiomReport, AxiomResidual};
pub use window::{instantiate_window, BasisVector, GeneratorMatrix, WindowedModule};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GenKind, Generator, Parity};
use crate::arith::{frac_part, IndexExpr, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("slot {0} does not exist in family {1}")]
    UnknownSlot(Slot, Family),
    #[error("generator {0} does not act on family {1}")]
    IncompatibleGenerator(String, Family),
    #[error("unknown family {0:?}; expected one of a, at, rab, rabc")]
    UnknownFamily(String),
    #[error("operation needs concrete parameters, {0} is symbolic")]
    SymbolicParameter(&'static str),
    #[error("{0} has no proper sub-quotient at these parameters")]
    NotDegenerate(String),
    #[error("window [{0}, {1}] with max index {2} has no interior")]
    EmptyInterior(i64, i64, i64),
    #[error("malformed windowed module: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `A_{a,b}`: `L_m v_i = (a + i + bm) v_{m+i}`.
    A,
    /// `A_{a,b,c}`: adds `H_m v_i = c v_{m+i}`.
    At,
    /// `R_{a,b}` on `v^+` and `v^-`.
    Rab,
    /// `R_{a,b,c}` on `v`, `v^+`, `v^-` and `v^{+-}`.
    Rabc,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::At, Family::Rab, Family::Rabc];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::At => "At",
            Family::Rab => "Rab",
            Family::Rabc => "Rabc",
        }
    }

    pub fn slots(self) -> &'static [Slot] {
        match self {
            Family::A | Family::At => &[Slot::V],
            Family::Rab => &[Slot::VPlus, Slot::VMinus],
            Family::Rabc => &[Slot::V, Slot::VPlus, Slot::VMinus, Slot::VPm],
        }
    }

    /// Non-central generator kinds acting on the family.
    pub fn kinds(self) -> &'static [GenKind] {
        match self {
            Family::A => &[GenKind::L],
            Family::At => &[GenKind::L, GenKind::H],
            Family::Rab | Family::Rabc => &[GenKind::L, GenKind::H, GenKind::GPlus, GenKind::GMinus],
        }
    }

    pub fn uses_c(self) -> bool {
        matches!(self, Family::At | Family::Rabc)
    }

    /// Parity of a slot before any parity change.
    pub fn slot_parity(self, slot: Slot) -> Parity {
        match (self, slot) {
            (Family::Rab, Slot::VMinus) => Parity::Odd,
            (Family::Rabc, Slot::VPlus | Slot::VMinus) => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ModuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "at" | "abc" => Ok(Family::At),
            "rab" => Ok(Family::Rab),
            "rabc" => Ok(Family::Rabc),
            _ => Err(ModuleError::UnknownFamily(s.to_string())),
        }
    }
}

/// Basis vector type within a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "v")]
    V,
    #[serde(rename = "v+")]
    VPlus,
    #[serde(rename = "v-")]
    VMinus,
    #[serde(rename = "v+-")]
    VPm,
}

impl Slot {
    pub fn name(self) -> &'static str {
        match self {
            Slot::V => "v",
            Slot::VPlus => "v+",
            Slot::VMinus => "v-",
            Slot::VPm => "v+-",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quotient {
    Full,
    SimpleSubquotient,
}

/// Deliberately broken tables, used as negative controls for the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    /// `R_{a,b}` with `G^-_m v^-_i = v^+_{m+i}` in place of `G^-_m v^-_i = 0`.
    RabMinusOnMinus,
    /// `R_{a,b,c}` with `G^+_r v^-_k = v^{+-}_{k+r} + (c + 2 + 2b) r v_{k+r}`.
    RabcRaisingSign,
}

/// A module family with symbolic or concrete parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub family: Family,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub quotient: Quotient,
    pub parity_flipped: bool,
    pub perturbation: Option<Perturbation>,
}

impl ModuleSpec {
    /// All parameters indeterminate (`c` only for the families that use it).
    pub fn symbolic(family: Family) -> Self {
        ModuleSpec {
            family,
            a: Poly::var("a"),
            b: Poly::var("b"),
            c: if family.uses_c() { Poly::var("c") } else { Poly::zero() },
            quotient: Quotient::Full,
            parity_flipped: false,
            perturbation: None,
        }
    }

    pub fn concrete(family: Family, a: Rational, b: Rational, c: Rational) -> Self {
        ModuleSpec {
            family,
            a: Poly::constant(a),
            b: Poly::constant(b),
            c: if family.uses_c() { Poly::constant(c) } else { Poly::zero() },
            quotient: Quotient::Full,
            parity_flipped: false,
            perturbation: None,
        }
    }

    pub fn with_quotient(mut self, q: Quotient) -> Self {
        self.quotient = q;
        self
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub fn slot_parity(&self, slot: Slot) -> Parity {
        let p = self.family.slot_parity(slot);
        if self.parity_flipped {
            p.flip()
        } else {
            p
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.a.is_constant() && self.b.is_constant() && self.c.is_constant()
    }

    /// Concrete `(a, b, c)`.
    pub fn params(&self) -> Result<(Rational, Rational, Rational), ModuleError> {
        let get = |p: &Poly, name| p.constant_value().ok_or(ModuleError::SymbolicParameter(name));
        Ok((get(&self.a, "a")?, get(&self.b, "b")?, get(&self.c, "c")?))
    }

    /// Representative under the isomorphism `a -> a + 1`: `a` replaced by its
    /// fractional part, so integral `a` becomes 0.
    pub fn normalized(&self) -> Result<ModuleSpec, ModuleError> {
        let (a, _, _) = self.params()?;
        let mut out = self.clone();
        out.a = Poly::constant(frac_part(&a));
        Ok(out)
    }

    /// Parameter strings for reports.
    pub fn parameter_strings(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let show = |p: &Poly| match p.constant_value() {
            Some(q) => q.to_string(),
            None => "symbolic".to_string(),
        };
        m.insert("family".to_string(), self.family.name().to_string());
        m.insert("a".to_string(), show(&self.a));
        m.insert("b".to_string(), show(&self.b));
        if self.family.uses_c() {
            m.insert("c".to_string(), show(&self.c));
        }
        if self.parity_flipped {
            m.insert("parity".to_string(), "flipped".to_string());
        }
        if self.quotient == Quotient::SimpleSubquotient {
            m.insert("quotient".to_string(), "simple-subquotient".to_string());
        }
        m
    }

    pub fn describe(&self) -> String {
        let pars = self.parameter_strings();
        let mut s = format!("{}({}, {}", self.family, pars["a"], pars["b"]);
        if let Some(c) = pars.get("c") {
            s.push_str(&format!(", {c}"));
        }
        s.push(')');
        if self.parity_flipped {
            s = format!("Pi({s})");
        }
        s
    }

    pub(crate) fn check_generator(&self, g: &Generator) -> Result<(), ModuleError> {
        g.validate()?;
        if g.sector != crate::algebra::Sector::N2Ramond {
            return Err(ModuleError::IncompatibleGenerator(g.to_string(), self.family));
        }
        if g.kind != GenKind::C && !self.family.kinds().contains(&g.kind) {
            return Err(ModuleError::IncompatibleGenerator(g.to_string(), self.family));
        }
        Ok(())
    }
}

/// Finite combination of family basis vectors `slot_label` of one parity.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    pub parity: Parity,
    terms: BTreeMap<(Slot, IndexExpr), Poly>,
}

impl ModuleVector {
    pub fn zero(parity: Parity) -> Self {
        ModuleVector { parity, terms: BTreeMap::new() }
    }

    pub fn basis(spec: &ModuleSpec, slot: Slot, label: IndexExpr) -> Self {
        let mut v = ModuleVector::zero(spec.slot_parity(slot));
        v.add_term(slot, label, &Poly::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(Slot, IndexExpr), Poly> {
        &self.terms
    }

    pub fn coefficient(&self, slot: Slot, label: &IndexExpr) -> Poly {
        self.terms.get(&(slot, label.clone())).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, slot: Slot, label: IndexExpr, coef: &Poly) {
        if coef.is_zero() {
            return;
        }
        let key = (slot, label);
        let e = self.terms.entry(key.clone()).or_default();
        *e += coef;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, k: &Poly) {
        for ((s, l), c) in &other.terms {
            self.add_term(*s, l.clone(), &(c * k));
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> ModuleVector {
        let mut out = ModuleVector::zero(self.parity);
        for ((s, l), c) in &self.terms {
            out.add_term(*s, l.clone(), &f(c));
        }
        out
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((s, l), c)| {
                if l.is_concrete() {
                    format!("({c})*{s}_{l}")
                } else {
                    format!("({c})*{s}_{{{l}}}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
