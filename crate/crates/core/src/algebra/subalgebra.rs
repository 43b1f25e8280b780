use std::fmt;
use std::str::FromStr;

use super::{bracket, bracket_elements, AlgebraElement, AlgebraError, GenKind, Generator, Sector};
use crate::arith::{IndexExpr, Poly};

/// The standard subalgebras: `Vir = span{L, C}`, `t = span{L, H, C}`,
/// `q± = span{L, H, G±, C}` and the N=1 algebra `s = span{L, G, C}`, realized
/// in an N=2 sector through `G_m -> G_m^+ + G_m^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subalgebra {
    Vir,
    T,
    QPlus,
    QMinus,
    S,
}

impl Subalgebra {
    pub const ALL: [Subalgebra; 5] = [
        Subalgebra::Vir,
        Subalgebra::T,
        Subalgebra::QPlus,
        Subalgebra::QMinus,
        Subalgebra::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subalgebra::Vir => "Vir",
            Subalgebra::T => "t",
            Subalgebra::QPlus => "qplus",
            Subalgebra::QMinus => "qminus",
            Subalgebra::S => "s",
        }
    }

    fn check_sector(self, sector: Sector) -> Result<(), AlgebraError> {
        match self {
            Subalgebra::Vir | Subalgebra::S => Ok(()),
            _ if sector.is_n2() => Ok(()),
            _ => Err(AlgebraError::SubalgebraNotInSector(self, sector)),
        }
    }

    /// Membership of an element. For `s` inside N=2 the odd part must be a
    /// combination of the sums `G_m^+ + G_m^-`.
    pub fn contains_element(
        self,
        sector: Sector,
        e: &AlgebraElement,
    ) -> Result<bool, AlgebraError> {
        self.check_sector(sector)?;
        for (g, c) in e.body() {
            if g.sector != sector {
                return Err(AlgebraError::SectorMismatch(g.sector, sector));
            }
            let ok = match (self, g.kind) {
                (Subalgebra::S, GenKind::GPlus) => {
                    e.coefficient(&g.with_index_kind(GenKind::GMinus)) == *c
                }
                (Subalgebra::S, GenKind::GMinus) => {
                    e.coefficient(&g.with_index_kind(GenKind::GPlus)) == *c
                }
                _ => generator_in(self, g),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Generator {
    fn with_index_kind(&self, kind: GenKind) -> Generator {
        Generator { kind, index: self.index.clone(), sector: self.sector }
    }
}

fn generator_in(sub: Subalgebra, g: &Generator) -> bool {
    use GenKind::*;
    match sub {
        Subalgebra::Vir => matches!(g.kind, L | C),
        Subalgebra::T => matches!(g.kind, L | H | C),
        Subalgebra::QPlus => matches!(g.kind, L | H | GPlus | C),
        Subalgebra::QMinus => matches!(g.kind, L | H | GMinus | C),
        Subalgebra::S => matches!(g.kind, L | G | C),
    }
}

impl fmt::Display for Subalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subalgebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Vir" | "vir" => Ok(Subalgebra::Vir),
            "t" => Ok(Subalgebra::T),
            "qplus" | "q+" => Ok(Subalgebra::QPlus),
            "qminus" | "q-" => Ok(Subalgebra::QMinus),
            "s" => Ok(Subalgebra::S),
            _ => Err(AlgebraError::UnknownSubalgebra(s.to_string())),
        }
    }
}

/// Whether the basis element `g` lies in the subalgebra. A single `G^±` is
/// never in the embedded `s`.
pub fn subalgebra_contains(sub: Subalgebra, g: &Generator) -> Result<bool, AlgebraError> {
    sub.check_sector(g.sector)?;
    g.validate()?;
    Ok(generator_in(sub, g))
}

/// `[Gh_p, Gh_q] - 2 [G_p, G_q]_{N=1}` with `Gh_m = G_m^+ + G_m^-` in the N=2
/// sector and the N=1 bracket taken in the partner sector and transported by
/// `L -> L`, `C -> C`. Zero iff the unnormalized embedding respects the N=1
/// relation.
pub fn n1_embedding_residual(
    sector: Sector,
    p: &IndexExpr,
    q: &IndexExpr,
) -> Result<AlgebraElement, AlgebraError> {
    if !sector.is_n2() {
        return Err(AlgebraError::KindNotInSector(GenKind::GPlus, sector));
    }
    let hat = |m: &IndexExpr| -> Result<AlgebraElement, AlgebraError> {
        let mut e = AlgebraElement::generator(Generator::new(GenKind::GPlus, m.clone(), sector)?);
        e.add_element(&AlgebraElement::generator(Generator::new(
            GenKind::GMinus,
            m.clone(),
            sector,
        )?));
        Ok(e)
    };
    let mut residual = bracket_elements(&hat(p)?, &hat(q)?)?;

    let n1 = sector.partner();
    let reference = bracket(
        &Generator::new(GenKind::G, p.clone(), n1)?,
        &Generator::new(GenKind::G, q.clone(), n1)?,
    )?;
    let two = Poly::from_int(2);
    for (g, c) in reference.body() {
        let lifted = Generator { kind: g.kind, index: g.index.clone(), sector };
        residual.add_body(lifted, &(-&(c * &two)));
    }
    for (guard, c) in reference.central() {
        residual.add_central(&(-&(c * &two)), guard);
    }
    Ok(residual)
}
