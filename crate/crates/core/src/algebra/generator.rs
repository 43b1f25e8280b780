use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::arith::{parse_rational, IndexExpr, Rational};

/// The four algebras handled here; the sector fixes the index lattice of the
/// odd generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sector {
    #[serde(rename = "n2-ramond")]
    N2Ramond,
    #[serde(rename = "n2-ns")]
    N2NeveuSchwarz,
    #[serde(rename = "n1-ramond")]
    N1Ramond,
    #[serde(rename = "n1-ns")]
    N1NeveuSchwarz,
}

impl Sector {
    pub const ALL: [Sector; 4] = [
        Sector::N2Ramond,
        Sector::N2NeveuSchwarz,
        Sector::N1Ramond,
        Sector::N1NeveuSchwarz,
    ];

    pub fn is_n2(self) -> bool {
        matches!(self, Sector::N2Ramond | Sector::N2NeveuSchwarz)
    }

    pub fn is_ramond(self) -> bool {
        matches!(self, Sector::N2Ramond | Sector::N1Ramond)
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::N2Ramond => "n2-ramond",
            Sector::N2NeveuSchwarz => "n2-ns",
            Sector::N1Ramond => "n1-ramond",
            Sector::N1NeveuSchwarz => "n1-ns",
        }
    }

    /// Odd generator kinds of the sector.
    pub fn odd_kinds(self) -> &'static [GenKind] {
        if self.is_n2() {
            &[GenKind::GPlus, GenKind::GMinus]
        } else {
            &[GenKind::G]
        }
    }

    /// Even non-central kinds of the sector.
    pub fn even_kinds(self) -> &'static [GenKind] {
        if self.is_n2() {
            &[GenKind::L, GenKind::H]
        } else {
            &[GenKind::L]
        }
    }

    pub fn allows(self, kind: GenKind) -> bool {
        match kind {
            GenKind::L | GenKind::C => true,
            GenKind::H | GenKind::GPlus | GenKind::GMinus => self.is_n2(),
            GenKind::G => !self.is_n2(),
        }
    }

    /// The sector with the same index lattice on the other side of the N=1
    /// embedding.
    pub fn partner(self) -> Sector {
        match self {
            Sector::N2Ramond => Sector::N1Ramond,
            Sector::N2NeveuSchwarz => Sector::N1NeveuSchwarz,
            Sector::N1Ramond => Sector::N2Ramond,
            Sector::N1NeveuSchwarz => Sector::N2NeveuSchwarz,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sector {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "n2-ramond" | "n2r" | "ramond" => Ok(Sector::N2Ramond),
            "n2-ns" | "n2-neveu-schwarz" | "n2ns" | "ns" => Ok(Sector::N2NeveuSchwarz),
            "n1-ramond" | "n1r" => Ok(Sector::N1Ramond),
            "n1-ns" | "n1-neveu-schwarz" | "n1ns" => Ok(Sector::N1NeveuSchwarz),
            _ => Err(AlgebraError::UnknownSector(s.to_string())),
        }
    }
}

/// Z/2 grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `(-1)^{|x||y|}`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GenKind {
    L,
    H,
    GPlus,
    GMinus,
    /// The odd generator of the N=1 algebras.
    G,
    C,
}

impl GenKind {
    pub fn parity(self) -> Parity {
        match self {
            GenKind::GPlus | GenKind::GMinus | GenKind::G => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            GenKind::L => "L",
            GenKind::H => "H",
            GenKind::GPlus => "G+",
            GenKind::GMinus => "G-",
            GenKind::G => "G",
            GenKind::C => "C",
        }
    }

    pub(crate) fn rank(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A basis element of one of the superconformal algebras.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GenKind,
    pub index: IndexExpr,
    pub sector: Sector,
}

impl Generator {
    /// Validates kind/sector compatibility and, for concrete indices, the
    /// sector lattice.
    pub fn new(kind: GenKind, index: IndexExpr, sector: Sector) -> Result<Self, AlgebraError> {
        let g = Generator { kind, index, sector };
        g.validate()?;
        Ok(g)
    }

    /// Concrete integer index. Panics if invalid; intended for tables and tests.
    pub fn at(kind: GenKind, index: i64, sector: Sector) -> Self {
        Generator::new(kind, IndexExpr::int(index), sector).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Concrete index `doubled / 2`. Panics if invalid.
    pub fn at_half(kind: GenKind, doubled: i64, sector: Sector) -> Self {
        Generator::new(kind, IndexExpr::half(doubled), sector).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn central(sector: Sector) -> Self {
        Generator { kind: GenKind::C, index: IndexExpr::zero(), sector }
    }

    pub fn parity(&self) -> Parity {
        self.kind.parity()
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if !self.sector.allows(self.kind) {
            return Err(AlgebraError::KindNotInSector(self.kind, self.sector));
        }
        if self.kind == GenKind::C {
            if !self.index.is_zero() {
                return Err(AlgebraError::OffLattice(self.to_string()));
            }
            return Ok(());
        }
        if let Some(d) = self.index.concrete_doubled() {
            let half_odd = d % 2 != 0;
            let want_half_odd = self.parity().is_odd() && !self.sector.is_ramond();
            if half_odd != want_half_odd {
                return Err(AlgebraError::OffLattice(self.to_string()));
            }
        }
        Ok(())
    }

    pub fn with_index(&self, index: IndexExpr) -> Generator {
        Generator { kind: self.kind, index, sector: self.sector }
    }

    /// Parses `L_3`, `H_-1`, `G+_1/2`, `G-_0`, `G_-1/2`, `C` with a concrete index.
    pub fn parse(s: &str, sector: Sector) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::ParseGenerator(s.to_string());
        let t = s.trim();
        if t == "C" {
            return Ok(Generator::central(sector));
        }
        let (k, idx) = t.split_once('_').ok_or_else(bad)?;
        let kind = match k {
            "L" => GenKind::L,
            "H" => GenKind::H,
            "G+" => GenKind::GPlus,
            "G-" => GenKind::GMinus,
            "G" => GenKind::G,
            _ => return Err(bad()),
        };
        let q: Rational = parse_rational(idx).map_err(|_| bad())?;
        let doubled = crate::arith::to_i64(&(q * crate::arith::int(2))).ok_or_else(bad)?;
        Generator::new(kind, IndexExpr::half(doubled), sector)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == GenKind::C {
            return f.write_str("C");
        }
        if self.index.is_concrete() {
            write!(f, "{}_{}", self.kind, self.index)
        } else {
            write!(f, "{}_{{{}}}", self.kind, self.index)
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_rules() {
        use GenKind::*;
        assert!(Generator::new(GPlus, IndexExpr::half(1), Sector::N2Ramond).is_err());
        assert!(Generator::new(GPlus, IndexExpr::half(1), Sector::N2NeveuSchwarz).is_ok());
        assert!(Generator::new(GPlus, IndexExpr::int(1), Sector::N2NeveuSchwarz).is_err());
        assert!(Generator::new(L, IndexExpr::half(1), Sector::N2NeveuSchwarz).is_err());
        assert!(Generator::new(H, IndexExpr::int(1), Sector::N1Ramond).is_err());
        assert!(Generator::new(G, IndexExpr::int(1), Sector::N2Ramond).is_err());
        assert!(Generator::new(C, IndexExpr::int(1), Sector::N2Ramond).is_err());
        assert!(Generator::new(G, IndexExpr::var("p"), Sector::N1NeveuSchwarz).is_ok());
    }

    #[test]
    fn parse_and_display() {
        for (text, sector) in [
            ("L_3", Sector::N2Ramond),
            ("H_-1", Sector::N2Ramond),
            ("G+_1/2", Sector::N2NeveuSchwarz),
            ("G-_0", Sector::N2Ramond),
            ("G_-1/2", Sector::N1NeveuSchwarz),
            ("C", Sector::N1Ramond),
        ] {
            let g = Generator::parse(text, sector).unwrap();
            assert_eq!(g.to_string(), text);
        }
        assert!(Generator::parse("G+_1/2", Sector::N2Ramond).is_err());
        assert!(Generator::parse("X_1", Sector::N2Ramond).is_err());
    }

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
        assert_eq!(Parity::Odd + Parity::Even, Parity::Odd);
        assert_eq!(Parity::Odd.koszul(Parity::Odd), -1);
        assert_eq!(Parity::Even.koszul(Parity::Odd), 1);
    }

    #[test]
    fn sector_names_parse() {
        for s in Sector::ALL {
            assert_eq!(s.name().parse::<Sector>().unwrap(), s);
        }
    }
}
