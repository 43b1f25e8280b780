//! Normal ordering of words of generators acting either on a base layer
//! annihilated by `G^-` or on a highest-weight vector.

mod base;
mod verma;

pub use base::{k_action, BaseLayer, NormalForm, Strategy};
pub use verma::{
    character_series, pbw_basis, pbw_basis_at_level, verma_act, verma_act_vector,
    verma_weight_dims, PbwMonomial, VermaState, VermaVector,
};

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Generator, Sector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("generator {0} is not in sector {1}")]
    SectorMismatch(String, Sector),
    #[error("base layers exist only in N=2 sectors, not {0}")]
    NoBaseLayer(Sector),
    #[error("{0} is not a normal-ordered product of creation operators")]
    NotPbw(String),
    #[error("highest-weight computations need concrete indices, got {0}")]
    SymbolicIndex(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An ordered product of generators; the rightmost factor acts first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub sector: Sector,
    pub factors: Vec<Generator>,
}

impl Word {
    pub fn new(sector: Sector, factors: Vec<Generator>) -> Result<Self, RewriteError> {
        for g in &factors {
            if g.sector != sector {
                return Err(RewriteError::SectorMismatch(g.to_string(), sector));
            }
            g.validate()?;
        }
        Ok(Word { sector, factors })
    }

    pub fn empty(sector: Sector) -> Self {
        Word { sector, factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `self` followed by `other`, i.e. `other` acts first.
    pub fn concat(&self, other: &Word) -> Word {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Word { sector: self.sector, factors }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
