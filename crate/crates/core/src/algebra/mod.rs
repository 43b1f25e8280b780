//! The N=2 (Ramond and Neveu-Schwarz) and N=1 superconformal algebras:
//! generators, the super-bracket, Jacobi sweeps over index boxes and the
//! standard subalgebras.

mod bracket;
mod element;
mod generator;
mod subalgebra;

pub use bracket::{antisymmetry_residual, bracket, bracket_elements, super_jacobi_residual};
pub use element::AlgebraElement;
pub use generator::{GenKind, Generator, Parity, Sector};
pub use subalgebra::{n1_embedding_residual, subalgebra_contains, Subalgebra};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generators from different sectors: {0} and {1}")]
    SectorMismatch(Sector, Sector),
    #[error("generator kind {0} does not exist in sector {1}")]
    KindNotInSector(GenKind, Sector),
    #[error("generator {0} is off the index lattice of its sector")]
    OffLattice(String),
    #[error("unknown sector {0:?}")]
    UnknownSector(String),
    #[error("cannot parse generator {0:?}")]
    ParseGenerator(String),
    #[error("unknown subalgebra {0:?}")]
    UnknownSubalgebra(String),
    #[error("subalgebra {0} is not defined in sector {1}")]
    SubalgebraNotInSector(Subalgebra, Sector),
}

/// All non-central generators of `sector` with `|index| <= max_abs`, plus `C`.
pub fn concrete_generators(sector: Sector, max_abs: i64) -> Vec<Generator> {
    let mut out = Vec::new();
    for &kind in sector.even_kinds() {
        for i in -max_abs..=max_abs {
            out.push(Generator::at(kind, i, sector));
        }
    }
    for &kind in sector.odd_kinds() {
        if sector.is_ramond() {
            for i in -max_abs..=max_abs {
                out.push(Generator::at(kind, i, sector));
            }
        } else {
            // half-odd indices p with |p| <= max_abs
            for d in (-2 * max_abs..=2 * max_abs).filter(|d| d % 2 != 0) {
                out.push(Generator::at_half(kind, d, sector));
            }
        }
    }
    out.push(Generator::central(sector));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiFailure {
    pub x: String,
    pub y: String,
    pub z: String,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiReport {
    pub sector: Sector,
    pub max_abs: i64,
    pub triples: u64,
    pub failure_count: u64,
    /// The first failures in generator order.
    pub failures: Vec<JacobiFailure>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const KEPT_FAILURES: usize = 16;

/// Evaluates the super-Jacobi residual on every ordered triple of concrete
/// generators with `|index| <= max_abs`.
pub fn jacobi_sweep(sector: Sector, max_abs: i64) -> JacobiReport {
    let gens = concrete_generators(sector, max_abs);
    let n = gens.len();
    let per_x: Vec<(u64, Vec<JacobiFailure>)> = gens
        .par_iter()
        .map(|x| {
            let mut count = 0u64;
            let mut kept = Vec::new();
            for y in &gens {
                for z in &gens {
                    let r = super_jacobi_residual(x, y, z).expect("generators share a sector");
                    if !r.is_zero() {
                        count += 1;
                        if kept.len() < KEPT_FAILURES {
                            kept.push(JacobiFailure {
                                x: x.to_string(),
                                y: y.to_string(),
                                z: z.to_string(),
                                residual: r.to_string(),
                            });
                        }
                    }
                }
            }
            (count, kept)
        })
        .collect();
    let failure_count = per_x.iter().map(|(c, _)| c).sum();
    let failures = per_x
        .into_iter()
        .flat_map(|(_, f)| f)
        .take(KEPT_FAILURES)
        .collect();
    JacobiReport {
        sector,
        max_abs,
        triples: (n * n * n) as u64,
        failure_count,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        // L,H: 2*5, G+,G-: 2*5 (Ramond), C
        assert_eq!(concrete_generators(Sector::N2Ramond, 2).len(), 21);
        // G+,G- at +-1/2, +-3/2
        assert_eq!(concrete_generators(Sector::N2NeveuSchwarz, 2).len(), 19);
        assert_eq!(concrete_generators(Sector::N1Ramond, 2).len(), 11);
        assert_eq!(concrete_generators(Sector::N1NeveuSchwarz, 2).len(), 10);
    }

    #[test]
    fn small_sweeps_pass() {
        for sector in Sector::ALL {
            let rep = jacobi_sweep(sector, 2);
            assert!(rep.passed(), "{sector}: {:?}", rep.failures.first());
        }
    }
}
