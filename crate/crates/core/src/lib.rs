//! Exact-arithmetic engine for the N=2 superconformal algebras (Ramond and
//! Neveu-Schwarz sectors) and their cuspidal weight modules.
//!
//! * [`arith`]: rationals, polynomials, index expressions
//! * [`algebra`]: generators, super-brackets, Jacobi sweeps, subalgebras
//! * [`rewrite`]: normal ordering on an annihilated base layer, Verma modules
//! * [`modules`]: the module families and their windowed matrix realizations
//! * [`analysis`]: identity checks, invariant subspaces, intertwiners,
//!   simplicity classification

pub mod algebra;
pub mod analysis;
pub mod arith;
pub mod linalg;
pub mod modules;
pub mod rewrite;

pub use algebra::{AlgebraElement, GenKind, Generator, Parity, Sector};
pub use arith::{IndexExpr, Poly, Rational, Symbol};
