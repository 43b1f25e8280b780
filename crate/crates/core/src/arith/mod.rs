//! Exact scalars: rationals, multivariate polynomials over the rationals and
//! linear index expressions.

mod index;
mod poly;
mod rational;
mod symbol;

pub use index::IndexExpr;
pub use poly::{Bindings, Monomial, Poly};
pub use rational::{frac_part, int, is_integer, parse_rational, rat, to_i64, Rational};
pub use symbol::Symbol;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid indeterminate name {0:?}")]
    InvalidSymbol(String),
    #[error("malformed rational {0:?}; expected an exact string such as \"1/3\"")]
    MalformedRational(String),
}

/// Builds a binding map from `(name, value)` pairs.
pub fn bindings<'a, I, P>(pairs: I) -> Bindings
where
    I: IntoIterator<Item = (&'a str, P)>,
    P: Into<Poly>,
{
    pairs
        .into_iter()
        .map(|(name, v)| (Symbol::new(name), v.into()))
        .collect()
}
