use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ArithError;

/// Arbitrary-precision rational. `BigRational` keeps itself reduced with a
/// positive denominator, which is exactly the canonical form we need.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/3"`, `"4/6"`. Decimal or float notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::MalformedRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let is_int = |x: &str| {
        let digits = x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Representative of `q` modulo the integers, in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Display helper that always prints with a leading sign handled by the caller.
pub(crate) fn abs_string(q: &Rational) -> String {
    q.abs().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_strings() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(parse_rational("0/5").unwrap(), int(0));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["0.5", "1e3", "1/0", "", "a/2", "1//2", "--1"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn reduced_form() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(frac_part(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac_part(&int(5)), int(0));
    }
}
