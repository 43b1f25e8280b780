use std::fmt;
use std::str::FromStr;

use super::ArithError;

const MAX_LEN: usize = 16;

/// An indeterminate name (`a`, `r1`, `hp`, ...), stored inline so that it is
/// `Copy` and compares as cheaply as an integer.
///
/// Ordering is lexicographic on the name.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol([u8; MAX_LEN]);

impl Symbol {
    /// Panics on an invalid name; use [`Symbol::try_new`] for user input.
    pub fn new(name: &str) -> Self {
        Self::try_new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(name: &str) -> Result<Self, ArithError> {
        let bytes = name.as_bytes();
        let valid = !bytes.is_empty()
            && bytes.len() <= MAX_LEN
            && bytes[0].is_ascii_alphabetic()
            && bytes.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'_');
        if !valid {
            return Err(ArithError::InvalidSymbol(name.to_string()));
        }
        let mut buf = [0u8; MAX_LEN];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(Symbol(buf))
    }

    pub fn as_str(&self) -> &str {
        let len = self.0.iter().position(|&b| b == 0).unwrap_or(MAX_LEN);
        // only ASCII is ever stored
        std::str::from_utf8(&self.0[..len]).unwrap()
    }
}

impl FromStr for Symbol {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::try_new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.as_str())
    }
}
