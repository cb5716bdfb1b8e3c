use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Barrier slope `eps = num/den` in `(0, 1]`, kept in lowest terms.
///
/// Comparisons against a walk value never leave the integers:
/// `S < eps * l` is decided as `S * den < num * l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub const ONE: Epsilon = Epsilon { num: 1, den: 1 };
    pub const HALF: Epsilon = Epsilon { num: 1, den: 2 };
    pub const QUARTER: Epsilon = Epsilon { num: 1, den: 4 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::invalid(format!(
                "epsilon must lie in (0, 1], got {num}/{den}"
            )));
        }
        // Keep products with walk values (|S| <= 2^32) inside i128 comfortably.
        if den > u32::MAX as u64 {
            return Err(Error::invalid("epsilon denominator exceeds 2^32"));
        }
        let g = num.gcd(&den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// `S < eps * l`.
    #[inline]
    pub fn below(&self, sum: i64, ell: u64) -> bool {
        (sum as i128) * (self.den as i128) < (self.num as i128) * (ell as i128)
    }

    /// `S >= eps * l`, the complement of [`Epsilon::below`].
    #[inline]
    pub fn at_or_above(&self, sum: i64, ell: u64) -> bool {
        !self.below(sum, ell)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b` or a bare integer (only `1` is in range).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::invalid(format!("epsilon must be a rational a/b, got {s:?}")))
        };
        match s.split_once('/') {
            Some((a, b)) => Epsilon::new(parse(a)?, parse(b)?),
            None => Epsilon::new(parse(s)?, 1),
        }
    }
}
