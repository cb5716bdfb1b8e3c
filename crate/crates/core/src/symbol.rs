//! Quadratic symbols: Jacobi (binary reciprocity), Kronecker, and Euler's
//! criterion as an independent check on both.

use std::fmt;

use crate::divisor::is_prime_trial;
use crate::error::{Error, Result};

/// A value of a quadratic symbol, one of -1, 0, +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolValue(i8);

impl SymbolValue {
    pub const MINUS_ONE: SymbolValue = SymbolValue(-1);
    pub const ZERO: SymbolValue = SymbolValue(0);
    pub const ONE: SymbolValue = SymbolValue(1);

    pub fn value(self) -> i8 {
        self.0
    }
}

impl From<SymbolValue> for i64 {
    fn from(v: SymbolValue) -> i64 {
        v.0 as i64
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// Jacobi symbol `(n/k)` for odd `k >= 1`. Negative `n` is reduced mod `k`.
pub fn jacobi(n: i64, k: i64) -> Result<SymbolValue> {
    if k <= 0 || k % 2 == 0 {
        return Err(Error::invalid(format!(
            "jacobi lower argument must be odd and positive, got {k}"
        )));
    }
    let k = k as u64;
    let a = n.rem_euclid(k as i64) as u64;
    Ok(SymbolValue(jacobi_odd(a, k)))
}

/// Unchecked Jacobi symbol for odd `k`: returns -1, 0 or 1.
///
/// Binary algorithm: strip factors of two using the `(2/k)` rule, swap using
/// reciprocity when the top argument is smaller, then subtract.
#[inline]
pub fn jacobi_odd(a: u64, k: u64) -> i8 {
    debug_assert!(k % 2 == 1);
    let mut a = a % k;
    let mut n = k;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n & 7, 3 | 5) {
            t = -t;
        }
        if a < n {
            if a & 3 == 3 && n & 3 == 3 {
                t = -t;
            }
            std::mem::swap(&mut a, &mut n);
        }
        a -= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> SymbolValue {
    if n == 0 {
        return if d == 1 || d == -1 {
            SymbolValue::ONE
        } else {
            SymbolValue::ZERO
        };
    }
    let mut t = 1i8;
    let mut m = n.unsigned_abs();
    if n < 0 && d < 0 {
        t = -t;
    }
    let twos = m.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return SymbolValue::ZERO;
        }
        // (d/2) = +1 for d = +-1 mod 8, -1 for d = +-3 mod 8.
        if twos & 1 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            t = -t;
        }
        m >>= twos;
    }
    let a = (d as i128).rem_euclid(m as i128) as u64;
    SymbolValue(t * jacobi_odd(a, m))
}

/// `p* = (-1)^((p-1)/2) p`, the discriminant of the quadratic subfield of
/// the `p`-th cyclotomic field.
pub fn p_star(p: i64) -> Result<i64> {
    if p < 3 || p % 2 == 0 || !is_prime_trial(p as u64) {
        return Err(Error::invalid(format!(
            "p_star needs an odd prime, got {p}"
        )));
    }
    Ok(if p % 4 == 1 { p } else { -p })
}

/// Legendre symbol via `n^((p-1)/2) mod p`. Slow; used as an oracle.
pub fn euler_criterion(n: i64, p: i64) -> Result<SymbolValue> {
    if p < 3 || p % 2 == 0 || !is_prime_trial(p as u64) {
        return Err(Error::invalid(format!(
            "euler_criterion needs an odd prime, got {p}"
        )));
    }
    let p = p as u64;
    let a = n.rem_euclid(p as i64) as u64;
    Ok(match pow_mod(a, (p - 1) / 2, p) {
        0 => SymbolValue::ZERO,
        1 => SymbolValue::ONE,
        r if r == p - 1 => SymbolValue::MINUS_ONE,
        r => unreachable!("{a}^((p-1)/2) mod {p} = {r} for prime p"),
    })
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}
