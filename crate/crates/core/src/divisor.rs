//! Factorization by trial division and the divisor counts `d(u)`, `d_3(u)`.

use crate::error::{Error, Result};

/// `[(q, e)]` with `u = prod q^e`, ascending. Trial division; fine for the
/// `u <= l^3` sizes used here.
pub fn factorize(mut u: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |q: u64, u: &mut u64| {
        let mut e = 0;
        while (*u).is_multiple_of(q) {
            *u /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    };
    push(2, &mut u);
    let mut q = 3;
    while q * q <= u {
        push(q, &mut u);
        q += 2;
    }
    if u > 1 {
        out.push((u, 1));
    }
    out
}

pub fn is_prime_trial(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `(d(u), d_3(u))`: ordered factorizations of `u` into two and three
/// positive factors, `prod (s+1)` and `prod C(s+2, 2)` over `u = prod q^s`.
pub fn divisor_counts(u: u64) -> Result<(u64, u64)> {
    if u == 0 {
        return Err(Error::invalid("divisor_counts is undefined at 0"));
    }
    Ok(factorize(u).iter().fold((1, 1), |(d, d3), &(_, s)| {
        let s = s as u64;
        (d * (s + 1), d3 * (s + 1) * (s + 2) / 2)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(divisor_counts(1).unwrap(), (1, 1));
        assert_eq!(divisor_counts(12).unwrap(), (6, 18));
        assert_eq!(divisor_counts(8).unwrap(), (4, 10));
        assert!(divisor_counts(0).is_err());
    }

    #[test]
    fn counts_match_enumeration() {
        for u in 1..=2000u64 {
            let d = (1..=u).filter(|a| u % a == 0).count() as u64;
            let d3: u64 = (1..=u)
                .filter(|a| u % a == 0)
                .map(|a| (1..=u / a).filter(|b| (u / a) % b == 0).count() as u64)
                .sum();
            assert_eq!(divisor_counts(u).unwrap(), (d, d3), "u = {u}");
        }
    }

    #[test]
    fn d3_at_most_d_squared() {
        for u in 1..=100_000u64 {
            let (d, d3) = divisor_counts(u).unwrap();
            assert!(d3 <= d * d, "u = {u}");
        }
    }

    #[test]
    fn factorize_roundtrip() {
        for u in 1..5000u64 {
            let f = factorize(u);
            assert_eq!(f.iter().map(|&(q, e)| q.pow(e)).product::<u64>(), u);
            assert!(f.iter().all(|&(q, _)| is_prime_trial(q)));
        }
    }
}
