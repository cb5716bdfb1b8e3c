//! Prime tables: a segmented odd-only Eratosthenes sieve for prime lists and
//! counts, and a linear sieve for smallest prime factors.

use num_integer::Roots;

use crate::error::{Error, Result};

/// Odd numbers covered by one sieve segment (one byte each).
const SEGMENT_ODDS: usize = 1 << 16;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        sieve_primes(limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Odd primes only, i.e. every prime but 2.
    pub fn odd_primes(&self) -> &[u64] {
        &self.primes[1..]
    }

    /// `pi(t)`, number of primes `<= t`. Panics if `t` is past the table limit.
    pub fn pi(&self, t: u64) -> u64 {
        assert!(
            t <= self.limit,
            "pi({t}) queried past table limit {}",
            self.limit
        );
        self.primes.partition_point(|&q| q <= t) as u64
    }

    /// `pi(t) - 1` for `t >= 2`, the number of odd primes `<= t`.
    pub fn pi_odd(&self, t: u64) -> u64 {
        self.pi(t).saturating_sub(1)
    }

    /// Odd primes `<= t`.
    pub fn odd_primes_upto(&self, t: u64) -> &[u64] {
        let end = self.pi(t) as usize;
        if end <= 1 {
            &[]
        } else {
            &self.primes[1..end]
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "is_prime({n}) queried past table limit {}",
            self.limit
        );
        self.primes.binary_search(&n).is_ok()
    }
}

/// Segmented sieve over odd numbers; memory beyond the output list is
/// `O(sqrt(limit))` plus one fixed-size segment.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::invalid(format!(
            "sieve limit must be >= 2, got {limit}"
        )));
    }
    let mut primes = vec![2u64];
    if limit < 3 {
        return Ok(PrimeTable { limit, primes });
    }

    let root = limit.sqrt();
    let base = simple_odd_sieve(root);

    // Odd n = 2i + 1; segment covers i in [lo, lo + SEGMENT_ODDS).
    let max_index = (limit - 1) / 2;
    let mut segment = vec![true; SEGMENT_ODDS];
    let mut lo = 1u64; // i = 1 is n = 3
    while lo <= max_index {
        let hi = (lo + SEGMENT_ODDS as u64 - 1).min(max_index);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(true);
        for &q in &base {
            let q2 = q * q;
            if q2 > 2 * hi + 1 {
                break;
            }
            // First odd multiple of q that is >= max(q^2, 2*lo + 1).
            let start_n = 2 * lo + 1;
            let mut first = if q2 >= start_n {
                q2
            } else {
                let r = start_n.div_ceil(q) * q;
                if r % 2 == 0 {
                    r + q
                } else {
                    r
                }
            };
            while first <= 2 * hi + 1 {
                segment[((first - 1) / 2 - lo) as usize] = false;
                first += 2 * q;
            }
        }
        primes.extend(
            segment[..len]
                .iter()
                .enumerate()
                .filter(|(_, &keep)| keep)
                .map(|(k, _)| 2 * (lo + k as u64) + 1),
        );
        lo = hi + 1;
    }
    Ok(PrimeTable { limit, primes })
}

/// Odd primes up to `n` (small `n`; used for the sieving base).
fn simple_odd_sieve(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let size = ((n - 1) / 2 + 1) as usize;
    let mut is_p = vec![true; size];
    is_p[0] = false; // 1
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if is_p[i] {
            let q = 2 * i + 1;
            let mut j = (q * q - 1) / 2;
            while j < size {
                is_p[j] = false;
                j += q;
            }
        }
        i += 1;
    }
    is_p.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| 2 * k as u64 + 1)
        .collect()
}

/// Smallest-prime-factor table from a linear sieve. Entry `n` is `spf(n)` for
/// `n >= 2`; entries 0 and 1 are 0.
#[derive(Debug, Clone)]
pub struct SmallestPrimeFactor {
    spf: Vec<u32>,
}

impl SmallestPrimeFactor {
    pub fn new(limit: usize) -> Result<Self> {
        if limit > u32::MAX as usize {
            return Err(Error::ResourceLimit {
                what: "smallest-prime-factor table",
                limit: u32::MAX as u64,
                completed: 0,
            });
        }
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for n in 2..=limit {
            if spf[n] == 0 {
                spf[n] = n as u32;
                primes.push(n as u32);
            }
            let sn = spf[n];
            for &q in &primes {
                let m = n * q as usize;
                if q > sn || m > limit {
                    break;
                }
                spf[m] = q;
            }
        }
        Ok(SmallestPrimeFactor { spf })
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    #[inline]
    pub fn get(&self, n: usize) -> u32 {
        self.spf[n]
    }

    #[inline]
    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// Prime factorization `[(q, e)]`, ascending in `q`.
    pub fn factorize(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let q = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q as u64, e));
        }
        out
    }

    /// Squarefree part of `n`: product of primes with odd exponent.
    pub fn squarefree_kernel(&self, mut n: usize) -> u64 {
        let mut kernel = 1u64;
        while n > 1 {
            let q = self.spf[n] as usize;
            let mut odd = false;
            while n.is_multiple_of(q) {
                n /= q;
                odd = !odd;
            }
            if odd {
                kernel *= q as u64;
            }
        }
        kernel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_limits() {
        let t = PrimeTable::new(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.pi(10), 4);
        let t = PrimeTable::new(2).unwrap();
        assert_eq!(t.primes(), &[2]);
        assert_eq!(t.pi(2), 1);
        assert_eq!(t.pi_odd(2), 0);
        assert_eq!(PrimeTable::new(100).unwrap().pi(100), 25);
        assert_eq!(PrimeTable::new(3).unwrap().primes(), &[2, 3]);
    }

    #[test]
    fn rejects_tiny_limit() {
        assert!(matches!(PrimeTable::new(1), Err(Error::InvalidArgument(_))));
        assert!(PrimeTable::new(0).is_err());
    }

    #[test]
    fn membership_and_counts_match_trial_division() {
        let limit = 100_000;
        let t = PrimeTable::new(limit).unwrap();
        let mut count = 0;
        for n in 0..=limit {
            let p = trial_division(n);
            assert_eq!(t.is_prime(n), p, "n = {n}");
            count += p as u64;
            if n >= 2 && (n % 997 == 0 || n == limit) {
                assert_eq!(t.pi(n), count, "pi({n})");
            }
        }
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn segment_boundaries() {
        // Limits straddling segment edges and prime squares.
        for limit in [131_071u64, 131_073, 131_075, 262_147, 1_000_000] {
            let t = PrimeTable::new(limit).unwrap();
            let spf = SmallestPrimeFactor::new(limit as usize).unwrap();
            let expected = (2..=limit as usize).filter(|&n| spf.is_prime(n)).count() as u64;
            assert_eq!(t.pi(limit), expected, "limit {limit}");
        }
        assert_eq!(PrimeTable::new(1_000_000).unwrap().pi(1_000_000), 78_498);
    }

    #[test]
    fn spf_table() {
        let spf = SmallestPrimeFactor::new(1000).unwrap();
        assert_eq!(spf.get(91), 7);
        assert_eq!(spf.get(97), 97);
        assert_eq!(spf.factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(spf.factorize(1), vec![]);
        assert_eq!(spf.squarefree_kernel(360), 10);
        assert_eq!(spf.squarefree_kernel(1), 1);
    }
}
