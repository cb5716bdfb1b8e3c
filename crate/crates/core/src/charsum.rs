//! The walk `S_l(p)` over one period and the barrier-crossing times
//! `f_eps(p)` (first passage) and `F_eps(p)` (eventual time).

use crate::divisor::is_prime_trial;
use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::symbol::jacobi_odd;

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !is_prime_trial(p) {
        return Err(Error::invalid(format!("expected an odd prime, got {p}")));
    }
    Ok(())
}

/// One full period of partial sums `S_0 .. S_p` of the Legendre symbol mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterProfile {
    p: u64,
    partial_sums: Vec<i64>,
    max_partial: i64,
    max_abs_partial: i64,
}

/// `residue[n]` is true when `n` is a nonzero square mod `p`, marked from
/// `r^2` for `r <= (p-1)/2` so no symbol is evaluated.
fn residue_bitmap(p: u64) -> Vec<bool> {
    let pu = p as usize;
    let mut residue = vec![false; pu];
    let mut sq = 0usize;
    // (r+1)^2 = r^2 + 2r + 1
    for r in 0..(pu - 1) / 2 {
        // Both terms are below p, so one subtraction reduces the sum.
        sq += 2 * r + 1;
        if sq >= pu {
            sq -= pu;
        }
        residue[sq] = true;
    }
    residue
}

impl CharacterProfile {
    pub fn build(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let residue = residue_bitmap(p);
        let mut partial_sums = Vec::with_capacity(p as usize + 1);
        partial_sums.push(0i64);
        let mut s = 0i64;
        let mut max_partial = i64::MIN;
        let mut max_abs_partial = 0i64;
        for &is_res in &residue[1..] {
            s += if is_res { 1 } else { -1 };
            partial_sums.push(s);
            max_partial = max_partial.max(s);
            max_abs_partial = max_abs_partial.max(s.abs());
        }
        // n = p contributes (p/p) = 0.
        partial_sums.push(s);
        max_partial = max_partial.max(s);
        Ok(CharacterProfile {
            p,
            partial_sums,
            max_partial,
            max_abs_partial,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `S_0, S_1, ..., S_p`.
    pub fn partial_sums(&self) -> &[i64] {
        &self.partial_sums
    }

    /// `max_{1 <= r <= p} S_r`.
    pub fn max_partial(&self) -> i64 {
        self.max_partial
    }

    /// `max_{1 <= r <= p} |S_r|`.
    pub fn max_abs_partial(&self) -> i64 {
        self.max_abs_partial
    }

    /// `S_l(p)` for any `l >= 0`, by periodicity mod `p`.
    pub fn extend_sum(&self, ell: u64) -> i64 {
        self.partial_sums[(ell % self.p) as usize]
    }

    /// Smallest `l >= 1` with `S_l < eps * l`. Always `<= p` since `S_p = 0`.
    pub fn first_passage(&self, eps: Epsilon) -> u64 {
        (1..=self.p)
            .find(|&ell| eps.below(self.partial_sums[ell as usize], ell))
            .expect("S_p = 0 lies below any positive barrier")
    }

    /// Smallest `F` with `S_l < eps * l` for every `l >= F`.
    ///
    /// Any violation `S_l >= eps * l` has `l <= M(p) / eps` because `S_l` never
    /// exceeds the period maximum, so the downward scan starts there.
    pub fn eventual_time(&self, eps: Epsilon) -> u64 {
        if self.max_partial <= 0 {
            return 1;
        }
        // floor(M / eps) = floor(M * den / num)
        let top = (self.max_partial as u64 * eps.denom()) / eps.numer();
        (1..=top)
            .rev()
            .find(|&ell| eps.at_or_above(self.extend_sum(ell), ell))
            .map_or(1, |ell| ell + 1)
    }

    /// `max |S_t| / (sqrt(p) ln p)`, the observed Polya-Vinogradov constant.
    pub fn pv_ratio(&self) -> f64 {
        let p = self.p as f64;
        self.max_abs_partial as f64 / (p.sqrt() * p.ln())
    }

    pub fn passage(&self, eps: Epsilon) -> PassageRecord {
        PassageRecord {
            p: self.p,
            epsilon: eps,
            first_passage: self.first_passage(eps),
            eventual_time: self.eventual_time(eps),
        }
    }
}

/// `(f_eps(p), F_eps(p))` for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassageRecord {
    pub p: u64,
    pub epsilon: Epsilon,
    pub first_passage: u64,
    pub eventual_time: u64,
}

impl PassageRecord {
    pub fn compute(p: u64, eps: Epsilon) -> Result<Self> {
        if p <= PROFILE_STORE_LIMIT {
            Ok(CharacterProfile::build(p)?.passage(eps))
        } else {
            PassageRecord::stream(p, eps)
        }
    }

    /// Single pass over one period without storing it.
    ///
    /// A walk value `S_r` recurs at every `l = kp + r`; it violates the
    /// barrier there for `k <= (S_r - eps r) / (eps p)`, so the last violation
    /// is found without scanning beyond the first period.
    pub fn stream(p: u64, eps: Epsilon) -> Result<Self> {
        check_odd_prime(p)?;
        let (num, den) = (eps.numer() as i128, eps.denom() as i128);
        let mut first_passage = None;
        let mut last_violation = 0u64;
        let mut s = 0i64;
        for r in 1..p {
            s += jacobi_odd(r, p) as i64;
            if first_passage.is_none() && eps.below(s, r) {
                first_passage = Some(r);
            }
            let slack = s as i128 * den - num * r as i128;
            if slack >= 0 {
                let k = slack / (num * p as i128);
                last_violation = last_violation.max(k as u64 * p + r);
            }
        }
        Ok(PassageRecord {
            p,
            epsilon: eps,
            first_passage: first_passage.unwrap_or(p),
            eventual_time: last_violation + 1,
        })
    }
}

/// Primes up to this size get a stored [`CharacterProfile`]; larger ones are
/// streamed.
pub const PROFILE_STORE_LIMIT: u64 = 1 << 20;

/// Extremes of the walk over one period, without keeping the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodExtrema {
    pub p: u64,
    pub max_partial: i64,
    pub max_abs_partial: i64,
}

impl PeriodExtrema {
    pub fn scan(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let mut s = 0i64;
        let (mut max_partial, mut max_abs_partial) = (0i64, 0i64);
        for is_res in residue_bitmap(p).into_iter().skip(1) {
            s += if is_res { 1 } else { -1 };
            max_partial = max_partial.max(s);
            max_abs_partial = max_abs_partial.max(s.abs());
        }
        Ok(PeriodExtrema {
            p,
            max_partial,
            max_abs_partial,
        })
    }

    pub fn pv_ratio(&self) -> f64 {
        let p = self.p as f64;
        self.max_abs_partial as f64 / (p.sqrt() * p.ln())
    }
}

/// `f_eps(p)` by walking until the first crossing; `O(f log p)`.
pub fn first_passage_time(p: u64, eps: Epsilon) -> u64 {
    debug_assert!(p % 2 == 1 && p >= 3);
    let mut s = 0i64;
    for ell in 1..p {
        s += jacobi_odd(ell, p) as i64;
        if eps.below(s, ell) {
            return ell;
        }
    }
    p
}

/// `S_l(p)` for any `l`, summing `(n/p)` over `n <= l mod p`.
pub fn character_sum(p: u64, ell: u64) -> i64 {
    debug_assert!(p % 2 == 1 && p >= 3);
    (1..=ell % p).map(|n| jacobi_odd(n, p) as i64).sum()
}
