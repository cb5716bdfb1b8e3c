//! Aggregates over odd primes `p <= x`: the mean first-passage time and its
//! tail curve `a_m(x)`, barrier densities `P_l(x)`, sixth moments of
//! `S_l(p)` by two routes, and sign-pattern counts of `(q/p)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::charsum::{character_sum, first_passage_time, PeriodExtrema};
use crate::cubic::cube_coefficients;
use crate::divisor::is_prime_trial;
use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::par::{chunked_fold, map_collect};
use crate::sieve::PrimeTable;
use crate::symbol::jacobi_odd;

/// Largest `l` accepted by [`sixth_moment_via_cubes`].
pub const CUBE_ROUTE_MAX_ELL: u64 = 200;

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn odd_primes_checked(table: &PrimeTable, x: u64) -> Result<&[u64]> {
    if x < 3 {
        return Err(Error::invalid(format!(
            "x = {x} has no odd primes below it"
        )));
    }
    if x > table.limit() {
        return Err(Error::invalid(format!(
            "x = {x} exceeds the prime table limit {}",
            table.limit()
        )));
    }
    Ok(table.odd_primes_upto(x))
}

/// `N_m(x) = #{p <= x : f_eps(p) > m}` for `m = 0 ..= max f`, and the
/// normalised tail `a_m(x) = N_m(x) / pi_odd(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCurve {
    pub x: u64,
    pub epsilon: Epsilon,
    pub pi_odd: u64,
    /// `counts[m] = N_m(x)`; implicitly zero past the end.
    pub counts: Vec<u64>,
}

impl TailCurve {
    pub fn count(&self, m: u64) -> u64 {
        self.counts.get(m as usize).copied().unwrap_or(0)
    }

    pub fn value(&self, m: u64) -> BigRational {
        ratio(self.count(m), self.pi_odd)
    }

    pub fn values(&self) -> Vec<BigRational> {
        (0..self.counts.len() as u64)
            .map(|m| self.value(m))
            .collect()
    }

    /// `sum_{m >= 0} a_m(x)`.
    pub fn total(&self) -> BigRational {
        ratio(
            self.counts.iter().map(|&c| c as u128).sum::<u128>(),
            self.pi_odd,
        )
    }
}

/// `sum_{p <= x} f_eps(p)` together with its tail curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstPassageSummary {
    pub x: u64,
    pub epsilon: Epsilon,
    pub pi_odd: u64,
    pub sum: BigUint,
    pub tail: TailCurve,
}

impl FirstPassageSummary {
    pub fn average(&self) -> BigRational {
        ratio(BigInt::from(self.sum.clone()), self.pi_odd)
    }

    /// `average == sum_m a_m(x)`, both sides exact.
    pub fn double_counting_holds(&self) -> bool {
        self.average() == self.tail.total()
    }
}

#[derive(Default)]
struct PassageAcc {
    sum: u128,
    histogram: BTreeMap<u64, u64>,
}

impl PassageAcc {
    fn merge(mut self, other: PassageAcc) -> PassageAcc {
        self.sum += other.sum;
        for (f, c) in other.histogram {
            *self.histogram.entry(f).or_default() += c;
        }
        self
    }
}

/// Mean of `f_eps(p)` over odd primes `p <= x`. The sum and the tail counts
/// are accumulated separately (direct sum vs. histogram of `f`), so the
/// double-counting identity checks one against the other.
pub fn average_first_passage(
    table: &PrimeTable,
    x: u64,
    eps: Epsilon,
) -> Result<FirstPassageSummary> {
    let primes = odd_primes_checked(table, x)?;
    let acc = chunked_fold(
        primes,
        PassageAcc::default(),
        |chunk| {
            let mut acc = PassageAcc::default();
            for &p in chunk {
                let f = first_passage_time(p, eps);
                acc.sum += f as u128;
                *acc.histogram.entry(f).or_default() += 1;
            }
            acc
        },
        PassageAcc::merge,
    );
    let max_f = acc.histogram.keys().next_back().copied().unwrap_or(0);
    // N_m = #{f > m}: suffix sums of the histogram.
    let mut counts = vec![0u64; max_f as usize];
    let mut running = 0u64;
    for m in (0..max_f).rev() {
        running += acc.histogram.get(&(m + 1)).copied().unwrap_or(0);
        counts[m as usize] = running;
    }
    let pi_odd = primes.len() as u64;
    Ok(FirstPassageSummary {
        x,
        epsilon: eps,
        pi_odd,
        sum: BigUint::from(acc.sum),
        tail: TailCurve {
            x,
            epsilon: eps,
            pi_odd,
            counts,
        },
    })
}

/// `P_l(x)`: share of odd primes `p <= x` with `S_l(p) >= eps * l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPoint {
    pub x: u64,
    pub ell: u64,
    pub epsilon: Epsilon,
    pub count: u64,
    pub pi_odd: u64,
}

impl DensityPoint {
    pub fn density(&self) -> BigRational {
        ratio(self.count, self.pi_odd)
    }
}

pub fn density_p(table: &PrimeTable, x: u64, ell: u64, eps: Epsilon) -> Result<DensityPoint> {
    if ell == 0 {
        return Err(Error::invalid("density needs l >= 1"));
    }
    let primes = odd_primes_checked(table, x)?;
    let count = chunked_fold(
        primes,
        0u64,
        |chunk| {
            chunk
                .iter()
                .filter(|&&p| eps.at_or_above(character_sum(p, ell), ell))
                .count() as u64
        },
        |a, b| a + b,
    );
    Ok(DensityPoint {
        x,
        ell,
        epsilon: eps,
        count,
        pi_odd: primes.len() as u64,
    })
}

/// `a_m(x)` next to `P_m(x)`; `{f > m}` forces `S_m >= eps m`, so the first
/// never exceeds the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailDensityWitness {
    pub m: u64,
    pub tail: BigRational,
    pub density: BigRational,
}

impl TailDensityWitness {
    pub fn holds(&self) -> bool {
        self.tail <= self.density
    }
}

pub fn tail_dominated_by_density(
    table: &PrimeTable,
    x: u64,
    eps: Epsilon,
    m: u64,
) -> Result<TailDensityWitness> {
    if m == 0 {
        return Err(Error::invalid("tail/density comparison needs m >= 1"));
    }
    let primes = odd_primes_checked(table, x)?;
    let beyond = chunked_fold(
        primes,
        0u64,
        |chunk| {
            chunk
                .iter()
                .filter(|&&p| first_passage_time(p, eps) > m)
                .count() as u64
        },
        |a, b| a + b,
    );
    let density = density_p(table, x, m, eps)?;
    Ok(TailDensityWitness {
        m,
        tail: ratio(beyond, primes.len() as u64),
        density: density.density(),
    })
}

/// `sum_{p <= x} |S_l(p)|^6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub x: u64,
    pub ell: u64,
    pub pi_odd: u64,
    pub sixth_moment: BigUint,
}

impl MomentReport {
    /// `sixth_moment / (pi_odd(x) l^3)`.
    pub fn normalized(&self) -> BigRational {
        let den = BigUint::from(self.pi_odd) * BigUint::from(self.ell).pow(3);
        BigRational::new(self.sixth_moment.clone().into(), den.into())
    }

    /// Markov bound on the density: `sixth_moment / (eps^6 l^6 pi_odd(x))`.
    pub fn markov_bound(&self, eps: Epsilon) -> BigRational {
        let num = self.sixth_moment.clone() * BigUint::from(eps.denom()).pow(6);
        let den = BigUint::from(eps.numer()).pow(6)
            * BigUint::from(self.ell).pow(6)
            * BigUint::from(self.pi_odd);
        BigRational::new(num.into(), den.into())
    }
}

fn sum_biguint(parts: impl IntoIterator<Item = u128>) -> BigUint {
    parts.into_iter().fold(BigUint::zero(), |acc, v| acc + v)
}

/// Sixth moment from `S_l(p)` evaluated directly for each prime.
pub fn sixth_moment_direct(table: &PrimeTable, x: u64, ell: u64) -> Result<MomentReport> {
    if ell == 0 {
        return Err(Error::invalid("moment needs l >= 1"));
    }
    let primes = odd_primes_checked(table, x)?;
    let sixth_moment = chunked_fold(
        primes,
        BigUint::zero(),
        |chunk| {
            sum_biguint(chunk.iter().map(|&p| {
                let s = character_sum(p, ell).unsigned_abs() as u128;
                s.pow(6)
            }))
        },
        |a, b| a + b,
    );
    Ok(MomentReport {
        x,
        ell,
        pi_odd: primes.len() as u64,
        sixth_moment,
    })
}

/// Sixth moment through `S_l(p)^3 = sum_u c_u(l) (u/p)`, squaring the cube
/// instead of touching `S_l` at all.
pub fn sixth_moment_via_cubes(table: &PrimeTable, x: u64, ell: u64) -> Result<MomentReport> {
    if ell == 0 {
        return Err(Error::invalid("moment needs l >= 1"));
    }
    if ell > CUBE_ROUTE_MAX_ELL {
        return Err(Error::ResourceLimit {
            what: "cube-coefficient route l",
            limit: CUBE_ROUTE_MAX_ELL,
            completed: 0,
        });
    }
    let primes = odd_primes_checked(table, x)?;
    let coeffs = cube_coefficients(ell)?;
    let sixth_moment = chunked_fold(
        primes,
        BigUint::zero(),
        |chunk| {
            sum_biguint(chunk.iter().map(|&p| {
                let cube: i128 = coeffs
                    .iter()
                    .map(|(u, c)| c as i128 * jacobi_odd(u, p) as i128)
                    .sum();
                (cube * cube) as u128
            }))
        },
        |a, b| a + b,
    );
    Ok(MomentReport {
        x,
        ell,
        pi_odd: primes.len() as u64,
        sixth_moment,
    })
}

/// Largest observed `max_t |S_t(p)| / (sqrt(p) ln p)` over odd primes `p <= x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvSummary {
    pub x: u64,
    pub primes: u64,
    pub max_ratio: f64,
    pub argmax_p: u64,
    pub max_abs_partial: i64,
}

pub fn pv_scan(table: &PrimeTable, x: u64) -> Result<PvSummary> {
    let primes = odd_primes_checked(table, x)?;
    let extrema = map_collect(primes, |&p| {
        PeriodExtrema::scan(p).expect("table primes are prime")
    });
    // Ties resolve to the smallest p, independent of scheduling.
    let best = extrema
        .iter()
        .fold(None::<&PeriodExtrema>, |best, e| match best {
            Some(b) if b.pv_ratio() >= e.pv_ratio() => Some(b),
            _ => Some(e),
        })
        .expect("at least one odd prime");
    Ok(PvSummary {
        x,
        primes: primes.len() as u64,
        max_ratio: best.pv_ratio(),
        argmax_p: best.p,
        max_abs_partial: best.max_abs_partial,
    })
}

/// Count of odd primes `p <= x`, `p` not among the `q_i`, with
/// `(q_i/p) = eta_i` for all `i`, against the main term `2^-r pi(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquidistributionCount {
    pub x: u64,
    pub constraints: Vec<(u64, i8)>,
    pub count: u64,
    pub expected: BigRational,
    pub pi: u64,
}

fn check_constraint_primes(qs: &[u64]) -> Result<()> {
    if qs.is_empty() {
        return Err(Error::invalid(
            "at least one (q, eta) constraint is required",
        ));
    }
    for (i, &q) in qs.iter().enumerate() {
        if !is_prime_trial(q) {
            return Err(Error::invalid(format!(
                "constraint modulus {q} is not prime"
            )));
        }
        if qs[..i].contains(&q) {
            return Err(Error::invalid(format!("duplicate constraint prime {q}")));
        }
    }
    if qs.len() > 24 {
        return Err(Error::invalid("at most 24 constraint primes are supported"));
    }
    Ok(())
}

fn sign_index(p: u64, qs: &[u64]) -> usize {
    // Bit i set <=> (q_i/p) = -1.
    qs.iter()
        .enumerate()
        .filter(|&(_, &q)| jacobi_odd(q, p) < 0)
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

fn eligible<'a>(
    table: &'a PrimeTable,
    x: u64,
    qs: &'a [u64],
) -> Result<impl Iterator<Item = u64> + 'a> {
    let primes = odd_primes_checked(table, x)?;
    Ok(primes.iter().copied().filter(move |p| !qs.contains(p)))
}

pub fn equidistribution_counts(
    table: &PrimeTable,
    x: u64,
    constraints: &[(u64, i8)],
) -> Result<EquidistributionCount> {
    let qs: Vec<u64> = constraints.iter().map(|&(q, _)| q).collect();
    check_constraint_primes(&qs)?;
    if let Some(&(_, eta)) = constraints.iter().find(|&&(_, e)| e != 1 && e != -1) {
        return Err(Error::invalid(format!("eta must be +1 or -1, got {eta}")));
    }
    let target = constraints
        .iter()
        .enumerate()
        .filter(|&(_, &(_, e))| e < 0)
        .fold(0usize, |acc, (i, _)| acc | (1 << i));
    let count = eligible(table, x, &qs)?
        .filter(|&p| sign_index(p, &qs) == target)
        .count() as u64;
    let pi = table.pi(x);
    Ok(EquidistributionCount {
        x,
        constraints: constraints.to_vec(),
        count,
        expected: ratio(pi, 1u64 << constraints.len()),
        pi,
    })
}

/// Counts for every sign vector at once, indexed by the bitmask whose bit `i`
/// means `(q_i/p) = -1`.
pub fn equidistribution_table(table: &PrimeTable, x: u64, qs: &[u64]) -> Result<Vec<u64>> {
    check_constraint_primes(qs)?;
    let mut counts = vec![0u64; 1 << qs.len()];
    let eligible: Vec<u64> = eligible(table, x, qs)?.collect();
    for idx in map_collect(&eligible, |&p| sign_index(p, qs)) {
        counts[idx] += 1;
    }
    Ok(counts)
}
