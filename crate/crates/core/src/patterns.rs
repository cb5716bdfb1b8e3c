//! Exact limiting tails `a^_m = |A_m| / 2^pi(m)`.
//!
//! Whether `f_eps(p) > m` depends only on the signs `(q/p)` for primes
//! `q <= m`: complete multiplicativity fixes `(n/p)` for every `n <= m` from
//! them. Each sign vector is realised by a positive proportion `2^-pi(m)` of
//! primes, so `a^_m` is a pure count of sign patterns whose multiplicative
//! extension keeps the walk at or above the barrier up to `m`.
//!
//! The count is a depth-first search over positions `n = 1, 2, ...` that
//! branches only at primes and drops a subtree as soon as `S_n < eps n`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::par::map_collect;
use crate::sieve::SmallestPrimeFactor;
use crate::symbol::jacobi_odd;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_SPLIT_PRIMES: usize = 8;

fn primes_upto(m: u64) -> Vec<u64> {
    if m < 2 {
        return Vec::new();
    }
    let spf = SmallestPrimeFactor::new(m as usize).expect("small m");
    (2..=m).filter(|&n| spf.is_prime(n as usize)).collect()
}

/// A choice of `+-1` for every prime `q <= m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    m: u64,
    primes: Vec<u64>,
    signs: Vec<i8>,
}

impl SignPattern {
    /// `signs[i]` is the value at the `i`-th prime `<= m`.
    pub fn new(m: u64, signs: Vec<i8>) -> Result<Self> {
        let primes = primes_upto(m);
        if signs.len() != primes.len() {
            return Err(Error::invalid(format!(
                "pattern for m = {m} needs {} signs, got {}",
                primes.len(),
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("pattern signs must be +1 or -1"));
        }
        Ok(SignPattern { m, primes, signs })
    }

    /// `v_m(p) = ((q/p))_{q <= m}` for an odd prime `p > m`.
    pub fn of_prime(p: u64, m: u64) -> Result<Self> {
        if p <= m || p.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "v_m(p) needs an odd prime p > m, got p = {p}, m = {m}"
            )));
        }
        let primes = primes_upto(m);
        let signs = primes.iter().map(|&q| jacobi_odd(q, p)).collect();
        Ok(SignPattern { m, primes, signs })
    }

    /// Pattern number `bits` in the enumeration order used by the oracle:
    /// bit `i` set means the `i`-th prime gets `-1`.
    pub fn from_bits(m: u64, bits: u64) -> Self {
        let primes = primes_upto(m);
        let signs = (0..primes.len())
            .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        SignPattern { m, primes, signs }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.primes.iter().copied().zip(self.signs.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// The completely multiplicative `chi(1..m)` determined by a pattern, and its
/// walk `S_1..S_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternExtension {
    pub values: Vec<i8>,
    pub walk: Vec<i64>,
}

pub fn extend_pattern(sigma: &SignPattern) -> PatternExtension {
    let m = sigma.m as usize;
    // chi[0] is unused padding.
    let mut chi = vec![0i8; m + 1];
    if m >= 1 {
        chi[1] = 1;
        let spf = SmallestPrimeFactor::new(m).expect("small m");
        let mut next_prime = sigma.signs.iter();
        for n in 2..=m {
            let q = spf.get(n) as usize;
            chi[n] = if q == n {
                *next_prime.next().expect("one sign per prime")
            } else {
                chi[q] * chi[n / q]
            };
        }
    }
    let values = chi[1..].to_vec();
    let walk = values
        .iter()
        .scan(0i64, |s, &v| {
            *s += v as i64;
            Some(*s)
        })
        .collect();
    PatternExtension { values, walk }
}

/// `sigma in A_m`: the extended walk satisfies `S_l >= eps l` for all `l <= m`.
pub fn admissible(sigma: &SignPattern, eps: Epsilon) -> bool {
    extend_pattern(sigma)
        .walk
        .iter()
        .enumerate()
        .all(|(i, &s)| eps.at_or_above(s, i as u64 + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Hard cap on search nodes; exceeding it is an error, not a truncation.
    pub node_budget: u64,
    /// Independent subtrees are cut after this many prime sign choices.
    pub split_primes: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            split_primes: DEFAULT_SPLIT_PRIMES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub m: u64,
    pub epsilon: Epsilon,
    /// `|A_m|`.
    pub a_count: BigUint,
    /// `|A_m| / 2^pi(m)`.
    pub a_hat: BigRational,
    /// Search nodes including the root.
    pub nodes_visited: u64,
    /// Nodes where the walk fell below the barrier.
    pub pruned: u64,
}

/// Survivor counts at every depth of one search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCounts {
    pub epsilon: Epsilon,
    /// `survivors[n]` = number of patterns on primes `<= n` whose walk stays
    /// at or above the barrier through `n`, i.e. `|A_n|`; `survivors[0] = 1`.
    pub survivors: Vec<u64>,
    /// `pi(n)` for each depth.
    pub prime_counts: Vec<u32>,
    pub nodes_visited: u64,
    pub pruned: u64,
}

impl LevelCounts {
    pub fn a_hat(&self, m: u64) -> BigRational {
        let m = m as usize;
        BigRational::new(
            BigInt::from(self.survivors[m]),
            BigInt::one() << self.prime_counts[m] as usize,
        )
    }
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    exhausted: AtomicBool,
}

impl Budget {
    fn charge(&self, nodes: u64) -> bool {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }
}

const FLUSH_EVERY: u64 = 4096;

struct Task {
    next: usize,
    sum: i64,
    chi: Vec<i8>,
}

struct Walker<'a> {
    spf: &'a SmallestPrimeFactor,
    m: usize,
    eps: Epsilon,
    budget: &'a Budget,
    chi: Vec<i8>,
    survivors: Vec<u64>,
    nodes: u64,
    pruned: u64,
    unflushed: u64,
    /// When set, stop after assigning this position and record a task.
    split_at: Option<usize>,
    tasks: Vec<Task>,
}

impl<'a> Walker<'a> {
    fn new(spf: &'a SmallestPrimeFactor, m: usize, eps: Epsilon, budget: &'a Budget) -> Self {
        Walker {
            spf,
            m,
            eps,
            budget,
            chi: vec![0; m + 1],
            survivors: vec![0; m + 1],
            nodes: 0,
            pruned: 0,
            unflushed: 0,
            split_at: None,
            tasks: Vec::new(),
        }
    }

    fn flush(&mut self) -> bool {
        let n = std::mem::take(&mut self.unflushed);
        self.budget.charge(n)
    }

    /// Assign position `n` given `sum = S_{n-1}`. Returns false once the
    /// budget is gone.
    fn descend(&mut self, n: usize, sum: i64) -> bool {
        if n > self.m {
            return true;
        }
        if n == 1 {
            self.chi[1] = 1;
            return self.visit(1, sum + 1);
        }
        let q = self.spf.get(n) as usize;
        if q == n {
            for sign in [1i8, -1] {
                self.chi[n] = sign;
                if !self.visit(n, sum + sign as i64) {
                    return false;
                }
            }
            true
        } else {
            let v = self.chi[q] * self.chi[n / q];
            self.chi[n] = v;
            self.visit(n, sum + v as i64)
        }
    }

    fn visit(&mut self, n: usize, sum: i64) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY && !self.flush() {
            return false;
        }
        if self.eps.below(sum, n as u64) {
            self.pruned += 1;
            return true;
        }
        self.survivors[n] += 1;
        if self.split_at == Some(n) {
            self.tasks.push(Task {
                next: n + 1,
                sum,
                chi: self.chi[..=n].to_vec(),
            });
            return true;
        }
        self.descend(n + 1, sum)
    }

    fn resume(&mut self, task: &Task) -> bool {
        self.chi[..task.chi.len()].copy_from_slice(&task.chi);
        self.descend(task.next, task.sum)
    }
}

/// One search to depth `m` yielding `|A_n|` for every `n <= m`.
pub fn enumerate_levels(m: u64, eps: Epsilon, opts: EnumerationOptions) -> Result<LevelCounts> {
    let mu = m as usize;
    let spf = SmallestPrimeFactor::new(mu.max(1))?;
    let mut prime_counts = vec![0u32; mu + 1];
    for n in 1..=mu {
        prime_counts[n] = prime_counts[n - 1] + spf.is_prime(n) as u32;
    }
    let budget = Budget {
        limit: opts.node_budget,
        used: AtomicU64::new(1),
        exhausted: AtomicBool::new(opts.node_budget < 1),
    };

    let split_at = (2..=mu)
        .filter(|&n| spf.is_prime(n))
        .nth(opts.split_primes.max(1) - 1);
    let mut root = Walker::new(&spf, mu, eps, &budget);
    root.split_at = split_at;
    let mut ok = root.descend(1, 0) && root.flush();

    let mut survivors = root.survivors;
    survivors[0] = 1;
    let mut nodes = 1 + root.nodes;
    let mut pruned = root.pruned;

    if ok && !root.tasks.is_empty() {
        let parts = map_collect(&root.tasks, |task| {
            let mut w = Walker::new(&spf, mu, eps, &budget);
            let done = w.resume(task) && w.flush();
            (done, w.survivors, w.nodes, w.pruned)
        });
        for (done, s, n, p) in parts {
            ok &= done;
            nodes += n;
            pruned += p;
            for (acc, v) in survivors.iter_mut().zip(s) {
                *acc += v;
            }
        }
    }
    if !ok || nodes > opts.node_budget {
        return Err(Error::ResourceLimit {
            what: "pattern enumeration nodes",
            limit: opts.node_budget,
            completed: nodes,
        });
    }
    Ok(LevelCounts {
        epsilon: eps,
        survivors,
        prime_counts,
        nodes_visited: nodes,
        pruned,
    })
}

/// `|A_m|` and `a^_m` for a single `m`.
pub fn enumerate_a(m: u64, eps: Epsilon, opts: EnumerationOptions) -> Result<EnumerationResult> {
    let levels = enumerate_levels(m, eps, opts)?;
    Ok(EnumerationResult {
        m,
        epsilon: eps,
        a_count: BigUint::from(levels.survivors[m as usize]),
        a_hat: levels.a_hat(m),
        nodes_visited: levels.nodes_visited,
        pruned: levels.pruned,
    })
}

/// `sum_{m=0}^{M} a^_m` together with the individual terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CEpsPartial {
    pub epsilon: Epsilon,
    pub terms: Vec<BigRational>,
    pub partial_sum: BigRational,
}

/// Partial sums of `c_eps` from a single search to depth `M`.
pub fn c_eps_partial(m_max: u64, eps: Epsilon, opts: EnumerationOptions) -> Result<CEpsPartial> {
    let levels = enumerate_levels(m_max, eps, opts)?;
    let terms: Vec<BigRational> = (0..=m_max).map(|m| levels.a_hat(m)).collect();
    let partial_sum = terms.iter().fold(BigRational::zero(), |acc, t| acc + t);
    Ok(CEpsPartial {
        epsilon: eps,
        terms,
        partial_sum,
    })
}

/// At `eps = 1` the barrier `S_l >= l` forces every sign to `+1`, so
/// `a^_m = 2^-pi(m)`.
pub fn closed_form_eps1(m: u64) -> BigRational {
    let pi = primes_upto(m).len();
    BigRational::new(BigInt::one(), BigInt::one() << pi)
}
