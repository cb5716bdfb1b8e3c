//! Cube coefficients `c_u(l) = #{(a,b,c) in [1,l]^3 : abc = u}` and the
//! square-pair sum `C_3(l) = sum_{uv = square} c_u(l) c_v(l)`.
//!
//! `uv` is a square exactly when `u` and `v` have the same squarefree kernel,
//! so `C_3(l) = sum_d (sum_{ker u = d} c_u(l))^2`. Three routes compute it:
//! kernel grouping (the main one), a quadratic pair loop, and an incremental
//! update used for growth tables.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;

use crate::divisor::factorize;
use crate::error::{Error, Result};
use crate::sieve::SmallestPrimeFactor;

/// Default ceiling on `l` for coefficient tables (`l^3` dense cells).
pub const DEFAULT_ELL_CAP: u64 = 300;
/// Ceiling for the pairwise oracle.
pub const BRUTEFORCE_ELL_CAP: u64 = 30;

/// Sparse `u -> c_u(l)`, ascending in `u`, nonzero entries only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeCoefficients {
    pub ell: u64,
    coeffs: Vec<(u64, u64)>,
}

impl CubeCoefficients {
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.coeffs.iter().copied()
    }

    pub fn get(&self, u: u64) -> u64 {
        self.coeffs
            .binary_search_by_key(&u, |&(v, _)| v)
            .map_or(0, |i| self.coeffs[i].1)
    }

    /// Number of distinct products `abc`.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().map(|&(_, c)| c).sum()
    }
}

fn check_ell(ell: u64, cap: u64, what: &'static str) -> Result<()> {
    if ell == 0 {
        return Err(Error::invalid("l must be >= 1"));
    }
    if ell > cap {
        return Err(Error::ResourceLimit {
            what,
            limit: cap,
            completed: 0,
        });
    }
    Ok(())
}

pub fn cube_coefficients(ell: u64) -> Result<CubeCoefficients> {
    cube_coefficients_capped(ell, DEFAULT_ELL_CAP)
}

/// Two convolutions of the indicator of `[1, l]`: pairs `ab`, then `(ab)c`.
pub fn cube_coefficients_capped(ell: u64, cap: u64) -> Result<CubeCoefficients> {
    check_ell(ell, cap, "cube coefficient l")?;
    let l = ell as usize;
    let mut pairs = vec![0u32; l * l + 1];
    for a in 1..=l {
        for b in 1..=l {
            pairs[a * b] += 1;
        }
    }
    let mut triples = vec![0u32; l * l * l + 1];
    for (ab, &count) in pairs.iter().enumerate().filter(|&(_, &c)| c > 0) {
        for c in 1..=l {
            triples[ab * c] += count;
        }
    }
    let coeffs = triples
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(u, &c)| (u as u64, c as u64))
        .collect();
    Ok(CubeCoefficients { ell, coeffs })
}

/// Squarefree `d` with `u = d s^2`.
pub fn squarefree_kernel(u: u64) -> Result<u64> {
    if u == 0 {
        return Err(Error::invalid("squarefree kernel of 0 is undefined"));
    }
    Ok(factorize(u)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(q, _)| q)
        .product())
}

/// `ker(xy)` from `ker(x)` and `ker(y)`: shared primes pair up into a square.
#[inline]
fn kernel_product(kx: u64, ky: u64) -> u64 {
    let g = kx.gcd(&ky);
    (kx / g) * (ky / g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C3Report {
    pub ell: u64,
    /// `C_3(l)`; at most `l^6`, so `u128` never overflows.
    pub value: u128,
}

impl C3Report {
    /// `C_3(l) / l^3`.
    pub fn normalized(&self) -> BigRational {
        BigRational::new(BigInt::from(self.value), BigInt::from(self.ell).pow(3))
    }
}

/// Groups coefficients by kernel using a smallest-prime-factor table up to
/// `l^3`.
pub fn c3_via_kernels(ell: u64) -> Result<C3Report> {
    let coeffs = cube_coefficients(ell)?;
    let spf = SmallestPrimeFactor::new((ell * ell * ell) as usize)?;
    let mut by_kernel: Vec<(u64, u64)> = coeffs
        .iter()
        .map(|(u, c)| (spf.squarefree_kernel(u as usize), c))
        .collect();
    by_kernel.sort_unstable();
    let mut value = 0u128;
    let mut i = 0;
    while i < by_kernel.len() {
        let d = by_kernel[i].0;
        let mut group = 0u128;
        while i < by_kernel.len() && by_kernel[i].0 == d {
            group += by_kernel[i].1 as u128;
            i += 1;
        }
        value += group * group;
    }
    Ok(C3Report { ell, value })
}

/// Direct double sum over `(u, v)` with an integer-square-root test on `uv`.
pub fn c3_bruteforce(ell: u64) -> Result<C3Report> {
    check_ell(ell, BRUTEFORCE_ELL_CAP, "pairwise C_3 l")?;
    let coeffs: Vec<(u64, u64)> = cube_coefficients(ell)?.iter().collect();
    let mut value = 0u128;
    for &(u, cu) in &coeffs {
        for &(v, cv) in &coeffs {
            let uv = u * v;
            let r = uv.sqrt();
            if r * r == uv {
                value += (cu * cv) as u128;
            }
        }
    }
    Ok(C3Report { ell, value })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub ell: u64,
    pub c3: u128,
    /// `C_3(l) / l^(3 + delta)`, for display.
    pub ratio: f64,
}

/// `C_3(l)` for every `l <= l_max`, updating kernel sums with the
/// `l^3 - (l-1)^3` triples that have a coordinate equal to `l`.
pub fn c3_growth_table(ell_max: u64, delta: f64) -> Result<Vec<GrowthRow>> {
    check_ell(ell_max, DEFAULT_ELL_CAP, "growth table l")?;
    let l_max = ell_max as usize;
    let kernels: Vec<u64> = std::iter::once(0)
        .chain((1..=ell_max).map(|a| squarefree_kernel(a).expect("a >= 1")))
        .collect();
    let mut sums = vec![0u32; l_max * l_max * l_max + 1];
    let mut c3 = 0u128;
    let mut rows = Vec::with_capacity(l_max);
    let mut add = |a: usize, b: usize, c: usize, c3: &mut u128| {
        let d = kernel_product(kernel_product(kernels[a], kernels[b]), kernels[c]) as usize;
        *c3 += 2 * sums[d] as u128 + 1;
        sums[d] += 1;
    };
    for l in 1..=l_max {
        for a in 1..=l {
            for b in 1..=l {
                if a == l || b == l {
                    for c in 1..=l {
                        add(a, b, c, &mut c3);
                    }
                } else {
                    add(a, b, l, &mut c3);
                }
            }
        }
        rows.push(GrowthRow {
            ell: l as u64,
            c3,
            ratio: c3 as f64 / (l as f64).powf(3.0 + delta),
        });
    }
    Ok(rows)
}
