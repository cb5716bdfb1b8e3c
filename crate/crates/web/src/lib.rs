//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations, each with a plain Rust core that the native tests call
//! directly: the walk of one prime against its barrier, the empirical tail
//! curve next to its limit, and the two routes to the sixth moment.

use charwalk_core::patterns::{self, EnumerationOptions};
use charwalk_core::{stats, BigRational, CharacterProfile, Epsilon, PrimeTable};
use num_traits::ToPrimitive;
use wasm_bindgen::prelude::*;

/// Limits that keep a single call interactive.
pub const MAX_WALK_PRIME: u32 = 1_000_000;
pub const MAX_X: u32 = 2_000_000;
pub const MAX_M: u32 = 80;
pub const MAX_MOMENT_ELL: u32 = 30;
pub const NODE_BUDGET: u64 = 50_000_000;

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn parse_eps(eps: &str) -> Result<Epsilon, String> {
    eps.parse::<Epsilon>().map_err(|e| e.to_string())
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Walk {
    p: u32,
    sums: Vec<i32>,
    first_passage: u32,
    eventual_time: u32,
    pv_ratio: f64,
}

#[wasm_bindgen]
impl Walk {
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// `S_0 .. S_p`.
    pub fn sums(&self) -> Vec<i32> {
        self.sums.clone()
    }

    #[wasm_bindgen(getter, js_name = firstPassage)]
    pub fn first_passage(&self) -> u32 {
        self.first_passage
    }

    #[wasm_bindgen(getter, js_name = eventualTime)]
    pub fn eventual_time(&self) -> u32 {
        self.eventual_time
    }

    #[wasm_bindgen(getter, js_name = pvRatio)]
    pub fn pv_ratio(&self) -> f64 {
        self.pv_ratio
    }
}

pub fn walk_of(p: u32, eps: &str) -> Result<Walk, String> {
    if p > MAX_WALK_PRIME {
        return Err(format!("p must be at most {MAX_WALK_PRIME}"));
    }
    let eps = parse_eps(eps)?;
    let profile = CharacterProfile::build(p as u64).map_err(|e| e.to_string())?;
    let record = profile.passage(eps);
    Ok(Walk {
        p,
        sums: profile.partial_sums().iter().map(|&s| s as i32).collect(),
        first_passage: record.first_passage as u32,
        eventual_time: record.eventual_time as u32,
        pv_ratio: profile.pv_ratio(),
    })
}

#[wasm_bindgen]
pub fn walk(p: u32, eps: &str) -> Result<Walk, JsError> {
    walk_of(p, eps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Tails {
    empirical: Vec<f64>,
    limit: Vec<f64>,
    pi_odd: u32,
    average: f64,
    c_partial: f64,
}

#[wasm_bindgen]
impl Tails {
    /// `a_m(x)` for `m = 0 ..= m_max`.
    pub fn empirical(&self) -> Vec<f64> {
        self.empirical.clone()
    }

    /// Limiting tail `a^_m` for `m = 0 ..= m_max`.
    pub fn limit(&self) -> Vec<f64> {
        self.limit.clone()
    }

    #[wasm_bindgen(getter, js_name = piOdd)]
    pub fn pi_odd(&self) -> u32 {
        self.pi_odd
    }

    /// Mean of `f_eps(p)` over odd primes up to `x`.
    #[wasm_bindgen(getter)]
    pub fn average(&self) -> f64 {
        self.average
    }

    /// `sum_{m <= m_max} a^_m`.
    #[wasm_bindgen(getter, js_name = cPartial)]
    pub fn c_partial(&self) -> f64 {
        self.c_partial
    }
}

pub fn tails_of(x: u32, m_max: u32, eps: &str) -> Result<Tails, String> {
    if !(3..=MAX_X).contains(&x) {
        return Err(format!("x must lie in [3, {MAX_X}]"));
    }
    if m_max > MAX_M {
        return Err(format!("m must be at most {MAX_M}"));
    }
    let eps = parse_eps(eps)?;
    let table = PrimeTable::new(x as u64).map_err(|e| e.to_string())?;
    let summary = stats::average_first_passage(&table, x as u64, eps).map_err(|e| e.to_string())?;
    let opts = EnumerationOptions {
        node_budget: NODE_BUDGET,
        ..EnumerationOptions::default()
    };
    let levels = patterns::enumerate_levels(m_max as u64, eps, opts).map_err(|e| e.to_string())?;
    let limit: Vec<f64> = (0..=m_max as u64)
        .map(|m| to_f64(&levels.a_hat(m)))
        .collect();
    Ok(Tails {
        empirical: (0..=m_max as u64)
            .map(|m| to_f64(&summary.tail.value(m)))
            .collect(),
        c_partial: limit.iter().sum(),
        limit,
        pi_odd: summary.pi_odd as u32,
        average: to_f64(&summary.average()),
    })
}

#[wasm_bindgen]
pub fn tails(x: u32, m_max: u32, eps: &str) -> Result<Tails, JsError> {
    tails_of(x, m_max, eps).map_err(|e| JsError::new(&e))
}

/// Both sixth moments as decimal strings, direct route first; they agree
/// exactly whenever the computation is right.
pub fn sixth_moments_of(x: u32, ell: u32) -> Result<Vec<String>, String> {
    if !(3..=100_000).contains(&x) {
        return Err("x must lie in [3, 100000]".into());
    }
    if !(1..=MAX_MOMENT_ELL).contains(&ell) {
        return Err(format!("l must lie in [1, {MAX_MOMENT_ELL}]"));
    }
    let table = PrimeTable::new(x as u64).map_err(|e| e.to_string())?;
    let direct =
        stats::sixth_moment_direct(&table, x as u64, ell as u64).map_err(|e| e.to_string())?;
    let cubes =
        stats::sixth_moment_via_cubes(&table, x as u64, ell as u64).map_err(|e| e.to_string())?;
    Ok(vec![
        direct.sixth_moment.to_string(),
        cubes.sixth_moment.to_string(),
    ])
}

#[wasm_bindgen(js_name = sixthMoments)]
pub fn sixth_moments(x: u32, ell: u32) -> Result<Vec<String>, JsError> {
    sixth_moments_of(x, ell).map_err(|e| JsError::new(&e))
}
