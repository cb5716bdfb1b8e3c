//! Quadratic character sums `S_l(p) = sum_{n <= l} (n/p)` viewed as a +-1 walk,
//! their first-passage times below the barrier `eps * l`, and the exact
//! limiting tail probabilities obtained by enumerating sign patterns on the
//! small primes.
//!
//! Everything that feeds an identity check is exact: thresholds are integer
//! cross-multiplications against a rational [`Epsilon`], densities and tails
//! are [`BigRational`]s, moments are [`BigUint`]s.

pub mod charsum;
pub mod cubic;
pub mod divisor;
mod epsilon;
mod error;
mod par;
pub mod patterns;
pub mod sieve;
pub mod stats;
pub mod symbol;

pub use charsum::{CharacterProfile, PassageRecord, PeriodExtrema};
pub use cubic::{C3Report, CubeCoefficients};
pub use epsilon::Epsilon;
pub use error::{Error, Result};
pub use patterns::{EnumerationResult, PatternExtension, SignPattern};
pub use sieve::{PrimeTable, SmallestPrimeFactor};
pub use stats::{DensityPoint, MomentReport, TailCurve};
pub use symbol::SymbolValue;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
