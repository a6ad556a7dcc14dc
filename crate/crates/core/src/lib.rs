//! Order and type of entire functions computed from Taylor-coefficient data.
//!
//! The crate is organised bottom-up:
//!
//! - [`xarith`]: extended-exponent complex/real scalars for coefficients far
//!   outside the `f64` exponent range.
//! - [`coeffs`]: entire functions presented as coefficient sources, plus
//!   index sequences `ν = {n_k}` and their complements.
//! - [`growth`]: order/type estimators from coefficients and from the
//!   maximum modulus, the sharp majorant `g♯`, and the `θ` normalization.
//! - [`recenter`]: Taylor coefficients about an arbitrary point, derivative
//!   magnitudes and disk maxima.
//! - [`subseq`]: growth functionals restricted to a subsequence of indices.
//! - [`experiments`]: seeded sampling probes and quadrature checks.
//! - [`cli`]: configuration, report assembly and command dispatch for the
//!   `entire-growth` binary.

pub mod cli;
pub mod coeffs;
pub mod experiments;
pub mod growth;
pub mod recenter;
pub mod subseq;
pub mod xarith;

mod error;
mod numeric;

pub use error::GrowthError;
pub use numeric::{ext_float, ln_factorial, ln_gamma, parse_complex, format_complex};

pub(crate) const LN_2: f64 = std::f64::consts::LN_2;

pub type Result<T, E = GrowthError> = std::result::Result<T, E>;
