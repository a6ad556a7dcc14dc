//! Taylor coefficients about an arbitrary point.
//!
//! `a_n(ζ) = g⁽ⁿ⁾(ζ)/n! = Σ_{m≥0} C(n+m, m) a_{n+m} ζ^m`. The partial sum is
//! accumulated in [`XComplex`] and stops once the increments are negligible
//! and the term ratios certify a geometric tail. The reported `tail_bound`
//! covers both the truncated remainder and a floating-point error allowance
//! for the summed terms, so `|value − exact| ≤ tail_bound` is a usable test.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSource;
use crate::growth::{sum_log_terms, SharpSum};
use crate::xarith::{XComplex, XReal};
use crate::{ln_factorial, GrowthError, Result};

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
const CERT_RUN: usize = 30;
const ENVELOPE: usize = 4;
const LN_4: f64 = 1.386_294_361_119_890_6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecenterPolicy {
    pub eps_rel: f64,
    pub eps_abs: f64,
    pub max_terms: usize,
}

impl Default for RecenterPolicy {
    fn default() -> Self {
        Self { eps_rel: 1e-16, eps_abs: 0.0, max_terms: 200_000 }
    }
}

/// Partial sum with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: XComplex,
    /// `+∞` when the series was cut at `max_terms` before certification.
    pub tail_bound: XReal,
    pub terms_used: usize,
}

impl CertifiedValue {
    pub fn is_certified(&self) -> bool {
        !self.tail_bound.is_infinite()
    }

    /// Both the value and its error bound are exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.value.is_zero() && self.tail_bound.is_zero()
    }

    /// `|value| ≤ tail_bound`.
    pub fn is_ambiguous(&self) -> bool {
        !self.is_exact_zero() && self.value.abs() <= self.tail_bound
    }

    pub fn certify(self, n: u64) -> Result<Self> {
        if self.is_certified() {
            Ok(self)
        } else {
            Err(GrowthError::NotCertified { n, terms: self.terms_used })
        }
    }
}

/// `a_n(ζ)` by Taylor shift.
pub fn recentered_coeff(src: &CoefficientSource, zeta: Complex64, n: u64, policy: &RecenterPolicy) -> CertifiedValue {
    if zeta.re == 0.0 && zeta.im == 0.0 {
        return CertifiedValue { value: src.coeff(n), tail_bound: XReal::ZERO, terms_used: 1 };
    }
    let degree = src.degree();
    let zeta_x = XComplex::from_complex(zeta);
    let ln_n_fact = ln_factorial(n);

    let mut partial = XComplex::ZERO;
    let mut abs_sum = XReal::ZERO;
    let mut coeff_err = XReal::ZERO;
    let mut zeta_pow = XComplex::ONE;
    // logs of the latest nonzero terms, for the envelope ratio test
    let mut recent: std::collections::VecDeque<(f64, XReal)> = std::collections::VecDeque::with_capacity(ENVELOPE + 1);
    let mut small_run = 0usize;
    let mut ratio_run = 0usize;
    let mut terms = 0usize;
    let mut truncation: Option<XReal> = None;

    for m in 0..policy.max_terms as u64 {
        let big = n + m;
        if degree.is_some_and(|d| big > d) {
            truncation = Some(XReal::ZERO);
            break;
        }
        terms += 1;
        let c = src.coeff(big);
        if !c.is_zero() {
            let ln_binom = ln_factorial(big) - ln_n_fact - ln_factorial(m);
            let term = c.mul_real(XReal::from_log(ln_binom)) * zeta_pow;
            let t_abs = term.abs();
            let t_log = t_abs.log();
            partial = partial + term;
            abs_sum = abs_sum + t_abs;
            // relative error of the term: log-space construction of a_N and
            // the binomial, plus the running power of ζ
            let delta = 4.0
                * UNIT_ROUNDOFF
                * (c.log_abs().abs() + ln_factorial(big) + ln_n_fact + ln_factorial(m) + m as f64 + 4.0);
            coeff_err = coeff_err + t_abs.mul_f64(delta);

            let env = recent.iter().map(|&(l, _)| l).fold(f64::NEG_INFINITY, f64::max);
            if recent.len() == ENVELOPE && t_log - env <= -LN_4 {
                ratio_run += 1;
            } else {
                ratio_run = 0;
            }
            if recent.len() == ENVELOPE {
                recent.pop_front();
            }
            recent.push_back((t_log, t_abs));

            let threshold = partial.abs().mul_f64(policy.eps_rel) + XReal::from_f64(policy.eps_abs);
            if t_abs < threshold {
                small_run += 1;
            } else {
                small_run = 0;
            }
        } else {
            small_run += 1;
        }
        if small_run >= CERT_RUN && ratio_run >= CERT_RUN {
            // each term ≤ 1/4 of the max of the previous ENVELOPE terms:
            // the remainder is at most ENVELOPE·M/3; doubled
            let m = recent.iter().map(|&(_, a)| a).fold(XReal::ZERO, |a, b| if b > a { b } else { a });
            truncation = Some(m.mul_f64(2.0 * ENVELOPE as f64 / 3.0));
            break;
        }
        zeta_pow = zeta_pow * zeta_x;
    }

    let tail_bound = match truncation {
        None => XReal::INFINITY,
        Some(t) => {
            let summation = abs_sum.mul_f64(2.0 * (terms as f64 + 1.0) * UNIT_ROUNDOFF);
            t + coeff_err + summation
        }
    };
    CertifiedValue { value: partial, tail_bound, terms_used: terms }
}

/// `ln|a_n(z)|` with `-∞` for a provable zero. Uses the closed-form
/// derivative when present, the coefficient formula at `z = 0`, and the
/// certified Taylor shift otherwise.
pub fn log_abs_coeff_at(src: &CoefficientSource, z: Complex64, n: u64, policy: &RecenterPolicy) -> Result<f64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(src.log_abs_coeff(n));
    }
    if let Some(d) = src.derivative_exact(z, n) {
        return Ok(if d.is_zero() { f64::NEG_INFINITY } else { d.log_abs() - ln_factorial(n) });
    }
    let cv = recentered_coeff(src, z, n, policy).certify(n)?;
    if cv.is_exact_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    if cv.is_ambiguous() {
        return Err(GrowthError::ZeroAmbiguous { n });
    }
    Ok(cv.value.log_abs())
}

/// `ln|g⁽ⁿ⁾(z)|`, `-∞` for a provable zero.
pub fn derivative_log_abs(src: &CoefficientSource, z: Complex64, n: u64) -> Result<f64> {
    derivative_log_abs_with(src, z, n, &RecenterPolicy::default())
}

pub fn derivative_log_abs_with(src: &CoefficientSource, z: Complex64, n: u64, policy: &RecenterPolicy) -> Result<f64> {
    if let Some(d) = src.derivative_exact(z, n) {
        return Ok(d.log_abs());
    }
    let l = log_abs_coeff_at(src, z, n, policy)?;
    Ok(if l == f64::NEG_INFINITY { l } else { l + ln_factorial(n) })
}

/// Largest `|g⁽ⁿ⁾(z)|` over `samples` equispaced points of `|z| = r`
/// (starting at `z = r`); a lower bound for `m_n(r)`.
pub fn max_derivative_on_circle(src: &CoefficientSource, r: f64, n: u64, samples: usize) -> Result<XReal> {
    if samples < 64 {
        return Err(GrowthError::BadParam(format!("need at least 64 circle samples, got {samples}")));
    }
    let mut best: Option<f64> = None;
    let mut last_err = None;
    for j in 0..samples {
        let angle = std::f64::consts::TAU * j as f64 / samples as f64;
        let z = Complex64::from_polar(r, angle);
        match derivative_log_abs(src, z, n) {
            Ok(l) => best = Some(best.map_or(l, |b: f64| b.max(l))),
            Err(e @ GrowthError::ZeroAmbiguous { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(l) => Ok(XReal::from_log(l)),
        None => Err(last_err.unwrap_or(GrowthError::ZeroAmbiguous { n })),
    }
}

/// `(g♯)⁽ⁿ⁾(r) = Σ_{m=0}^{N} (n+m)!/m! · |a_{n+m}| r^m`.
pub fn sharp_derivative(src: &CoefficientSource, r: f64, n: u64, terms: usize) -> SharpSum {
    let ln_r = r.ln();
    sum_log_terms(terms, |m| sharp_derivative_log_term(src, ln_r, n, m))
}

/// [`sharp_derivative`] continued until stagnation.
pub fn sharp_derivative_converged(src: &CoefficientSource, r: f64, n: u64) -> SharpSum {
    let ln_r = r.ln();
    crate::growth::sum_log_terms_converged(|m| sharp_derivative_log_term(src, ln_r, n, m), src.degree().map(|d| d.saturating_sub(n) as usize + 1))
}

/// Logarithm of the `m`-th term of `(g♯)⁽ⁿ⁾(r)`.
pub fn sharp_derivative_log_term(src: &CoefficientSource, ln_r: f64, n: u64, m: u64) -> f64 {
    let l = src.log_abs_coeff(n + m);
    if l == f64::NEG_INFINITY {
        return l;
    }
    let pow = if m == 0 { 0.0 } else { m as f64 * ln_r };
    ln_factorial(n + m) - ln_factorial(m) + l + pow
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::catalog;
    use std::f64::consts::{E, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_shift_is_the_coefficient() {
        let s = catalog("mittag_leffler:alpha=0.5").unwrap();
        let cv = recentered_coeff(&s, c(0.0, 0.0), 17, &RecenterPolicy::default());
        assert_eq!(cv.value, s.coeff(17));
        assert!(cv.tail_bound.is_zero());
    }

    #[test]
    fn exp_shift_by_one() {
        let s = catalog("exp").unwrap();
        let cv = recentered_coeff(&s, c(1.0, 0.0), 5, &RecenterPolicy::default());
        let want = E / 120.0;
        let got = cv.value.to_complex();
        assert!(cv.is_certified());
        assert!((got.re - want).abs() <= cv.tail_bound.to_f64());
        assert!((got.re - want).abs() < 1e-15);
    }

    #[test]
    fn sine_zero_is_ambiguous_not_tiny() {
        let s = catalog("sin:lambda=1").unwrap();
        let cv = recentered_coeff(&s, c(PI, 0.0), 0, &RecenterPolicy::default());
        assert!(cv.is_certified());
        assert!(cv.value.abs() <= cv.tail_bound);
        assert!(cv.is_ambiguous());
    }

    #[test]
    fn polynomial_shift_terminates_exactly() {
        let p = catalog("polynomial:coeffs=1;-3;3;-1").unwrap(); // (1 - z)^3
        let cv = recentered_coeff(&p, c(1.0, 0.0), 0, &RecenterPolicy::default());
        assert!(cv.value.is_zero() || cv.is_ambiguous());
        let d = recentered_coeff(&p, c(2.0, 0.0), 5, &RecenterPolicy::default());
        assert!(d.is_exact_zero());
        assert_eq!(derivative_log_abs(&p, c(0.3, 0.1), 4).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn derivative_magnitudes() {
        let e = catalog("exp").unwrap();
        for n in [0u64, 3, 50] {
            assert_eq!(derivative_log_abs(&e, c(0.0, 0.0), n).unwrap(), 0.0);
        }
        let s2 = catalog("sin:lambda=2").unwrap();
        assert_eq!(derivative_log_abs(&s2, c(PI / 2.0, 0.0), 6).unwrap(), f64::NEG_INFINITY);
        let s1 = catalog("sin:lambda=1").unwrap();
        let l = derivative_log_abs(&s1, c(1.0, 0.0), 10).unwrap();
        assert!((l - 1f64.sin().ln()).abs() < 1e-14);
    }

    #[test]
    fn unresolved_zero_is_reported() {
        // power-type source has no closed form; a_0 shifted to a point where
        // nothing cancels stays resolvable
        let p = catalog("power_type:rho=2").unwrap();
        assert!(derivative_log_abs(&p, c(0.5, 0.5), 10).is_ok());
        let tiny = RecenterPolicy { max_terms: 3, ..RecenterPolicy::default() };
        assert!(matches!(
            log_abs_coeff_at(&p, c(1.0, 0.0), 10, &tiny),
            Err(GrowthError::NotCertified { .. })
        ));
    }

    #[test]
    fn circle_maximum_for_exp() {
        let e = catalog("exp").unwrap();
        let m = max_derivative_on_circle(&e, 1.0, 3, 64).unwrap();
        assert!((m.to_f64() - E).abs() < 1e-13);
        assert!(max_derivative_on_circle(&e, 1.0, 3, 10).is_err());
    }

    #[test]
    fn sharp_derivative_closed_forms() {
        let e = catalog("exp").unwrap();
        assert!((sharp_derivative_converged(&e, 1.0, 0).value.to_f64() - E).abs() < 1e-14);
        assert!((sharp_derivative_converged(&e, 1.0, 2).value.to_f64() - E).abs() < 1e-14);
        let s = catalog("sin:lambda=2").unwrap();
        let v = sharp_derivative_converged(&s, 1.0, 1);
        assert!(v.stagnant);
        assert!((v.value.to_f64() - 2.0 * 2f64.cosh()).abs() < 1e-13);
    }

    #[test]
    fn sine_circle_max_below_sharp_and_dense_oracle() {
        let s = catalog("sin:lambda=1").unwrap();
        let coarse = max_derivative_on_circle(&s, 2.0, 0, 256).unwrap();
        let dense = max_derivative_on_circle(&s, 2.0, 0, 4096).unwrap();
        let sharp = sharp_derivative_converged(&s, 2.0, 0).value;
        assert!(coarse <= dense.mul_f64(1.0 + 1e-12));
        assert!((coarse.to_f64() / dense.to_f64() - 1.0).abs() < 1e-3);
        assert!(dense.le_with_slack(&sharp, 1e-10));
        assert!((sharp.to_f64() - 2f64.sinh()).abs() < 1e-13);
    }
}
