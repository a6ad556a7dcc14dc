//! Growth functionals restricted to a subsequence `ν = {n_k}` of derivative
//! indices, evaluated at a point `z`:
//!
//! | functional | term at `n = n_k` |
//! |---|---|
//! | `ρ_ν(z)` | `n ln n / (−ln|a_n(z)|)` |
//! | `θ_ν(z)` | `|g⁽ⁿ⁾(z)|^{1/(n ln n)}` |
//! | `τ_ν(z)` | `(1/(eρ)) n |a_n(z)|^{ρ/n}` |
//! | `σ_ν(z)` | `n^{1−ρ} |g⁽ⁿ⁾(z)|^{ρ/n}` |
//!
//! where `a_n(z) = g⁽ⁿ⁾(z)/n!`. Every estimate is the supremum of its
//! series, so splitting an index window between `ν` and its complement
//! reproduces the full-window value bit for bit.
//!
//! Provable zeros enter as term `0`. Values whose certified interval
//! contains zero are left out and counted in `skipped`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{complement, CoefficientSource, IndexSequence};
use crate::growth::{order_term, type_term};
use crate::recenter::{log_abs_coeff_at, RecenterPolicy};
use crate::{ext_float, ln_factorial, GrowthError, Result};

/// Window `k_min ≤ k ≤ k_max` of subsequence positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KWindow {
    pub k_min: u64,
    pub k_max: u64,
}

impl KWindow {
    pub fn new(k_min: u64, k_max: u64) -> Result<Self> {
        if k_min == 0 || k_min > k_max {
            return Err(GrowthError::BadParam(format!("k-window [{k_min}, {k_max}] must satisfy 1 <= k_min <= k_max")));
        }
        Ok(Self { k_min, k_max })
    }

    /// Positions `k` with `n_k ∈ [lo, hi]`.
    pub fn for_n_range(nu: &IndexSequence, lo: u64, hi: u64) -> Result<Self> {
        let (k_min, k_max) = nu.k_range_for(lo, hi).ok_or(GrowthError::EmptyWindow(lo, hi))?;
        Self::new(k_min, k_max)
    }

    /// Positions with `n_k ∈ [N/2, N]`.
    pub fn for_horizon(nu: &IndexSequence, horizon: u64) -> Result<Self> {
        Self::for_n_range(nu, horizon / 2, horizon)
    }

    /// `(k, n_k)` pairs in the window.
    pub fn indices(&self, nu: &IndexSequence) -> Vec<(u64, u64)> {
        (self.k_min..).zip(nu.elements_for_k(self.k_min, self.k_max)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "rho")]
pub enum Functional {
    Rho,
    Theta,
    Tau(f64),
    Sigma(f64),
}

impl Functional {
    fn check(&self) -> Result<()> {
        match self {
            Functional::Tau(rho) | Functional::Sigma(rho) if !(*rho > 0.0 && rho.is_finite()) => {
                Err(GrowthError::RhoOutOfRange(*rho))
            }
            _ => Ok(()),
        }
    }
}

/// `ln|a_n(z)|` as seen by the functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LogCoeff {
    Value(f64),
    /// Provably zero.
    Zero,
    /// Certified interval contains zero.
    Ambiguous,
}

/// `ln|a_n(z)|` for each `n`, evaluated in parallel and returned in input order.
pub(crate) fn log_coeffs(src: &CoefficientSource, z: Complex64, ns: &[u64], policy: &RecenterPolicy) -> Result<Vec<LogCoeff>> {
    ns.par_iter()
        .map(|&n| match log_abs_coeff_at(src, z, n, policy) {
            Ok(l) if l == f64::NEG_INFINITY => Ok(LogCoeff::Zero),
            Ok(l) => Ok(LogCoeff::Value(l)),
            Err(GrowthError::ZeroAmbiguous { .. }) => Ok(LogCoeff::Ambiguous),
            Err(e) => Err(e),
        })
        .collect()
}

/// Term of `f` at index `n`; `None` when the index is skipped.
/// For `ρ` an exact zero yields `Some(0)` but still counts as skipped.
pub(crate) fn term(f: Functional, n: u64, lc: LogCoeff) -> (Option<f64>, bool) {
    let nf = n as f64;
    match (f, lc) {
        (_, LogCoeff::Ambiguous) => (None, true),
        (Functional::Rho | Functional::Theta, _) if n < 2 => (None, true),
        (Functional::Rho, LogCoeff::Zero) => (Some(0.0), true),
        (Functional::Rho, LogCoeff::Value(l)) => match order_term(n, l) {
            Some(t) => (Some(t), false),
            None => (None, true),
        },
        (_, LogCoeff::Zero) => (Some(0.0), false),
        (Functional::Theta, LogCoeff::Value(l)) => (Some(((l + ln_factorial(n)) / (nf * nf.ln())).exp()), false),
        (Functional::Tau(rho), LogCoeff::Value(l)) => (Some(type_term(n, rho, l)), false),
        (Functional::Sigma(rho), LogCoeff::Value(l)) => {
            (Some(((1.0 - rho) * nf.ln() + (rho / nf) * (l + ln_factorial(n))).exp()), false)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubseqEstimate {
    pub functional: Functional,
    #[serde(with = "ext_float")]
    pub value: f64,
    pub k_window: (u64, u64),
    pub z: Complex64,
    pub skipped: usize,
    /// `(k, n_k, term)`.
    #[serde(skip)]
    pub series: Vec<(u64, u64, f64)>,
}

impl SubseqEstimate {
    /// Series as CSV with header `k,n_k,term`.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("k,n_k,term\n");
        for (k, n, t) in &self.series {
            out.push_str(&format!("{k},{n},{t}\n"));
        }
        out
    }
}

/// Supremum over already-evaluated coefficients; `AllSkipped` when no term survives.
pub(crate) fn assemble(f: Functional, z: Complex64, kw: KWindow, idx: &[(u64, u64)], lcs: &[LogCoeff]) -> Result<SubseqEstimate> {
    let mut series = Vec::with_capacity(idx.len());
    let mut skipped = 0;
    for (&(k, n), &lc) in idx.iter().zip(lcs) {
        let (t, skip) = term(f, n, lc);
        skipped += skip as usize;
        if let Some(t) = t {
            series.push((k, n, t));
        }
    }
    if skipped == idx.len() {
        return Err(GrowthError::AllSkipped);
    }
    let value = series.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubseqEstimate { functional: f, value, k_window: (kw.k_min, kw.k_max), z, skipped, series })
}

/// Window supremum of the terms of `f` over `n_k`, `k ∈ kw`.
pub fn functional_nu(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, f: Functional, kw: KWindow) -> Result<SubseqEstimate> {
    f.check()?;
    let idx = kw.indices(nu);
    let ns: Vec<u64> = idx.iter().map(|p| p.1).collect();
    let lcs = log_coeffs(src, z, &ns, &RecenterPolicy::default())?;
    assemble(f, z, kw, &idx, &lcs)
}

pub fn rho_nu(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, kw: KWindow) -> Result<SubseqEstimate> {
    functional_nu(src, nu, z, Functional::Rho, kw)
}

pub fn theta_nu(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, kw: KWindow) -> Result<SubseqEstimate> {
    functional_nu(src, nu, z, Functional::Theta, kw)
}

pub fn tau_nu(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, rho: f64, kw: KWindow) -> Result<SubseqEstimate> {
    functional_nu(src, nu, z, Functional::Tau(rho), kw)
}

/// Running supremum of the `σ_ν` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaCurve {
    pub z: Complex64,
    pub rho: f64,
    /// `(k, n_k, term, running sup)`; skipped positions repeat the previous sup.
    pub points: Vec<(u64, u64, f64, f64)>,
    /// Position where the running sup last increased.
    pub last_improved_k: Option<u64>,
    pub skipped: usize,
}

impl SigmaCurve {
    /// Running sup over `k ≤ K`.
    pub fn sup_at(&self, k: u64) -> f64 {
        let i = self.points.partition_point(|p| p.0 <= k);
        if i == 0 {
            0.0
        } else {
            self.points[i - 1].3
        }
    }

    pub fn value(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.3)
    }
}

/// `σ_ν(z)` running sup over `1 ≤ k ≤ K`.
pub fn sigma_nu(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, rho: f64, k_max: u64) -> Result<SigmaCurve> {
    let f = Functional::Sigma(rho);
    f.check()?;
    let idx = KWindow::new(1, k_max.max(1))?.indices(nu);
    let ns: Vec<u64> = idx.iter().map(|p| p.1).collect();
    let lcs = log_coeffs(src, z, &ns, &RecenterPolicy::default())?;
    let mut sup = 0.0f64;
    let mut last_improved_k = None;
    let mut skipped = 0;
    let points = idx
        .iter()
        .zip(&lcs)
        .map(|(&(k, n), &lc)| {
            let (t, skip) = term(f, n, lc);
            skipped += skip as usize;
            let t = t.unwrap_or(f64::NAN);
            if t > sup {
                sup = t;
                last_improved_k = Some(k);
            }
            (k, n, t, sup)
        })
        .collect();
    Ok(SigmaCurve { z, rho, points, last_improved_k, skipped })
}

/// Full, `ν` and complement suprema of one functional over a shared index window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionValues {
    /// `None` when every term of that part was skipped.
    pub full: Option<f64>,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    /// `full` equals `max(nu, mu)` bit for bit.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub z: Complex64,
    pub window: (u64, u64),
    pub rho: PartitionValues,
    pub tau: PartitionValues,
    pub rho_ok: bool,
    pub tau_ok: bool,
}

fn part_sup(f: Functional, members: &[(u64, LogCoeff)]) -> Option<f64> {
    let mut live = false;
    let mut sup = f64::NEG_INFINITY;
    for &(n, lc) in members {
        let (t, skip) = term(f, n, lc);
        live |= !skip;
        if let Some(t) = t {
            sup = sup.max(t);
        }
    }
    live.then_some(sup)
}

fn partition_values(f: Functional, all: &[(u64, LogCoeff)], nu: &IndexSequence, mu: &IndexSequence) -> PartitionValues {
    let (in_nu, in_mu): (Vec<_>, Vec<_>) = all.iter().partition(|(n, _)| nu.contains(*n));
    debug_assert!(in_mu.iter().all(|(n, _)| mu.contains(*n)));
    let full = part_sup(f, all);
    let a = part_sup(f, &in_nu);
    let b = part_sup(f, &in_mu);
    let combined = match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    };
    let holds = full.map(f64::to_bits) == combined.map(f64::to_bits);
    PartitionValues { full, nu: a, mu: b, holds }
}

/// Checks `sup_full = max(sup_ν, sup_μ)` for the `ρ` and `τ` terms over
/// `n ∈ [N/2, N]`, `μ` the complement of `ν`.
pub fn max_identity_check(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, rho: f64, horizon: u64) -> Result<IdentityReport> {
    Functional::Tau(rho).check()?;
    let mu = complement(nu, horizon)?;
    let lo = (horizon / 2).max(1);
    let ns: Vec<u64> = (lo..=horizon).collect();
    let lcs = log_coeffs(src, z, &ns, &RecenterPolicy::default())?;
    let all: Vec<(u64, LogCoeff)> = ns.into_iter().zip(lcs).collect();
    let rho_v = partition_values(Functional::Rho, &all, nu, &mu);
    let tau_v = partition_values(Functional::Tau(rho), &all, nu, &mu);
    Ok(IdentityReport {
        z,
        window: (lo, horizon),
        rho_ok: rho_v.holds,
        tau_ok: tau_v.holds,
        rho: rho_v,
        tau: tau_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::catalog;
    use std::f64::consts::{E, PI};

    fn src(s: &str) -> CoefficientSource {
        catalog(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_windows() {
        let ev = IndexSequence::evens();
        assert_eq!(KWindow::for_horizon(&ev, 2000).unwrap(), KWindow { k_min: 500, k_max: 1000 });
        assert_eq!(KWindow { k_min: 2, k_max: 4 }.indices(&IndexSequence::Squares), vec![(2, 4), (3, 9), (4, 16)]);
        assert!(KWindow::new(0, 3).is_err());
    }

    #[test]
    fn rho_examples() {
        let s1 = src("sin:lambda=1");
        let odds = IndexSequence::odds();
        let kw = KWindow::new(250, 500).unwrap();
        let r = rho_nu(&s1, &odds, c(0.0, 0.0), kw).unwrap();
        // oracle: terms decrease along the odds, so the sup is at n = 499
        let oracle = 499.0 * 499f64.ln() / libm::lgamma(500.0);
        assert!((r.value - oracle).abs() < 1e-12 && r.value > 1.0);
        assert!(matches!(rho_nu(&s1, &IndexSequence::evens(), c(0.0, 0.0), kw), Err(GrowthError::AllSkipped)));
        let p = rho_nu(&src("power_type:rho=2"), &IndexSequence::evens(), c(0.0, 0.0), kw).unwrap();
        assert!((p.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn theta_examples() {
        let s1 = src("sin:lambda=1");
        let ev = IndexSequence::evens();
        let kw = KWindow::for_horizon(&ev, 2000).unwrap();
        let off = theta_nu(&s1, &ev, c(1.0, 0.0), kw).unwrap();
        // |g⁽²ᵏ⁾(1)| = sin 1 < 1, so the terms approach 1 from below
        let oracle = 1f64.sin().powf(1.0 / (2000.0 * 2000f64.ln()));
        assert!((off.value - oracle).abs() < 1e-14, "{}", off.value);
        let s2 = theta_nu(&src("sin:lambda=2"), &ev, c(1.0, 0.5), kw).unwrap();
        assert!(s2.value > 1.0 && s2.value < 1.15, "{}", s2.value);
        let at_pi = theta_nu(&s1, &ev, c(PI, 0.0), kw).unwrap();
        assert_eq!(at_pi.value, 0.0);
        assert_eq!(at_pi.skipped, 0);
        let e = theta_nu(&src("exp"), &ev, c(0.0, 0.0), KWindow::new(500, 1000).unwrap()).unwrap();
        assert!((e.value - 1.0).abs() < 0.1, "{}", e.value);
        for t in &off.series {
            assert!(t.2 >= 0.0 && t.2 <= E * (1.0 + 1.0 / (1000f64).ln()).exp());
        }
    }

    #[test]
    fn tau_examples() {
        let g = CoefficientSource::sin_plus_cos2();
        let kw = KWindow::new(500, 1000).unwrap();
        let odd = tau_nu(&g, &IndexSequence::odds(), c(0.0, 0.0), 1.0, kw).unwrap();
        assert!((odd.value - 1.0).abs() < 0.02, "{}", odd.value);
        let even = tau_nu(&g, &IndexSequence::evens(), c(0.0, 0.0), 1.0, kw).unwrap();
        assert!((even.value - 2.0).abs() < 0.04, "{}", even.value);
        let p = tau_nu(&src("power_type:rho=2"), &IndexSequence::odds(), c(0.0, 0.0), 2.0, kw).unwrap();
        assert!((p.value * 2.0 * E - 1.0).abs() < 1e-13);
        assert!(matches!(tau_nu(&g, &IndexSequence::odds(), c(0.0, 0.0), -1.0, kw), Err(GrowthError::RhoOutOfRange(_))));
    }

    #[test]
    fn sigma_examples() {
        let ev = IndexSequence::evens();
        let m = sigma_nu(&src("maximal_type:rho=1"), &ev, c(0.0, 0.0), 1.0, 2000).unwrap();
        assert!(m.points.windows(2).all(|w| w[1].3 >= w[0].3));
        // oracle: term = exp(lgamma(n+1)/n) ln n / n, which grows like ln n / e
        let n = 4000.0f64;
        let oracle = (libm::lgamma(n + 1.0) / n).exp() * n.ln() / n;
        assert!((m.sup_at(2000) / oracle - 1.0).abs() < 1e-9);
        assert!(m.sup_at(2000) > m.sup_at(200));
        // |g⁽ⁿ⁾(z)| = e^{Re z}: terms e^{Re z / n}, limit ρτe^{1−ρ} = 1
        let e = sigma_nu(&src("exp"), &IndexSequence::odds(), c(0.0, 0.0), 1.0, 1000).unwrap();
        assert!(e.points.iter().all(|p| p.2 == 1.0));
        assert_eq!(e.last_improved_k, Some(1));
        let e1 = sigma_nu(&src("exp"), &IndexSequence::odds(), c(0.5, 0.0), 1.0, 1000).unwrap();
        assert!((e1.value() - 0.5f64.exp()).abs() < 1e-12);
        assert!((e1.sup_at(1000) / e1.sup_at(100) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_examples() {
        let g = CoefficientSource::sin_plus_cos2();
        let r = max_identity_check(&g, &IndexSequence::evens(), c(0.0, 0.0), 1.0, 2000).unwrap();
        assert!(r.rho_ok && r.tau_ok);
        let s = max_identity_check(&src("sin:lambda=1"), &IndexSequence::evens(), c(0.0, 0.0), 1.0, 2000).unwrap();
        assert_eq!(s.rho.nu, None);
        assert_eq!(s.rho.full, s.rho.mu);
        assert!(s.rho_ok && s.tau_ok);
        let e = max_identity_check(&src("exp"), &IndexSequence::Squares, c(0.3, 0.1), 1.0, 2000).unwrap();
        assert!(e.rho_ok && e.tau_ok);
    }

    #[test]
    fn csv_shape() {
        let e = theta_nu(&src("exp"), &IndexSequence::odds(), c(0.0, 0.0), KWindow::new(2, 3).unwrap()).unwrap();
        assert_eq!(e.series_csv().lines().next(), Some("k,n_k,term"));
        assert_eq!(e.series_csv().lines().count(), 3);
    }
}
