//! Order and type estimators.
//!
//! Two routes are provided for each quantity:
//!
//! - from the coefficients, `ρ = limsup n ln n / (−ln|a_n|)` and
//!   `τ = (1/(eρ)) limsup n |a_n|^{ρ/n}`, with the limsup replaced by a
//!   supremum over a finite index window (`[N/2, N]` by default);
//! - from the sharp majorant `g♯(r) = Σ |a_n| rⁿ`, which has the same order
//!   and type as `g` and equals its own maximum modulus on `|z| = r`.
//!
//! The window supremum converges slowly (the relative bias decays like
//! `1/ln n`), so [`order_regression`] fits `ln|a_n|` against
//! `{n ln n, n, 1}` instead.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSource;
use crate::numeric::least_squares;
use crate::xarith::XReal;
use crate::{ext_float, GrowthError, Result};

/// Closed index window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: u64,
    pub hi: u64,
}

impl Window {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(GrowthError::BadParam(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// `[N/2, N]`.
    pub fn trailing_half(n: u64) -> Self {
        Self { lo: n / 2, hi: n }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    WindowSup,
    Regression,
    MaxModulus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    #[serde(with = "ext_float")]
    pub value: f64,
    pub window: (u64, u64),
    pub method: Method,
    #[serde(skip)]
    pub series: Vec<(u64, f64)>,
    pub bias_note: String,
    /// Indices omitted because `−ln|a_n| ≤ 0`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped_nonpositive: Vec<u64>,
    /// Set when the estimate kept growing across nested windows.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub growth_flag: Option<bool>,
}

impl GrowthEstimate {
    /// Diagnostic series as CSV with header `n,term`.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("n,term\n");
        for (n, t) in &self.series {
            out.push_str(&format!("{n},{t}\n"));
        }
        out
    }
}

fn window_max(series: &[(u64, f64)]) -> f64 {
    series.iter().map(|(_, t)| *t).fold(f64::NEG_INFINITY, f64::max)
}

fn check_window(window: Window) -> Result<()> {
    if window.lo < 2 {
        return Err(GrowthError::BadParam(format!("window must lie in [2, inf), got [{}, {}]", window.lo, window.hi)));
    }
    Window::new(window.lo, window.hi).map(|_| ())
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(GrowthError::RhoOutOfRange(rho))
    }
}

/// Order term `n ln n / (−L)`; `None` when it has to be skipped.
pub(crate) fn order_term(n: u64, log_abs: f64) -> Option<f64> {
    if log_abs == f64::NEG_INFINITY || -log_abs <= 0.0 {
        return None;
    }
    let nf = n as f64;
    Some(nf * nf.ln() / -log_abs)
}

/// Type term `(1/(eρ)) · n · |a_n|^{ρ/n}` evaluated in log space.
pub(crate) fn type_term(n: u64, rho: f64, log_abs: f64) -> f64 {
    if log_abs == f64::NEG_INFINITY {
        return 0.0;
    }
    let nf = n as f64;
    (nf.ln() + (rho / nf) * log_abs).exp() / (E * rho)
}

/// Window supremum of `n ln n / (−ln|a_n|)`.
pub fn order_from_coeffs(src: &CoefficientSource, window: Window) -> Result<GrowthEstimate> {
    check_window(window)?;
    let mut series = Vec::new();
    let mut skipped = Vec::new();
    for n in window.indices() {
        let l = src.log_abs_coeff(n);
        if l == f64::NEG_INFINITY {
            continue;
        }
        match order_term(n, l) {
            Some(t) => series.push((n, t)),
            None => skipped.push(n),
        }
    }
    if series.is_empty() {
        return Err(GrowthError::EmptyWindow(window.lo, window.hi));
    }
    Ok(GrowthEstimate {
        value: window_max(&series),
        window: (window.lo, window.hi),
        method: Method::WindowSup,
        series,
        bias_note: "window supremum of n ln n / (-ln|a_n|); biased above the order by O(1/ln n)".into(),
        skipped_nonpositive: skipped,
        growth_flag: None,
    })
}

/// Least-squares fit of `ln|a_n| ≈ c₁ n ln n + c₂ n + c₃`; order `−1/c₁`.
pub fn order_regression(src: &CoefficientSource, window: Window) -> Result<GrowthEstimate> {
    check_window(window)?;
    let points: Vec<(u64, f64)> = window
        .indices()
        .filter_map(|n| {
            let l = src.log_abs_coeff(n);
            l.is_finite().then_some((n, l))
        })
        .collect();
    order_regression_from_logs(&points, window)
}

/// [`order_regression`] on explicit `(n, ln|a_n|)` pairs.
pub fn order_regression_from_logs(points: &[(u64, f64)], window: Window) -> Result<GrowthEstimate> {
    if points.len() < 8 {
        return Err(GrowthError::DegenerateFit(format!("{} nonzero coefficients, need 8", points.len())));
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|(n, _)| {
            let nf = *n as f64;
            vec![nf * nf.ln(), nf, 1.0]
        })
        .collect();
    let rhs: Vec<f64> = points.iter().map(|(_, l)| *l).collect();
    let sol = least_squares(&rows, &rhs).ok_or_else(|| GrowthError::DegenerateFit("rank-deficient design".into()))?;
    let slope = sol[0];
    if !(slope < 0.0) {
        return Err(GrowthError::DegenerateFit(format!("n ln n slope {slope} is not negative")));
    }
    let series = points
        .iter()
        .zip(&rows)
        .map(|((n, l), row)| (*n, l - (sol[0] * row[0] + sol[1] * row[1] + sol[2])))
        .collect();
    Ok(GrowthEstimate {
        value: -1.0 / slope,
        window: (window.lo, window.hi),
        method: Method::Regression,
        series,
        bias_note: "fit of ln|a_n| on {n ln n, n, 1}; series holds residuals".into(),
        skipped_nonpositive: Vec::new(),
        growth_flag: None,
    })
}

/// Window supremum of `(1/(eρ)) n |a_n|^{ρ/n}`.
pub fn type_from_coeffs(src: &CoefficientSource, rho: f64, window: Window) -> Result<GrowthEstimate> {
    check_rho(rho)?;
    check_window(window)?;
    let series: Vec<(u64, f64)> = window
        .indices()
        .filter_map(|n| {
            let l = src.log_abs_coeff(n);
            (l != f64::NEG_INFINITY).then(|| (n, type_term(n, rho, l)))
        })
        .collect();
    if series.is_empty() {
        return Err(GrowthError::EmptyWindow(window.lo, window.hi));
    }
    Ok(GrowthEstimate {
        value: window_max(&series),
        window: (window.lo, window.hi),
        method: Method::WindowSup,
        series,
        bias_note: format!("window supremum of n|a_n|^(rho/n)/(e rho) with rho = {rho} supplied by the caller"),
        skipped_nonpositive: Vec::new(),
        growth_flag: None,
    })
}

/// Relative growth between nested windows above which the type is flagged
/// as diverging.
pub const TYPE_GROWTH_RATIO: f64 = 1.05;

/// [`type_from_coeffs`] on `[N/2, N]`, flagged when it exceeds the value on
/// `[N/4, N/2]` by more than [`TYPE_GROWTH_RATIO`].
pub fn type_with_growth_flag(src: &CoefficientSource, rho: f64, n: u64) -> Result<GrowthEstimate> {
    let outer = type_from_coeffs(src, rho, Window::trailing_half(n))?;
    let inner = type_from_coeffs(src, rho, Window::new((n / 4).max(2), (n / 2).max(2))?)?;
    Ok(GrowthEstimate { growth_flag: Some(outer.value > inner.value * TYPE_GROWTH_RATIO), ..outer })
}

/// Positive series summed in `XReal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpSum {
    pub value: XReal,
    /// The last [`STAGNATION_RUN`] terms each added less than `1e-16` relative.
    pub stagnant: bool,
    pub terms: usize,
}

pub const STAGNATION_RUN: usize = 20;
const STAGNATION_REL: f64 = 1e-16;
const MAX_SERIES_TERMS: usize = 20_000_000;

/// Sums `exp(log_term(m))` for `m = 0..=last` in order.
pub(crate) fn sum_log_terms(last: usize, log_term: impl Fn(u64) -> f64) -> SharpSum {
    let mut acc = XReal::ZERO;
    let mut run = 0;
    for m in 0..=last as u64 {
        let t = XReal::from_log(log_term(m));
        if t < acc.mul_f64(STAGNATION_REL) || t.is_zero() && !acc.is_zero() {
            run += 1;
        } else {
            run = 0;
        }
        acc = acc + t;
    }
    SharpSum { value: acc, stagnant: run >= STAGNATION_RUN, terms: last + 1 }
}

/// Sums until [`STAGNATION_RUN`] consecutive negligible terms (or `limit` terms).
pub(crate) fn sum_log_terms_converged(log_term: impl Fn(u64) -> f64, limit: Option<usize>) -> SharpSum {
    let mut acc = XReal::ZERO;
    let mut run = 0;
    let cap = limit.unwrap_or(MAX_SERIES_TERMS);
    let mut m = 0u64;
    while (m as usize) < cap {
        let t = XReal::from_log(log_term(m));
        if t < acc.mul_f64(STAGNATION_REL) || t.is_zero() && !acc.is_zero() {
            run += 1;
        } else {
            run = 0;
        }
        acc = acc + t;
        m += 1;
        if run >= STAGNATION_RUN {
            break;
        }
    }
    SharpSum { value: acc, stagnant: run >= STAGNATION_RUN || limit.is_some_and(|l| m as usize >= l), terms: m as usize }
}

fn sharp_log_term(src: &CoefficientSource, ln_r: f64, n: u64) -> f64 {
    let l = src.log_abs_coeff(n);
    if l == f64::NEG_INFINITY {
        return l;
    }
    if n == 0 {
        l
    } else {
        l + n as f64 * ln_r
    }
}

/// `g♯(r)` truncated at index `n_max`.
pub fn sharp_value(src: &CoefficientSource, r: f64, n_max: usize) -> SharpSum {
    let ln_r = r.ln();
    sum_log_terms(n_max, |n| sharp_log_term(src, ln_r, n))
}

/// `g♯(r)` summed to stagnation.
pub fn sharp_value_converged(src: &CoefficientSource, r: f64) -> SharpSum {
    let ln_r = r.ln();
    sum_log_terms_converged(|n| sharp_log_term(src, ln_r, n), src.degree().map(|d| d as usize + 1))
}

/// Smallest accepted `r_max / r_min`.
pub const MIN_GRID_SPAN: f64 = 8.0;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 4 {
        return Err(GrowthError::GridTooSmall(format!("{} radii, need at least 4", grid.len())));
    }
    if grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GrowthError::GridTooSmall("radii must be positive and strictly increasing".into()));
    }
    if grid[grid.len() - 1] / grid[0] < MIN_GRID_SPAN {
        return Err(GrowthError::GridTooSmall(format!("grid must span a factor of at least {MIN_GRID_SPAN}")));
    }
    Ok(())
}

/// Slope of `ln ln g♯(r)` against `ln r` over the grid points with `g♯(r) > e`.
pub fn order_from_max_modulus(src: &CoefficientSource, grid: &[f64]) -> Result<GrowthEstimate> {
    check_grid(grid)?;
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|r| {
            let ln_m = sharp_value_converged(src, *r).value.log();
            (ln_m > 1.0).then(|| (r.ln(), ln_m.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Err(GrowthError::NotInAsymptoticRegime);
    }
    let rows: Vec<Vec<f64>> = pts.iter().map(|(x, _)| vec![*x, 1.0]).collect();
    let rhs: Vec<f64> = pts.iter().map(|(_, y)| *y).collect();
    let sol = least_squares(&rows, &rhs).ok_or_else(|| GrowthError::DegenerateFit("flat radius grid".into()))?;
    Ok(GrowthEstimate {
        value: sol[0],
        window: (0, 0),
        method: Method::MaxModulus,
        series: Vec::new(),
        bias_note: format!(
            "slope of ln ln g#(r) vs ln r over r in [{}, {}] ({} usable radii)",
            grid[0],
            grid[grid.len() - 1],
            pts.len()
        ),
        skipped_nonpositive: Vec::new(),
        growth_flag: None,
    })
}

/// `max_r ln g♯(r) / r^ρ` over the grid; `growth_flag` reports whether the
/// ratio still rises at the two largest radii.
pub fn type_from_max_modulus(src: &CoefficientSource, rho: f64, grid: &[f64]) -> Result<GrowthEstimate> {
    check_rho(rho)?;
    check_grid(grid)?;
    let ratios: Vec<f64> = grid
        .iter()
        .map(|r| sharp_value_converged(src, *r).value.log() / r.powf(rho))
        .collect();
    if grid.iter().all(|r| sharp_value_converged(src, *r).value.log() <= 1.0) {
        return Err(GrowthError::NotInAsymptoticRegime);
    }
    let k = ratios.len();
    Ok(GrowthEstimate {
        value: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        window: (0, 0),
        method: Method::MaxModulus,
        series: Vec::new(),
        bias_note: format!("max over radius grid of ln g#(r)/r^rho with rho = {rho}"),
        skipped_nonpositive: Vec::new(),
        growth_flag: Some(ratios[k - 1] > ratios[k - 2]),
    })
}

/// Five radii, ratio 2 apart, starting where `r^ρ = 400`.
pub fn default_radius_grid(order_hint: f64) -> Vec<f64> {
    let rho = if order_hint.is_finite() && order_hint > 0.0 { order_hint } else { 1.0 };
    let r_min = 400f64.powf(1.0 / rho).max(4.0);
    (0..5).map(|i| r_min * 2f64.powi(i)).collect()
}

/// `θ = e^{1 − 1/ρ}` with its order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub theta: f64,
    #[serde(with = "ext_float")]
    pub rho: f64,
}

pub fn theta_of_rho(rho: f64) -> Result<ThetaValue> {
    if rho.is_nan() || rho < 0.0 {
        return Err(GrowthError::DomainError(format!("rho = {rho} is outside [0, inf]")));
    }
    let theta = if rho == 0.0 {
        0.0
    } else if rho.is_infinite() {
        E
    } else {
        (1.0 - 1.0 / rho).exp()
    };
    Ok(ThetaValue { theta, rho })
}

pub fn rho_of_theta(theta: f64) -> Result<f64> {
    if theta.is_nan() || !(0.0..=E).contains(&theta) {
        return Err(GrowthError::DomainError(format!("theta = {theta} is outside [0, e]")));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    if theta == E {
        return Ok(f64::INFINITY);
    }
    let rho = 1.0 / (1.0 - theta.ln());
    Ok(if rho > 0.0 { rho } else { f64::INFINITY })
}

/// `(n, n |a_n|^{ρ'/n})` over the nonzero coefficients with `1 ≤ n ≤ k`.
pub fn scaled_tail_profile(src: &CoefficientSource, rho_prime: f64, k: u64) -> Result<Vec<(u64, f64)>> {
    if !(rho_prime > 0.0 && rho_prime.is_finite()) {
        return Err(GrowthError::BadParam(format!("rho' must be in (0, inf), got {rho_prime}")));
    }
    Ok((1..=k)
        .filter_map(|n| {
            let l = src.log_abs_coeff(n);
            let nf = n as f64;
            (l != f64::NEG_INFINITY).then(|| (n, (nf.ln() + (rho_prime / nf) * l).exp()))
        })
        .collect())
}

/// Which indices attain the window suprema of the order and type terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainmentReport {
    pub window: (u64, u64),
    pub tol: f64,
    pub order_sup: f64,
    pub type_sup: f64,
    pub order_attaining: Vec<u64>,
    pub type_attaining: Vec<u64>,
    /// `type_attaining ⊆ order_attaining`; `None` when the type supremum is
    /// not bounded away from zero (minimal type at this truncation).
    pub inclusion_holds: Option<bool>,
}

/// Type window suprema below this count as zero for the inclusion verdict.
pub const TYPE_SUP_FLOOR: f64 = 1e-3;

/// Attainment sets over `[K/2, K]`: indices whose term is within `tol` of
/// the window supremum.
pub fn attainment_analysis(src: &CoefficientSource, rho: f64, k: u64, tol: f64) -> Result<AttainmentReport> {
    check_rho(rho)?;
    let window = Window::trailing_half(k);
    check_window(window)?;
    let order = order_from_coeffs(src, window)?;
    let tau = type_from_coeffs(src, rho, window)?;
    let attaining = |est: &GrowthEstimate| -> Vec<u64> {
        est.series.iter().filter(|(_, t)| *t >= est.value - tol).map(|(n, _)| *n).collect()
    };
    let order_attaining = attaining(&order);
    let type_attaining = attaining(&tau);
    let inclusion_holds = (tau.value > TYPE_SUP_FLOOR).then(|| {
        type_attaining.iter().all(|n| order_attaining.binary_search(n).is_ok())
    });
    Ok(AttainmentReport {
        window: (window.lo, window.hi),
        tol,
        order_sup: order.value,
        type_sup: tau.value,
        order_attaining,
        type_attaining,
        inclusion_holds,
    })
}
