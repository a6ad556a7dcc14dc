//! Entire functions as coefficient sources, and index sequences.
//!
//! A [`CoefficientSource`] answers `a_n` as an [`XComplex`], `ln|a_n|` from a
//! closed form where one exists, and (for the trigonometric/exponential
//! entries) the derivatives `g⁽ⁿ⁾(z)` in closed form. Zero coefficients are
//! first-class: `coeff(n)` is canonical zero and `log_abs_coeff(n)` is `-∞`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::recenter::{recentered_coeff, RecenterPolicy};
use crate::xarith::{XComplex, XReal};
use crate::{ext_float, format_complex, ln_factorial, ln_gamma, parse_complex, GrowthError, Result};

/// Relative distance to an integer below which `λz/π` counts as an exact
/// zero of `sin(λz)`. Covers the representation error of `π` in `f64`
/// plus a few roundings.
pub const ZERO_SNAP: f64 = 1e-13;

/// Classification of the type of an entire function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TypeClass {
    /// Order is 0 or ∞.
    Undefined,
    Minimal,
    Finite(f64),
    Maximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    #[serde(with = "ext_float")]
    pub order: f64,
    #[serde(rename = "type")]
    pub type_class: TypeClass,
}

impl GroundTruth {
    pub fn new(order: f64, type_class: TypeClass) -> Result<Self> {
        let finite_order = order > 0.0 && order.is_finite();
        if order.is_nan() || order < 0.0 {
            return Err(GrowthError::BadParam(format!("order {order} must be in [0, inf]")));
        }
        if finite_order == matches!(type_class, TypeClass::Undefined) {
            return Err(GrowthError::BadParam(
                "type is defined exactly when 0 < order < inf".into(),
            ));
        }
        Ok(Self { order, type_class })
    }

    pub fn finite(order: f64, tau: f64) -> Self {
        Self { order, type_class: TypeClass::Finite(tau) }
    }

    /// Numeric type when finite.
    pub fn tau(&self) -> Option<f64> {
        match self.type_class {
            TypeClass::Finite(t) => Some(t),
            TypeClass::Minimal => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Debug)]
enum Repr {
    Zero,
    Exp { lambda: Complex64 },
    Sin { lambda: Complex64 },
    Cos { lambda: Complex64 },
    ExpZk { k: u64 },
    MittagLeffler { alpha: f64 },
    PowerType { rho: f64 },
    MinimalType { rho: f64 },
    MaximalType { rho: f64 },
    Polynomial(Vec<Complex64>),
    Sum(CoefficientSource, CoefficientSource),
    ParityMasked { even: CoefficientSource, odd: CoefficientSource },
    Sharp(CoefficientSource),
    Derivative { inner: CoefficientSource, order: u64 },
    Recentered { inner: CoefficientSource, zeta: Complex64, policy: RecenterPolicy },
}

/// An entire function `g(z) = Σ a_n zⁿ` given through its coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientSource {
    id: String,
    repr: Arc<Repr>,
    ground_truth: Option<GroundTruth>,
}

fn unit_of(lambda: Complex64) -> Complex64 {
    lambda / lambda.norm()
}

fn unit_pow(u: Complex64, n: u64) -> Complex64 {
    let mut base = u;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
            acc /= acc.norm();
        }
        base *= base;
        base /= base.norm();
        e >>= 1;
    }
    acc
}

/// `sin(π w)` with exact zeros when `w` is an integer up to [`ZERO_SNAP`].
pub(crate) fn sin_pi_snapped(w: Complex64) -> Option<Complex64> {
    let nearest = w.re.round();
    if w.im.abs() <= ZERO_SNAP * w.norm().max(1.0)
        && (w.re - nearest).abs() <= ZERO_SNAP * w.re.abs().max(1.0)
    {
        return None;
    }
    let reduced = w.re - 2.0 * (w.re / 2.0).round();
    Some((Complex64::new(reduced, w.im) * PI).sin())
}

fn lambda_power(lambda: Complex64, n: u64) -> XComplex {
    XComplex::from_log_polar(n as f64 * lambda.norm().ln(), unit_pow(unit_of(lambda), n))
}

impl CoefficientSource {
    fn build(id: impl Into<String>, repr: Repr, ground_truth: Option<GroundTruth>) -> Self {
        Self { id: id.into(), repr: Arc::new(repr), ground_truth }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn ground_truth(&self) -> Option<GroundTruth> {
        self.ground_truth
    }

    pub fn with_ground_truth(mut self, gt: Option<GroundTruth>) -> Self {
        self.ground_truth = gt;
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn zero() -> Self {
        Self::build("zero", Repr::Zero, Some(GroundTruth { order: 0.0, type_class: TypeClass::Undefined }))
    }

    pub fn exp(lambda: Complex64) -> Result<Self> {
        nonzero_lambda(lambda)?;
        let id = if lambda == Complex64::new(1.0, 0.0) {
            "exp".to_string()
        } else {
            format!("exp:lambda={}", format_complex(lambda))
        };
        Ok(Self::build(id, Repr::Exp { lambda }, Some(GroundTruth::finite(1.0, lambda.norm()))))
    }

    pub fn sin(lambda: Complex64) -> Result<Self> {
        nonzero_lambda(lambda)?;
        Ok(Self::build(
            format!("sin:lambda={}", format_complex(lambda)),
            Repr::Sin { lambda },
            Some(GroundTruth::finite(1.0, lambda.norm())),
        ))
    }

    pub fn cos(lambda: Complex64) -> Result<Self> {
        nonzero_lambda(lambda)?;
        Ok(Self::build(
            format!("cos:lambda={}", format_complex(lambda)),
            Repr::Cos { lambda },
            Some(GroundTruth::finite(1.0, lambda.norm())),
        ))
    }

    /// `exp(z^k)`.
    pub fn exp_zk(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(GrowthError::BadParam("exp_zk needs k >= 1".into()));
        }
        Ok(Self::build(format!("exp_zk:k={k}"), Repr::ExpZk { k }, Some(GroundTruth::finite(k as f64, 1.0))))
    }

    /// `E_α(z) = Σ zⁿ / Γ(αn + 1)`.
    pub fn mittag_leffler(alpha: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        Ok(Self::build(
            format!("mittag_leffler:alpha={alpha}"),
            Repr::MittagLeffler { alpha },
            Some(GroundTruth::finite(1.0 / alpha, 1.0)),
        ))
    }

    /// `ln|a_n| = −(n/ρ) ln n`: order ρ, type 1/(eρ).
    pub fn power_type(rho: f64) -> Result<Self> {
        positive("rho", rho)?;
        Ok(Self::build(
            format!("power_type:rho={rho}"),
            Repr::PowerType { rho },
            Some(GroundTruth::finite(rho, 1.0 / (E * rho))),
        ))
    }

    /// `ln|a_n| = −(n/ρ) ln(n ln n)` for `n ≥ 2`: order ρ, minimal type.
    pub fn minimal_type(rho: f64) -> Result<Self> {
        positive("rho", rho)?;
        Ok(Self::build(
            format!("minimal_type:rho={rho}"),
            Repr::MinimalType { rho },
            Some(GroundTruth { order: rho, type_class: TypeClass::Minimal }),
        ))
    }

    /// `ln|a_n| = −(n/ρ) ln(n / ln n)` for `n ≥ 3`: order ρ, maximal type.
    pub fn maximal_type(rho: f64) -> Result<Self> {
        positive("rho", rho)?;
        Ok(Self::build(
            format!("maximal_type:rho={rho}"),
            Repr::MaximalType { rho },
            Some(GroundTruth { order: rho, type_class: TypeClass::Maximal }),
        ))
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        let id = format!(
            "polynomial:coeffs={}",
            coeffs.iter().map(|c| format_complex(*c)).collect::<Vec<_>>().join(";")
        );
        Self::build(
            id,
            Repr::Polynomial(coeffs),
            Some(GroundTruth { order: 0.0, type_class: TypeClass::Undefined }),
        )
    }

    /// `sin z + cos 2z`: order 1, type 2.
    pub fn sin_plus_cos2() -> Self {
        let s = Self::sin(Complex64::new(1.0, 0.0)).expect("valid lambda");
        let c = Self::cos(Complex64::new(2.0, 0.0)).expect("valid lambda");
        source_sum(&s, &c)
            .with_id("sin_plus_cos2")
            .with_ground_truth(Some(GroundTruth::finite(1.0, 2.0)))
    }

    /// Even coefficients from `even`, odd coefficients from `odd`.
    pub fn parity_masked(even: &CoefficientSource, odd: &CoefficientSource) -> Self {
        Self::build(
            format!("parity({}|{})", even.id, odd.id),
            Repr::ParityMasked { even: even.clone(), odd: odd.clone() },
            None,
        )
    }

    /// Even part of minimal type of order ρ plus odd part of order ρ/2:
    /// order ρ, minimal type, with the order limsup not attained on odds.
    pub fn parity_mix(rho: f64) -> Result<Self> {
        positive("rho", rho)?;
        let s = Self::parity_masked(&Self::minimal_type(rho)?, &Self::power_type(rho / 2.0)?);
        Ok(s.with_id(format!("parity_mix:rho={rho}"))
            .with_ground_truth(Some(GroundTruth { order: rho, type_class: TypeClass::Minimal })))
    }

    /// The sharp majorant `g♯` with coefficients `|a_n|`.
    pub fn sharp(&self) -> Self {
        Self::build(format!("sharp({})", self.id), Repr::Sharp(self.clone()), self.ground_truth)
    }

    /// `g⁽ᵈ⁾` with coefficients `(m+d)!/m! · a_{m+d}`.
    pub fn derivative(&self, order: u64) -> Self {
        if order == 0 {
            return self.clone();
        }
        Self::build(
            format!("d{order}({})", self.id),
            Repr::Derivative { inner: self.clone(), order },
            self.ground_truth,
        )
    }

    /// `g(z + ζ)` with coefficients `a_n(ζ)` computed by Taylor shift.
    pub fn recentered(&self, zeta: Complex64, policy: RecenterPolicy) -> Self {
        Self::build(
            format!("shift({}, {})", self.id, format_complex(zeta)),
            Repr::Recentered { inner: self.clone(), zeta, policy },
            self.ground_truth,
        )
    }

    /// `a_n`.
    pub fn coeff(&self, n: u64) -> XComplex {
        match &*self.repr {
            Repr::Zero => XComplex::ZERO,
            Repr::Exp { lambda } => {
                XComplex::from_log_polar(self.log_abs_coeff(n), unit_pow(unit_of(*lambda), n))
            }
            Repr::Sin { lambda } => {
                if n % 2 == 0 {
                    return XComplex::ZERO;
                }
                let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
                XComplex::from_log_polar(self.log_abs_coeff(n), unit_pow(unit_of(*lambda), n) * sign)
            }
            Repr::Cos { lambda } => {
                if n % 2 == 1 {
                    return XComplex::ZERO;
                }
                let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
                XComplex::from_log_polar(self.log_abs_coeff(n), unit_pow(unit_of(*lambda), n) * sign)
            }
            Repr::ExpZk { .. }
            | Repr::MittagLeffler { .. }
            | Repr::PowerType { .. }
            | Repr::MinimalType { .. }
            | Repr::MaximalType { .. }
            | Repr::Sharp(_) => XComplex::from_log_polar(self.log_abs_coeff(n), Complex64::new(1.0, 0.0)),
            Repr::Polynomial(c) => c.get(n as usize).map(|z| XComplex::from_complex(*z)).unwrap_or(XComplex::ZERO),
            Repr::Sum(a, b) => a.coeff(n) + b.coeff(n),
            Repr::ParityMasked { even, odd } => {
                if n % 2 == 0 {
                    even.coeff(n)
                } else {
                    odd.coeff(n)
                }
            }
            Repr::Derivative { inner, order } => {
                let m = n + order;
                let c = inner.coeff(m);
                c.mul_real(XReal::from_log(ln_factorial(m) - ln_factorial(n)))
            }
            Repr::Recentered { inner, zeta, policy } => recentered_coeff(inner, *zeta, n, policy).value,
        }
    }

    /// `ln|a_n|`, `-∞` for a zero coefficient.
    pub fn log_abs_coeff(&self, n: u64) -> f64 {
        let nf = n as f64;
        match &*self.repr {
            Repr::Zero => f64::NEG_INFINITY,
            Repr::Exp { lambda } => nf * lambda.norm().ln() - ln_factorial(n),
            Repr::Sin { lambda } => {
                if n % 2 == 0 {
                    f64::NEG_INFINITY
                } else {
                    nf * lambda.norm().ln() - ln_factorial(n)
                }
            }
            Repr::Cos { lambda } => {
                if n % 2 == 1 {
                    f64::NEG_INFINITY
                } else {
                    nf * lambda.norm().ln() - ln_factorial(n)
                }
            }
            Repr::ExpZk { k } => {
                if n % k == 0 {
                    -ln_factorial(n / k)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Repr::MittagLeffler { alpha } => -ln_gamma(alpha * nf + 1.0),
            Repr::PowerType { rho } => {
                if n == 0 {
                    0.0
                } else {
                    -(nf / rho) * nf.ln()
                }
            }
            Repr::MinimalType { rho } => match n {
                0 => 0.0,
                1 => f64::NEG_INFINITY,
                _ => -(nf / rho) * (nf * nf.ln()).ln(),
            },
            Repr::MaximalType { rho } => match n {
                0 => 0.0,
                1 | 2 => f64::NEG_INFINITY,
                _ => -(nf / rho) * (nf / nf.ln()).ln(),
            },
            Repr::Polynomial(_) | Repr::Recentered { .. } => self.coeff(n).log_abs(),
            Repr::Sum(a, b) => {
                let (la, lb) = (a.log_abs_coeff(n), b.log_abs_coeff(n));
                if la == f64::NEG_INFINITY {
                    lb
                } else if lb == f64::NEG_INFINITY {
                    la
                } else {
                    (a.coeff(n) + b.coeff(n)).log_abs()
                }
            }
            Repr::ParityMasked { even, odd } => {
                if n % 2 == 0 {
                    even.log_abs_coeff(n)
                } else {
                    odd.log_abs_coeff(n)
                }
            }
            Repr::Sharp(inner) => inner.log_abs_coeff(n),
            Repr::Derivative { inner, order } => {
                let m = n + order;
                let l = inner.log_abs_coeff(m);
                if l == f64::NEG_INFINITY {
                    l
                } else {
                    l + ln_factorial(m) - ln_factorial(n)
                }
            }
        }
    }

    /// Whether [`derivative_exact`](Self::derivative_exact) is available.
    pub fn has_exact_derivative(&self) -> bool {
        match &*self.repr {
            Repr::Zero | Repr::Exp { .. } | Repr::Sin { .. } | Repr::Cos { .. } => true,
            Repr::Sum(a, b) => a.has_exact_derivative() && b.has_exact_derivative(),
            Repr::Derivative { inner, .. } | Repr::Recentered { inner, .. } => inner.has_exact_derivative(),
            _ => false,
        }
    }

    /// Closed-form `g⁽ⁿ⁾(z)`; canonical zero marks a provable zero.
    pub fn derivative_exact(&self, z: Complex64, n: u64) -> Option<XComplex> {
        match &*self.repr {
            Repr::Zero => Some(XComplex::ZERO),
            Repr::Exp { lambda } => {
                let lz = lambda * z;
                let unit = unit_pow(unit_of(*lambda), n) * Complex64::new(0.0, lz.im).exp();
                Some(XComplex::from_log_polar(n as f64 * lambda.norm().ln() + lz.re, unit))
            }
            Repr::Sin { lambda } => {
                let w = lambda * z / PI + (n % 4) as f64 / 2.0;
                Some(match sin_pi_snapped(w) {
                    None => XComplex::ZERO,
                    Some(s) => lambda_power(*lambda, n) * XComplex::from_complex(s),
                })
            }
            Repr::Cos { lambda } => {
                let w = lambda * z / PI + ((n + 1) % 4) as f64 / 2.0;
                Some(match sin_pi_snapped(w) {
                    None => XComplex::ZERO,
                    Some(s) => lambda_power(*lambda, n) * XComplex::from_complex(s),
                })
            }
            Repr::Sum(a, b) => Some(a.derivative_exact(z, n)? + b.derivative_exact(z, n)?),
            Repr::Derivative { inner, order } => inner.derivative_exact(z, n + order),
            Repr::Recentered { inner, zeta, .. } => inner.derivative_exact(z + zeta, n),
            _ => None,
        }
    }

    /// Degree when the source is a polynomial, `None` for transcendental sources.
    pub fn degree(&self) -> Option<u64> {
        match &*self.repr {
            Repr::Zero => Some(0),
            Repr::Polynomial(c) => Some(c.iter().rposition(|z| z.norm() != 0.0).unwrap_or(0) as u64),
            Repr::Sum(a, b) => Some(a.degree()?.max(b.degree()?)),
            Repr::ParityMasked { even, odd } => Some(even.degree()?.max(odd.degree()?)),
            Repr::Sharp(inner) | Repr::Recentered { inner, .. } => inner.degree(),
            Repr::Derivative { inner, order } => Some(inner.degree()?.saturating_sub(*order)),
            _ => None,
        }
    }

    /// Ratio `ln|a_n| / n` over the nonzero coefficients in `[n_lo, n_hi]`,
    /// which must drift to `-∞` for an entire function.
    pub fn entirety_diagnostic(&self, n_lo: u64, n_hi: u64) -> Vec<(u64, f64)> {
        (n_lo.max(1)..=n_hi)
            .filter_map(|n| {
                let l = self.log_abs_coeff(n);
                l.is_finite().then(|| (n, l / n as f64))
            })
            .collect()
    }
}

fn nonzero_lambda(lambda: Complex64) -> Result<()> {
    if lambda.norm() == 0.0 || !lambda.norm().is_finite() {
        return Err(GrowthError::BadParam(format!("lambda must be nonzero and finite, got {lambda}")));
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(GrowthError::BadParam(format!("{name} must be in (0, inf), got {x}")));
    }
    Ok(())
}

/// Coefficientwise sum; ground truth must be attached by the caller.
pub fn source_sum(a: &CoefficientSource, b: &CoefficientSource) -> CoefficientSource {
    CoefficientSource::build(format!("{}+{}", a.id, b.id), Repr::Sum(a.clone(), b.clone()), None)
}

/// One entry of the catalog listing.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: &'static str,
    pub order: &'static str,
    #[serde(rename = "type")]
    pub type_desc: &'static str,
    pub exact_derivative: bool,
}

pub fn catalog_listing() -> Vec<CatalogEntry> {
    let e = |id, params, order, type_desc, exact_derivative| CatalogEntry { id, params, order, type_desc, exact_derivative };
    vec![
        e("exp", "lambda (default 1)", "1", "|lambda|", true),
        e("sin", "lambda", "1", "|lambda|", true),
        e("cos", "lambda", "1", "|lambda|", true),
        e("exp_zk", "k >= 1", "k", "1", false),
        e("mittag_leffler", "alpha > 0", "1/alpha", "1", false),
        e("power_type", "rho > 0", "rho", "1/(e rho)", false),
        e("minimal_type", "rho > 0", "rho", "minimal", false),
        e("maximal_type", "rho > 0", "rho", "maximal", false),
        e("polynomial", "coeffs (a0;a1;...)", "0", "undefined", false),
        e("sin_plus_cos2", "", "1", "2", true),
        e("parity_mix", "rho > 0", "rho", "minimal", false),
    ]
}

fn split_params(s: &str) -> Result<Vec<(String, String)>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| GrowthError::BadParam(format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn real_param(params: &[(String, String)], key: &str) -> Result<f64> {
    let v = param(params, key).ok_or_else(|| GrowthError::BadParam(format!("missing parameter `{key}`")))?;
    v.parse::<f64>().map_err(|_| GrowthError::BadParam(format!("`{key}` is not a number: `{v}`")))
}

fn check_keys(params: &[(String, String)], allowed: &[&str]) -> Result<()> {
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(GrowthError::BadParam(format!("unexpected parameter `{k}`")));
        }
    }
    Ok(())
}

/// Resolves a catalog spec such as `sin:lambda=2` or `maximal_type:rho=1`.
pub fn catalog(spec: &str) -> Result<CoefficientSource> {
    let (id, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let id = id.trim();
    // polynomial coefficients use `;` so that `,` stays the key separator
    let params = split_params(rest)?;
    match id {
        "exp" => {
            check_keys(&params, &["lambda"])?;
            let lambda = param(&params, "lambda").map(parse_complex).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
            CoefficientSource::exp(lambda)
        }
        "sin" | "cos" => {
            check_keys(&params, &["lambda"])?;
            let lambda = param(&params, "lambda")
                .ok_or_else(|| GrowthError::BadParam("missing parameter `lambda`".into()))
                .and_then(parse_complex)?;
            if id == "sin" {
                CoefficientSource::sin(lambda)
            } else {
                CoefficientSource::cos(lambda)
            }
        }
        "exp_zk" => {
            check_keys(&params, &["k"])?;
            let k = real_param(&params, "k")?;
            if k < 1.0 || k.fract() != 0.0 {
                return Err(GrowthError::BadParam(format!("k must be a positive integer, got {k}")));
            }
            CoefficientSource::exp_zk(k as u64)
        }
        "mittag_leffler" => {
            check_keys(&params, &["alpha"])?;
            CoefficientSource::mittag_leffler(real_param(&params, "alpha")?)
        }
        "power_type" | "minimal_type" | "maximal_type" | "parity_mix" => {
            check_keys(&params, &["rho"])?;
            let rho = real_param(&params, "rho")?;
            match id {
                "power_type" => CoefficientSource::power_type(rho),
                "minimal_type" => CoefficientSource::minimal_type(rho),
                "maximal_type" => CoefficientSource::maximal_type(rho),
                _ => CoefficientSource::parity_mix(rho),
            }
        }
        "polynomial" => {
            check_keys(&params, &["coeffs"])?;
            let list = param(&params, "coeffs").ok_or_else(|| GrowthError::BadParam("missing parameter `coeffs`".into()))?;
            let coeffs = list.split(';').map(parse_complex).collect::<Result<Vec<_>>>()?;
            Ok(CoefficientSource::polynomial(coeffs))
        }
        "sin_plus_cos2" => {
            check_keys(&params, &[])?;
            Ok(CoefficientSource::sin_plus_cos2())
        }
        "zero" => Ok(CoefficientSource::zero()),
        other => Err(GrowthError::UnknownId(other.to_string())),
    }
}

/// Generator of a strictly increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSequence {
    /// `{n ≥ 1 : n ≡ r (mod q)}`.
    Arithmetic { q: u64, r: u64 },
    Squares,
    Primes,
    /// `{b, b², b³, …}`.
    Power { b: u64 },
    Explicit(Vec<u64>),
    Complement(Box<IndexSequence>),
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn prime_sieve(limit: u64) -> Vec<bool> {
    let n = limit as usize + 1;
    let mut is_p = vec![true; n.max(2)];
    is_p[0] = false;
    is_p[1] = false;
    let mut i = 2;
    while i * i < n {
        if is_p[i] {
            let mut j = i * i;
            while j < n {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_p.truncate(n);
    is_p
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl IndexSequence {
    pub fn arithmetic(q: u64, r: u64) -> Result<Self> {
        if q < 2 || r >= q {
            return Err(GrowthError::BadParam(format!("arithmetic sequence needs q >= 2 and 0 <= r < q, got q={q}, r={r}")));
        }
        Ok(Self::Arithmetic { q, r })
    }

    pub fn evens() -> Self {
        Self::Arithmetic { q: 2, r: 0 }
    }

    pub fn odds() -> Self {
        Self::Arithmetic { q: 2, r: 1 }
    }

    pub fn power(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(GrowthError::BadParam(format!("power sequence needs b >= 2, got {b}")));
        }
        Ok(Self::Power { b })
    }

    pub fn explicit(list: Vec<u64>) -> Result<Self> {
        if list.first() == Some(&0) || list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GrowthError::BadParam("explicit list must be strictly increasing positive integers".into()));
        }
        Ok(Self::Explicit(list))
    }

    /// Number of elements `≤ n`.
    pub fn rank(&self, n: u64) -> u64 {
        match self {
            Self::Arithmetic { q, r } => {
                if *r == 0 {
                    n / q
                } else if n < *r {
                    0
                } else {
                    (n - r) / q + 1
                }
            }
            Self::Squares => isqrt(n),
            Self::Primes => {
                if n < 2 {
                    0
                } else {
                    prime_sieve(n).iter().filter(|p| **p).count() as u64
                }
            }
            Self::Power { b } => {
                let mut count = 0;
                let mut p = *b;
                while p <= n {
                    count += 1;
                    match p.checked_mul(*b) {
                        Some(x) => p = x,
                        None => break,
                    }
                }
                count
            }
            Self::Explicit(list) => list.partition_point(|x| *x <= n) as u64,
            Self::Complement(inner) => n - inner.rank(n),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            Self::Arithmetic { q, r } => n % q == *r,
            Self::Squares => {
                let s = isqrt(n);
                s * s == n
            }
            Self::Primes => is_prime(n),
            Self::Power { b } => {
                let mut m = n;
                while m % b == 0 {
                    m /= b;
                }
                m == 1 && n > 1
            }
            Self::Explicit(list) => list.binary_search(&n).is_ok(),
            Self::Complement(inner) => !inner.contains(n),
        }
    }

    /// Whether the sequence has infinitely many terms.
    pub fn is_infinite(&self) -> bool {
        match self {
            Self::Explicit(_) => false,
            Self::Complement(inner) => inner.is_proper(),
            _ => true,
        }
    }

    /// Whether infinitely many positive integers are omitted.
    pub fn is_proper(&self) -> bool {
        match self {
            Self::Complement(inner) => inner.is_infinite(),
            _ => true,
        }
    }

    /// `n_k` (1-based); `None` past the end of a finite sequence.
    pub fn nth(&self, k: u64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        match self {
            Self::Arithmetic { q, r } => Some(if *r == 0 { q * k } else { r + q * (k - 1) }),
            Self::Squares => k.checked_mul(k),
            Self::Power { b } => b.checked_pow(u32::try_from(k).ok()?),
            Self::Explicit(list) => list.get(k as usize - 1).copied(),
            Self::Primes | Self::Complement(_) => {
                if !self.is_infinite() && self.rank(u64::MAX >> 1) < k {
                    return None;
                }
                let mut hi = 2 * k + 16;
                while self.rank(hi) < k {
                    hi *= 2;
                }
                let mut lo = 1;
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if self.rank(mid) >= k {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                Some(lo)
            }
        }
    }

    /// Elements of the sequence in `[lo, hi]`, increasing.
    pub fn elements_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        if hi < lo {
            return Vec::new();
        }
        match self {
            Self::Primes => {
                let sieve = prime_sieve(hi);
                (lo..=hi).filter(|n| sieve[*n as usize]).collect()
            }
            Self::Explicit(list) => list.iter().copied().filter(|n| (lo..=hi).contains(n)).collect(),
            Self::Complement(inner) => {
                let taken = inner.elements_in(lo, hi);
                let mut it = taken.iter().peekable();
                (lo.max(1)..=hi)
                    .filter(|n| {
                        if it.peek() == Some(&n) {
                            it.next();
                            false
                        } else {
                            true
                        }
                    })
                    .collect()
            }
            _ => (lo.max(1)..=hi).filter(|n| self.contains(*n)).collect(),
        }
    }

    /// `(k_min, k_max)` with `n_k ∈ [lo, hi]`; `None` when no element falls there.
    pub fn k_range_for(&self, lo: u64, hi: u64) -> Option<(u64, u64)> {
        let k_min = self.rank(lo.saturating_sub(1)) + 1;
        let k_max = self.rank(hi);
        (k_min <= k_max).then_some((k_min, k_max))
    }

    /// Elements `n_k` for `k ∈ [k_min, k_max]`.
    pub fn elements_for_k(&self, k_min: u64, k_max: u64) -> Vec<u64> {
        if k_max < k_min || k_max == 0 {
            return Vec::new();
        }
        let lo = match self.nth(k_min.max(1)) {
            Some(x) => x,
            None => return Vec::new(),
        };
        let hi = match self.nth(k_max) {
            Some(x) => x,
            None => match self {
                Self::Explicit(list) => *list.last().unwrap_or(&lo),
                _ => return Vec::new(),
            },
        };
        self.elements_in(lo, hi)
    }
}

/// Complement of `ν`, checked to be non-empty up to `horizon`.
pub fn complement(nu: &IndexSequence, horizon: u64) -> Result<IndexSequence> {
    if !nu.is_proper() {
        return Err(GrowthError::NotProper(format!("{nu} omits only finitely many integers")));
    }
    let mu = match nu {
        IndexSequence::Complement(inner) => (**inner).clone(),
        other => IndexSequence::Complement(Box::new(other.clone())),
    };
    if mu.rank(horizon) == 0 {
        return Err(GrowthError::NotProper(format!("{nu} covers every integer up to {horizon}")));
    }
    Ok(mu)
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Arithmetic { q: 2, r: 0 } => write!(f, "even"),
            Self::Arithmetic { q: 2, r: 1 } => write!(f, "odd"),
            Self::Arithmetic { q, r } => write!(f, "arith:q={q},r={r}"),
            Self::Squares => write!(f, "squares"),
            Self::Primes => write!(f, "primes"),
            Self::Power { b } => write!(f, "power:b={b}"),
            Self::Explicit(list) => {
                write!(f, "list:{}", list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"))
            }
            Self::Complement(inner) => write!(f, "complement:{inner}"),
        }
    }
}

impl FromStr for IndexSequence {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "even" | "evens" => Ok(Self::evens()),
            "odd" | "odds" => Ok(Self::odds()),
            "squares" => Ok(Self::Squares),
            "primes" => Ok(Self::Primes),
            "power" => {
                let p = split_params(rest)?;
                check_keys(&p, &["b"])?;
                let b = real_param(&p, "b")?;
                Self::power(b as u64)
            }
            "arith" => {
                let p = split_params(rest)?;
                check_keys(&p, &["q", "r"])?;
                let q = real_param(&p, "q")? as u64;
                let r = param(&p, "r").map(|v| v.parse::<u64>()).transpose().map_err(|_| GrowthError::BadParam("bad r".into()))?;
                Self::arithmetic(q, r.unwrap_or(0))
            }
            "list" => {
                let list = rest
                    .split(';')
                    .map(|v| v.trim().parse::<u64>().map_err(|_| GrowthError::BadParam(format!("bad list entry `{v}`"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::explicit(list)
            }
            "complement" => Ok(match rest.parse()? {
                Self::Complement(inner) => *inner,
                inner => Self::Complement(Box::new(inner)),
            }),
            other => Err(GrowthError::BadParam(format!("unknown index sequence `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
}

/// Finite-prefix check of `n_{k+1}/n_k → 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubexponentialReport {
    pub max_tail_ratio: f64,
    pub trend: Trend,
    /// Set when the tail ratio stays bounded away from 1.
    pub exponential_flag: bool,
}

/// Tail ratios at or above this, without a decreasing trend, are flagged.
pub const EXPONENTIAL_RATIO: f64 = 1.5;

pub fn subexponential_diagnostic(nu: &IndexSequence, k: u64) -> Result<SubexponentialReport> {
    if k < 10 {
        return Err(GrowthError::BadParam(format!("diagnostic needs K >= 10, got {k}")));
    }
    let terms: Vec<f64> = (k / 2..=k + 1)
        .map(|j| nu.nth(j).map(|x| x as f64))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| GrowthError::BadParam(format!("sequence {nu} has fewer than {} terms", k + 1)))?;
    let ratios: Vec<f64> = terms.windows(2).map(|w| w[1] / w[0]).collect();
    let max_tail_ratio = ratios.iter().copied().fold(f64::MIN, f64::max);
    let half = ratios.len() / 2;
    let mean = |xs: &[f64]| xs.iter().map(|r| r - 1.0).sum::<f64>() / xs.len() as f64;
    let (first, second) = (mean(&ratios[..half]), mean(&ratios[half..]));
    let trend = if second < first * (1.0 - 1e-9) {
        Trend::Decreasing
    } else if second > first * (1.0 + 1e-9) {
        Trend::Increasing
    } else {
        Trend::Flat
    };
    Ok(SubexponentialReport {
        max_tail_ratio,
        trend,
        exponential_flag: max_tail_ratio >= EXPONENTIAL_RATIO && trend != Trend::Decreasing,
    })
}
