//! Extended-exponent complex and real scalars.
//!
//! A value is stored as an `f64` mantissa (complex or real) together with a
//! wide base-2 exponent. Non-zero values keep the mantissa magnitude in
//! `[1/2, 1)`, so quantities such as `λ^n / n!` for `n` in the tens of
//! thousands stay representable with ordinary double precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::LN_2;

/// Mantissa width plus guard bits. Operands further apart than this are
/// below rounding noise when added.
const ALIGN_LIMIT: i64 = 53 + 8;

/// Largest `|ln|x| / p|` for which [`XComplex::root_abs`] returns a plain `f64`.
pub const ROOT_EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum XArithError {
    #[error("root exponent {0} is outside the f64 range; keep working in log space")]
    OverflowDomain(f64),
}

fn ldexp(x: f64, e: i64) -> f64 {
    // Split so that intermediate scalings never saturate.
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x = libm::ldexp(x, 1000);
        e -= 1000;
    }
    while e < -1000 {
        x = libm::ldexp(x, -1000);
        e += 1000;
    }
    libm::ldexp(x, e as i32)
}

/// Complex number `(re + i·im)·2^exp2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XComplex {
    re: f64,
    im: f64,
    exp2: i64,
}

impl Default for XComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl XComplex {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0, exp2: 0 };
    pub const ONE: Self = Self { re: 0.5, im: 0.0, exp2: 1 };

    /// Builds `(re + i·im)·2^exp2` and normalizes it.
    pub fn new(re: f64, im: f64, exp2: i64) -> Self {
        Self { re, im, exp2 }.normalize()
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0.0, 0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0)
    }

    /// `exp(log_abs)·unit` where `unit` is any non-zero complex giving the phase.
    /// `log_abs = -∞` yields canonical zero.
    pub fn from_log_polar(log_abs: f64, unit: Complex64) -> Self {
        if log_abs == f64::NEG_INFINITY || (unit.re == 0.0 && unit.im == 0.0) {
            return Self::ZERO;
        }
        let h = unit.re.hypot(unit.im);
        let k = (log_abs / LN_2).floor();
        let rem = log_abs - k * LN_2;
        let scale = rem.exp() / h;
        Self::new(unit.re * scale, unit.im * scale, k as i64)
    }

    pub fn mantissa(&self) -> (f64, f64) {
        (self.re, self.im)
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// Rescales so that the mantissa magnitude lies in `[1/2, 1)`.
    pub fn normalize(self) -> Self {
        let h = self.re.hypot(self.im);
        if h == 0.0 || !h.is_finite() {
            if h == 0.0 {
                return Self::ZERO;
            }
            // Mantissa overflowed f64; pre-scale and retry.
            return Self {
                re: self.re * 0.5f64.powi(64),
                im: self.im * 0.5f64.powi(64),
                exp2: self.exp2 + 64,
            }
            .normalize();
        }
        let (_, e) = libm::frexp(h);
        let e = e as i64;
        let mut re = ldexp(self.re, -e);
        let mut im = ldexp(self.im, -e);
        let mut exp2 = self.exp2 + e;
        let hh = re.hypot(im);
        if hh >= 1.0 {
            re *= 0.5;
            im *= 0.5;
            exp2 += 1;
        } else if hh < 0.5 {
            re *= 2.0;
            im *= 2.0;
            exp2 -= 1;
        }
        Self { re, im, exp2 }
    }

    /// `ln|x|`, or `-∞` for zero.
    pub fn log_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.re.hypot(self.im).ln() + self.exp2 as f64 * LN_2
    }

    /// `|x|^{1/p}` as a plain real.
    pub fn root_abs(&self, p: f64) -> Result<f64, XArithError> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let e = self.log_abs() / p;
        if e.abs() >= ROOT_EXP_LIMIT {
            return Err(XArithError::OverflowDomain(e));
        }
        Ok(e.exp())
    }

    pub fn abs(&self) -> XReal {
        XReal::new(self.re.hypot(self.im), self.exp2)
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im, exp2: self.exp2 }
    }

    /// Multiplies by `2^k` exactly.
    pub fn scale2(&self, k: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self { exp2: self.exp2 + k, ..*self }
    }

    pub fn mul_real(&self, r: XReal) -> Self {
        Self::new(self.re * r.m, self.im * r.m, self.exp2 + r.exp2)
    }

    /// Converts to a hardware complex; saturates to 0 or ±∞ outside range.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ldexp(self.re, self.exp2), ldexp(self.im, self.exp2))
    }

    /// Phase of the value as a unit complex (1 for zero).
    pub fn unit(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(1.0, 0.0);
        }
        let h = self.re.hypot(self.im);
        Complex64::new(self.re / h, self.im / h)
    }
}

impl Add for XComplex {
    type Output = XComplex;

    fn add(self, rhs: XComplex) -> XComplex {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 { (self, rhs) } else { (rhs, self) };
        let d = big.exp2 - small.exp2;
        if d > ALIGN_LIMIT {
            return big;
        }
        let re = big.re + ldexp(small.re, -d);
        let im = big.im + ldexp(small.im, -d);
        XComplex { re, im, exp2: big.exp2 }.normalize()
    }
}

impl Neg for XComplex {
    type Output = XComplex;

    fn neg(self) -> XComplex {
        if self.is_zero() {
            return self;
        }
        XComplex { re: -self.re, im: -self.im, exp2: self.exp2 }
    }
}

impl Sub for XComplex {
    type Output = XComplex;

    fn sub(self, rhs: XComplex) -> XComplex {
        self + (-rhs)
    }
}

impl Mul for XComplex {
    type Output = XComplex;

    fn mul(self, rhs: XComplex) -> XComplex {
        if self.is_zero() || rhs.is_zero() {
            return XComplex::ZERO;
        }
        let re = self.re * rhs.re - self.im * rhs.im;
        let im = self.re * rhs.im + self.im * rhs.re;
        XComplex { re, im, exp2: self.exp2 + rhs.exp2 }.normalize()
    }
}

/// Debug dump format `m_re,m_im,e`.
impl fmt::Display for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e},{:e},{}", self.re, self.im, self.exp2)
    }
}

/// Non-negative magnitude `m·2^exp2`, `m ∈ [1/2, 1)` or canonical zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct XReal {
    m: f64,
    exp2: i64,
}

impl XReal {
    pub const ZERO: Self = Self { m: 0.0, exp2: 0 };
    pub const ONE: Self = Self { m: 0.5, exp2: 1 };
    pub const INFINITY: Self = Self { m: f64::INFINITY, exp2: 0 };

    /// Builds `|m|·2^exp2`.
    pub fn new(m: f64, exp2: i64) -> Self {
        let m = m.abs();
        if m == 0.0 {
            return Self::ZERO;
        }
        if m.is_infinite() {
            return Self::INFINITY;
        }
        let (fr, e) = libm::frexp(m);
        Self { m: fr, exp2: exp2 + e as i64 }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    /// `exp(log_abs)`; `-∞` gives zero, `+∞` gives infinity.
    pub fn from_log(log_abs: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if log_abs == f64::INFINITY {
            return Self::INFINITY;
        }
        let k = (log_abs / LN_2).floor();
        let rem = log_abs - k * LN_2;
        Self::new(rem.exp(), k as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.m
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn is_infinite(&self) -> bool {
        self.m.is_infinite()
    }

    pub fn log(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.is_infinite() {
            return f64::INFINITY;
        }
        self.m.ln() + self.exp2 as f64 * LN_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        ldexp(self.m, self.exp2)
    }

    pub fn scale2(&self, k: i64) -> Self {
        if self.is_zero() || self.is_infinite() {
            return *self;
        }
        Self { m: self.m, exp2: self.exp2 + k }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        if self.is_infinite() {
            return if x == 0.0 { Self::ZERO } else { Self::INFINITY };
        }
        Self::new(self.m * x, self.exp2)
    }

    /// `self ≤ other·(1 + rel)`.
    pub fn le_with_slack(&self, other: &XReal, rel: f64) -> bool {
        *self <= other.mul_f64(1.0 + rel)
    }

    /// `self − other` clamped at zero.
    pub fn saturating_sub(&self, other: XReal) -> XReal {
        if *self <= other {
            return XReal::ZERO;
        }
        if other.is_zero() {
            return *self;
        }
        let d = self.exp2 - other.exp2;
        if d > ALIGN_LIMIT {
            return *self;
        }
        XReal::new(self.m - ldexp(other.m, -d), self.exp2)
    }
}

impl Add for XReal {
    type Output = XReal;

    fn add(self, rhs: XReal) -> XReal {
        if self.is_infinite() || rhs.is_infinite() {
            return XReal::INFINITY;
        }
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 { (self, rhs) } else { (rhs, self) };
        let d = big.exp2 - small.exp2;
        if d > ALIGN_LIMIT {
            return big;
        }
        XReal::new(big.m + ldexp(small.m, -d), big.exp2)
    }
}

impl Mul for XReal {
    type Output = XReal;

    fn mul(self, rhs: XReal) -> XReal {
        if self.is_zero() || rhs.is_zero() {
            return XReal::ZERO;
        }
        if self.is_infinite() || rhs.is_infinite() {
            return XReal::INFINITY;
        }
        XReal::new(self.m * rhs.m, self.exp2 + rhs.exp2)
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Ordering::Equal),
            (true, false) => return Some(Ordering::Less),
            (false, true) => return Some(Ordering::Greater),
            _ => {}
        }
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => return Some(Ordering::Equal),
            (true, false) => return Some(Ordering::Greater),
            (false, true) => return Some(Ordering::Less),
            _ => {}
        }
        match self.exp2.cmp(&other.exp2) {
            Ordering::Equal => self.m.partial_cmp(&other.m),
            o => Some(o),
        }
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e},0,{}", self.m, self.exp2)
    }
}

/// Sum of magnitudes in a fixed order.
pub fn sum_xreal<I: IntoIterator<Item = XReal>>(it: I) -> XReal {
    it.into_iter().fold(XReal::ZERO, |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_sum_normalizes() {
        let one = XComplex::from_f64(1.0);
        let two = one + one;
        assert_eq!(two.mantissa(), (0.5, 0.0));
        assert_eq!(two.exp2(), 2);
        assert_eq!(one + XComplex::ZERO, one);
        assert_eq!(XComplex::ONE, one);
    }

    #[test]
    fn far_apart_sum_saturates() {
        let big = XComplex::new(1.0, 0.0, 600);
        let tiny = XComplex::new(1.0, 0.0, -600);
        assert_eq!(big + tiny, big);
        assert_eq!(tiny + big, big);
    }

    #[test]
    fn huge_exponent_products() {
        let a = XComplex::new(1.0, 0.0, 1000);
        let p = a * a;
        assert_eq!(p.mantissa(), (0.5, 0.0));
        assert_eq!(p.exp2(), 2001);
        let x = XComplex::new(0.3, -0.7, 17);
        assert_eq!(x * XComplex::ONE, x);
        let conj = XComplex::from_complex(Complex64::new(1.0, 1.0))
            * XComplex::from_complex(Complex64::new(1.0, -1.0));
        assert_eq!(conj, XComplex::from_f64(2.0));
    }

    #[test]
    fn log_abs_cases() {
        assert_eq!(XComplex::ZERO.log_abs(), f64::NEG_INFINITY);
        assert_eq!(XComplex::ONE.log_abs(), 0.0);
        for k in [-5000i64, -37, 1, 64, 12345] {
            let x = XComplex::new(1.0, 0.0, k);
            let want = k as f64 * LN_2;
            assert!(((x.log_abs() - want) / want).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn root_abs_contract() {
        let x = XComplex::from_log_polar(-100.0, Complex64::new(1.0, 0.0));
        assert!((x.root_abs(100.0).unwrap() - (-1f64).exp()).abs() < 1e-14);
        assert_eq!(XComplex::ZERO.root_abs(3.0), Ok(0.0));
        let t = XComplex::new(1.0, 0.0, -5000);
        assert!(matches!(t.root_abs(4.0), Err(XArithError::OverflowDomain(_))));
        // 2^-500 is still an ordinary f64
        assert!((t.root_abs(10.0).unwrap().ln() + 500.0 * LN_2).abs() < 1e-9);
    }

    #[test]
    fn from_log_polar_keeps_phase() {
        let u = Complex64::new(-3.0, 4.0);
        let x = XComplex::from_log_polar(-2000.0, u);
        assert!((x.log_abs() + 2000.0).abs() < 1e-12);
        let p = x.unit();
        assert!((p - u / 5.0).norm() < 1e-15);
    }

    #[test]
    fn xreal_order_and_sub() {
        let a = XReal::from_log(-3000.0);
        let b = XReal::from_log(-2999.0);
        assert!(a < b);
        assert!(XReal::ZERO < a);
        assert!(b < XReal::INFINITY);
        let d = b.saturating_sub(a);
        assert!((d.log() - (-2999.0 + (1.0 - (-1f64).exp()).ln())).abs() < 1e-12);
        assert_eq!(a.saturating_sub(b), XReal::ZERO);
    }

    #[test]
    fn display_dump() {
        assert_eq!(XComplex::from_f64(2.0).to_string(), "5e-1,0e0,2");
    }
}
