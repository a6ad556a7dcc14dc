use std::sync::OnceLock;

use num_complex::Complex64;

use crate::GrowthError;

const FACTORIAL_TABLE: usize = 1 << 17;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`, tabulated for small `n` (same values as `ln_gamma(n + 1)`).
pub fn ln_factorial(n: u64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| (0..FACTORIAL_TABLE).map(|k| libm::lgamma(k as f64 + 1.0)).collect());
    match t.get(n as usize) {
        Some(v) => *v,
        None => libm::lgamma(n as f64 + 1.0),
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `a` (also `j` for the imaginary unit).
pub fn parse_complex(s: &str) -> Result<Complex64, GrowthError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || GrowthError::BadParam(format!("cannot parse complex number `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let body = match t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        None => return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad()),
        Some(b) => b,
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let parse_im = |x: &str| -> Result<f64, GrowthError> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, parse_im(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}

/// Inverse of [`parse_complex`], shortest round-trip digits.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Serde helper for extended reals: finite values as numbers, infinities as
/// the strings `"inf"` / `"-inf"`, NaN as `null`.
pub mod ext_float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
        Null(()),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_none()
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad extended real `{t}`"))),
            Repr::Null(()) => Ok(f64::NAN),
        }
    }
}

/// Least-squares solution of `A x ≈ b` (column-major design rows given as
/// slices), via a Householder QR of the column-scaled system.
pub(crate) fn least_squares(rows: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = rows.len();
    let p = rows.first()?.len();
    if m < p {
        return None;
    }
    let mut scale = vec![0.0f64; p];
    for row in rows {
        for (s, v) in scale.iter_mut().zip(row) {
            *s = s.max(v.abs());
        }
    }
    if scale.iter().any(|s| *s == 0.0) {
        return None;
    }
    let a = nalgebra::DMatrix::from_fn(m, p, |i, j| rows[i][j] / scale[j]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    let qr = a.qr();
    let qtb = qr.q().transpose() * rhs;
    let r = qr.r();
    let sol = r.solve_upper_triangular(&qtb)?;
    Some(sol.iter().zip(&scale).map(|(x, s)| x / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1+0i").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("0").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), Complex64::new(-2.5, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(
            parse_complex("3.14159265358979+0i").unwrap(),
            Complex64::new(3.14159265358979, 0.0)
        );
        assert!(parse_complex("abc").is_err());
        let z = Complex64::new(0.1, -0.7);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn factorial_table_matches_lgamma() {
        for n in [0u64, 1, 2, 10, 1000, 131071, 131072, 500000] {
            assert_eq!(ln_factorial(n), libm::lgamma(n as f64 + 1.0));
        }
    }

    #[test]
    fn exact_quadratic_fit() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![(i * i) as f64, i as f64, 1.0]).collect();
        let b: Vec<f64> = (0..10).map(|i| 2.0 * (i * i) as f64 - 3.0 * i as f64 + 0.5).collect();
        let x = least_squares(&rows, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] + 3.0).abs() < 1e-11 && (x[2] - 0.5).abs() < 1e-11);
    }
}
