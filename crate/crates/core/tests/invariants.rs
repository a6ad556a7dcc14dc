use entire_growth::coeffs::{catalog, complement, IndexSequence};
use entire_growth::experiments::{uniform_point, Disk};
use entire_growth::growth::{order_from_coeffs, rho_of_theta, theta_of_rho, type_from_coeffs, Window};
use entire_growth::subseq::{max_identity_check, sigma_nu, theta_nu, KWindow};
use entire_growth::xarith::{XComplex, XReal};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1e-6..1e-6f64]
}

fn sequence() -> impl Strategy<Value = IndexSequence> {
    prop_oneof![
        Just(IndexSequence::evens()),
        Just(IndexSequence::odds()),
        Just(IndexSequence::Squares),
        Just(IndexSequence::Primes),
        (3u64..6, 0u64..3).prop_map(|(q, r)| IndexSequence::arithmetic(q, r % q).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xcomplex_matches_f64(a in finite(), b in finite(), c in finite(), d in finite()) {
        let (x, y) = (Complex64::new(a, b), Complex64::new(c, d));
        let (xx, yy) = (XComplex::from_complex(x), XComplex::from_complex(y));
        let p = (xx * yy).to_complex();
        let q = x * y;
        prop_assert!((p - q).norm() <= 1e-14 * x.norm() * y.norm());
        let s = (xx + yy).to_complex();
        prop_assert!((s - (x + y)).norm() <= 1e-14 * (x.norm() + y.norm()));
        if x.norm() > 0.0 {
            prop_assert!((xx.log_abs() - x.norm().ln()).abs() <= 1e-12);
        }
    }

    #[test]
    fn xreal_survives_f64_overflow(l1 in -5000.0..5000.0f64, l2 in -5000.0..5000.0f64) {
        let (a, b) = (XReal::from_log(l1), XReal::from_log(l2));
        prop_assert!(rel((a * b).log(), l1 + l2) < 1e-12 || (l1 + l2).abs() < 1e-9);
        let big = l1.max(l2);
        let sum = big + (1.0 + (-(l1 - l2).abs()).exp()).ln();
        prop_assert!(((a + b).log() - sum).abs() < 1e-10);
        prop_assert_eq!(a < b, l1 < l2);
    }

    #[test]
    fn complement_is_an_involution(nu in sequence(), n in 1u64..500) {
        let mu = complement(&nu, 200).unwrap();
        prop_assert_ne!(nu.contains(n), mu.contains(n));
        let back = complement(&mu, 200).unwrap();
        prop_assert_eq!(back.contains(n), nu.contains(n));
        prop_assert_eq!(nu.rank(n) + mu.rank(n), n);
    }

    #[test]
    fn partition_identity_is_exact(x in -3.0..3.0f64, y in -3.0..3.0f64, nu in sequence(), which in 0usize..3) {
        let src = ["sin:lambda=2", "sin_plus_cos2", "mittag_leffler:alpha=0.5"][which];
        let g = catalog(src).unwrap();
        let rep = max_identity_check(&g, &nu, Complex64::new(x, y), 1.0, 60).unwrap();
        prop_assert!(rep.rho_ok);
        prop_assert!(rep.tau_ok);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), i in 0u64..10_000, r in 0.1..10.0f64) {
        let d = Disk::new(Complex64::new(1.0, -2.0), r).unwrap();
        let p = uniform_point(&d, seed, i);
        prop_assert_eq!(p, uniform_point(&d, seed, i));
        prop_assert!((p - d.center).norm() <= r);
    }

    #[test]
    fn sharp_has_the_same_estimates(which in 0usize..5, lo in 50u64..400, len in 10u64..400) {
        let src = ["exp", "sin:lambda=2", "power_type:rho=2", "maximal_type:rho=1", "sin_plus_cos2"][which];
        let g = catalog(src).unwrap();
        let s = g.sharp();
        let w = Window::new(lo, lo + len).unwrap();
        let (a, b) = (order_from_coeffs(&g, w).unwrap(), order_from_coeffs(&s, w).unwrap());
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        let (a, b) = (type_from_coeffs(&g, 1.0, w).unwrap(), type_from_coeffs(&s, 1.0, w).unwrap());
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn window_sup_is_monotone(lo in 10u64..200, len in 5u64..200, extra in 1u64..200) {
        let g = catalog("mittag_leffler:alpha=0.5").unwrap();
        let small = order_from_coeffs(&g, Window::new(lo, lo + len).unwrap()).unwrap();
        let large = order_from_coeffs(&g, Window::new(lo, lo + len + extra).unwrap()).unwrap();
        prop_assert!(large.value >= small.value);
        let z = Complex64::new(0.3, 0.7);
        let nu = IndexSequence::evens();
        let a = theta_nu(&g, &nu, z, KWindow::new(lo / 2 + 1, lo / 2 + 1 + len / 2).unwrap()).unwrap();
        let b = theta_nu(&g, &nu, z, KWindow::new(lo / 2 + 1, lo / 2 + 1 + len / 2 + extra / 2).unwrap()).unwrap();
        prop_assert!(b.value >= a.value);
    }

    #[test]
    fn running_sup_never_decreases(x in -2.0..2.0f64, y in -2.0..2.0f64, k in 5u64..60) {
        let g = catalog("maximal_type:rho=1").unwrap();
        let curve = sigma_nu(&g, &IndexSequence::evens(), Complex64::new(x, y), 1.0, k).unwrap();
        for w in curve.points.windows(2) {
            prop_assert!(w[1].3 >= w[0].3);
        }
    }

    #[test]
    fn theta_is_monotone_in_rho(a in 0.05..50.0f64, b in 0.05..50.0f64) {
        let (ta, tb) = (theta_of_rho(a).unwrap().theta, theta_of_rho(b).unwrap().theta);
        if a <= b {
            prop_assert!(ta <= tb);
        }
        prop_assert!(rel(rho_of_theta(ta).unwrap(), a) < 1e-9);
    }
}
