use num_complex::Complex64;
use proptest::prelude::*;

use polariton::oracle::erfcx_reference;
use polariton::specfun::{dawson, erfcx, erfcx_real, erfcx_with_derivative};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn production_matches_reference(re in -10.0f64..10.0, im in -10.0f64..10.0) {
        let z = Complex64::new(re, im);
        prop_assert!(rel(erfcx(z).unwrap(), erfcx_reference(z).unwrap()) <= 1e-12);
    }

    #[test]
    fn conjugate_symmetry(re in -20.0f64..20.0, im in -20.0f64..20.0) {
        let z = Complex64::new(re, im);
        let (a, b) = (erfcx(z), erfcx(z.conj()));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(rel(b, a.conj()) <= 1e-15 || (b - a.conj()).norm() == 0.0);
        }
    }

    #[test]
    fn reflection_identity(re in 0.0f64..4.0, im in -4.0f64..4.0) {
        // erfcx(-z) = 2 exp(z²) - erfcx(z)
        let z = Complex64::new(re, im);
        let lhs = erfcx(-z).unwrap();
        let rhs = 2.0 * (z * z).exp() - erfcx(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn real_axis_agrees(x in 0.0f64..100.0) {
        let a = erfcx_real(x).unwrap();
        let b = erfcx(Complex64::new(x, 0.0)).unwrap();
        prop_assert!(((a - b.re) / a).abs() <= 1e-13);
        prop_assert_eq!(b.im, 0.0);
    }

    #[test]
    fn imaginary_axis_is_dawson(x in -50.0f64..50.0) {
        // erfcx(-ix) = exp(-x²) + (2i/√π) D(x)
        let w = erfcx(Complex64::new(0.0, -x)).unwrap();
        let d = dawson(x).unwrap();
        prop_assert!((w.im - 2.0 / std::f64::consts::PI.sqrt() * d).abs() <= 1e-13 * w.im.abs().max(1e-300));
        prop_assert!((w.re - (-x * x).exp()).abs() <= 1e-13 * w.re.max(1e-300) + 1e-300);
    }

    #[test]
    fn derivative_satisfies_ode(re in -8.0f64..30.0, im in -8.0f64..30.0) {
        // erfcx'(z) = 2z erfcx(z) - 2/√π, checked against a Cauchy-centred difference
        let z = Complex64::new(re, im);
        prop_assume!(erfcx_with_derivative(z).is_ok());
        let (w, dw) = erfcx_with_derivative(z).unwrap();
        let h = 1e-6 * z.norm().max(1.0);
        let fd = (erfcx(z + h).unwrap() - erfcx(z - h).unwrap()) / (2.0 * h);
        prop_assert!((dw - fd).norm() <= 1e-6 * dw.norm().max(w.norm()));
    }
}
