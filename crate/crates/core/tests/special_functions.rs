use num_complex::Complex64;
use proptest::prelude::*;
use swave_core::specialfn::{bessel_j0, gamma_fn, hyp1f1, integrate_semi_infinite};

// ₁F₁(a; 1; z) from a 40-digit series evaluation.
#[allow(clippy::excessive_precision)]
const HYP1F1_REFERENCE: &[(f64, f64, f64, f64, f64)] = &[
    (-0.5, 0.0, 2.0, 1.2257006839003216, -0.92356409760797629),
    (-0.75, 10.0, 30.0, 11.825224722970486, -20.065294382690588),
    (-0.75, 0.5, 40.0, 6.696971998968516, -15.95683682852807),
    (-0.75, 0.0, 20.0, 4.2053122536214129, -9.3947587589364327),
    (-0.75, 0.0, 34.0, 6.0964400110846723, -14.056692908633568),
    (-0.75, 0.0, 36.0, 6.3504050336345023, -14.678533462595035),
    (-1.5, 0.0, 100.0, -519.93982512994569, -543.87633206992033),
    (-1.5, 0.0, 200.0, -1487.5692942597824, -1521.4206599712985),
    (-2.5, 5.0, 5.0, 6.2476911074636632, 23.595508711125757),
    (-1.25, -10.0, 3.0, 17.956403959636689, -6.0807197630590567),
    (-0.5, 60.0, 1.0, -4.0469527008934452e22, -5.9605210555750679e22),
    (1.75, -20.0, -25.0, 4.0037525150578549e-5, 0.00050679694657668977),
    (-2.75, 3.0, 150.0, -82540.535048437275, 201882.66690110853),
    (1.6, -900.0, -900.0, -8.9791748988206264e-7, 2.7769695450538826e-6),
    (2.5, -2500.0, 300.0, 1.2742491856808654e-9, 3.9259259814128227e-10),
    (1.75, -40.0, -60.0, 2.1896688929604584e-5, 0.00011658007528489177),
];

#[test]
fn hyp1f1_matches_reference_table() {
    for &(a, x, y, re, im) in HYP1F1_REFERENCE {
        let want = Complex64::new(re, im);
        let got = hyp1f1(a, 1.0, Complex64::new(x, y)).unwrap();
        let rel = (got - want).norm() / want.norm();
        assert!(rel < 1e-9, "a={a} z={x}+{y}i: {got} vs {want} (rel {rel:e})");
    }
}

#[test]
fn hyp1f1_terminating_series() {
    let z = Complex64::new(0.3, 7.0);
    let got = hyp1f1(-2.0, 1.0, z).unwrap();
    let want = Complex64::new(1.0, 0.0) - 2.0 * z + 0.5 * z * z;
    assert!((got - want).norm() < 1e-12 * want.norm());
}

#[test]
fn squared_modulus_integral() {
    // ∫ ξ² e^{−ξ²/2} |₁F₁(−½; 1; iξ²/4)|² dξ
    let f = |xi: f64| {
        let v = hyp1f1(-0.5, 1.0, Complex64::new(0.0, 0.25 * xi * xi)).unwrap();
        xi * xi * (-0.5 * xi * xi).exp() * v.norm_sqr()
    };
    let got = integrate_semi_infinite(f, 1e-12).unwrap().value;
    assert!((got - 1.6553070326376749).abs() < 1e-10, "{got}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kummer_transformation(a in -3.0f64..-0.5, modulus in 0.5f64..200.0, angle in 1.2f64..1.9) {
        let z = Complex64::from_polar(modulus, angle);
        let direct = hyp1f1(a, 1.0, z).unwrap();
        let transformed = z.exp() * hyp1f1(1.0 - a, 1.0, -z).unwrap();
        let rel = (direct - transformed).norm() / direct.norm();
        prop_assert!(rel < 1e-8, "a={} z={}: rel {:e}", a, z, rel);
    }

    #[test]
    fn contiguous_relation(a in -3.0f64..-0.5, modulus in 0.5f64..150.0, angle in 1.3f64..1.8) {
        // (b−a)M(a−1) + (2a−b+z)M(a) − aM(a+1) = 0 with b = 1
        let z = Complex64::from_polar(modulus, angle);
        let m0 = hyp1f1(a - 1.0, 1.0, z).unwrap();
        let m1 = hyp1f1(a, 1.0, z).unwrap();
        let m2 = hyp1f1(a + 1.0, 1.0, z).unwrap();
        let terms = [(1.0 - a) * m0, (2.0 * a - 1.0 + z) * m1, -a * m2];
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let residual = (terms[0] + terms[1] + terms[2]).norm();
        prop_assert!(residual < 1e-8 * scale, "residual {:e} of {:e}", residual, scale);
    }

    #[test]
    fn bessel_ode_residual(x in 0.5f64..500.0) {
        let h = 1e-3;
        let (lo, mid, hi) = (bessel_j0(x - h).unwrap(), bessel_j0(x).unwrap(), bessel_j0(x + h).unwrap());
        let second = (hi - 2.0 * mid + lo) / (h * h);
        let first = (hi - lo) / (2.0 * h);
        prop_assert!((x * second + first + x * mid).abs() < 1e-6 * x.max(1.0));
    }

    #[test]
    fn gamma_recurrence(x in 0.5f64..29.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }
}
