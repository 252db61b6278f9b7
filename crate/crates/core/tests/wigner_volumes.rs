use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use swave_core::packets::WavePacketSpec;
use swave_core::wigner::{negative_volume, wigner_value, PhasePoint, WignerResolution};

/// Wigner function of the γ = 2 packet at δr = 1, from differentiating the
/// Gaussian generating integral.
fn closed_form(n: u32, r: f64, q: f64, c: f64) -> f64 {
    let (r2, q2) = (r * r, q * q);
    let envelope = (-q2 - r2).exp();
    match n {
        2 => (4.0 * c * c * q2 * r2 + q2 * q2 - 2.0 * q2 * r2 - 4.0 * q2 + r2 * r2 + 2.0) * envelope / (2.0 * PI * PI),
        3 => {
            (16.0 * c * c * q2 * r2 + 4.0 * q2 * q2 - 8.0 * q2 * r2 - 20.0 * q2 + 4.0 * r2 * r2 + 4.0 * r2 + 15.0)
                * envelope
                / (15.0 * PI.powi(3))
        }
        _ => unreachable!(),
    }
}

fn spec(gamma: f64, n: u32, delta_r: f64) -> WavePacketSpec {
    WavePacketSpec::power_gaussian(gamma, delta_r, n).unwrap()
}

#[test]
fn pointwise_closed_form() {
    for n in [2, 3] {
        for (r, p, c) in [(0.0, 0.0, 0.0), (0.3, 1.1, 0.9), (1.0, 1.0, 0.0), (1.7, 0.4, -0.6), (0.5, 2.5, 0.2)] {
            let got = wigner_value(&spec(2.0, n, 1.0), PhasePoint { r, p, cos_theta: c }).unwrap();
            let want = closed_form(n, r, p, c);
            assert!((got - want).abs() < 1e-8, "N={n} ({r},{p},{c}): {got} vs {want}");
        }
    }
}

#[test]
fn momentum_reversal_symmetry_and_negativity() {
    let s = spec(2.0, 2, 1.0);
    let mut negative = false;
    for (r, p, c) in [(0.2, 1.3, 0.4), (1.0, 1.0, 0.7), (0.1, 1.5, 0.95)] {
        let fwd = wigner_value(&s, PhasePoint { r, p, cos_theta: c }).unwrap();
        let back = wigner_value(&s, PhasePoint { r, p, cos_theta: -c }).unwrap();
        assert!((fwd - back).abs() < 1e-12);
        negative |= fwd < 0.0;
    }
    assert!(negative);
}

/// Importance-sampled V₋ with a Gaussian proposal of variance 3/4 per coordinate.
fn monte_carlo_v_minus(n: u32, samples: usize, seed: u64) -> (f64, f64) {
    let var = 0.75;
    let dims = 2 * n as usize;
    let log_norm = -(n as f64) * (2.0 * PI * var).ln();
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut v = vec![0.0; dims];
    for _ in 0..samples {
        v.iter_mut().for_each(|x| *x = var.sqrt() * rng.sample::<f64, _>(StandardNormal));
        let (x, p) = v.split_at(n as usize);
        let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let q = p.iter().map(|a| a * a).sum::<f64>().sqrt();
        let c = if r * q > 0.0 { x.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() / (r * q) } else { 0.0 };
        let density = (log_norm - 0.5 * (r * r + q * q) / var).exp();
        let value = (-closed_form(n, r, q, c)).max(0.0) / density;
        sum += value;
        sum_sq += value * value;
    }
    let mean = sum / samples as f64;
    let std_err = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    (mean, std_err)
}

#[test]
fn volumes_agree_with_monte_carlo() {
    for (n, seed) in [(2, 11), (3, 12)] {
        let report = negative_volume(&spec(2.0, n, 1.0), WignerResolution::default(), 1e-3).unwrap();
        let (mc, err) = monte_carlo_v_minus(n, 2_000_000, seed);
        assert!((report.v_minus - mc).abs() < 5.0 * err + 1e-4, "N={n}: {} vs {mc} ± {err}", report.v_minus);
        assert!(report.normalization_residual.abs() <= report.error_estimate);
    }
}

#[test]
fn volumes_match_reported_values() {
    let two = negative_volume(&spec(2.0, 2, 1.0), WignerResolution::default(), 1e-3).unwrap();
    let three = negative_volume(&spec(2.0, 3, 1.0), WignerResolution::default(), 1e-3).unwrap();
    assert!((two.v_minus - 0.27).abs() <= 0.02);
    assert!((three.v_minus - 0.23).abs() <= 0.02);
    assert!(two.v_minus > three.v_minus);
}

#[test]
fn volumes_are_scale_invariant() {
    let reference = negative_volume(&spec(2.0, 2, 1.0), WignerResolution::default(), 1e-3).unwrap();
    for delta_r in [0.5, 2.0] {
        let scaled = negative_volume(&spec(2.0, 2, delta_r), WignerResolution::default(), 1e-3).unwrap();
        assert!((scaled.v_minus - reference.v_minus).abs() < 1e-10, "δr={delta_r}");
    }
}

#[test]
fn refinement_stays_within_estimate() {
    let res = WignerResolution::default();
    let base = negative_volume(&spec(2.0, 3, 1.0), res, 1e-3).unwrap();
    let finer = negative_volume(&spec(2.0, 3, 1.0), res.doubled(), 1e-3).unwrap();
    assert!((finer.v_minus - base.v_minus).abs() < base.error_estimate);
}
