use swave_core::analytic::{initial_radius_gamma2, mean_radius_gamma2};
use swave_core::evolve::{
    crank_nicolson_evolve, find_implosion, observables, MomentSeries, RadialGrid, RadialState, SpectralPropagator,
};
use swave_core::packets::{reduced_wavefunction, WavePacketSpec};

fn state(spec: &WavePacketSpec, r_max: f64, n: usize) -> RadialState {
    reduced_wavefunction(spec, &RadialGrid::new(r_max, n).unwrap()).unwrap()
}

fn gamma2(n: u32) -> WavePacketSpec {
    WavePacketSpec::power_gaussian(2.0, 1.0, n).unwrap()
}

fn spectral_series(s: &RadialState, tau_max: f64, samples: usize) -> MomentSeries {
    let taus: Vec<f64> = (0..=samples).map(|i| tau_max * i as f64 / samples as f64).collect();
    SpectralPropagator::new(s).unwrap().series(&taus).unwrap()
}

#[test]
fn crank_nicolson_tracks_spectral_oracle() {
    for n in [2, 3] {
        let initial = state(&gamma2(n), 30.0, 6144);
        let dt = 2.5e-4;
        let every = 400;
        let ev = crank_nicolson_evolve(&initial, dt, 12_000, every).unwrap();
        let prop = SpectralPropagator::new(&initial).unwrap();
        let r0 = initial_radius_gamma2(n, 1.0).unwrap();
        for rec in &ev.series.records {
            let exact = mean_radius_gamma2(n, rec.tau).unwrap() * r0;
            assert!((rec.mean_r / exact - 1.0).abs() < 1e-3, "N={n} τ={}", rec.tau);
        }
        for tau in [1.0, 3.0] {
            let steps = (tau / dt).round() as usize;
            let cn = crank_nicolson_evolve(&initial, dt, steps, steps).unwrap().final_state;
            let sp = prop.propagate(tau).unwrap();
            let diff = cn.u().iter().zip(sp.u()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-3, "N={n} τ={tau}: {diff}");
            let (a, b) = (observables(&cn).mean_r, observables(&sp).mean_r);
            assert!((a / b - 1.0).abs() < 1e-3);
        }
    }
}

#[test]
fn ehrenfest_relation() {
    for n in [2, 3] {
        let dt = 2.5e-4;
        let ev = crank_nicolson_evolve(&state(&gamma2(n), 20.0, 4096), dt, 8000, 40).unwrap();
        let recs = &ev.series.records;
        for w in recs.windows(3) {
            let slope = (w[2].mean_r - w[0].mean_r) / (w[2].tau - w[0].tau);
            assert!((slope - w[1].mean_p).abs() < 2e-4, "N={n} τ={}: {slope} vs {}", w[1].tau, w[1].mean_p);
        }
    }
}

#[test]
fn second_order_convergence() {
    let exact = mean_radius_gamma2(2, 1.0).unwrap() * initial_radius_gamma2(2, 1.0).unwrap();
    let error = |points: usize, dt: f64| {
        let steps = (1.0 / dt).round() as usize;
        let ev = crank_nicolson_evolve(&state(&gamma2(2), 20.0, points), dt, steps, steps).unwrap();
        (ev.series.records.last().unwrap().mean_r - exact).abs()
    };
    let coarse = error(256, 0.02);
    let fine = error(512, 0.01);
    assert!(coarse / fine >= 3.5, "{coarse:e} → {fine:e}");
}

#[test]
fn norm_drift_over_many_steps() {
    let ev = crank_nicolson_evolve(&state(&gamma2(2), 20.0, 4096), 2.5e-5, 100_000, 10_000).unwrap();
    for rec in &ev.series.records {
        assert!((rec.norm - 1.0).abs() <= 1e-7);
    }
}

#[test]
fn dimension_theorem() {
    let family = [
        WavePacketSpec::power_gaussian(1.5, 1.0, 2).unwrap(),
        WavePacketSpec::power_gaussian(2.0, 1.0, 2).unwrap(),
        WavePacketSpec::power_gaussian(3.0, 1.0, 2).unwrap(),
        WavePacketSpec::sine_gaussian(1.0, 2).unwrap(),
        WavePacketSpec::displaced_gaussian(0.4, 1.5, 2).unwrap(),
    ];
    for spec in family {
        for n in [2, 3] {
            let s = spec.with_dimension(n).unwrap();
            let initial = state(&s, s.default_r_max(), 1024);
            let found = find_implosion(&spectral_series(&initial, 1.5, 150)).unwrap();
            assert_eq!(found.is_some(), n == 2, "{} N={n}: {found:?}", s.family());
        }
    }
}

#[test]
fn displaced_packet_same_start_in_both_dimensions() {
    let spec = WavePacketSpec::displaced_gaussian(0.4, 1.5, 2).unwrap();
    let two = state(&spec, spec.default_r_max(), 2048);
    let three = state(&spec.with_dimension(3).unwrap(), spec.default_r_max(), 2048);
    assert_eq!(two.u(), three.u());
    let steps = 200;
    let dt = 1e-3;
    let r2 = crank_nicolson_evolve(&two, dt, steps, 10).unwrap();
    let r3 = crank_nicolson_evolve(&three, dt, steps, 10).unwrap();
    assert!(r2.series.records[1].mean_r < r2.series.records[0].mean_r);
    assert!(r3.series.records[1].mean_r > r3.series.records[0].mean_r);
}
