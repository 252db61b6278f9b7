//! Acceptance suite: one pass/fail outcome per criterion.

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use swave_core::analytic::{
    a_coeff, a_coeff_rational, golden_section_min, implosion_predicate, initial_radius_gamma2, mean_momentum_gamma2,
    mean_radius_gamma2, mean_radius_general_gamma_2d, r_min_ratio, short_time_coefficient, tau_min,
};
use swave_core::evolve::{crank_nicolson_evolve, observables, RadialGrid, RadialState, SpectralPropagator};
use swave_core::packets::{initial_mean_radius, reduced_wavefunction, WavePacketSpec};
use swave_core::specialfn::hyp1f1;

use crate::args::{EvolveArgs, FamilyName, Method, MomentsArgs, SweepArgs, UnitsArg, WignerArgs};
use crate::commands::{self, INTEGRAL_TOL, SWEEP_BRACKET, SWEEP_TOL};
use crate::config::{EvolveConfig, MomentsConfig, SweepConfig, WignerConfig};
use crate::error::CliError;

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}: {}", self.id, self.title, self.detail)
    }
}

/// Collects sub-checks of one criterion.
struct Checks {
    pass: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        self.pass &= ok;
        let note = note.into();
        self.notes.push(if ok { note } else { format!("[!] {note}") });
    }

    fn fail(&mut self, note: impl Into<String>) {
        self.check(false, note);
    }

    fn finish(self, id: u8, title: &'static str) -> Outcome {
        Outcome { id, title, pass: self.pass, detail: self.notes.join("; ") }
    }
}

fn title(id: u8) -> &'static str {
    match id {
        1 => "golden constants",
        2 => "implosion dichotomy",
        3 => "solver-formula agreement",
        4 => "displaced packet",
        5 => "sine packet",
        6 => "general gamma",
        7 => "wigner volumes",
        8 => "property suites",
        9 => "determinism",
        _ => "unknown",
    }
}

/// Runs the selected criteria (all when `only` is empty), reporting each as it
/// completes.
pub fn run(only: &[u8], mut report: impl FnMut(&Outcome)) -> Result<Vec<Outcome>, CliError> {
    if let Some(bad) = only.iter().find(|id| !CRITERIA.contains(id)) {
        return Err(CliError::config(format!("no acceptance criterion {bad}; valid are 1 to 9")));
    }
    let mut out = Vec::new();
    for id in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let outcome = criterion(id);
        report(&outcome);
        out.push(outcome);
    }
    Ok(out)
}

pub fn criterion(id: u8) -> Outcome {
    let mut c = Checks::new();
    let result = match id {
        1 => golden_constants(&mut c),
        2 => dichotomy(&mut c),
        3 => solver_agreement(&mut c),
        4 => displaced(&mut c),
        5 => sine(&mut c),
        6 => general_gamma(&mut c),
        7 => wigner(&mut c),
        8 => properties(&mut c),
        9 => determinism(&mut c),
        _ => Err(CliError::config(format!("no criterion {id}"))),
    };
    if let Err(e) = result {
        c.fail(format!("error: {e}"));
    }
    c.finish(id, title(id))
}

fn golden_constants(c: &mut Checks) -> Result<(), CliError> {
    c.check(a_coeff_rational(2)? == (15, 7), "a(2) = 15/7");
    c.check(a_coeff_rational(3)? == (2, 1), "a(3) = 2");
    c.check(a_coeff(2)? == 15.0 / 7.0 && a_coeff(3)? == 2.0, "a as f64");
    let t = tau_min(2).unwrap_or(f64::NAN);
    c.check((t - 1.0 / 7f64.sqrt()).abs() <= 1e-12, format!("tau_min(2) = {t:.15}"));
    let r = r_min_ratio(2).unwrap_or(f64::NAN);
    let want = (224.0f64 / 225.0).sqrt();
    c.check((r - want).abs() <= 1e-12 && format!("{r:.4}") == "0.9978", format!("r_min_ratio(2) = {r:.4}"));
    Ok(())
}

fn dichotomy(c: &mut Checks) -> Result<(), CliError> {
    let taus: Vec<f64> = (1..=1000).map(|i| 5.0 * i as f64 / 1000.0).collect();
    for n in 1..=6 {
        c.check(implosion_predicate(n) == (n == 2), format!("predicate N={n}"));
        let mut negative = false;
        for &t in &taus {
            negative |= mean_momentum_gamma2(n, t)? < 0.0;
        }
        c.check(negative == (n == 2), format!("N={n} p<0 somewhere: {negative}"));
    }
    Ok(())
}

fn evolve_config(
    family: FamilyName,
    delta_r: f64,
    dim: u32,
    method: Method,
    tau_max: f64,
    samples: usize,
) -> Result<EvolveConfig, CliError> {
    let mut args = EvolveArgs::default();
    args.packet.family = Some(family);
    args.packet.delta_r = Some(delta_r);
    args.dim = Some(dim);
    args.method = Some(method);
    args.time.tau_max = Some(tau_max);
    args.time.samples = Some(samples);
    args.units = Some(UnitsArg::Natural);
    EvolveConfig::resolve(&args)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

fn solver_agreement(c: &mut Checks) -> Result<(), CliError> {
    const LIMIT: Duration = Duration::from_secs(120);
    for n in [2, 3] {
        let r0 = initial_radius_gamma2(n, 1.0)?;
        let mut series = Vec::new();
        for method in [Method::Cn, Method::Spectral] {
            let cfg = evolve_config(FamilyName::Power, 1.0, n, method, 2.0, 201)?;
            let (run, elapsed) = timed(|| commands::run_evolution(&cfg));
            let run = run?;
            if let Some(f) = run.fault {
                c.fail(format!("N={n} {method:?}: {f}"));
                return Ok(());
            }
            let mut worst: f64 = 0.0;
            for r in &run.series.records {
                let exact = mean_radius_gamma2(n, r.tau)?;
                worst = worst.max((r.mean_r / r0 / exact - 1.0).abs());
            }
            c.check(worst <= 1e-3, format!("N={n} {method:?} rel {worst:.1e}"));
            c.check(elapsed <= LIMIT, format!("{:.1}s", elapsed.as_secs_f64()));
            series.push(run.series);
        }
        let mut worst: f64 = 0.0;
        for (a, b) in series[0].records.iter().zip(&series[1].records) {
            worst = worst.max((a.mean_r / b.mean_r - 1.0).abs());
        }
        let aligned = series[0].len() == series[1].len();
        c.check(aligned && worst <= 1e-3, format!("N={n} cn vs spectral {worst:.1e}"));
    }
    Ok(())
}

fn displaced(c: &mut Checks) -> Result<(), CliError> {
    for n in [2, 3] {
        let cfg = evolve_config(FamilyName::Displaced, 0.4, n, Method::Cn, 1.5, 151)?;
        let run = commands::run_evolution(&cfg)?;
        if let Some(f) = run.fault {
            c.fail(format!("N={n}: {f}"));
            continue;
        }
        match run.implosion {
            Ok(Some(i)) => {
                c.check(n == 2, format!("N={n} minimum at tau {:.4}, ratio {:.5}", i.tau_min, i.r_min_ratio))
            }
            Ok(None) => c.check(n == 3, format!("N={n} no minimum")),
            Err(e) => c.fail(format!("N={n}: {e}")),
        }
    }
    Ok(())
}

fn sine(c: &mut Checks) -> Result<(), CliError> {
    let cfg = evolve_config(FamilyName::Sine, 1.0, 2, Method::Spectral, 3.0, 301)?;
    let run = commands::run_evolution(&cfg)?;
    match run.implosion {
        Ok(Some(i)) => {
            c.check((i.tau_min - 1.11).abs() <= 0.05, format!("tau_min {:.4} (want 1.11 ± 0.05)", i.tau_min));
            c.check(
                (i.r_min_ratio - 0.9964).abs() <= 5e-4,
                format!("r_min_ratio {:.5} (want 0.9964 ± 5e-4)", i.r_min_ratio),
            );
        }
        Ok(None) => c.fail("no minimum"),
        Err(e) => c.fail(e.to_string()),
    }
    Ok(())
}

fn spectral_state(spec: &WavePacketSpec) -> Result<RadialState, CliError> {
    let grid = RadialGrid::new(spec.default_r_max(), 4096)?;
    Ok(reduced_wavefunction(spec, &grid)?)
}

fn general_gamma(c: &mut Checks) -> Result<(), CliError> {
    for tau in [0.2, 0.5, 1.0] {
        let got = mean_radius_general_gamma_2d(2.0, tau, INTEGRAL_TOL)?;
        let diff = (got - mean_radius_gamma2(2, tau)?).abs();
        c.check(diff <= 1e-4, format!("gamma 2 tau {tau}: {diff:.1e}"));
    }
    for gamma in [1.5, 3.0, 4.0] {
        let (lo, hi) = SWEEP_BRACKET;
        let (t, r) = golden_section_min(|t| mean_radius_general_gamma_2d(gamma, t, INTEGRAL_TOL), lo, hi, SWEEP_TOL)?;
        let interior = t - lo > 1e-3 && hi - t > 1e-3;
        c.check(interior && r < 1.0, format!("gamma {gamma}: tau {t:.4}, ratio {r:.6}"));
        let spec = WavePacketSpec::power_gaussian(gamma, 1.0, 2)?;
        let state = SpectralPropagator::new(&spectral_state(&spec)?)?.propagate(t)?;
        let numeric = observables(&state).mean_r / initial_mean_radius(&spec)?;
        let diff = (numeric - r).abs();
        c.check(diff <= 1e-3, format!("spectral {diff:.1e}"));
    }
    Ok(())
}

fn wigner(c: &mut Checks) -> Result<(), CliError> {
    let (result, elapsed) = timed(|| -> Result<(), CliError> {
        for (gamma, dim, want) in [(2.0, 2, Some(0.27)), (2.0, 3, Some(0.23)), (0.0, 2, None)] {
            let args = WignerArgs { gamma: Some(gamma), dim: Some(dim), ..Default::default() };
            let report = commands::wigner_report(&WignerConfig::resolve(&args)?)?;
            let v = report.v_minus;
            match want {
                Some(w) => c.check((v - w).abs() <= 0.02, format!("N={dim} V- {v:.4}")),
                None => c.check(v <= 1e-4, format!("gamma 0 V- {v:.1e}")),
            }
            let res = report.normalization_residual;
            c.check(
                res.abs() <= report.error_estimate,
                format!("N={dim} gamma {gamma} residual {res:.1e} within {:.1e}", report.error_estimate),
            );
        }
        Ok(())
    });
    result?;
    c.check(elapsed <= Duration::from_secs(600), format!("{:.1}s", elapsed.as_secs_f64()));
    Ok(())
}

fn properties(c: &mut Checks) -> Result<(), CliError> {
    let gamma2 = |n| WavePacketSpec::power_gaussian(2.0, 1.0, n);
    let state = |spec: &WavePacketSpec, points| -> Result<RadialState, CliError> {
        Ok(reduced_wavefunction(spec, &RadialGrid::new(20.0, points)?)?)
    };

    let ev = crank_nicolson_evolve(&state(&gamma2(2)?, 4096)?, 2.5e-5, 100_000, 10_000)?;
    let drift = ev.series.records.iter().map(|r| (r.norm - 1.0).abs()).fold(0.0, f64::max);
    c.check(drift <= 1e-7, format!("norm drift {drift:.1e}"));

    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let ev = crank_nicolson_evolve(&state(&gamma2(n)?, 4096)?, 2.5e-4, 8000, 40)?;
        for w in ev.series.records.windows(3) {
            let slope = (w[2].mean_r - w[0].mean_r) / (w[2].tau - w[0].tau);
            worst = worst.max((slope - w[1].mean_p).abs());
        }
    }
    c.check(worst <= 2e-4, format!("Ehrenfest {worst:.1e}"));

    let exact = mean_radius_gamma2(2, 1.0)? * initial_radius_gamma2(2, 1.0)?;
    let error = |points, dt: f64| -> Result<f64, CliError> {
        let steps = (1.0 / dt).round() as usize;
        let ev = crank_nicolson_evolve(&state(&gamma2(2)?, points)?, dt, steps, steps)?;
        Ok((ev.series.records.last().map_or(f64::NAN, |r| r.mean_r) - exact).abs())
    };
    let factor = error(256, 0.02)? / error(512, 0.01)?;
    c.check(factor >= 3.5, format!("convergence factor {factor:.2}"));

    let mut worst: f64 = 0.0;
    for a in [-3.0, -2.5, -1.75, -1.0, -0.5] {
        for modulus in [0.5, 3.0, 20.0, 60.0, 200.0] {
            for angle in [1.2, std::f64::consts::FRAC_PI_2, 1.9] {
                let z = Complex64::from_polar(modulus, angle);
                let direct = hyp1f1(a, 1.0, z)?;
                let transformed = z.exp() * hyp1f1(1.0 - a, 1.0, -z)?;
                worst = worst.max((direct - transformed).norm() / direct.norm());
            }
        }
    }
    c.check(worst <= 1e-8, format!("Kummer {worst:.1e}"));

    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let second = 2.0 * (mean_radius_gamma2(n, h)? - 1.0) / (h * h);
        worst = worst.max((second - 2.0 * short_time_coefficient(n)?).abs());
    }
    c.check(worst <= 1e-6, format!("short-time {worst:.1e}"));
    Ok(())
}

fn determinism(c: &mut Checks) -> Result<(), CliError> {
    let moments = || -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        commands::moments(&MomentsConfig::resolve(&MomentsArgs::default())?, &mut buf)?;
        Ok(buf)
    };
    let first = moments()?;
    c.check(!first.is_empty() && first == moments()?, format!("moments {} bytes", first.len()));
    let sweep = || -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        commands::sweep(&SweepConfig::resolve(&SweepArgs::default())?, &mut buf)?;
        Ok(buf)
    };
    let first = sweep()?;
    c.check(!first.is_empty() && first == sweep()?, format!("sweep-gamma {} bytes", first.len()));
    Ok(())
}
