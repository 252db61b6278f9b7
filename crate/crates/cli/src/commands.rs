use std::io::Write;

use rayon::prelude::*;
use serde_json::json;
use swave_core::analytic::{golden_section_min, mean_radius_general_gamma_2d, moment_record_gamma2, p_infinity, Units};
use swave_core::evolve::{
    crank_nicolson_evolve, find_implosion, Implosion, MomentSeries, Provenance, RadialGrid, SpectralPropagator,
};
use swave_core::packets::{initial_mean_radius, reduced_wavefunction, Family, WavePacketSpec};
use swave_core::wigner::{negative_volume_with, PhaseSpaceReport, ShellSums, VolumeIntegrator};
use swave_core::{Error, SolverFault};

use crate::args::{Method, SweepMethod, UnitsArg};
use crate::config::{EvolveConfig, MomentsConfig, SweepConfig, WignerConfig};
use crate::error::CliError;
use crate::table::{fmt12, Table};

pub const SCALED_HEADER: [&str; 5] = ["tau", "mean_r_scaled", "mean_p_scaled", "source", "N"];
pub const NATURAL_HEADER: [&str; 5] = ["tau", "mean_r", "mean_p", "source", "N"];
pub const SWEEP_HEADER: [&str; 5] = ["gamma", "tau_min", "r_min_ratio", "method", "status"];

/// Golden-section bracket and tolerance for the general-γ minimum.
pub const SWEEP_BRACKET: (f64, f64) = (1e-3, 3.0);
pub const SWEEP_TOL: f64 = 1e-6;
/// Absolute accuracy requested from the general-γ integral.
pub const INTEGRAL_TOL: f64 = 1e-10;

fn header(units: UnitsArg) -> &'static [&'static str] {
    match units {
        UnitsArg::Scaled => &SCALED_HEADER,
        UnitsArg::Natural => &NATURAL_HEADER,
    }
}

fn source(p: Provenance) -> &'static str {
    match p {
        Provenance::Analytic => "analytic",
        Provenance::CrankNicolson => "cn",
        Provenance::Spectral => "spectral",
    }
}

fn write_series<W: Write>(table: &mut Table<W>, series: &MomentSeries, n: u32) -> Result<(), CliError> {
    let src = source(series.provenance);
    for r in &series.records {
        table.row([fmt12(r.tau), fmt12(r.mean_r), fmt12(r.mean_p), src.to_string(), n.to_string()])?;
    }
    Ok(())
}

pub fn moments(cfg: &MomentsConfig, out: impl Write) -> Result<(), CliError> {
    let units = match cfg.units {
        UnitsArg::Scaled => Units::Scaled,
        UnitsArg::Natural => Units::Natural,
    };
    let mut table = Table::new(out, header(cfg.units))?;
    for &n in &cfg.dims {
        for &tau in &cfg.taus {
            let r = moment_record_gamma2(n, tau, units, cfg.delta_r)?;
            table.row([fmt12(r.tau), fmt12(r.mean_r), fmt12(r.mean_p), "analytic".to_string(), n.to_string()])?;
        }
    }
    table.finish()
}

/// Result of `evolve`: the series actually produced and how the run ended.
#[derive(Debug)]
pub struct EvolveRun {
    pub series: MomentSeries,
    pub fault: Option<SolverFault>,
    pub implosion: Result<Option<Implosion>, Error>,
}

/// r₀ and p∞ used for scaled output.
///
/// p∞ is closed-form for the γ = 2 packet and otherwise taken from the box
/// spectrum, which exists for N = 2 and 3.
pub fn scales(cfg: &EvolveConfig) -> Result<(f64, f64), CliError> {
    let spec = &cfg.spec;
    let r0 = initial_mean_radius(spec)?;
    if spec.family() == Family::PowerGaussian && spec.gamma() == 2.0 {
        return Ok((r0, p_infinity(spec.dimension(), spec.delta_r())?));
    }
    if !matches!(spec.dimension(), 2 | 3) {
        return Err(CliError::config("scaled momentum for this packet needs dimension 2 or 3; use --units natural"));
    }
    let state = reduced_wavefunction(spec, &RadialGrid::new(cfg.grid.r_max, cfg.grid.points)?)?;
    Ok((r0, SpectralPropagator::new(&state)?.asymptotic_momentum()))
}

/// Runs the configured propagation. Solver faults are returned in the run,
/// with the samples recorded before the fault.
pub fn run_evolution(cfg: &EvolveConfig) -> Result<EvolveRun, CliError> {
    let grid = RadialGrid::new(cfg.grid.r_max, cfg.grid.points)?;
    let state = reduced_wavefunction(&cfg.spec, &grid).map_err(|e| match e {
        Error::GridTooSmall { .. } => CliError::config(e.to_string()),
        other => other.into(),
    })?;
    let (series, fault) = match cfg.method {
        Method::Spectral => (SpectralPropagator::new(&state)?.series(&cfg.time.taus())?, None),
        Method::Cn => {
            let dr2 = cfg.spec.delta_r() * cfg.spec.delta_r();
            let intervals = cfg.time.samples - 1;
            let t_max = cfg.time.tau_max * dr2;
            // dt is shortened so that every sample lands on the τ grid
            let every = ((t_max / cfg.grid.dt).ceil() as usize).div_ceil(intervals).max(1);
            let dt = t_max / (every * intervals) as f64;
            match crank_nicolson_evolve(&state, dt, every * intervals, every) {
                Ok(ev) => (ev.series, None),
                Err(Error::Solver { fault, partial }) => (partial, Some(fault)),
                Err(e) => return Err(e.into()),
            }
        }
    };
    let implosion = find_implosion(&series);
    Ok(EvolveRun { series, fault, implosion })
}

pub fn summary(cfg: &EvolveConfig, run: &EvolveRun) -> serde_json::Value {
    let (tau_min, r_min_ratio, implosion, note) = match &run.implosion {
        Ok(Some(i)) => (Some(i.tau_min), Some(i.r_min_ratio), Some(true), None),
        Ok(None) => (None, None, Some(false), None),
        Err(e) => (None, None, None, Some(e.to_string())),
    };
    json!({
        "command": "evolve",
        "family": cfg.spec.family().to_string(),
        "dim": cfg.spec.dimension(),
        "method": match cfg.method { Method::Cn => "cn", Method::Spectral => "spectral" },
        "status": run.fault.map_or_else(|| "ok".to_string(), |f| f.to_string()),
        "records": run.series.len(),
        "implosion": implosion,
        "tau_min": tau_min,
        "r_min_ratio": r_min_ratio,
        "note": note,
    })
}

/// Writes the series as CSV and the summary as one JSON line; a solver fault
/// becomes an error after both have been flushed.
pub fn evolve(cfg: &EvolveConfig, out: impl Write, mut summary_out: impl Write) -> Result<(), CliError> {
    let scale = match cfg.units {
        UnitsArg::Scaled => Some(scales(cfg)?),
        UnitsArg::Natural => None,
    };
    let run = run_evolution(cfg)?;
    let series = match scale {
        Some((r0, p_inf)) => run.series.to_scaled(r0, p_inf),
        None => run.series.clone(),
    };
    let mut table = Table::new(out, header(cfg.units))?;
    write_series(&mut table, &series, cfg.spec.dimension())?;
    table.finish()?;
    writeln!(summary_out, "{}", summary(cfg, &run))?;
    summary_out.flush()?;
    match run.fault {
        Some(f) => Err(CliError::Numerical(format!("solver stopped: {f}"))),
        None => Ok(()),
    }
}

/// Phase-space volumes with the radial shells spread over the thread pool.
pub fn wigner_report(cfg: &WignerConfig) -> Result<PhaseSpaceReport, CliError> {
    let run = |v: &VolumeIntegrator| {
        let shells: Vec<ShellSums> = (0..v.shells()).into_par_iter().map(|i| v.shell(i)).collect();
        v.combine(&shells)
    };
    Ok(negative_volume_with(&cfg.spec, cfg.resolution, cfg.tol, run)?)
}

pub fn wigner(cfg: &WignerConfig, mut out: impl Write) -> Result<(), CliError> {
    let report = wigner_report(cfg)?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// One row of `sweep-gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub result: Result<(f64, f64), String>,
    pub method: SweepMethod,
}

fn sweep_analytic(gamma: f64) -> Result<(f64, f64), String> {
    let (lo, hi) = SWEEP_BRACKET;
    let (tau, r) = golden_section_min(|t| mean_radius_general_gamma_2d(gamma, t, INTEGRAL_TOL), lo, hi, SWEEP_TOL)
        .map_err(|e| e.to_string())?;
    if tau - lo < 10.0 * SWEEP_TOL || hi - tau < 10.0 * SWEEP_TOL {
        return Err(format!("minimum at the bracket edge tau = {tau}"));
    }
    Ok((tau, r))
}

fn sweep_spectral(cfg: &SweepConfig, gamma: f64) -> Result<(f64, f64), String> {
    let spec: WavePacketSpec = cfg.spec(gamma).map_err(|e| e.to_string())?;
    let grid = cfg.grid_for(&spec).map_err(|e| e.to_string())?;
    let state = RadialGrid::new(grid.r_max, grid.points)
        .and_then(|g| reduced_wavefunction(&spec, &g))
        .map_err(|e| e.to_string())?;
    let series = SpectralPropagator::new(&state).and_then(|p| p.series(&cfg.time.taus())).map_err(|e| e.to_string())?;
    match find_implosion(&series).map_err(|e| e.to_string())? {
        Some(i) => Ok((i.tau_min, i.r_min_ratio)),
        None => Err("no implosion".into()),
    }
}

pub fn sweep_rows(cfg: &SweepConfig) -> Vec<SweepRow> {
    cfg.gammas
        .par_iter()
        .map(|&gamma| SweepRow {
            gamma,
            result: match cfg.method {
                SweepMethod::Analytic => sweep_analytic(gamma),
                SweepMethod::Spectral => sweep_spectral(cfg, gamma),
            },
            method: cfg.method,
        })
        .collect()
}

pub fn sweep(cfg: &SweepConfig, out: impl Write) -> Result<(), CliError> {
    let rows = sweep_rows(cfg);
    let mut table = Table::new(out, &SWEEP_HEADER)?;
    for row in rows {
        let method = match row.method {
            SweepMethod::Analytic => "analytic",
            SweepMethod::Spectral => "spectral",
        };
        let (tau, r, status) = match row.result {
            Ok((t, r)) => (fmt12(t), fmt12(r), "ok".to_string()),
            Err(e) => (String::new(), String::new(), e),
        };
        table.row([fmt12(row.gamma), tau, r, method.to_string(), status])?;
    }
    table.finish()
}
