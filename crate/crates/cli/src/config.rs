//! JSON configuration and its merge with command-line flags.
//!
//! Precedence is flag, then file, then built-in default. Everything is
//! validated here, before any computation or output.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use swave_core::packets::WavePacketSpec;

use crate::args::{
    EvolveArgs, FamilyName, GridArgs, Method, MomentsArgs, SweepArgs, SweepMethod, TimeArgs, UnitsArg, WignerArgs,
};
use crate::error::CliError;

pub const MAX_TAU: f64 = 100.0;
pub const DEFAULT_POINTS: usize = 4096;
pub const DEFAULT_DT: f64 = 2.5e-4;
pub const DEFAULT_RHO: f64 = 1.5;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<FamilyName>,
    pub gamma: Option<f64>,
    pub delta_r: Option<f64>,
    pub rho: Option<f64>,
    pub dim: Option<u32>,
    pub tau_max: Option<f64>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub grid: FileGrid,
    pub method: Option<Method>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileGrid {
    pub r_max: Option<f64>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(format!("{name} must be positive and finite, got {value}")))
    }
}

fn dimension(n: u32) -> Result<u32, CliError> {
    if (1..=6).contains(&n) {
        Ok(n)
    } else {
        Err(CliError::config(format!("dimension must be in 1..=6, got {n}")))
    }
}

/// τ samples on [0, τ_max]: none, just 0, or `samples` evenly spaced values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub tau_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    fn resolve(args: &TimeArgs, file: &FileConfig, tau_max: f64, samples: usize) -> Result<Self, CliError> {
        let tau_max = positive("tau_max", args.tau_max.or(file.tau_max).unwrap_or(tau_max))?;
        if tau_max > MAX_TAU {
            return Err(CliError::config(format!("tau_max must not exceed {MAX_TAU}, got {tau_max}")));
        }
        let samples = args.samples.or(file.samples).unwrap_or(samples);
        Ok(TimeGrid { tau_max, samples })
    }

    pub fn taus(&self) -> Vec<f64> {
        match self.samples {
            0 => Vec::new(),
            1 => vec![0.0],
            n => (0..n).map(|i| self.tau_max * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub r_max: f64,
    pub points: usize,
    pub dt: f64,
}

impl GridConfig {
    fn resolve(args: &GridArgs, file: &FileConfig, spec: &WavePacketSpec) -> Result<Self, CliError> {
        let r_max = positive("r_max", args.r_max.or(file.grid.r_max).unwrap_or_else(|| spec.default_r_max()))?;
        let points = args.n.or(file.grid.n).unwrap_or(DEFAULT_POINTS);
        if points < 16 {
            return Err(CliError::config(format!("grid needs at least 16 points, got {points}")));
        }
        let dt = positive("dt", args.dt.or(file.grid.dt).unwrap_or(DEFAULT_DT))?;
        Ok(GridConfig { r_max, points, dt })
    }
}

fn packet(family: FamilyName, gamma: f64, delta_r: f64, rho: f64, dim: u32) -> Result<WavePacketSpec, CliError> {
    let delta_r = positive("delta_r", delta_r)?;
    let dim = dimension(dim)?;
    let spec = match family {
        FamilyName::Power => {
            if !(gamma >= 0.0) || !gamma.is_finite() {
                return Err(CliError::config(format!("gamma must be non-negative, got {gamma}")));
            }
            WavePacketSpec::power_gaussian(gamma, delta_r, dim)
        }
        FamilyName::Sine => WavePacketSpec::sine_gaussian(delta_r, dim),
        FamilyName::Displaced => WavePacketSpec::displaced_gaussian(delta_r, positive("rho", rho)?, dim),
    };
    spec.map_err(|e| CliError::config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentsConfig {
    pub dims: Vec<u32>,
    pub delta_r: f64,
    pub taus: Vec<f64>,
    pub units: UnitsArg,
}

impl MomentsConfig {
    pub fn resolve(args: &MomentsArgs) -> Result<Self, CliError> {
        let file = FileConfig::load(args.common.config.as_deref())?;
        let dims = if !args.dim.is_empty() {
            args.dim.clone()
        } else if let Some(d) = file.dim {
            vec![d]
        } else {
            vec![2, 3]
        };
        let dims = dims.into_iter().map(dimension).collect::<Result<Vec<_>, _>>()?;
        let delta_r = positive("delta_r", args.delta_r.or(file.delta_r).unwrap_or(1.0))?;
        let taus = match &args.taus {
            Some(taus) => {
                for &t in taus {
                    if !(0.0..=MAX_TAU).contains(&t) {
                        return Err(CliError::config(format!("tau must lie in [0, {MAX_TAU}], got {t}")));
                    }
                }
                taus.clone()
            }
            None => TimeGrid::resolve(&args.time, &file, 3.0, 301)?.taus(),
        };
        Ok(MomentsConfig { dims, delta_r, taus, units: args.units.unwrap_or_default() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub spec: WavePacketSpec,
    pub time: TimeGrid,
    pub grid: GridConfig,
    pub method: Method,
    pub units: UnitsArg,
}

impl EvolveConfig {
    pub fn resolve(args: &EvolveArgs) -> Result<Self, CliError> {
        let file = FileConfig::load(args.common.config.as_deref())?;
        let p = &args.packet;
        let spec = packet(
            p.family.or(file.family).unwrap_or(FamilyName::Power),
            p.gamma.or(file.gamma).unwrap_or(2.0),
            p.delta_r.or(file.delta_r).unwrap_or(1.0),
            p.rho.or(file.rho).unwrap_or(DEFAULT_RHO),
            args.dim.or(file.dim).unwrap_or(2),
        )?;
        let time = TimeGrid::resolve(&args.time, &file, 2.0, 201)?;
        if time.samples < 2 {
            return Err(CliError::config("evolve needs at least 2 samples"));
        }
        let grid = GridConfig::resolve(&args.grid, &file, &spec)?;
        let method = args.method.or(file.method).unwrap_or(Method::Cn);
        if method == Method::Spectral && !matches!(spec.dimension(), 2 | 3) {
            return Err(CliError::config("the spectral method needs dimension 2 or 3"));
        }
        Ok(EvolveConfig { spec, time, grid, method, units: args.units.unwrap_or_default() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerConfig {
    pub spec: WavePacketSpec,
    pub resolution: swave_core::wigner::WignerResolution,
    pub tol: f64,
}

impl WignerConfig {
    pub fn resolve(args: &WignerArgs) -> Result<Self, CliError> {
        let file = FileConfig::load(args.common.config.as_deref())?;
        if file.family.is_some_and(|f| f != FamilyName::Power) {
            return Err(CliError::config("the Wigner volumes are defined for the power family only"));
        }
        let dim = args.dim.or(file.dim).unwrap_or(2);
        if !matches!(dim, 2 | 3) {
            return Err(CliError::config(format!("wigner needs dimension 2 or 3, got {dim}")));
        }
        let spec = packet(
            FamilyName::Power,
            args.gamma.or(file.gamma).unwrap_or(2.0),
            args.delta_r.or(file.delta_r).unwrap_or(1.0),
            DEFAULT_RHO,
            dim,
        )?;
        let base = swave_core::wigner::WignerResolution::default();
        let nodes = |v: Option<usize>, d: usize, name: &str| match v.unwrap_or(d) {
            n if n >= 8 => Ok(n),
            n => Err(CliError::config(format!("{name} must be at least 8, got {n}"))),
        };
        let resolution = swave_core::wigner::WignerResolution {
            position_nodes: nodes(args.position_nodes, base.position_nodes, "position-nodes")?,
            momentum_nodes: nodes(args.momentum_nodes, base.momentum_nodes, "momentum-nodes")?,
            inner_nodes: nodes(args.inner_nodes, base.inner_nodes, "inner-nodes")?,
        };
        let tol = positive("tol", args.tol.unwrap_or(1e-3))?;
        Ok(WignerConfig { spec, resolution, tol })
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
    pub delta_r: f64,
    pub method: SweepMethod,
    pub time: TimeGrid,
    pub grid: GridArgs,
    pub file: FileConfig,
}

impl SweepConfig {
    pub fn resolve(args: &SweepArgs) -> Result<Self, CliError> {
        let file = FileConfig::load(args.common.config.as_deref())?;
        let gammas = if !args.gammas.is_empty() {
            args.gammas.clone()
        } else if let Some(g) = file.gamma {
            vec![g]
        } else {
            vec![1.5, 2.0, 3.0, 4.0]
        };
        for &g in &gammas {
            if !(g > 1.0) || !g.is_finite() {
                return Err(CliError::config(format!("sweep-gamma needs every gamma > 1, got {g}")));
            }
        }
        let delta_r = positive("delta_r", args.delta_r.or(file.delta_r).unwrap_or(1.0))?;
        let method = match (args.method, file.method) {
            (Some(m), _) => m,
            (None, Some(Method::Spectral)) => SweepMethod::Spectral,
            (None, Some(Method::Cn)) => {
                return Err(CliError::config("sweep-gamma supports the analytic and spectral methods"));
            }
            (None, None) => SweepMethod::Analytic,
        };
        let time = TimeGrid::resolve(&args.time, &file, 3.0, 301)?;
        if method == SweepMethod::Spectral {
            if time.samples < 16 {
                return Err(CliError::config("the spectral sweep needs at least 16 samples"));
            }
            // checked now so that no row can fail on configuration
            let spec = packet(FamilyName::Power, gammas[0], delta_r, DEFAULT_RHO, 2)?;
            GridConfig::resolve(&args.grid, &file, &spec)?;
        }
        Ok(SweepConfig { gammas, delta_r, method, time, grid: args.grid.clone(), file })
    }

    pub fn spec(&self, gamma: f64) -> Result<WavePacketSpec, CliError> {
        packet(FamilyName::Power, gamma, self.delta_r, DEFAULT_RHO, 2)
    }

    pub fn grid_for(&self, spec: &WavePacketSpec) -> Result<GridConfig, CliError> {
        GridConfig::resolve(&self.grid, &self.file, spec)
    }
}
