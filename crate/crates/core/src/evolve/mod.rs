//! Time evolution of the reduced radial wavefunction.
//!
//! The reduced wavefunction obeys the half-line Schrödinger equation
//!
//! i ∂u/∂t = [−½ ∂²/∂r² + V⁽ᴺ⁾(r)] u,  V⁽ᴺ⁾(r) = (N−1)(N−3)/(8r²),
//!
//! with u(0) = 0. [`crank_nicolson_evolve`] integrates it on a uniform grid.
//! [`SpectralPropagator`] evolves free packets exactly in a sine (N = 3) or
//! Fourier–Bessel (N = 2) basis and serves as an independent oracle.

mod crank_nicolson;
mod spectral;

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

pub use crank_nicolson::{
    crank_nicolson_evolve, crank_nicolson_evolve_monitored, Evolution, Monitor, BOUNDARY_FRACTION, BOUNDARY_THRESHOLD,
    NORM_DRIFT_LIMIT,
};
pub use spectral::{spectral_free_propagate, SpectralPropagator};

use crate::analytic::{MomentRecord, Units};
use crate::error::{domain, Error, Result};

/// Uniform half-line grid r_j = j·spacing, j = 1..n_points, with Dirichlet
/// ghosts at r = 0 and r = (n_points + 1)·spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RadialGrid {
    r_max: f64,
    n_points: usize,
    spacing: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(domain("r_max", r_max));
        }
        if n_points < 16 {
            return Err(domain("n_points", n_points as f64));
        }
        Ok(RadialGrid { r_max, n_points, spacing: r_max / n_points as f64 })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn len(&self) -> usize {
        self.n_points
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Radius of the zero-based index `i`, i.e. (i+1)·spacing.
    pub fn r(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.spacing
    }

    /// Position of the outer Dirichlet ghost.
    pub fn outer_boundary(&self) -> f64 {
        (self.n_points + 1) as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.r(i))
    }
}

/// Reduced wavefunction on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    grid: RadialGrid,
    u: Vec<Complex64>,
    time: f64,
    dimension: u32,
    delta_r: f64,
}

impl RadialState {
    pub fn new(grid: RadialGrid, u: Vec<Complex64>, time: f64, dimension: u32, delta_r: f64) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(domain("state length", u.len() as f64));
        }
        if !(time >= 0.0) {
            return Err(domain("time", time));
        }
        if !(delta_r > 0.0) {
            return Err(domain("delta_r", delta_r));
        }
        if dimension < 1 {
            return Err(Error::UnsupportedDimension(dimension));
        }
        Ok(RadialState { grid, u, time, dimension, delta_r })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    pub fn u(&self) -> &[Complex64] {
        &self.u
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn tau(&self) -> f64 {
        self.time / (self.delta_r * self.delta_r)
    }
    pub fn dimension(&self) -> u32 {
        self.dimension
    }
    pub fn delta_r(&self) -> f64 {
        self.delta_r
    }

    /// Same wavefunction relabelled as living in another dimension.
    pub fn with_dimension(&self, dimension: u32) -> Result<Self> {
        RadialState::new(self.grid, self.u.clone(), self.time, dimension, self.delta_r)
    }

    pub(crate) fn with_u(&self, u: Vec<Complex64>, time: f64) -> RadialState {
        RadialState { grid: self.grid, u, time, dimension: self.dimension, delta_r: self.delta_r }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Provenance {
    Analytic,
    CrankNicolson,
    Spectral,
}

/// Moment trajectory with strictly increasing τ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MomentSeries {
    pub records: Vec<MomentRecord>,
    pub provenance: Provenance,
}

impl MomentSeries {
    pub fn new(records: Vec<MomentRecord>, provenance: Provenance) -> Result<Self> {
        for pair in records.windows(2) {
            if !(pair[1].tau > pair[0].tau) {
                return Err(domain("tau ordering", pair[1].tau));
            }
        }
        Ok(MomentSeries { records, provenance })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records rescaled to r₀ and p∞ units.
    pub fn to_scaled(&self, r0: f64, p_inf: f64) -> MomentSeries {
        MomentSeries {
            records: self.records.iter().map(|r| r.to_scaled(r0, p_inf)).collect(),
            provenance: self.provenance,
        }
    }
}

/// V⁽ᴺ⁾(r) = (N−1)(N−3)/(8r²).
pub fn effective_potential(n: u32, r: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(r > 0.0) {
        return Err(domain("r", r));
    }
    let c = (n as f64 - 1.0) * (n as f64 - 3.0);
    Ok(c / (8.0 * r * r))
}

/// Norm, ⟨r⟩ and ⟨p⟩ = ⟨−i∂/∂r⟩ on the grid, in natural units.
///
/// ⟨r⟩ and ⟨p⟩ are divided by the grid norm.
pub fn observables(state: &RadialState) -> MomentRecord {
    let h = state.grid.spacing();
    let u = &state.u;
    let n = u.len();
    let mut norm = 0.0;
    let mut r_acc = 0.0;
    let mut p_acc = 0.0;
    for j in 0..n {
        let w = u[j].norm_sqr();
        norm += w;
        r_acc += state.grid.r(j) * w;
        let left = if j > 0 { u[j - 1] } else { Complex64::new(0.0, 0.0) };
        let right = if j + 1 < n { u[j + 1] } else { Complex64::new(0.0, 0.0) };
        p_acc += (u[j].conj() * (right - left)).im;
    }
    let norm = norm * h;
    MomentRecord { tau: state.tau(), mean_r: r_acc * h / norm, mean_p: 0.5 * p_acc / norm, norm, units: Units::Natural }
}

/// Position and depth of the first interior minimum of ⟨r⟩(τ).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Implosion {
    pub tau_min: f64,
    /// ⟨r⟩ at the minimum divided by ⟨r⟩ at the first record.
    pub r_min_ratio: f64,
}

/// Relative decrease treated as noise when detecting the first descent.
const DESCENT_NOISE: f64 = 1e-12;
const MIN_RECORDS: usize = 16;

/// Locates the first interior minimum of ⟨r⟩ by a quadratic fit through the
/// bracketing samples. `None` if ⟨r⟩ never decreases.
pub fn find_implosion(series: &MomentSeries) -> Result<Option<Implosion>> {
    let rec = &series.records;
    if rec.len() < MIN_RECORDS {
        return Err(Error::InsufficientSampling);
    }
    let r0 = rec[0].mean_r;
    let n = rec.len();
    let falls = |i: usize| rec[i].mean_r < rec[i - 1].mean_r * (1.0 - DESCENT_NOISE);
    let Some(first_fall) = (1..n).find(|&i| falls(i)) else {
        return Ok(None);
    };
    let Some(i) = (first_fall..n - 1).find(|&i| rec[i + 1].mean_r >= rec[i].mean_r) else {
        return Err(Error::InsufficientSampling);
    };
    if i < 2 || i + 2 >= n {
        return Err(Error::InsufficientSampling);
    }
    let (x0, x1, x2) = (rec[i - 1].tau, rec[i].tau, rec[i + 1].tau);
    let (f0, f1, f2) = (rec[i - 1].mean_r, rec[i].mean_r, rec[i + 1].mean_r);
    let num = (x1 - x0).powi(2) * (f1 - f2) - (x1 - x2).powi(2) * (f1 - f0);
    let den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    let x = if den != 0.0 { x1 - 0.5 * num / den } else { x1 };
    let x = x.clamp(x0, x2);
    let value = f0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2))
        + f1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2))
        + f2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    Ok(Some(Implosion { tau_min: x, r_min_ratio: value / r0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{analytic_series, r_min_ratio, tau_min};
    use crate::packets::{reduced_wavefunction, WavePacketSpec};

    #[test]
    fn potential_values() {
        assert_eq!(effective_potential(3, 0.7).unwrap(), 0.0);
        assert_eq!(effective_potential(1, 0.7).unwrap(), 0.0);
        assert_eq!(effective_potential(2, 1.0).unwrap(), -0.125);
        assert!(effective_potential(2, 0.0).is_err());
    }

    #[test]
    fn grid_layout() {
        let g = RadialGrid::new(20.0, 4096).unwrap();
        assert_eq!(g.r(0), g.spacing());
        assert_eq!(g.r(4095), 20.0);
        assert!(RadialGrid::new(1.0, 8).is_err());
        assert!(RadialGrid::new(-1.0, 64).is_err());
    }

    #[test]
    fn observables_of_initial_packet() {
        let spec = WavePacketSpec::power_gaussian(2.0, 1.0, 2).unwrap();
        let grid = RadialGrid::new(20.0, 4096).unwrap();
        let state = reduced_wavefunction(&spec, &grid).unwrap();
        let rec = observables(&state);
        assert!((rec.mean_r - 15.0 * core::f64::consts::PI.sqrt() / 16.0).abs() < 1e-6);
        assert!(rec.mean_p.abs() < 1e-12);
        assert!((rec.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn momentum_shift() {
        let spec = WavePacketSpec::displaced_gaussian(0.5, 6.0, 3).unwrap();
        let grid = RadialGrid::new(12.0, 32768).unwrap();
        let state = reduced_wavefunction(&spec, &grid).unwrap();
        let k0 = 1.7;
        let shifted: Vec<Complex64> =
            state.u().iter().zip(grid.points()).map(|(u, r)| u * Complex64::from_polar(1.0, k0 * r)).collect();
        let moved = state.with_u(shifted, 0.0);
        let p = observables(&moved).mean_p;
        assert!((p - k0).abs() < 1e-6, "{p}");
    }

    fn taus(n: usize, max: f64) -> Vec<f64> {
        (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn implosion_from_closed_form() {
        let s = analytic_series(2, &taus(301, 3.0), Units::Scaled, 1.0).unwrap();
        let imp = find_implosion(&s).unwrap().unwrap();
        assert!((imp.tau_min - tau_min(2).unwrap()).abs() < 2e-3);
        assert!((imp.r_min_ratio - r_min_ratio(2).unwrap()).abs() < 1e-4);
        let s3 = analytic_series(3, &taus(301, 3.0), Units::Scaled, 1.0).unwrap();
        assert_eq!(find_implosion(&s3).unwrap(), None);
    }

    #[test]
    fn implosion_sampling_errors() {
        let short = analytic_series(2, &taus(10, 3.0), Units::Scaled, 1.0).unwrap();
        assert_eq!(find_implosion(&short), Err(Error::InsufficientSampling));
        // minimum beyond the end of the series
        let early = analytic_series(2, &taus(40, 0.3), Units::Scaled, 1.0).unwrap();
        assert_eq!(find_implosion(&early), Err(Error::InsufficientSampling));
    }

    #[test]
    fn series_must_increase() {
        let rec = MomentRecord { tau: 1.0, mean_r: 1.0, mean_p: 0.0, norm: 1.0, units: Units::Scaled };
        assert!(MomentSeries::new(alloc::vec![rec, rec], Provenance::Analytic).is_err());
    }
}
