use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use super::{observables, MomentSeries, Provenance, RadialState};
use crate::error::{domain, Error, Result};
use crate::specialfn::{bessel_j0_unchecked, bessel_j0_zero, bessel_j1};

/// Modes whose amplitude is below this fraction of the largest are dropped.
const SINE_CUTOFF: f64 = 1e-15;
/// Fourier–Bessel expansion stops once a block of modes carries less than
/// this fraction of the probability, or once it is below `BESSEL_FLOOR` and no
/// longer decreasing (the quadrature noise floor of the coefficients).
const BESSEL_TAIL: f64 = 1e-24;
const BESSEL_FLOOR: f64 = 1e-16;
const BESSEL_BLOCK: usize = 32;
/// Largest basis table kept in memory; beyond it J₀ is re-evaluated.
const MAX_TABLE: usize = 1 << 24;

enum Basis {
    /// sin(π q/(n+1)) for q = 0..2(n+1).
    Sine { table: Vec<f64> },
    /// J₀(k_m r_j), row-major by mode, or `None` when evaluated on demand.
    Bessel { rows: Option<Vec<f64>>, sqrt_two_pi_r: Vec<f64> },
}

/// Exact free evolution of a reduced wavefunction inside the grid's box.
///
/// For N = 3 the box eigenmodes are sin(k r) with k = πm/L; for N = 2 they are
/// J₀(k r) with k = j_{0,m}/L, applied to ψ = u/√(2πr). Here L is the position
/// of the outer Dirichlet ghost. Each mode picks up the phase e^{−ik²t/2}.
pub struct SpectralPropagator {
    initial: RadialState,
    wavenumbers: Vec<f64>,
    coeffs: Vec<Complex64>,
    /// Probability carried by each mode.
    weights: Vec<f64>,
    basis: Basis,
}

impl SpectralPropagator {
    pub fn new(initial: &RadialState) -> Result<Self> {
        match initial.dimension() {
            3 => Ok(Self::sine(initial)),
            2 => Ok(Self::bessel(initial)),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    fn sine(initial: &RadialState) -> Self {
        let n = initial.grid().len();
        let period = 2 * (n + 1);
        let table: Vec<f64> = (0..period).map(|q| (PI * q as f64 / (n + 1) as f64).sin()).collect();
        let u = initial.u();
        let scale = 2.0 / (n + 1) as f64;
        let mut coeffs: Vec<Complex64> = (1..=n)
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut q = 0;
                for z in u {
                    q += m;
                    if q >= period {
                        q -= period;
                    }
                    acc += z * table[q];
                }
                acc * scale
            })
            .collect();
        let largest = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let keep = coeffs.iter().rposition(|c| c.norm() > SINE_CUTOFF * largest).map_or(0, |i| i + 1);
        coeffs.truncate(keep);
        let box_len = initial.grid().outer_boundary();
        let wavenumbers = (1..=keep).map(|m| PI * m as f64 / box_len).collect();
        let weights = coeffs.iter().map(|c| c.norm_sqr() * 0.5 * box_len).collect();
        SpectralPropagator { initial: initial.clone(), wavenumbers, coeffs, weights, basis: Basis::Sine { table } }
    }

    fn bessel(initial: &RadialState) -> Self {
        let grid = initial.grid();
        let n = grid.len();
        let h = grid.spacing();
        let radius = grid.outer_boundary();
        let sqrt_two_pi_r: Vec<f64> = grid.points().map(|r| (2.0 * PI * r).sqrt()).collect();
        // ∫ψ J₀(kr) r dr with ψ r = u √r/√(2π) = u r/√(2πr)
        let moment: Vec<Complex64> =
            initial.u().iter().zip(grid.points()).zip(&sqrt_two_pi_r).map(|((u, r), s)| u * (r * h / s)).collect();
        let mut rows = Vec::new();
        let mut row = alloc::vec![0.0; n];
        let (mut wavenumbers, mut coeffs, mut weights) = (Vec::new(), Vec::new(), Vec::new());
        let mut total = 0.0;
        let mut block = 0.0;
        let mut previous_block = f64::INFINITY;
        for m in 1..=n {
            let zero = bessel_j0_zero(m);
            let k = zero / radius;
            for (slot, r) in row.iter_mut().zip(grid.points()) {
                *slot = bessel_j0_unchecked(k * r);
            }
            let j1 = bessel_j1(zero);
            let mode_norm = 0.5 * radius * radius * j1 * j1;
            let c: Complex64 = moment.iter().zip(&row).map(|(a, b)| a * b).sum::<Complex64>() / mode_norm;
            let w = 2.0 * PI * mode_norm * c.norm_sqr();
            wavenumbers.push(k);
            coeffs.push(c);
            weights.push(w);
            if m * n <= MAX_TABLE {
                rows.extend_from_slice(&row);
            }
            total += w;
            block += w;
            if m % BESSEL_BLOCK == 0 {
                let flat = block >= previous_block && block <= BESSEL_FLOOR * total;
                if block <= BESSEL_TAIL * total || flat {
                    break;
                }
                previous_block = block;
                block = 0.0;
            }
        }
        let rows = (rows.len() == coeffs.len() * n).then_some(rows);
        SpectralPropagator {
            initial: initial.clone(),
            wavenumbers,
            coeffs,
            weights,
            basis: Basis::Bessel { rows, sqrt_two_pi_r },
        }
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    /// Free-space limit of ⟨p⟩: every mode ends up as an outgoing wave of
    /// momentum k, so p∞ = Σ k|c_k|²/Σ|c_k|².
    pub fn asymptotic_momentum(&self) -> f64 {
        let total: f64 = self.weights.iter().sum();
        self.wavenumbers.iter().zip(&self.weights).map(|(k, w)| k * w).sum::<f64>() / total
    }

    /// State after an additional dimensionless time `tau`.
    pub fn propagate(&self, tau: f64) -> Result<RadialState> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(domain("tau", tau));
        }
        let dr = self.initial.delta_r();
        let t = tau * dr * dr;
        let phased: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(&self.wavenumbers)
            .map(|(c, k)| c * Complex64::from_polar(1.0, -0.5 * k * k * t))
            .collect();
        let grid = self.initial.grid();
        let n = grid.len();
        let mut u = alloc::vec![Complex64::new(0.0, 0.0); n];
        match &self.basis {
            Basis::Sine { table } => {
                let period = table.len();
                for (j, slot) in u.iter_mut().enumerate() {
                    let step = j + 1;
                    let mut q = 0;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in &phased {
                        q += step;
                        if q >= period {
                            q -= period;
                        }
                        acc += c * table[q];
                    }
                    *slot = acc;
                }
            }
            Basis::Bessel { rows, sqrt_two_pi_r } => {
                match rows {
                    Some(rows) => {
                        for (c, row) in phased.iter().zip(rows.chunks_exact(n)) {
                            for (slot, b) in u.iter_mut().zip(row) {
                                *slot += c * b;
                            }
                        }
                    }
                    None => {
                        for (c, k) in phased.iter().zip(&self.wavenumbers) {
                            for (slot, r) in u.iter_mut().zip(grid.points()) {
                                *slot += c * bessel_j0_unchecked(k * r);
                            }
                        }
                    }
                }
                for (slot, s) in u.iter_mut().zip(sqrt_two_pi_r) {
                    *slot *= s;
                }
            }
        }
        Ok(self.initial.with_u(u, self.initial.time() + t))
    }

    /// Moments at each τ of a strictly increasing list, in natural units.
    pub fn series(&self, taus: &[f64]) -> Result<MomentSeries> {
        let records =
            taus.iter().map(|&tau| self.propagate(tau).map(|s| observables(&s))).collect::<Result<Vec<_>>>()?;
        MomentSeries::new(records, Provenance::Spectral)
    }
}

/// One-shot exact free propagation by `tau`; N must be 2 or 3.
pub fn spectral_free_propagate(initial: &RadialState, tau: f64) -> Result<RadialState> {
    SpectralPropagator::new(initial)?.propagate(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{initial_radius_gamma2, mean_radius_gamma2, p_infinity};
    use crate::evolve::RadialGrid;
    use crate::packets::{reduced_wavefunction, WavePacketSpec};

    fn packet(n: u32, points: usize) -> RadialState {
        let spec = WavePacketSpec::power_gaussian(2.0, 1.0, n).unwrap();
        reduced_wavefunction(&spec, &RadialGrid::new(20.0, points).unwrap()).unwrap()
    }

    fn max_diff(a: &RadialState, b: &RadialState) -> f64 {
        a.u().iter().zip(b.u()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn round_trip_at_zero() {
        for n in [2, 3] {
            let s = packet(n, 4096);
            let back = spectral_free_propagate(&s, 0.0).unwrap();
            assert!(max_diff(&s, &back) <= 1e-9, "N={n}: {}", max_diff(&s, &back));
        }
    }

    #[test]
    fn unsupported_dimension() {
        let s = packet(2, 256).with_dimension(4).unwrap();
        assert!(matches!(spectral_free_propagate(&s, 0.1), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn matches_closed_form_radius() {
        for n in [2, 3] {
            let s = packet(n, 4096);
            let prop = SpectralPropagator::new(&s).unwrap();
            let r0 = initial_radius_gamma2(n, 1.0).unwrap();
            for tau in [0.5, 1.0, 2.0] {
                let got = observables(&prop.propagate(tau).unwrap()).mean_r / r0;
                let want = mean_radius_gamma2(n, tau).unwrap();
                assert!((got - want).abs() < 1e-4, "N={n} tau={tau}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn asymptotic_momentum_matches_closed_form() {
        for n in [2, 3] {
            let spec = WavePacketSpec::power_gaussian(2.0, 1.0, n).unwrap();
            let s = reduced_wavefunction(&spec, &RadialGrid::new(40.0, 8192).unwrap()).unwrap();
            let prop = SpectralPropagator::new(&s).unwrap();
            let want = p_infinity(n, 1.0).unwrap();
            assert!((prop.asymptotic_momentum() / want - 1.0).abs() < 1e-4, "N={n}");
        }
    }

    #[test]
    fn propagation_is_unitary() {
        for (n, tol) in [(2, 1e-5), (3, 1e-10)] {
            let prop = SpectralPropagator::new(&packet(n, 4096)).unwrap();
            let rec = observables(&prop.propagate(1.5).unwrap());
            assert!((rec.norm - 1.0).abs() < tol, "N={n}: {}", rec.norm);
        }
    }
}
