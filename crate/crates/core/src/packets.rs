//! Initial radial wave packets.
//!
//! Three families are provided:
//!
//! - `PowerGaussian`: Φ ∝ r^γ e^{−r²/2δr²}, normalized in N dimensions.
//! - `SineGaussian`: the same with r^γ replaced by sin(r²/δr²).
//! - `DisplacedGaussianReduced`: the reduced wavefunction itself,
//!   u(r) ∝ exp[−(r−ρ)²/δr²], identical for every N.
//!
//! The reduced wavefunction is u(r) = Φ(r)·r^{(N−1)/2}·√S⁽ᴺ⁾, so that
//! ∫₀^∞ |u|² dr = 1 and |u|² is the radial probability density.

use core::f64::consts::PI;
use core::fmt;

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::evolve::{RadialGrid, RadialState};
use crate::specialfn::{gamma_real, integrate_semi_infinite_with};

/// Probability allowed beyond the end of the grid.
pub const TRUNCATION_BUDGET: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    PowerGaussian,
    SineGaussian,
    DisplacedGaussianReduced,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::PowerGaussian => "power-gaussian",
            Family::SineGaussian => "sine-gaussian",
            Family::DisplacedGaussianReduced => "displaced-gaussian",
        })
    }
}

/// Declarative description of an initial radial state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WavePacketSpec {
    family: Family,
    gamma: f64,
    delta_r: f64,
    rho: f64,
    dimension: u32,
}

impl WavePacketSpec {
    pub fn power_gaussian(gamma: f64, delta_r: f64, dimension: u32) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(domain("gamma", gamma));
        }
        Self::checked(Family::PowerGaussian, gamma, delta_r, 0.0, dimension)
    }

    pub fn sine_gaussian(delta_r: f64, dimension: u32) -> Result<Self> {
        Self::checked(Family::SineGaussian, 0.0, delta_r, 0.0, dimension)
    }

    pub fn displaced_gaussian(delta_r: f64, rho: f64, dimension: u32) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(domain("rho", rho));
        }
        Self::checked(Family::DisplacedGaussianReduced, 0.0, delta_r, rho, dimension)
    }

    fn checked(family: Family, gamma: f64, delta_r: f64, rho: f64, dimension: u32) -> Result<Self> {
        if !(delta_r > 0.0) || !delta_r.is_finite() {
            return Err(domain("delta_r", delta_r));
        }
        if dimension < 1 {
            return Err(Error::UnsupportedDimension(dimension));
        }
        Ok(WavePacketSpec { family, gamma, delta_r, rho, dimension })
    }

    /// Same packet in another number of dimensions.
    pub fn with_dimension(&self, dimension: u32) -> Result<Self> {
        Self::checked(self.family, self.gamma, self.delta_r, self.rho, dimension)
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta_r(&self) -> f64 {
        self.delta_r
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Default box size: max(20δr, ρ + 12δr).
    pub fn default_r_max(&self) -> f64 {
        (20.0 * self.delta_r).max(self.rho + 12.0 * self.delta_r)
    }

    /// Signed real reduced amplitude u(r, 0) before grid renormalization.
    pub fn reduced_amplitude(&self, r: f64) -> f64 {
        let dr = self.delta_r;
        let x = r / dr;
        match self.family {
            Family::PowerGaussian => {
                let n = power_norm(self.gamma, self.dimension, dr);
                n * r.powf(self.gamma + 0.5 * (self.dimension as f64 - 1.0)) * (-0.5 * x * x).exp()
            }
            Family::SineGaussian => {
                let n = sine_norm(self.dimension, dr);
                n * (x * x).sin() * (-0.5 * x * x).exp() * r.powf(0.5 * (self.dimension as f64 - 1.0))
            }
            Family::DisplacedGaussianReduced => {
                let s = (r - self.rho) / dr;
                displaced_norm(self.rho, dr) * (-s * s).exp()
            }
        }
    }
}

/// Total solid angle S⁽ᴺ⁾ = 2π^{N/2}/Γ(N/2).
pub fn solid_angle(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::UnsupportedDimension(n));
    }
    let half = 0.5 * n as f64;
    Ok(2.0 * PI.powf(half) / gamma_real(half))
}

/// Radial normalization constant 𝒩 = [2/Γ(N/2+γ)]^{1/2} δr^{−N/2−γ}.
pub fn normalization_constant(spec: &WavePacketSpec) -> Result<f64> {
    match spec.family {
        Family::PowerGaussian => Ok(power_norm(spec.gamma, spec.dimension, spec.delta_r)),
        other => Err(Error::UnsupportedFamily(other)),
    }
}

fn power_norm(gamma: f64, n: u32, delta_r: f64) -> f64 {
    let e = 0.5 * n as f64 + gamma;
    (2.0 / gamma_real(e)).sqrt() * delta_r.powf(-e)
}

/// Amplitude normalizing sin(r²/δr²) e^{−r²/2δr²} r^{(N−1)/2} on the half-line:
/// ∫ r^{N−1} sin²(r²) e^{−r²} dr = Γ(N/2)/4 · (1 − Re (1−2i)^{−N/2}).
fn sine_norm(n: u32, delta_r: f64) -> f64 {
    let half = 0.5 * n as f64;
    let osc = Complex64::new(1.0, -2.0).powf(-half).re;
    let integral = gamma_real(half) / 4.0 * (1.0 - osc) * delta_r.powi(n as i32);
    1.0 / integral.sqrt()
}

/// ∫₀^∞ e^{−2(r−ρ)²/δr²} dr = δr/√2 · √π/2 · (1 + erf(√2 ρ/δr)).
fn displaced_norm(rho: f64, delta_r: f64) -> f64 {
    let s2 = core::f64::consts::SQRT_2;
    let integral = delta_r / s2 * PI.sqrt() / 2.0 * (1.0 + libm::erf(s2 * rho / delta_r));
    1.0 / integral.sqrt()
}

/// Radial probability density W⁽ᴺ⁾(r) = |u(r, 0)|².
pub fn radial_density(spec: &WavePacketSpec, r: f64) -> f64 {
    let u = spec.reduced_amplitude(r);
    u * u
}

/// Probability beyond `cutoff`.
fn tail_probability(spec: &WavePacketSpec, cutoff: f64) -> Result<f64> {
    let dr = spec.delta_r;
    let res = integrate_semi_infinite_with(|x: f64| radial_density(spec, cutoff + x), 1e-13, |_| dr)?;
    Ok(res.value)
}

/// Samples u(r, 0) on the grid, checks the truncated tail and renormalizes
/// so that Σ|u|²Δr = 1.
pub fn reduced_wavefunction(spec: &WavePacketSpec, grid: &RadialGrid) -> Result<RadialState> {
    let truncated = tail_probability(spec, grid.outer_boundary())?;
    if truncated > TRUNCATION_BUDGET {
        return Err(Error::GridTooSmall { truncated });
    }
    let mut u: Vec<Complex64> = grid.points().map(|r| Complex64::new(spec.reduced_amplitude(r), 0.0)).collect();
    let norm: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing();
    let scale = 1.0 / norm.sqrt();
    for z in &mut u {
        *z *= scale;
    }
    RadialState::new(*grid, u, 0.0, spec.dimension, spec.delta_r)
}

/// ⟨r⟩ at t = 0 by quadrature of r·W(r).
pub fn initial_mean_radius(spec: &WavePacketSpec) -> Result<f64> {
    let dr = spec.delta_r;
    let res = integrate_semi_infinite_with(|r: f64| r * radial_density(spec, r), 1e-13 * dr, |_| dr)?;
    Ok(res.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::integrate;

    fn power(gamma: f64, n: u32) -> WavePacketSpec {
        WavePacketSpec::power_gaussian(gamma, 1.0, n).unwrap()
    }

    #[test]
    fn solid_angles() {
        assert!((solid_angle(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((solid_angle(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((solid_angle(3).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(solid_angle(0).is_err());
    }

    #[test]
    fn normalization_constants() {
        assert!((normalization_constant(&power(0.0, 2)).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!((normalization_constant(&power(2.0, 2)).unwrap() - 1.0).abs() < 1e-14);
        let sine = WavePacketSpec::sine_gaussian(1.0, 2).unwrap();
        assert!(matches!(normalization_constant(&sine), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(WavePacketSpec::power_gaussian(-0.1, 1.0, 2).is_err());
        assert!(WavePacketSpec::power_gaussian(2.0, 0.0, 2).is_err());
        assert!(WavePacketSpec::power_gaussian(2.0, 1.0, 0).is_err());
        assert!(WavePacketSpec::displaced_gaussian(0.4, -1.0, 2).is_err());
    }

    #[test]
    fn densities_are_normalized() {
        let specs = [
            power(0.0, 1),
            power(2.0, 2),
            power(1.5, 3),
            power(3.0, 6),
            WavePacketSpec::sine_gaussian(1.0, 2).unwrap(),
            WavePacketSpec::sine_gaussian(0.7, 3).unwrap(),
            WavePacketSpec::displaced_gaussian(0.4, 1.5, 2).unwrap(),
        ];
        for spec in specs {
            let dr = spec.delta_r();
            let total = integrate(|r: f64| radial_density(&spec, r), 0.0, 20.0 * dr + spec.rho(), 1e-13).unwrap().value;
            assert!((total - 1.0).abs() < 1e-10, "{spec:?}: {total}");
        }
    }

    #[test]
    fn density_shape() {
        let spec = power(2.0, 2);
        assert_eq!(radial_density(&spec, 0.0), 0.0);
        // r⁵e^{−r²} peaks at √(5/2)
        let peak = (2.5f64).sqrt();
        let h = 1e-4;
        assert!(radial_density(&spec, peak) > radial_density(&spec, peak - h));
        assert!(radial_density(&spec, peak) > radial_density(&spec, peak + h));
    }

    #[test]
    fn initial_radius_closed_forms() {
        let sqrt_pi = PI.sqrt();
        let r2 = initial_mean_radius(&power(2.0, 2)).unwrap();
        assert!((r2 - 15.0 * sqrt_pi / 16.0).abs() < 1e-12);
        let r3 = initial_mean_radius(&power(2.0, 3)).unwrap();
        assert!((r3 - 16.0 / (5.0 * sqrt_pi)).abs() < 1e-12);
        let r0 = initial_mean_radius(&power(0.0, 2)).unwrap();
        assert!((r0 - sqrt_pi / 2.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_wavefunction_on_grid() {
        let spec = power(2.0, 2);
        let grid = RadialGrid::new(20.0, 4096).unwrap();
        let state = reduced_wavefunction(&spec, &grid).unwrap();
        let norm: f64 = state.u().iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing();
        assert!((norm - 1.0).abs() < 1e-12);
        // u ∝ r^{5/2} e^{−r²/2}
        let r = grid.r(100);
        let ratio = state.u()[100].re / (r.powf(2.5) * (-0.5 * r * r).exp());
        let r2 = grid.r(2000);
        let ratio2 = state.u()[2000].re / (r2.powf(2.5) * (-0.5 * r2 * r2).exp());
        assert!((ratio / ratio2 - 1.0).abs() < 1e-12);
        assert!(state.u().iter().all(|z| z.im == 0.0 && z.re >= 0.0));
    }

    #[test]
    fn grid_too_small() {
        let spec = power(2.0, 2);
        let grid = RadialGrid::new(4.0, 256).unwrap();
        assert!(matches!(reduced_wavefunction(&spec, &grid), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn displaced_packet_is_dimension_independent() {
        let two = WavePacketSpec::displaced_gaussian(0.4, 1.5, 2).unwrap();
        let three = two.with_dimension(3).unwrap();
        let grid = RadialGrid::new(two.default_r_max(), 4096).unwrap();
        let u2 = reduced_wavefunction(&two, &grid).unwrap();
        let u3 = reduced_wavefunction(&three, &grid).unwrap();
        assert_eq!(u2.u(), u3.u());
        let norm: f64 = u2.u().iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}
