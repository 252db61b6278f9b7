//! Closed-form moment evolution of the γ = 2 packet in N dimensions and the
//! quadrature representation of the two-dimensional mean radius for general γ.
//!
//! Scaled results are in units of the initial radius r₀ (positions) and the
//! asymptotic momentum p∞ (momenta).

use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::evolve::{MomentSeries, Provenance};
use crate::specialfn::{gamma_real, hyp1f1, hyp1f1_scaled, integrate_semi_infinite_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Units {
    /// ⟨r⟩ in units of r₀, ⟨p⟩ in units of p∞.
    Scaled,
    /// ħ = M = 1 with lengths in the same units as δr.
    Natural,
}

/// One sample of a moment trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MomentRecord {
    pub tau: f64,
    pub mean_r: f64,
    pub mean_p: f64,
    pub norm: f64,
    pub units: Units,
}

impl MomentRecord {
    /// Converts a natural-unit record to scaled units.
    pub fn to_scaled(&self, r0: f64, p_inf: f64) -> MomentRecord {
        match self.units {
            Units::Scaled => *self,
            Units::Natural => {
                MomentRecord { mean_r: self.mean_r / r0, mean_p: self.mean_p / p_inf, units: Units::Scaled, ..*self }
            }
        }
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 1 {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(domain("tau", tau))
    }
}

/// a⁽ᴺ⁾ = 1 + 4N/(N²+3) as a reduced fraction (numerator, denominator).
pub fn a_coeff_rational(n: u32) -> Result<(u64, u64)> {
    check_dimension(n)?;
    let n = n as u64;
    let (mut num, mut den) = ((n + 1) * (n + 3), n * n + 3);
    let g = gcd(num, den);
    num /= g;
    den /= g;
    Ok((num, den))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// a⁽ᴺ⁾ = 1 + 4N/(N²+3), rounded once from the exact fraction.
pub fn a_coeff(n: u32) -> Result<f64> {
    let (num, den) = a_coeff_rational(n)?;
    Ok(num as f64 / den as f64)
}

/// r₀⁽ᴺ⁾ = Γ((N+5)/2)/Γ((N+4)/2)·δr for the γ = 2 packet.
pub fn initial_radius_gamma2(n: u32, delta_r: f64) -> Result<f64> {
    check_dimension(n)?;
    if !(delta_r > 0.0) {
        return Err(domain("delta_r", delta_r));
    }
    let x = 0.5 * n as f64;
    Ok(gamma_real(x + 2.5) / gamma_real(x + 2.0) * delta_r)
}

/// ⟨r⟩(τ)/r₀ = (1 + τ²/a)/√(1+τ²).
pub fn mean_radius_gamma2(n: u32, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let a = a_coeff(n)?;
    let t2 = tau * tau;
    Ok((1.0 + t2 / a) / (1.0 + t2).sqrt())
}

/// ⟨p⟩(τ)/p∞ = −τ(a − 2 − τ²)/(1+τ²)^{3/2}.
pub fn mean_momentum_gamma2(n: u32, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let a = a_coeff(n)?;
    let t2 = tau * tau;
    Ok(-tau * (a - 2.0 - t2) / (1.0 + t2).powf(1.5))
}

/// p∞⁽ᴺ⁾ = r₀⁽ᴺ⁾/(a⁽ᴺ⁾ δr²) with ħ = M = 1.
pub fn p_infinity(n: u32, delta_r: f64) -> Result<f64> {
    let r0 = initial_radius_gamma2(n, delta_r)?;
    Ok(r0 / (a_coeff(n)? * delta_r * delta_r))
}

/// True iff (N−1)(N−3) < 0, i.e. only for N = 2.
pub fn implosion_predicate(n: u32) -> bool {
    (n as i64 - 1) * (n as i64 - 3) < 0
}

/// τ_min = √(a⁽ᴺ⁾ − 2) where ⟨p⟩ changes sign, if a⁽ᴺ⁾ > 2.
pub fn tau_min(n: u32) -> Option<f64> {
    if n < 1 {
        return None;
    }
    // a − 2 = −(N−1)(N−3)/(N²+3)
    let num = -(n as i64 - 1) * (n as i64 - 3);
    if num <= 0 {
        return None;
    }
    let den = (n as i64) * (n as i64) + 3;
    Some((num as f64 / den as f64).sqrt())
}

/// ⟨r⟩(τ_min)/r₀ when the packet implodes.
pub fn r_min_ratio(n: u32) -> Option<f64> {
    tau_min(n).and_then(|t| mean_radius_gamma2(n, t).ok())
}

/// τ² coefficient 1/a − 1/2 of the short-time expansion of ⟨r⟩/r₀.
pub fn short_time_coefficient(n: u32) -> Result<f64> {
    Ok(1.0 / a_coeff(n)? - 0.5)
}

/// Closed-form record at τ for the γ = 2 packet.
pub fn moment_record_gamma2(n: u32, tau: f64, units: Units, delta_r: f64) -> Result<MomentRecord> {
    let r = mean_radius_gamma2(n, tau)?;
    let p = mean_momentum_gamma2(n, tau)?;
    let (mean_r, mean_p) = match units {
        Units::Scaled => (r, p),
        Units::Natural => (r * initial_radius_gamma2(n, delta_r)?, p * p_infinity(n, delta_r)?),
    };
    Ok(MomentRecord { tau, mean_r, mean_p, norm: 1.0, units })
}

/// Closed-form trajectory over a strictly increasing τ list.
pub fn analytic_series(n: u32, taus: &[f64], units: Units, delta_r: f64) -> Result<MomentSeries> {
    let records = taus.iter().map(|&t| moment_record_gamma2(n, t, units, delta_r)).collect::<Result<Vec<_>>>()?;
    MomentSeries::new(records, Provenance::Analytic)
}

/// How the ₁F₁ factor of the general-γ integrand is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerRoute {
    /// e^{−Re z}·₁F₁(−γ/2; 1; z) directly.
    Direct,
    /// ₁F₁(1 + γ/2; 1; −z), equal to the above up to a unit-modulus phase.
    Transformed,
}

/// ⟨r⟩(τ) of the two-dimensional packet Φ ∝ r^γ e^{−r²/2δr²}, in units of its
/// own initial radius r₀(γ) = Γ(γ+3/2)/Γ(γ+1)·δr.
///
/// Evaluated as
/// 2^{γ+1}Γ²(γ/2+1)/Γ(γ+3/2) · τ^γ/(1+τ²)^{γ/2+1} · I(τ),
/// I(τ) = ∫₀^∞ ξ² e^{−ξ²/(1+τ²)} |₁F₁(−γ/2; 1; iξ²/(2τ(1+iτ)))|² dξ,
/// with `tol` the absolute error allowed in the result.
pub fn mean_radius_general_gamma_2d(gamma: f64, tau: f64, tol: f64) -> Result<f64> {
    mean_radius_general_gamma_2d_via(gamma, tau, tol, KummerRoute::Direct)
}

pub fn mean_radius_general_gamma_2d_via(gamma: f64, tau: f64, tol: f64, route: KummerRoute) -> Result<f64> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(domain("gamma", gamma));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(domain("tau", tau));
    }
    if !(tol > 0.0) {
        return Err(domain("tol", tol));
    }
    let s = 1.0 + tau * tau;
    let half = 0.5 * gamma + 1.0;
    let log_pref = (gamma + 1.0) * 2f64.ln() + 2.0 * gamma_real(half).ln() - gamma_real(gamma + 1.5).ln()
        + gamma * tau.ln()
        - half * s.ln();
    let prefactor = log_pref.exp();

    let a = -0.5 * gamma;
    // z = ξ²·w with Re w = 1/(2(1+τ²))
    let w = Complex64::new(tau, 1.0) / (2.0 * tau * s);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |xi: f64| -> f64 {
        let z = w * (xi * xi);
        let f = match route {
            KummerRoute::Direct => hyp1f1_scaled(a, 1.0, z),
            KummerRoute::Transformed => hyp1f1(1.0 - a, 1.0, -z),
        };
        match f {
            Ok(v) => xi * xi * v.norm_sqr(),
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let scale = 0.5 * s.sqrt();
    // the interference term oscillates like e^{i Im z} until e^{−Re z} kills it
    let width = |xi: f64| {
        if xi * xi * w.re > 40.0 || xi == 0.0 {
            scale
        } else {
            scale.min(PI / (2.0 * xi * w.im))
        }
    };
    let integral = integrate_semi_infinite_with(integrand, tol / prefactor, width);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(prefactor * integral?.value)
}

/// Golden-section minimization of `f` on [lo, hi]; returns (x, f(x)).
pub fn golden_section_min(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(domain("bracket width", hi - lo));
    }
    if !(tol > 0.0) {
        return Err(domain("tol", tol));
    }
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}
