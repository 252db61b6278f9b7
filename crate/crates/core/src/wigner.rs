//! Wigner function of the isotropic power-Gaussian packets and the volumes of
//! its negative and positive parts.
//!
//! W(x, p) = π^{−N} ∫ dᴺy ψ(x+y) ψ(x−y) e^{2ip·y}  (ħ = 1, ψ real).
//!
//! Isotropy lets x lie along the first axis. Splitting y and p into a part
//! along x and a transverse part turns the inner integral into a product
//! quadrature: cos(2p∥y∥) along x, and across it cos(2p⊥y⊥) for N = 2 or
//! 2πρ J₀(2p⊥ρ) for N = 3. The phase-space volume is then integrated over
//! (r, p∥, p⊥) with the measures 2πr dr · dp∥ dp⊥ (N = 2) and
//! 4πr² dr · 2πp⊥ dp⊥ · dp∥ (N = 3), using the symmetries p∥ → −p∥ and
//! p⊥ → −p⊥.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::packets::{normalization_constant, solid_angle, Family, WavePacketSpec};
use crate::specialfn::{bessel_j0_unchecked, gauss_legendre};

/// Gauss–Legendre nodes per panel in every composite rule of this module.
const PANEL_NODES: usize = 8;
/// Phase-space cutoffs: r ≤ 10δr, |p∥|, p⊥ ≤ 10/δr.
pub const POSITION_CUTOFF: f64 = 10.0;
pub const MOMENTUM_CUTOFF: f64 = 10.0;
/// Inner integration box |y∥|, y⊥ ≤ 8δr.
pub const SEPARATION_CUTOFF: f64 = 8.0;
/// Inner nodes per axis used by [`wigner_value`].
const POINT_INNER_NODES: usize = 256;

/// Symmetry-reduced phase-space coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhasePoint {
    /// |x|
    pub r: f64,
    /// |p|
    pub p: f64,
    /// Cosine of the angle between x and p.
    pub cos_theta: f64,
}

/// Node counts of the composite Gauss–Legendre rules; each is rounded up to a
/// multiple of eight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WignerResolution {
    /// Nodes in r over [0, 10δr].
    pub position_nodes: usize,
    /// Nodes in each of p∥ and p⊥ over [0, 10/δr].
    pub momentum_nodes: usize,
    /// Nodes in each of y∥ and y⊥ over [0, 8δr].
    pub inner_nodes: usize,
}

impl Default for WignerResolution {
    fn default() -> Self {
        WignerResolution { position_nodes: 64, momentum_nodes: 64, inner_nodes: 128 }
    }
}

impl WignerResolution {
    pub fn doubled(&self) -> Self {
        WignerResolution {
            position_nodes: 2 * self.position_nodes,
            momentum_nodes: 2 * self.momentum_nodes,
            inner_nodes: 2 * self.inner_nodes,
        }
    }

    fn validate(&self) -> Result<()> {
        for n in [self.position_nodes, self.momentum_nodes, self.inner_nodes] {
            if n < PANEL_NODES {
                return Err(domain("quadrature nodes", n as f64));
            }
        }
        Ok(())
    }
}

/// Quadrature layout behind a report.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridMeta {
    /// Resolution of the reported values; the comparison run used half of it.
    pub resolution: WignerResolution,
    pub position_cutoff: f64,
    pub momentum_cutoff: f64,
    pub separation_cutoff: f64,
    /// Largest change of V₋ or V₊ between the two resolutions.
    pub refinement_difference: f64,
    /// |W| volume collected in the outermost panels.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhaseSpaceReport {
    pub dimension: u32,
    pub gamma: f64,
    pub delta_r: f64,
    pub v_minus: f64,
    pub v_plus: f64,
    /// V₊ − V₋ − 1.
    pub normalization_residual: f64,
    pub error_estimate: f64,
    pub grid_meta: GridMeta,
}

fn check_spec(spec: &WavePacketSpec) -> Result<()> {
    if spec.family() != Family::PowerGaussian {
        return Err(Error::UnsupportedFamily(spec.family()));
    }
    match spec.dimension() {
        2 | 3 => Ok(()),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Composite Gauss–Legendre rule on [0, length] with `nodes` rounded up to
/// whole panels.
fn composite_rule(length: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = nodes.div_ceil(PANEL_NODES);
    let (x, w) = gauss_legendre(PANEL_NODES);
    let width = length / panels as f64;
    let mut xs = Vec::with_capacity(panels * PANEL_NODES);
    let mut ws = Vec::with_capacity(panels * PANEL_NODES);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            xs.push(mid + 0.5 * width * xi);
            ws.push(0.5 * width * wi);
        }
    }
    (xs, ws)
}

/// ψ(x+y)ψ(x−y) for x = r e₁ and y = (y∥, y⊥).
struct Product {
    amplitude: f64,
    half_gamma: f64,
    inv_dr2: f64,
}

impl Product {
    fn new(spec: &WavePacketSpec) -> Result<Self> {
        let n = normalization_constant(spec)?;
        Ok(Product {
            amplitude: n * n / solid_angle(spec.dimension())?,
            half_gamma: 0.5 * spec.gamma(),
            inv_dr2: 1.0 / (spec.delta_r() * spec.delta_r()),
        })
    }

    fn eval(&self, r: f64, y_par: f64, y_perp: f64) -> f64 {
        let envelope = (-(r * r + y_par * y_par + y_perp * y_perp) * self.inv_dr2).exp();
        if self.half_gamma == 0.0 {
            return self.amplitude * envelope;
        }
        let t2 = y_perp * y_perp;
        let plus = (r + y_par) * (r + y_par) + t2;
        let minus = (r - y_par) * (r - y_par) + t2;
        self.amplitude * (plus * minus).powf(self.half_gamma) * envelope
    }
}

/// Transverse kernel integrated against the transverse separation.
fn transverse_kernel(dimension: u32, p_perp: f64, y_perp: f64) -> f64 {
    if dimension == 2 {
        2.0 * (2.0 * p_perp * y_perp).cos()
    } else {
        2.0 * PI * y_perp * bessel_j0_unchecked(2.0 * p_perp * y_perp)
    }
}

/// Wigner function at a symmetry-reduced phase-space point.
pub fn wigner_value(spec: &WavePacketSpec, point: PhasePoint) -> Result<f64> {
    check_spec(spec)?;
    if !(point.r >= 0.0) || !point.r.is_finite() {
        return Err(domain("r", point.r));
    }
    if !(point.p >= 0.0) || !point.p.is_finite() {
        return Err(domain("p", point.p));
    }
    if !(point.cos_theta.abs() <= 1.0) {
        return Err(domain("cos_theta", point.cos_theta));
    }
    let n = spec.dimension();
    let product = Product::new(spec)?;
    let p_par = point.p * point.cos_theta;
    let p_perp = point.p * (1.0 - point.cos_theta * point.cos_theta).max(0.0).sqrt();
    let (y, w) = composite_rule(SEPARATION_CUTOFF * spec.delta_r(), POINT_INNER_NODES);
    let transverse: Vec<f64> = y.iter().zip(&w).map(|(t, wt)| wt * transverse_kernel(n, p_perp, *t)).collect();
    let mut total = 0.0;
    for (yp, wp) in y.iter().zip(&w) {
        let inner: f64 = y.iter().zip(&transverse).map(|(t, k)| product.eval(point.r, *yp, *t) * k).sum();
        total += 2.0 * wp * (2.0 * p_par * yp).cos() * inner;
    }
    Ok(total / PI.powi(n as i32))
}

/// Signed volumes collected from one radial shell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShellSums {
    pub plus: f64,
    pub minus: f64,
    /// |W| volume from nodes in the outermost panel of any coordinate.
    pub tail: f64,
}

/// Precomputed tables for the phase-space volume integral at one resolution.
///
/// Shells are independent, so callers may evaluate them concurrently and
/// pass the results to [`VolumeIntegrator::combine`] in shell order.
pub struct VolumeIntegrator {
    dimension: u32,
    product: Product,
    r: Vec<f64>,
    r_weight: Vec<f64>,
    r_tail_from: usize,
    y: Vec<f64>,
    /// n_y × n_p⊥: w_y·kernel(p⊥, y⊥).
    transverse: Vec<f64>,
    /// n_p∥ × n_y: 2w_y·cos(2p∥y∥)/π^N.
    longitudinal: Vec<f64>,
    p_par_weight: Vec<f64>,
    p_perp_weight: Vec<f64>,
    p_tail_from: usize,
}

impl VolumeIntegrator {
    pub fn new(spec: &WavePacketSpec, resolution: WignerResolution) -> Result<Self> {
        check_spec(spec)?;
        resolution.validate()?;
        let n = spec.dimension();
        let dr = spec.delta_r();
        let (r, rw) = composite_rule(POSITION_CUTOFF * dr, resolution.position_nodes);
        let (p, pw) = composite_rule(MOMENTUM_CUTOFF / dr, resolution.momentum_nodes);
        let (y, yw) = composite_rule(SEPARATION_CUTOFF * dr, resolution.inner_nodes);
        let r_weight =
            r.iter().zip(&rw).map(|(x, w)| if n == 2 { 2.0 * PI * x * w } else { 4.0 * PI * x * x * w }).collect();
        let p_par_weight = pw.iter().map(|w| 2.0 * w).collect();
        let p_perp_weight = p.iter().zip(&pw).map(|(x, w)| if n == 2 { 2.0 * w } else { 2.0 * PI * x * w }).collect();
        let mut transverse = Vec::with_capacity(y.len() * p.len());
        for (t, wt) in y.iter().zip(&yw) {
            transverse.extend(p.iter().map(|q| wt * transverse_kernel(n, *q, *t)));
        }
        let norm = PI.powi(n as i32);
        let mut longitudinal = Vec::with_capacity(p.len() * y.len());
        for q in &p {
            longitudinal.extend(y.iter().zip(&yw).map(|(t, wt)| 2.0 * wt * (2.0 * q * t).cos() / norm));
        }
        Ok(VolumeIntegrator {
            dimension: n,
            product: Product::new(spec)?,
            r_tail_from: r.len() - PANEL_NODES,
            p_tail_from: p.len() - PANEL_NODES,
            r,
            r_weight,
            y,
            transverse,
            longitudinal,
            p_par_weight,
            p_perp_weight,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn shells(&self) -> usize {
        self.r.len()
    }

    /// Volumes contributed by the radial node `index`.
    pub fn shell(&self, index: usize) -> ShellSums {
        let r = self.r[index];
        let ny = self.y.len();
        let np = self.p_perp_weight.len();
        // a[i][k] = Σ_j P(y_i, y_j) T[j][k]
        let mut a = alloc::vec![0.0; ny * np];
        for (i, yi) in self.y.iter().enumerate() {
            let row = &mut a[i * np..(i + 1) * np];
            for (j, yj) in self.y.iter().enumerate() {
                let v = self.product.eval(r, *yi, *yj);
                for (slot, t) in row.iter_mut().zip(&self.transverse[j * np..(j + 1) * np]) {
                    *slot += v * t;
                }
            }
        }
        let shell_weight = self.r_weight[index];
        let outer_r = index >= self.r_tail_from;
        let mut sums = ShellSums::default();
        let mut w_row = alloc::vec![0.0; np];
        for (l, lw) in self.p_par_weight.iter().enumerate() {
            w_row.iter_mut().for_each(|x| *x = 0.0);
            for (i, c) in self.longitudinal[l * ny..(l + 1) * ny].iter().enumerate() {
                for (slot, v) in w_row.iter_mut().zip(&a[i * np..(i + 1) * np]) {
                    *slot += c * v;
                }
            }
            for (k, (w, kw)) in w_row.iter().zip(&self.p_perp_weight).enumerate() {
                let vol = w * lw * kw * shell_weight;
                if vol >= 0.0 {
                    sums.plus += vol;
                } else {
                    sums.minus -= vol;
                }
                if outer_r || l >= self.p_tail_from || k >= self.p_tail_from {
                    sums.tail += vol.abs();
                }
            }
        }
        sums
    }

    /// Adds shell results in index order.
    pub fn combine(&self, shells: &[ShellSums]) -> ShellSums {
        shells.iter().fold(ShellSums::default(), |acc, s| ShellSums {
            plus: acc.plus + s.plus,
            minus: acc.minus + s.minus,
            tail: acc.tail + s.tail,
        })
    }

    /// Sequential evaluation of every shell.
    pub fn evaluate(&self) -> ShellSums {
        let shells: Vec<ShellSums> = (0..self.shells()).map(|i| self.shell(i)).collect();
        self.combine(&shells)
    }
}

/// V₋ and V₊ at `resolution` and twice that resolution; fails if the two
/// differ by more than `tol`.
pub fn negative_volume(spec: &WavePacketSpec, resolution: WignerResolution, tol: f64) -> Result<PhaseSpaceReport> {
    negative_volume_with(spec, resolution, tol, |v| v.evaluate())
}

/// As [`negative_volume`], with the caller deciding how shells are evaluated.
pub fn negative_volume_with(
    spec: &WavePacketSpec,
    resolution: WignerResolution,
    tol: f64,
    mut run: impl FnMut(&VolumeIntegrator) -> ShellSums,
) -> Result<PhaseSpaceReport> {
    if !(tol > 0.0) {
        return Err(domain("tol", tol));
    }
    let coarse = run(&VolumeIntegrator::new(spec, resolution)?);
    let fine_resolution = resolution.doubled();
    let fine = run(&VolumeIntegrator::new(spec, fine_resolution)?);
    let difference = (fine.minus - coarse.minus).abs().max((fine.plus - coarse.plus).abs());
    if difference > tol {
        return Err(Error::ResolutionInsufficient { difference, tol });
    }
    // summation roundoff over millions of terms
    let roundoff = 1e-12 * (fine.plus + fine.minus);
    Ok(PhaseSpaceReport {
        dimension: spec.dimension(),
        gamma: spec.gamma(),
        delta_r: spec.delta_r(),
        v_minus: fine.minus,
        v_plus: fine.plus,
        normalization_residual: fine.plus - fine.minus - 1.0,
        error_estimate: difference + fine.tail + roundoff,
        grid_meta: GridMeta {
            resolution: fine_resolution,
            position_cutoff: POSITION_CUTOFF * spec.delta_r(),
            momentum_cutoff: MOMENTUM_CUTOFF / spec.delta_r(),
            separation_cutoff: SEPARATION_CUTOFF * spec.delta_r(),
            refinement_difference: difference,
            tail_estimate: fine.tail,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(gamma: f64, n: u32) -> WavePacketSpec {
        WavePacketSpec::power_gaussian(gamma, 1.0, n).unwrap()
    }

    #[test]
    fn gaussian_wigner_is_the_phase_space_gaussian() {
        for n in [2, 3] {
            for (r, p, c) in [(0.0, 0.0, 1.0), (1.2, 0.7, 0.3), (2.0, 1.5, -0.8)] {
                let got = wigner_value(&spec(0.0, n), PhasePoint { r, p, cos_theta: c }).unwrap();
                let want = (-(r * r) - p * p).exp() / PI.powi(n as i32);
                assert!((got - want).abs() < 1e-10, "N={n} ({r},{p},{c}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn unsupported_inputs() {
        let sine = WavePacketSpec::sine_gaussian(1.0, 2).unwrap();
        let pt = PhasePoint { r: 1.0, p: 1.0, cos_theta: 0.0 };
        assert!(matches!(wigner_value(&sine, pt), Err(Error::UnsupportedFamily(_))));
        assert!(matches!(wigner_value(&spec(2.0, 4), pt), Err(Error::UnsupportedDimension(4))));
        let bad = PhasePoint { r: 1.0, p: 1.0, cos_theta: 1.5 };
        assert!(wigner_value(&spec(2.0, 2), bad).is_err());
    }

    #[test]
    fn composite_rule_integrates_polynomials() {
        let (x, w) = composite_rule(3.0, 20);
        assert_eq!(x.len(), 24);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 9.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_volumes() {
        for n in [2, 3] {
            let report = negative_volume(&spec(0.0, n), WignerResolution::default(), 1e-5).unwrap();
            assert!(report.v_minus < 1e-10, "N={n}: {}", report.v_minus);
            assert!((report.v_plus - 1.0).abs() < 1e-8);
            assert!(report.normalization_residual.abs() <= report.error_estimate);
        }
    }
}
