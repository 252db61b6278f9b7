use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use super::{observables, MomentSeries, Provenance, RadialState};
use crate::error::{domain, Error, Result, SolverFault};

/// Outer fraction of the grid watched for reflections.
pub const BOUNDARY_FRACTION: f64 = 0.05;
/// Largest allowed |u| in the watched region relative to max |u|.
pub const BOUNDARY_THRESHOLD: f64 = 1e-6;
/// Largest allowed |norm − 1|.
pub const NORM_DRIFT_LIMIT: f64 = 1e-7;

/// Thresholds checked at every sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitor {
    pub boundary_fraction: f64,
    pub boundary_threshold: f64,
    pub norm_drift: f64,
}

impl Default for Monitor {
    fn default() -> Self {
        Monitor {
            boundary_fraction: BOUNDARY_FRACTION,
            boundary_threshold: BOUNDARY_THRESHOLD,
            norm_drift: NORM_DRIFT_LIMIT,
        }
    }
}

/// Sampled trajectory and the state after the last step.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub series: MomentSeries,
    pub final_state: RadialState,
}

/// Symmetric tridiagonal H acting on u.
///
/// The radial Laplacian is taken in flux form for ψ = u r^{−(N−1)/2},
/// (1/r^{N−1}) d/dr (r^{N−1} dψ/dr), with cell weights r_j^{N−1} and face
/// weights chosen so that constants and r² are differentiated exactly, then
/// rewritten for u. Away from the origin this is −½u″ + V⁽ᴺ⁾u to second order
/// (for N = 3 it is exactly the three-point −½u″); near the origin it follows
/// the regular solution u ∝ r^{(N−1)/2} without sampling the singular
/// potential.
pub(crate) struct Hamiltonian {
    pub(crate) diag: Vec<f64>,
    /// Coupling between points j and j+1.
    pub(crate) off: Vec<f64>,
}

impl Hamiltonian {
    pub(crate) fn new(state: &RadialState) -> Self {
        let grid = state.grid();
        let h = grid.spacing();
        let n = grid.len();
        let e = state.dimension() as f64 - 1.0;
        let scale = 0.5 / (h * h);
        let weight = |i: f64| i.powf(e);
        // face weights make the scheme exact for ψ = const and ψ = r²:
        // f_i(2i+1) − f_{i−1}(2i−1) = 2N·i^{N−1}, with no face below the first point
        let mut faces = Vec::with_capacity(n);
        let mut below = 0.0;
        for j in 0..n {
            let i = (j + 1) as f64;
            below = (2.0 * (e + 1.0) * weight(i) + below * (2.0 * i - 1.0)) / (2.0 * i + 1.0);
            faces.push(below);
        }
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n);
        for j in 0..n {
            let i = (j + 1) as f64;
            let inner = if j == 0 { 0.0 } else { faces[j - 1] };
            diag.push(scale * (inner + faces[j]) / weight(i));
            off.push(-scale * faces[j] / (weight(i) * weight(i + 1.0)).sqrt());
        }
        Hamiltonian { diag, off }
    }

    #[cfg(test)]
    pub(crate) fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let n = u.len();
        (0..n)
            .map(|j| {
                let mut v = u[j] * self.diag[j];
                if j > 0 {
                    v += u[j - 1] * self.off[j - 1];
                }
                if j + 1 < n {
                    v += u[j + 1] * self.off[j];
                }
                v
            })
            .collect()
    }
}

/// (I + i dt/2 H) factored once for repeated Thomas solves.
struct Stepper {
    /// Off-diagonal of the implicit matrix, i dt/2·H_{j,j+1}.
    a_off: Vec<Complex64>,
    /// Modified super-diagonal c'_j.
    c_prime: Vec<Complex64>,
    /// 1/(diag_j − a_{j−1}·c'_{j−1}).
    inv_den: Vec<Complex64>,
    /// Explicit matrix (I − i dt/2 H).
    b_diag: Vec<Complex64>,
    b_off: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Stepper {
    fn new(state: &RadialState, dt: f64) -> Self {
        let ham = Hamiltonian::new(state);
        let n = ham.diag.len();
        let half = Complex64::new(0.0, 0.5 * dt);
        let one = Complex64::new(1.0, 0.0);
        let a_off: Vec<Complex64> = ham.off.iter().map(|o| half * o).collect();
        let b_off: Vec<Complex64> = a_off.iter().map(|a| -a).collect();
        let mut c_prime = Vec::with_capacity(n);
        let mut inv_den = Vec::with_capacity(n);
        let mut b_diag = Vec::with_capacity(n);
        let mut prev_c = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let d = one + half * ham.diag[j];
            let coupling = if j > 0 { a_off[j - 1] * prev_c } else { Complex64::new(0.0, 0.0) };
            let inv = (d - coupling).inv();
            prev_c = a_off[j] * inv;
            c_prime.push(prev_c);
            inv_den.push(inv);
            b_diag.push(one - half * ham.diag[j]);
        }
        Stepper { a_off, c_prime, inv_den, b_diag, b_off, scratch: alloc::vec![Complex64::new(0.0, 0.0); n] }
    }

    fn step(&mut self, u: &mut [Complex64]) {
        let n = u.len();
        let d = &mut self.scratch;
        // right-hand side and forward sweep in one pass
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut rhs = self.b_diag[j] * u[j];
            if j > 0 {
                rhs += self.b_off[j - 1] * u[j - 1];
                prev *= self.a_off[j - 1];
            }
            if j + 1 < n {
                rhs += self.b_off[j] * u[j + 1];
            }
            prev = (rhs - prev) * self.inv_den[j];
            d[j] = prev;
        }
        u[n - 1] = d[n - 1];
        for j in (0..n - 1).rev() {
            u[j] = d[j] - self.c_prime[j] * u[j + 1];
        }
    }
}

fn boundary_ratio(u: &[Complex64], fraction: f64) -> f64 {
    let n = u.len();
    let start = n - ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    let peak = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = u[start..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak > 0.0 {
        edge / peak
    } else {
        0.0
    }
}

fn check(state: &RadialState, monitor: &Monitor, records: &mut Vec<crate::analytic::MomentRecord>) -> Result<()> {
    let rec = observables(state);
    records.push(rec);
    let fault = if (rec.norm - 1.0).abs() > monitor.norm_drift {
        Some(SolverFault::NormDrift { norm: rec.norm })
    } else {
        let ratio = boundary_ratio(state.u(), monitor.boundary_fraction);
        (ratio > monitor.boundary_threshold).then_some(SolverFault::BoundaryContamination { ratio })
    };
    match fault {
        Some(fault) => Err(Error::Solver {
            fault,
            partial: MomentSeries { records: core::mem::take(records), provenance: Provenance::CrankNicolson },
        }),
        None => Ok(()),
    }
}

/// Propagates `initial` by `n_steps` Crank–Nicolson steps of size `dt`
/// (natural time units), recording moments every `sample_every` steps and
/// after the final step.
///
/// The run aborts with [`Error::Solver`] carrying the samples taken so far
/// when the norm drifts or the packet reaches the outer edge of the grid.
pub fn crank_nicolson_evolve(initial: &RadialState, dt: f64, n_steps: usize, sample_every: usize) -> Result<Evolution> {
    crank_nicolson_evolve_monitored(initial, dt, n_steps, sample_every, Monitor::default())
}

/// As [`crank_nicolson_evolve`] with explicit abort thresholds.
pub fn crank_nicolson_evolve_monitored(
    initial: &RadialState,
    dt: f64,
    n_steps: usize,
    sample_every: usize,
    monitor: Monitor,
) -> Result<Evolution> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(domain("dt", dt));
    }
    if sample_every < 1 {
        return Err(domain("sample_every", 0.0));
    }
    let mut stepper = Stepper::new(initial, dt);
    let mut u = initial.u().to_vec();
    let t0 = initial.time();
    let mut records = Vec::with_capacity(n_steps / sample_every + 2);
    check(initial, &monitor, &mut records)?;
    let mut state = initial.clone();
    for k in 1..=n_steps {
        stepper.step(&mut u);
        if k % sample_every == 0 || k == n_steps {
            state = initial.with_u(u.clone(), t0 + k as f64 * dt);
            check(&state, &monitor, &mut records)?;
        }
    }
    Ok(Evolution { series: MomentSeries::new(records, Provenance::CrankNicolson)?, final_state: state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::RadialGrid;
    use crate::packets::{reduced_wavefunction, WavePacketSpec};

    fn packet(n: u32) -> RadialState {
        let spec = WavePacketSpec::power_gaussian(2.0, 1.0, n).unwrap();
        reduced_wavefunction(&spec, &RadialGrid::new(20.0, 2048).unwrap()).unwrap()
    }

    #[test]
    fn zero_steps_gives_initial_record() {
        let ev = crank_nicolson_evolve(&packet(2), 1e-3, 0, 1).unwrap();
        assert_eq!(ev.series.len(), 1);
        assert_eq!(ev.series.records[0].tau, 0.0);
        assert!(ev.series.records[0].mean_p.abs() < 1e-12);
    }

    #[test]
    fn thomas_solve_inverts_the_implicit_matrix() {
        let state = packet(2);
        let dt = 1e-3;
        let mut st = Stepper::new(&state, dt);
        let mut u = state.u().to_vec();
        st.step(&mut u);
        // (I + i dt/2 H) u¹ = (I − i dt/2 H) u⁰
        let ham = Hamiltonian::new(&state);
        let half = Complex64::new(0.0, 0.5 * dt);
        let hu1 = ham.apply(&u);
        let hu0 = ham.apply(state.u());
        for j in 0..u.len() {
            let lhs = u[j] + half * hu1[j];
            let rhs = state.u()[j] - half * hu0[j];
            assert!((lhs - rhs).norm() < 1e-13, "row {j}");
        }
    }

    #[test]
    fn hamiltonian_is_kinetic_plus_effective_potential() {
        // away from the origin H u ≈ −½u″ + V u for smooth u
        for n in [2, 3, 4] {
            let grid = RadialGrid::new(20.0, 4096).unwrap();
            let f = |r: f64| (-(r - 8.0) * (r - 8.0)).exp();
            let f2 = |r: f64| (4.0 * (r - 8.0) * (r - 8.0) - 2.0) * f(r);
            let u: Vec<Complex64> = grid.points().map(|r| Complex64::new(f(r), 0.0)).collect();
            let state = RadialState::new(grid, u, 0.0, n, 1.0).unwrap();
            let hu = Hamiltonian::new(&state).apply(state.u());
            for j in [1000, 1500, 1638, 2000] {
                let r = grid.r(j);
                let want = -0.5 * f2(r) + crate::evolve::effective_potential(n, r).unwrap() * f(r);
                assert!((hu[j].re - want).abs() < 1e-4, "N={n} r={r}: {} vs {want}", hu[j].re);
            }
        }
    }

    #[test]
    fn norm_is_conserved() {
        let ev = crank_nicolson_evolve(&packet(2), 2.5e-3, 400, 100).unwrap();
        for r in &ev.series.records {
            assert!((r.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_contamination_is_reported() {
        let spec = WavePacketSpec::power_gaussian(2.0, 1.0, 3).unwrap();
        let state = reduced_wavefunction(&spec, &RadialGrid::new(9.0, 512).unwrap()).unwrap();
        match crank_nicolson_evolve(&state, 1e-2, 2000, 10) {
            Err(Error::Solver { fault: SolverFault::BoundaryContamination { .. }, partial }) => {
                assert!(partial.len() >= 2);
                assert_eq!(partial.records[0].tau, 0.0);
            }
            other => panic!("expected boundary fault, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_step() {
        assert!(crank_nicolson_evolve(&packet(3), 0.0, 10, 1).is_err());
        assert!(crank_nicolson_evolve(&packet(3), 1e-3, 10, 0).is_err());
    }
}
