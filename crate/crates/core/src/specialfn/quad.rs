//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite ranges.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};

/// Values an integrand may return.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> Complex64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 400_000;

#[derive(Clone, Copy, Debug)]
enum Map {
    Identity,
    /// x = cutoff / s on s ∈ (0, 1]
    Inverse {
        cutoff: f64,
    },
}

#[derive(Clone, Copy, Debug)]
struct Segment<T> {
    a: f64,
    b: f64,
    map: Map,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64, map: Map) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> T {
        match map {
            Map::Identity => f(t),
            Map::Inverse { cutoff } => f(cutoff / t) * (cutoff / (t * t)),
        }
    };
    let fc = eval(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];
    let mut values = [(T::zero(), T::zero()); 7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        values[j] = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[7];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += ((*f1 - mean).magnitude() + (*f2 - mean).magnitude()) * WGK[j];
    }
    let result = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (result, err)
}

/// Globally adaptive refinement over an initial set of segments.
fn refine<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    initial: Vec<(f64, f64, Map)>,
    tol: f64,
) -> Result<QuadratureResult<T>> {
    let mut heap = BinaryHeap::with_capacity(initial.len() * 2);
    let mut evaluations = 0;
    for (a, b, map) in initial {
        let (value, error) = gk15(f, a, b, map);
        evaluations += 15;
        heap.push(Segment { a, b, map, value, error });
    }
    let total_error = |heap: &BinaryHeap<Segment<T>>| heap.iter().map(|s| s.error).sum::<f64>();
    let mut err = total_error(&heap);
    let mut splits = 0usize;
    while err > tol {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() >= MAX_SEGMENTS || !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            let value = sum_segments(&heap);
            return Err(Error::ToleranceNotMet { best: value.to_complex(), error_estimate: total_error(&heap), tol });
        }
        let (v1, e1) = gk15(f, worst.a, mid, worst.map);
        let (v2, e2) = gk15(f, mid, worst.b, worst.map);
        evaluations += 30;
        heap.push(Segment { a: worst.a, b: mid, map: worst.map, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, map: worst.map, value: v2, error: e2 });
        splits += 1;
        // running sums drift; recompute now and then
        err = if splits.is_multiple_of(64) { total_error(&heap) } else { err - worst.error + e1 + e2 };
        if err <= tol {
            err = total_error(&heap);
        }
    }
    Ok(QuadratureResult { value: sum_segments(&heap), error_estimate: err, evaluations })
}

fn sum_segments<T: QuadValue>(heap: &BinaryHeap<Segment<T>>) -> T {
    // sorted by position so the sum does not depend on heap layout
    let mut segs: Vec<&Segment<T>> = heap.iter().collect();
    segs.sort_by(|x, y| {
        let key = |s: &Segment<T>| match s.map {
            Map::Identity => (0, s.a),
            Map::Inverse { .. } => (1, -s.a),
        };
        let (kx, ax) = key(x);
        let (ky, ay) = key(y);
        kx.cmp(&ky).then(ax.total_cmp(&ay))
    });
    segs.iter().fold(T::zero(), |acc, s| acc + s.value)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(domain("quadrature tolerance", tol))
    }
}

/// ∫ₐᵇ f(x) dx to absolute tolerance `tol`.
pub fn integrate<T: QuadValue>(mut f: impl FnMut(f64) -> T, a: f64, b: f64, tol: f64) -> Result<QuadratureResult<T>> {
    check_tol(tol)?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("integration bound", if a.is_finite() { b } else { a }));
    }
    refine(&mut f, alloc::vec![(a, b, Map::Identity)], tol)
}

/// ∫₀^∞ f(ξ) dξ to absolute tolerance `tol`, using unit-width panels.
pub fn integrate_semi_infinite<T: QuadValue>(f: impl FnMut(f64) -> T, tol: f64) -> Result<QuadratureResult<T>> {
    integrate_semi_infinite_with(f, tol, |_| 1.0)
}

/// ∫₀^∞ f(ξ) dξ with caller-chosen panel widths.
///
/// Panels of width `panel_width(x)` are laid from the origin until the
/// integrand density has fallen below 1e-3 of the running total for three
/// panels in a row; the remainder [L, ∞) is mapped onto (0, 1] by ξ = L/s.
/// All pieces are then refined together until the summed error is below `tol`.
/// Oscillatory integrands should pass widths of about half a period.
pub fn integrate_semi_infinite_with<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    tol: f64,
    panel_width: impl Fn(f64) -> f64,
) -> Result<QuadratureResult<T>> {
    check_tol(tol)?;
    const MAX_PANELS: usize = 200_000;
    let mut panels = Vec::new();
    let mut x = 0.0;
    let mut running = 0.0;
    let mut quiet = 0;
    while panels.len() < MAX_PANELS {
        let w = panel_width(x);
        if !(w > 0.0) || !w.is_finite() {
            return Err(domain("panel width", w));
        }
        let (v, _) = gk15(&mut f, x, x + w, Map::Identity);
        let size = v.magnitude();
        running += size;
        panels.push((x, x + w, Map::Identity));
        x += w;
        if size / w <= 1e-3 * running && x >= 1.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let cutoff = x;
    for (a, b) in [(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)] {
        panels.push((a, b, Map::Inverse { cutoff }));
    }
    refine(&mut f, panels, tol)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
