use core::f64::consts::{FRAC_1_SQRT_2, PI};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Result};

/// Switch from the power series to the Hankel expansion.
const SERIES_LIMIT: f64 = 12.0;

/// Bessel function of the first kind of order zero, `x ≥ 0`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_j0 argument", x));
    }
    Ok(bessel_j0_unchecked(x))
}

pub(crate) fn bessel_j0_unchecked(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_LIMIT {
        series(0, x)
    } else {
        hankel(0, x)
    }
}

pub(crate) fn bessel_j1(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    sign * if x < SERIES_LIMIT { series(1, x) } else { hankel(1, x) }
}

/// m-th positive zero of J₀ (m ≥ 1).
pub(crate) fn bessel_j0_zero(m: usize) -> f64 {
    // McMahon's expansion, then Newton on J₀ with J₀' = −J₁
    let beta = (m as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut x = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3)) + 120_928.0 / (15.0 * b8.powi(5));
    for _ in 0..6 {
        let step = bessel_j0_unchecked(x) / bessel_j1(x);
        x += step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

/// Σ (−x²/4)^k / (k!(k+ν)!) · (x/2)^ν
fn series(order: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * (k + order as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2.0 {
            break;
        }
    }
    sum
}

/// Hankel's expansion J_ν(x) ≈ √(2/πx) (P cos χ − Q sin χ), χ = x − (ν/2 + 1/4)π,
/// truncated at the smallest term.
fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * eight_x);
        if next.abs() >= last {
            break;
        }
        // a_k enters P for even k and Q for odd k with alternating signs
        match k % 4 {
            1 => q += next,
            2 => p -= next,
            3 => q -= next,
            _ => p += next,
        }
        last = next.abs();
        term = next;
        if last < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // cos χ and sin χ without subtracting a rounded multiple of π from x
    let (cos_chi, sin_chi) = if order == 0 {
        (FRAC_1_SQRT_2 * (c + s), FRAC_1_SQRT_2 * (s - c))
    } else {
        (FRAC_1_SQRT_2 * (s - c), -FRAC_1_SQRT_2 * (c + s))
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
