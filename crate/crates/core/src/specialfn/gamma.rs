use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("gamma argument", x));
    }
    Ok(gamma_real(x))
}

/// Gamma function on the whole real line; poles map to ±∞.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        if x == x.floor() {
            return f64::INFINITY;
        }
        // Γ(x)Γ(1−x) = π / sin(πx)
        return PI / (sin_pi(x) * gamma_real(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so t^(x+1/2) does not overflow before e^-t pulls it back
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * acc
}

/// 1/Γ(x), zero at the poles.
pub(crate) fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma_real(x)
    }
}

/// sin(πx) with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}
