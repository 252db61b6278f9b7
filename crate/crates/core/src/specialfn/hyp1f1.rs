#[cfg(test)]
use core::f64::consts::FRAC_PI_2;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use super::dd::{ComplexDd, Dd};
use super::gamma::{gamma_real, recip_gamma};
use crate::error::{domain, Error, Result};

/// Below this modulus the power series is summed in double-double. Above it
/// the large-|z| expansion is tried first, and the series is the fallback
/// when the expansion cannot reach its accuracy target.
const SERIES_RADIUS: f64 = 35.0;
const MAX_SERIES_TERMS: usize = 5000;
/// Relative accuracy demanded of a truncated asymptotic sum.
const ASYMPTOTIC_RTOL: f64 = 1e-12;

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z) for complex `z`.
///
/// Small and moderate |z| use the defining power series in double-double
/// arithmetic, which absorbs the e^|z| cancellation near the imaginary axis.
/// Large |z| uses the two-term asymptotic expansion, valid in every direction,
/// falling back to the series where the expansion is not yet accurate and to
/// Kummer's transformation where the series cancels too strongly.
/// Terminating cases (a a non-positive integer) always use the finite series.
pub fn hyp1f1(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    let (mantissa, log_scale) = evaluate(a, b, z)?;
    Ok(mantissa * log_scale.exp())
}

/// e^{−Re z}·₁F₁(a; b; z), finite even where ₁F₁ itself overflows.
pub(crate) fn hyp1f1_scaled(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    let (mantissa, log_scale) = evaluate(a, b, z)?;
    Ok(mantissa * (log_scale - z.re).exp())
}

/// Returns (m, s) with ₁F₁ = m·eˢ.
fn evaluate(a: f64, b: f64, z: Complex64) -> Result<(Complex64, f64)> {
    if !a.is_finite() {
        return Err(domain("hyp1f1 a", a));
    }
    if !b.is_finite() || (b <= 0.0 && b == b.floor()) {
        return Err(domain("hyp1f1 b", b));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(domain("hyp1f1 |z|", z.norm()));
    }
    if z == Complex64::new(0.0, 0.0) || a == 0.0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let terminating = a <= 0.0 && a == a.floor();
    if terminating {
        return series(a, b, z).map(|f| (f, 0.0));
    }
    let direct = if z.norm() < SERIES_RADIUS {
        series(a, b, z).map(|f| (f, 0.0))
    } else {
        match asymptotic(a, b, z) {
            Err(Error::NonConvergence { .. }) => series(a, b, z).map(|f| (f, 0.0)),
            other => other,
        }
    };
    match direct {
        // ₁F₁(a; b; z) = e^z ₁F₁(b−a; b; −z) moves the cancellation elsewhere
        Err(Error::NonConvergence { .. }) => {
            let f = series(b - a, b, -z)?;
            Ok((f * Complex64::from_polar(1.0, z.im), z.re))
        }
        other => other,
    }
}

fn series(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    let zdd = ComplexDd::from_c64(z);
    let mut term = ComplexDd::ONE;
    let mut sum = ComplexDd::ONE;
    let mut largest = 1.0_f64;
    let mut converged = false;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let ak = Dd::new(a) + Dd::new(kf);
        if ak.to_f64() == 0.0 {
            converged = true;
            break;
        }
        let den = (Dd::new(b) + Dd::new(kf)) * Dd::new(kf + 1.0);
        term = (term * zdd).scale(ak.div(den));
        sum = sum + term;
        let t = term.norm_hi();
        largest = largest.max(t);
        if kf > z.norm() && t <= 1e-32 * sum.norm_hi() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "hyp1f1 series" });
    }
    let value = sum.to_c64();
    // double-double keeps ~31 digits; what survives the cancellation must
    // still clear 1e-12 relative
    if largest * 1e-31 > 1e-12 * value.norm() {
        return Err(Error::NonConvergence { what: "hyp1f1 series" });
    }
    Ok(value)
}

/// Sum of an asymptotic series `1 + Σ t_s` with t_{s+1} = t_s·ratio(s),
/// truncated at the smallest term.
fn asymptotic_sum(mut ratio: impl FnMut(f64) -> Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0;
    for s in 0..500 {
        let next = term * ratio(s as f64);
        let size = next.norm();
        if size == 0.0 {
            return Ok(sum);
        }
        if size > last {
            // divergence sets in; the smallest term bounds the error
            return if last <= ASYMPTOTIC_RTOL * sum.norm() {
                Ok(sum)
            } else {
                Err(Error::NonConvergence { what: "hyp1f1 asymptotic expansion" })
            };
        }
        sum += next;
        term = next;
        last = size;
        if size <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "hyp1f1 asymptotic expansion" })
}

fn asymptotic(a: f64, b: f64, z: Complex64) -> Result<(Complex64, f64)> {
    let inv_z = z.inv();
    let neg_inv_z = -inv_z;
    let growing = asymptotic_sum(|s| inv_z * ((1.0 - a + s) * (b - a + s) / (s + 1.0)))?;
    let recessive = asymptotic_sum(|s| neg_inv_z * ((a + s) * (a - b + 1.0 + s) / (s + 1.0)))?;

    let gamma_b = gamma_real(b);
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = Complex64::from_polar(1.0, sign * PI * a);
    let ln_z = z.ln();

    // the larger of e^{Re z} and 1 is carried in the scale
    let scale = z.re.max(0.0);
    let t1 = Complex64::from_polar((z.re - scale).exp(), z.im) * ((a - b) * ln_z).exp() * recip_gamma(a) * growing;
    let t2 = phase * (-a * ln_z).exp() * recip_gamma(b - a) * recessive * (-scale).exp();
    Ok(((t1 + t2) * gamma_b, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(hyp1f1(0.3, 1.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(hyp1f1(0.0, 1.0, c(3.0, -7.0)).unwrap(), c(1.0, 0.0));
        for z in [c(0.5, 2.0), c(-40.0, 3.0), c(100.0, 150.0)] {
            let v = hyp1f1(-1.0, 1.0, z).unwrap();
            assert!(rel(v, c(1.0, 0.0) - z) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(hyp1f1(0.5, 0.0, c(1.0, 0.0)).is_err());
        assert!(hyp1f1(0.5, -2.0, c(1.0, 0.0)).is_err());
        assert!(hyp1f1(f64::NAN, 1.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn exponential_special_case() {
        // ₁F₁(a; a; z) = e^z
        for z in [c(1.0, 2.0), c(-20.0, 30.0), c(36.0, -5.0)] {
            let v = hyp1f1(1.5, 1.5, z).unwrap();
            assert!(rel(v, z.exp()) < 1e-11, "{z}: {v} vs {}", z.exp());
        }
    }

    #[test]
    fn both_branches_agree_where_they_overlap() {
        for (a, radius) in [(-0.5, 36.0), (-0.75, 40.0), (-1.5, 45.0), (-2.75, 55.0), (2.5, 45.0)] {
            for angle in [0.1_f64, 0.8, 1.4, FRAC_PI_2, -0.7] {
                let z = Complex64::from_polar(radius, angle);
                let series_side = series(a, 1.0, z).unwrap();
                let (m, s) = asymptotic(a, 1.0, z).unwrap();
                let asym_side = m * s.exp();
                assert!(rel(series_side, asym_side) < 1e-10, "a {a} angle {angle}");
            }
        }
    }
}

#[cfg(test)]
mod fallback {
    use super::*;

    #[test]
    fn every_direction_just_outside_the_series_radius() {
        for a in [-0.5, -0.75, -1.5, -2.75, 1.75, 3.5] {
            for angle in [0.0_f64, 0.1, 0.8, 1.4, FRAC_PI_2, 2.5, 3.1, -0.7, -FRAC_PI_2] {
                let z = Complex64::from_polar(SERIES_RADIUS * 1.001, angle);
                assert!(hyp1f1(a, 1.0, z).is_ok(), "a {a} angle {angle}");
            }
        }
    }
}
