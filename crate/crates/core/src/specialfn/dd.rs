//! Minimal double-double arithmetic (~32 significant digits).
//!
//! Only what the ₁F₁ power series needs: add, multiply, divide, and a
//! complex wrapper.

use core::ops::{Add, Mul};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub(crate) fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub(crate) fn div(self, other: Dd) -> Dd {
        // long division: one f64 quotient digit, corrected by the remainder
        let q1 = self.hi / other.hi;
        let r = self + (other * Dd::new(-q1));
        let q2 = r.hi / other.hi;
        let r = r + (other * Dd::new(-q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::new(q3)
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ComplexDd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl ComplexDd {
    pub(crate) const ONE: ComplexDd = ComplexDd { re: Dd { hi: 1.0, lo: 0.0 }, im: Dd::ZERO };

    pub(crate) fn from_c64(z: Complex64) -> Self {
        ComplexDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub(crate) fn scale(self, s: Dd) -> Self {
        ComplexDd { re: self.re * s, im: self.im * s }
    }

    /// |z| from the leading parts only; good enough for convergence tests.
    pub(crate) fn norm_hi(self) -> f64 {
        libm::hypot(self.re.abs_hi(), self.im.abs_hi())
    }
}

impl Add for ComplexDd {
    type Output = ComplexDd;

    fn add(self, o: ComplexDd) -> ComplexDd {
        ComplexDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for ComplexDd {
    type Output = ComplexDd;

    fn mul(self, o: ComplexDd) -> ComplexDd {
        let neg = Dd::new(-1.0);
        ComplexDd { re: self.re * o.re + (self.im * o.im) * neg, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_f64() {
        // (1 + 2^-60) - 1 vanishes in f64 but not here
        let tiny = libm::ldexp(1.0, -60);
        let x = Dd::new(1.0) + Dd::new(tiny) + Dd::new(-1.0);
        assert_eq!(x.to_f64(), tiny);
    }

    #[test]
    fn division_round_trips() {
        let a = Dd::new(1.0).div(Dd::new(3.0));
        let back = a * Dd::new(3.0) + Dd::new(-1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }
}
