//! Rational intervals with a configurable working precision.
//!
//! Endpoints are rationals rounded outward to multiples of `2^-bits` after every
//! operation, so precision can be raised until a sign question is settled.

use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Q,
    pub hi: Q,
    pub bits: u32,
}

fn floor_to(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    let f = scaled.numer().div_floor(scaled.denom());
    Q::new(f, scale)
}

fn ceil_to(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    let (d, r) = scaled.numer().div_mod_floor(scaled.denom());
    let c = if r.is_zero() { d } else { d + 1 };
    Q::new(c, scale)
}

impl RatInterval {
    pub fn exact(x: Q, bits: u32) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    pub fn int(n: i64, bits: u32) -> Self {
        Self::exact(Q::from_integer(BigInt::from(n)), bits)
    }

    fn rounded(lo: Q, hi: Q, bits: u32) -> Self {
        RatInterval {
            lo: floor_to(&lo, bits),
            hi: ceil_to(&hi, bits),
            bits,
        }
    }

    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn recip(&self) -> Option<Self> {
        if self.sign().unwrap_or(0) == 0 {
            return None;
        }
        let a = self.lo.recip();
        let b = self.hi.recip();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Some(Self::rounded(lo, hi, self.bits))
    }

    /// Enclosure of the square root; negative parts of the input are clamped to zero.
    pub fn sqrt(&self) -> Self {
        let scale = BigInt::one() << (2 * self.bits);
        let den = BigInt::one() << self.bits;
        let lo = if self.lo.is_positive() {
            let y = (&self.lo * Q::from_integer(scale.clone()))
                .floor()
                .to_integer();
            Q::new(y.sqrt(), den.clone())
        } else {
            Q::zero()
        };
        let hi = if self.hi.is_positive() {
            let y = (&self.hi * Q::from_integer(scale)).ceil().to_integer();
            let s = y.sqrt();
            let s = if &s * &s < y { s + 1 } else { s };
            Q::new(s, den)
        } else {
            Q::zero()
        };
        RatInterval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Enclosure of π via Machin's formula.
    pub fn pi(bits: u32) -> Self {
        let (a_lo, a_hi) = atan_inv(5, bits + 8);
        let (b_lo, b_hi) = atan_inv(239, bits + 8);
        let sixteen = Q::from_integer(BigInt::from(16));
        let four = Q::from_integer(BigInt::from(4));
        let lo = &sixteen * a_lo - &four * b_hi;
        let hi = &sixteen * a_hi - &four * b_lo;
        Self::rounded(lo, hi, bits)
    }

    /// Enclosure of `cos(π/m)` for `m ≥ 2`.
    pub fn cos_pi_over(m: u32, bits: u32) -> Self {
        let work = bits + 16;
        let pi = Self::pi(work);
        let mq = Q::from_integer(BigInt::from(m));
        // cos is decreasing on [0, π/2].
        let x_lo = &pi.lo / &mq;
        let x_hi = &pi.hi / &mq;
        let (lo, _) = cos_bounds(&x_hi, work);
        let (_, hi) = cos_bounds(&x_lo, work);
        Self::rounded(lo, hi, bits)
    }
}

/// Bounds on `atan(1/x)` from the alternating Taylor series.
fn atan_inv(x: i64, bits: u32) -> (Q, Q) {
    let xq = Q::from_integer(BigInt::from(x));
    let x2 = &xq * &xq;
    let eps = Q::new(BigInt::one(), BigInt::one() << (bits + 2));
    let mut power = xq.recip();
    let mut sum = Q::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / Q::from_integer(BigInt::from(2 * k + 1));
        let next = if k % 2 == 0 {
            &sum + &term
        } else {
            &sum - &term
        };
        if term < eps {
            let (lo, hi) = if next < sum { (next, sum) } else { (sum, next) };
            return (lo, hi);
        }
        sum = next;
        power = &power / &x2;
        k += 1;
    }
}

/// Bounds on `cos(y)` for `0 ≤ y ≤ 2` from the alternating Taylor series.
fn cos_bounds(y: &Q, bits: u32) -> (Q, Q) {
    let y2 = y * y;
    let eps = Q::new(BigInt::one(), BigInt::one() << (bits + 2));
    let mut term = Q::one();
    let mut sum = Q::zero();
    let mut k: i64 = 0;
    loop {
        let next = if k % 2 == 0 {
            &sum + &term
        } else {
            &sum - &term
        };
        if term < eps && k > 0 {
            let (lo, hi) = if next < sum { (next, sum) } else { (sum, next) };
            return (lo, hi);
        }
        sum = next;
        term = &term * &y2 / Q::from_integer(BigInt::from((2 * k + 1) * (2 * k + 2)));
        k += 1;
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, o: &RatInterval) -> RatInterval {
        RatInterval::rounded(&self.lo + &o.lo, &self.hi + &o.hi, self.bits.min(o.bits))
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, o: &RatInterval) -> RatInterval {
        RatInterval::rounded(&self.lo - &o.hi, &self.hi - &o.lo, self.bits.min(o.bits))
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, o: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        RatInterval::rounded(lo, hi, self.bits.min(o.bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn pi_enclosure_tightens() {
        let p = RatInterval::pi(100);
        let w = p.width().to_f64().unwrap();
        assert!(w < 1e-29);
        assert!(p.lo.to_f64().unwrap() <= core::f64::consts::PI + 1e-15);
        assert!(p.hi.to_f64().unwrap() >= core::f64::consts::PI - 1e-15);
    }

    #[test]
    fn cos_seven() {
        let c = RatInterval::cos_pi_over(7, 80);
        let v = libm::cos(core::f64::consts::PI / 7.0);
        assert!((c.lo.to_f64().unwrap() - v).abs() < 1e-15);
        assert!(c.width().to_f64().unwrap() < 1e-20);
    }
}
