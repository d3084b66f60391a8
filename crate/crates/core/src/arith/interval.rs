//! Closed `f64` intervals with outward rounding.
//!
//! Every operation widens its result by one ulp in each direction, which
//! dominates the round-to-nearest error of the underlying float operation.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of `x ± radius`, rounded outward.
    pub fn around(x: f64, radius: f64) -> Self {
        Interval {
            lo: (x - radius).next_down(),
            hi: (x + radius).next_up(),
        }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        if x.is_zero() {
            return Interval::ZERO;
        }
        if x.denom() == &BigInt::from(1) {
            if let Some(v) = x.numer().to_i64() {
                if v.unsigned_abs() < (1u64 << 53) {
                    return Interval::point(v as f64);
                }
            }
        }
        let approx = x
            .to_f64()
            .unwrap_or(if x.is_negative() { f64::MIN } else { f64::MAX });
        // `to_f64` is within a couple of ulps; widen generously.
        let r = approx.abs() * 4.0 * f64::EPSILON;
        Interval::around(approx, r)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    /// Sign if certified, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        if self.lo > 0.0 {
            Some(1)
        } else if self.hi < 0.0 {
            Some(-1)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(0)
        } else {
            None
        }
    }

    pub fn sqrt(self) -> Self {
        let lo = if self.lo <= 0.0 {
            0.0
        } else {
            libm::sqrt(self.lo).next_down().max(0.0)
        };
        Interval {
            lo,
            hi: libm::sqrt(self.hi.max(0.0)).next_up(),
        }
    }

    pub fn square(self) -> Self {
        if self.lo >= 0.0 {
            Interval {
                lo: (self.lo * self.lo).next_down(),
                hi: (self.hi * self.hi).next_up(),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: (self.hi * self.hi).next_down(),
                hi: (self.lo * self.lo).next_up(),
            }
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Interval {
                lo: 0.0,
                hi: (m * m).next_up(),
            }
        }
    }

    pub fn hull(self, other: Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: (self.lo - o.hi).next_down(),
            hi: (self.hi - o.lo).next_up(),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        if o.contains_zero() {
            return Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            };
        }
        let c = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

/// Enclosure of `cos(π/m)`.
pub fn cos_pi_over(m: u32) -> Interval {
    match m {
        1 => Interval::point(-1.0),
        2 => Interval::ZERO,
        3 => Interval::point(0.5),
        _ => {
            // libm's cos is faithfully rounded; π/m carries at most a few ulps of error
            // and cos is 1-Lipschitz, so 1e-15 absolute is a safe radius.
            let x = core::f64::consts::PI / f64::from(m);
            Interval::around(libm::cos(x), 1e-15)
        }
    }
}
