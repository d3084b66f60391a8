//! Exact arithmetic in towers of real quadratic extensions of the rationals.
//!
//! A [`Tower`] is a list of radicands `r_0, r_1, ...` where `r_i` is a positive
//! element of `Q(√r_0, ..., √r_{i-1})` that is *not* a square there. An element
//! of the level-`h` field is stored as `2^h` rational coefficients: the upper
//! half multiplies `√r_{h-1}`, recursively. Because every radicand is a
//! non-square, this representation is unique, so equality and zero tests are
//! exact coefficient comparisons.
//!
//! Every constructible real (in particular `cos(π/m)` whenever `m` is a power
//! of two times a product of distinct Fermat primes) lives in such a tower.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::ratinterval::RatInterval;

pub type Q = BigRational;

/// Coefficient vector of a tower element (length is a power of two).
pub type Coeffs = Vec<Q>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tower {
    radicands: Vec<Coeffs>,
}

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn level_of(len: usize) -> usize {
    debug_assert!(len.is_power_of_two());
    len.trailing_zeros() as usize
}

fn pad(a: &[Q], len: usize) -> Coeffs {
    let mut v = a.to_vec();
    v.resize(len, Q::zero());
    v
}

impl Tower {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn height(&self) -> usize {
        self.radicands.len()
    }

    /// Number of rational coefficients of a top-level element.
    pub fn width(&self) -> usize {
        1 << self.radicands.len()
    }

    pub fn radicands(&self) -> &[Coeffs] {
        &self.radicands
    }

    pub fn zero(&self) -> Coeffs {
        vec![Q::zero(); self.width()]
    }

    pub fn rational(&self, value: Q) -> Coeffs {
        let mut v = self.zero();
        v[0] = value;
        v
    }

    pub fn int(&self, value: i64) -> Coeffs {
        self.rational(q(value))
    }

    /// The element `√r_i`.
    pub fn root(&self, i: usize) -> Coeffs {
        let mut v = self.zero();
        v[1 << i] = Q::one();
        v
    }

    /// Lift `a` (possibly from a lower level) to the top level.
    pub fn lift(&self, a: &[Q]) -> Coeffs {
        pad(a, self.width())
    }

    pub fn add(&self, a: &[Q], b: &[Q]) -> Coeffs {
        let len = a.len().max(b.len());
        let mut out = pad(a, len);
        for (o, x) in out.iter_mut().zip(b) {
            *o += x;
        }
        out
    }

    pub fn sub(&self, a: &[Q], b: &[Q]) -> Coeffs {
        let len = a.len().max(b.len());
        let mut out = pad(a, len);
        for (o, x) in out.iter_mut().zip(b) {
            *o -= x;
        }
        out
    }

    pub fn neg(&self, a: &[Q]) -> Coeffs {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &[Q], s: &Q) -> Coeffs {
        a.iter().map(|x| x * s).collect()
    }

    pub fn is_zero(&self, a: &[Q]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Coeffs {
        let len = a.len().max(b.len());
        let a = pad(a, len);
        let b = pad(b, len);
        self.mul_level(&a, &b)
    }

    fn mul_level(&self, a: &[Q], b: &[Q]) -> Coeffs {
        let len = a.len();
        if len == 1 {
            return vec![&a[0] * &b[0]];
        }
        if self.is_zero(a) || self.is_zero(b) {
            return vec![Q::zero(); len];
        }
        let half = len / 2;
        let r = &self.radicands[level_of(len) - 1];
        let (a0, a1) = a.split_at(half);
        let (b0, b1) = b.split_at(half);
        let mut lo = self.mul_level(a0, b0);
        let a1b1 = self.mul_level(a1, b1);
        if !self.is_zero(&a1b1) {
            let t = self.mul_level(&a1b1, &pad(r, half));
            for (o, x) in lo.iter_mut().zip(&t) {
                *o += x;
            }
        }
        let mut hi = self.mul_level(a0, b1);
        let t = self.mul_level(a1, b0);
        for (o, x) in hi.iter_mut().zip(&t) {
            *o += x;
        }
        lo.extend(hi);
        lo
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &[Q]) -> Coeffs {
        let len = a.len();
        if len == 1 {
            assert!(!a[0].is_zero(), "inverse of zero");
            return vec![a[0].recip()];
        }
        let half = len / 2;
        let (a0, a1) = a.split_at(half);
        if self.is_zero(a1) {
            let mut v = self.inv(a0);
            v.resize(len, Q::zero());
            return v;
        }
        // (a0 + a1 s)^{-1} = (a0 - a1 s) / (a0^2 - r a1^2)
        let r = pad(&self.radicands[level_of(len) - 1], half);
        let norm = self.sub(
            &self.mul_level(a0, a0),
            &self.mul_level(&r, &self.mul_level(a1, a1)),
        );
        let ninv = self.inv(&norm);
        let mut out = self.mul_level(a0, &ninv);
        out.extend(self.neg(&self.mul_level(a1, &ninv)));
        out
    }

    pub fn div(&self, a: &[Q], b: &[Q]) -> Coeffs {
        let len = a.len().max(b.len());
        self.mul(&pad(a, len), &self.inv(&pad(b, len)))
    }

    /// Exact sign of a real tower element (all square roots taken positive).
    pub fn sign(&self, a: &[Q]) -> Ordering {
        let len = a.len();
        if len == 1 {
            return a[0].cmp(&Q::zero());
        }
        let half = len / 2;
        let (a0, a1) = a.split_at(half);
        let s1 = self.sign(a1);
        let s0 = self.sign(a0);
        if s1 == Ordering::Equal {
            return s0;
        }
        if s0 == Ordering::Equal || s0 == s1 {
            return s1;
        }
        // Opposite signs: compare a0^2 with r a1^2.
        let r = pad(&self.radicands[level_of(len) - 1], half);
        let d = self.sub(
            &self.mul_level(a0, a0),
            &self.mul_level(&r, &self.mul_level(a1, a1)),
        );
        match self.sign(&d) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => s0,
            Ordering::Less => s1,
        }
    }

    pub fn cmp(&self, a: &[Q], b: &[Q]) -> Ordering {
        self.sign(&self.sub(a, b))
    }

    /// Non-negative square root of `a` if it exists in this tower.
    pub fn sqrt_in(&self, a: &[Q]) -> Option<Coeffs> {
        match self.sign(a) {
            Ordering::Less => None,
            Ordering::Equal => Some(vec![Q::zero(); a.len()]),
            Ordering::Greater => {
                let root = self.sqrt_level(a)?;
                let root = if self.sign(&root) == Ordering::Less {
                    self.neg(&root)
                } else {
                    root
                };
                Some(root)
            }
        }
    }

    /// Some square root of `a` inside the level of `a`, if one exists.
    fn sqrt_level(&self, a: &[Q]) -> Option<Coeffs> {
        let len = a.len();
        if len == 1 {
            return rational_sqrt(&a[0]).map(|x| vec![x]);
        }
        let half = len / 2;
        let (a0, a1) = a.split_at(half);
        let r = pad(&self.radicands[level_of(len) - 1], half);
        let two = q(2);
        if self.is_zero(a1) {
            if let Some(c) = self.sqrt_level(a0) {
                let mut v = c;
                v.resize(len, Q::zero());
                return Some(v);
            }
            // a0 = r d^2  =>  sqrt = d s
            let ratio = self.mul_level(a0, &self.inv(&r));
            let d = self.sqrt_level(&ratio)?;
            let mut v = vec![Q::zero(); half];
            v.extend(d);
            return Some(v);
        }
        // (c + d s)^2 = a0 + a1 s  <=>  c^2 + r d^2 = a0, 2cd = a1.
        // d^2 = (a0 ± sqrt(a0^2 - r a1^2)) / (2r).
        let norm = self.sub(
            &self.mul_level(a0, a0),
            &self.mul_level(&r, &self.mul_level(a1, a1)),
        );
        let t = self.sqrt_level(&norm)?;
        let inv2r = self.inv(&self.scale(&r, &two));
        for sgn in [1i64, -1] {
            let num = self.add(a0, &self.scale(&t, &q(sgn)));
            let d2 = self.mul_level(&num, &inv2r);
            if self.is_zero(&d2) {
                continue;
            }
            if let Some(d) = self.sqrt_level(&d2) {
                let c = self.mul_level(a1, &self.inv(&self.scale(&d, &two)));
                let mut v = c;
                v.extend(d);
                if self.mul_level(&v, &v) == a {
                    return Some(v);
                }
            }
        }
        None
    }

    /// Append a radicand. The caller guarantees it is a positive non-square.
    fn push_radicand(&mut self, r: &[Q]) {
        let w = self.width();
        self.radicands.push(pad(r, w));
    }

    /// Non-negative square root of `a`, adjoining a new radicand if needed.
    /// Returns `None` when `a` is negative.
    pub fn sqrt(&mut self, a: &[Q]) -> Option<Coeffs> {
        let a = self.lift(a);
        if let Some(r) = self.sqrt_in(&a) {
            return Some(r);
        }
        if self.sign(&a) != Ordering::Greater {
            return None;
        }
        // Normalise rational radicands to integers with small square factors removed.
        let h = self.height();
        if a[1..].iter().all(Zero::is_zero) {
            let (rad, factor) = rational_radicand(&a[0]);
            self.push_radicand(&[Q::from_integer(rad)]);
            let root = self.root(h);
            return Some(self.scale(&root, &factor));
        }
        self.push_radicand(&a);
        Some(self.root(h))
    }

    /// Rigorous enclosure of an element.
    pub fn enclose(&self, a: &[Q]) -> Interval {
        let roots = self.root_enclosures();
        enclose_with(a, &roots)
    }

    /// Enclosures of `√r_i` for every radicand.
    pub fn root_enclosures(&self) -> Vec<Interval> {
        let mut roots: Vec<Interval> = Vec::with_capacity(self.height());
        for r in &self.radicands {
            let v = enclose_with(&r[..1 << roots.len()], &roots);
            roots.push(v.sqrt());
        }
        roots
    }

    /// Rational enclosure with roughly `bits` bits of working precision.
    pub fn enclose_rat(&self, a: &[Q], bits: u32) -> RatInterval {
        let work = bits + 8 * self.height() as u32;
        let mut roots: Vec<RatInterval> = Vec::with_capacity(self.height());
        for r in &self.radicands {
            let v = enclose_rat_with(&r[..1 << roots.len()], &roots, work);
            roots.push(v.sqrt());
        }
        enclose_rat_with(a, &roots, work)
    }

    pub fn to_f64(&self, a: &[Q]) -> f64 {
        self.enclose(a).mid()
    }

    /// Map an element of `other` into this tower, adjoining roots as needed.
    pub fn import(&mut self, other: &Tower, a: &[Q]) -> Coeffs {
        let mut images: Vec<Coeffs> = Vec::with_capacity(other.height());
        for (i, r) in other.radicands.iter().enumerate() {
            let r_img = eval_basis(self, &r[..1 << i], &images);
            let root = self.sqrt(&r_img).expect("radicands are positive");
            images.push(root);
        }
        let out = eval_basis(self, a, &images);
        self.lift(&out)
    }
}

fn enclose_with(a: &[Q], roots: &[Interval]) -> Interval {
    if a.len() == 1 {
        return Interval::from_rational(&a[0]);
    }
    let half = a.len() / 2;
    let lo = enclose_with(&a[..half], roots);
    let hi = enclose_with(&a[half..], roots);
    lo + hi * roots[level_of(a.len()) - 1]
}

fn enclose_rat_with(a: &[Q], roots: &[RatInterval], bits: u32) -> RatInterval {
    if a.len() == 1 {
        return RatInterval::exact(a[0].clone(), bits);
    }
    let half = a.len() / 2;
    let lo = enclose_rat_with(&a[..half], roots, bits);
    let hi = enclose_rat_with(&a[half..], roots, bits);
    &lo + &(&hi * &roots[level_of(a.len()) - 1])
}

/// Evaluate a coefficient vector in `target`, given images of the basis roots.
fn eval_basis(target: &Tower, a: &[Q], images: &[Coeffs]) -> Coeffs {
    if a.len() == 1 {
        return target.rational(a[0].clone());
    }
    let half = a.len() / 2;
    let lo = eval_basis(target, &a[..half], images);
    let hi = eval_basis(target, &a[half..], images);
    let root = &images[level_of(a.len()) - 1];
    let w = target.width();
    target.add(&pad(&lo, w), &target.mul(&pad(&hi, w), &pad(root, w)))
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(Q::new(n, d))
}

/// Write `x = factor^2 * rad` with `rad` an integer, stripping small square factors.
fn rational_radicand(x: &Q) -> (BigInt, Q) {
    // x = p/q = (p q) / q^2
    let mut rad = x.numer() * x.denom();
    let mut factor = Q::new(BigInt::one(), x.denom().clone());
    let mut p = 2u32;
    while p < 1000 {
        let sq = BigInt::from(p * p);
        while (&rad % &sq).is_zero() {
            rad /= &sq;
            factor *= Q::from_integer(BigInt::from(p));
        }
        p += 1;
    }
    (rad, factor)
}
