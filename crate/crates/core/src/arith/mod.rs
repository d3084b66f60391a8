//! Certified arithmetic: exact constructible numbers, float intervals, and
//! rational intervals of adjustable precision, plus a sign-certified
//! symmetric elimination that computes matrix inertia over any of them.

pub mod interval;
pub mod ratinterval;
pub mod tower;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use interval::Interval;
pub use ratinterval::RatInterval;
pub use tower::{Coeffs, Tower};

/// Is `cos(π/m)` expressible with nested square roots of rationals?
///
/// True when `m` is a power of two times 1, 3 or 5 (the cases handled here).
pub fn cos_is_constructible(m: u32) -> bool {
    if m == 0 {
        return false;
    }
    let odd = m >> m.trailing_zeros();
    matches!(odd, 1 | 3 | 5)
}

/// Exact `cos(π/m)` inside `tower`, adjoining square roots as needed.
pub fn cos_pi_over_exact(tower: &mut Tower, m: u32) -> Option<Coeffs> {
    if !cos_is_constructible(m) {
        return None;
    }
    let halvings = m.trailing_zeros();
    let odd = m >> halvings;
    let mut c = match odd {
        1 => tower.int(-1),
        3 => tower.rational(BigRational::new(BigInt::from(1), BigInt::from(2))),
        _ => {
            let s5 = tower.sqrt(&tower.int(5))?;
            let v = tower.add(&tower.int(1), &s5);
            tower.scale(&v, &BigRational::new(BigInt::from(1), BigInt::from(4)))
        }
    };
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for _ in 0..halvings {
        // cos(θ/2) = sqrt((1 + cos θ) / 2), non-negative for θ ≤ π
        let arg = tower.scale(&tower.add(&tower.int(1), &c), &half);
        c = tower.sqrt(&arg)?;
    }
    Some(tower.lift(&c))
}

/// A number system in which symmetric elimination can be run with certified signs.
pub trait SignField {
    type E: Clone;
    /// Certified sign, or `None` if it cannot be decided at this precision.
    fn sign(&self, a: &Self::E) -> Option<i8>;
    /// Rough magnitude, used only to choose pivots.
    fn magnitude(&self, a: &Self::E) -> f64;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Division by an element whose sign is certified non-zero.
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Inertia {
            positive,
            negative,
            zero,
        }
    }
}

/// Sylvester inertia by symmetric elimination with 1×1 and 2×2 pivots.
///
/// Returns `None` when some sign needed to proceed is not certified.
pub fn inertia<F: SignField>(f: &F, mut a: Vec<Vec<F::E>>) -> Option<Inertia> {
    let mut res = Inertia::default_zero();
    let mut idx: Vec<usize> = (0..a.len()).collect();
    while !idx.is_empty() {
        // 1×1 pivot: certified non-zero diagonal of largest magnitude.
        let mut best: Option<(usize, f64, i8)> = None;
        for (pos, &i) in idx.iter().enumerate() {
            if let Some(s) = f.sign(&a[i][i]) {
                if s != 0 {
                    let m = f.magnitude(&a[i][i]);
                    if best.map_or(true, |(_, bm, _)| m > bm) {
                        best = Some((pos, m, s));
                    }
                }
            }
        }
        if let Some((pos, _, s)) = best {
            let p = idx.remove(pos);
            if s > 0 {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            let piv = a[p][p].clone();
            for &u in &idx {
                let fu = f.div(&a[u][p], &piv);
                for &v in &idx {
                    if v < u {
                        continue;
                    }
                    let t = f.sub(&a[u][v], &f.mul(&fu, &a[p][v]));
                    a[u][v] = t.clone();
                    a[v][u] = t;
                }
            }
            continue;
        }
        // 2×2 pivot on a pair with certified negative determinant.
        let mut pair = None;
        'outer: for (pi, &i) in idx.iter().enumerate() {
            for &j in &idx[pi + 1..] {
                if f.sign(&a[i][j]).map_or(false, |s| s != 0) {
                    let det = f.sub(&f.mul(&a[i][i], &a[j][j]), &f.mul(&a[i][j], &a[i][j]));
                    if f.sign(&det) == Some(-1) {
                        pair = Some((i, j, det));
                        break 'outer;
                    }
                }
            }
        }
        if let Some((i, j, det)) = pair {
            idx.retain(|&x| x != i && x != j);
            res.positive += 1;
            res.negative += 1;
            let (aii, ajj, aij) = (a[i][i].clone(), a[j][j].clone(), a[i][j].clone());
            for &u in &idx {
                // w_u = B^{-1} (a_ui, a_uj)
                let wi = f.div(&f.sub(&f.mul(&ajj, &a[u][i]), &f.mul(&aij, &a[u][j])), &det);
                let wj = f.div(&f.sub(&f.mul(&aii, &a[u][j]), &f.mul(&aij, &a[u][i])), &det);
                for &v in &idx {
                    if v < u {
                        continue;
                    }
                    let t = f.sub(
                        &f.sub(&a[u][v], &f.mul(&wi, &a[v][i])),
                        &f.mul(&wj, &a[v][j]),
                    );
                    a[u][v] = t.clone();
                    a[v][u] = t;
                }
            }
            continue;
        }
        // Everything left must be certified zero.
        for &i in &idx {
            for &j in &idx {
                if f.sign(&a[i][j]) != Some(0) {
                    return None;
                }
            }
        }
        res.zero += idx.len();
        break;
    }
    Some(res)
}

impl Inertia {
    fn default_zero() -> Self {
        Inertia::new(0, 0, 0)
    }
}

/// Float intervals as a [`SignField`].
pub struct IntervalField;

impl SignField for IntervalField {
    type E = Interval;
    fn sign(&self, a: &Interval) -> Option<i8> {
        a.sign()
    }
    fn magnitude(&self, a: &Interval) -> f64 {
        a.lo.abs().min(a.hi.abs())
    }
    fn sub(&self, a: &Interval, b: &Interval) -> Interval {
        *a - *b
    }
    fn mul(&self, a: &Interval, b: &Interval) -> Interval {
        *a * *b
    }
    fn div(&self, a: &Interval, b: &Interval) -> Interval {
        *a / *b
    }
}

/// Rational intervals as a [`SignField`].
pub struct RatIntervalField;

impl SignField for RatIntervalField {
    type E = RatInterval;
    fn sign(&self, a: &RatInterval) -> Option<i8> {
        a.sign()
    }
    fn magnitude(&self, a: &RatInterval) -> f64 {
        use num_traits::{Signed, ToPrimitive};
        let lo = a.lo.abs().to_f64().unwrap_or(0.0);
        let hi = a.hi.abs().to_f64().unwrap_or(0.0);
        lo.min(hi)
    }
    fn sub(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a - b
    }
    fn mul(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a * b
    }
    fn div(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a * &b.recip().expect("pivot sign is certified")
    }
}

/// Exact tower arithmetic as a [`SignField`].
pub struct ExactField<'a>(pub &'a Tower);

impl SignField for ExactField<'_> {
    type E = Coeffs;
    fn sign(&self, a: &Coeffs) -> Option<i8> {
        Some(self.0.sign(a) as i8)
    }
    fn magnitude(&self, a: &Coeffs) -> f64 {
        libm::fabs(self.0.to_f64(a))
    }
    fn sub(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        self.0.mul(a, b)
    }
    fn div(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        self.0.div(a, b)
    }
}

/// Plain `f64` inertia with a relative tolerance. Not certified; used for screening.
pub fn inertia_f64(a: &[Vec<f64>], tol: f64) -> Inertia {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut res = Inertia::new(0, 0, 0);
    while !idx.is_empty() {
        let (pos, piv) =
            idx.iter()
                .enumerate()
                .map(|(p, &i)| (p, m[i][i]))
                .fold(
                    (0, 0.0f64),
                    |acc, x| if x.1.abs() > acc.1.abs() { x } else { acc },
                );
        if piv.abs() > tol {
            let p = idx.remove(pos);
            if piv > 0.0 {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            for &u in &idx {
                let fu = m[u][p] / piv;
                for &v in &idx {
                    m[u][v] -= fu * m[p][v];
                }
            }
            continue;
        }
        // largest off-diagonal for a 2×2 pivot
        let mut best = (0, 0, 0.0f64);
        for (pi, &i) in idx.iter().enumerate() {
            for &j in &idx[pi + 1..] {
                if m[i][j].abs() > best.2.abs() {
                    best = (i, j, m[i][j]);
                }
            }
        }
        if best.2.abs() <= tol {
            res.zero += idx.len();
            break;
        }
        let (i, j, b) = best;
        let (aii, ajj) = (m[i][i], m[j][j]);
        let det = aii * ajj - b * b;
        idx.retain(|&x| x != i && x != j);
        res.positive += 1;
        res.negative += 1;
        for &u in &idx {
            let wi = (ajj * m[u][i] - b * m[u][j]) / det;
            let wj = (aii * m[u][j] - b * m[u][i]) / det;
            for &v in &idx {
                m[u][v] -= wi * m[v][i] + wj * m[v][j];
            }
        }
    }
    res
}
