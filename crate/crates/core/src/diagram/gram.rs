//! Gram matrices with tagged algebraic entries and certified signatures.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{CoxeterDiagram, DottedWeight, EdgeKind};
use crate::arith::{
    self, cos_pi_over_exact, inertia, interval, Coeffs, ExactField, Inertia, Interval,
    IntervalField, RatInterval, RatIntervalField, Tower,
};
use crate::error::{Error, Result};

/// Largest working precision tried before giving up.
pub const MAX_BITS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GramEntry {
    One,
    /// `-cos(π/m)`; `m = 2` is an exact zero.
    AngleCos(u32),
    MinusOne,
    MinusW(DottedWeight),
    Unknown,
}

impl GramEntry {
    fn of(kind: Option<&EdgeKind>) -> Self {
        match kind {
            None => GramEntry::AngleCos(2),
            Some(EdgeKind::Angle(m)) => GramEntry::AngleCos(*m),
            Some(EdgeKind::Bold) => GramEntry::MinusOne,
            Some(EdgeKind::Dotted(Some(w))) => GramEntry::MinusW(w.clone()),
            Some(EdgeKind::Dotted(None)) => GramEntry::Unknown,
        }
    }

    pub fn enclosure(&self) -> Interval {
        match self {
            GramEntry::One => Interval::ONE,
            GramEntry::AngleCos(m) => -interval::cos_pi_over(*m),
            GramEntry::MinusOne => Interval::point(-1.0),
            GramEntry::MinusW(w) => -w.enclosure(),
            GramEntry::Unknown => Interval::new(f64::NEG_INFINITY, -1.0),
        }
    }

    /// Human-readable exact form, e.g. `-cos(pi/7)`.
    pub fn render(&self) -> String {
        match self {
            GramEntry::One => "1".into(),
            GramEntry::AngleCos(2) => "0".into(),
            GramEntry::AngleCos(3) => "-1/2".into(),
            GramEntry::AngleCos(m) => format!("-cos(pi/{m})"),
            GramEntry::MinusOne => "-1".into(),
            GramEntry::MinusW(w) => format!("-{:.12}(dotted)", w.approx()),
            GramEntry::Unknown => "unknown".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<GramEntry>,
    enclosures: Vec<Interval>,
}

pub fn gram_matrix(d: &CoxeterDiagram) -> GramMatrix {
    let n = d.node_count();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if i == j {
                GramEntry::One
            } else {
                GramEntry::of(d.edge_ref(i, j))
            });
        }
    }
    let enclosures = entries.iter().map(GramEntry::enclosure).collect();
    GramMatrix {
        dim: n,
        entries,
        enclosures,
    }
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &GramEntry {
        &self.entries[i * self.dim + j]
    }

    pub fn enclosure(&self, i: usize, j: usize) -> Interval {
        self.enclosures[i * self.dim + j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.enclosure(i, j).mid()).collect())
            .collect()
    }

    pub fn has_unknown(&self) -> bool {
        self.entries.iter().any(|e| *e == GramEntry::Unknown)
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> GramMatrix {
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        let mut enclosures = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                entries.push(self.entry(i, j).clone());
                enclosures.push(self.enclosure(i, j));
            }
        }
        GramMatrix {
            dim: idx.len(),
            entries,
            enclosures,
        }
    }
}

/// Certified (positive, negative, zero) eigenvalue counts.
pub fn signature(g: &GramMatrix) -> Result<Inertia> {
    if g.has_unknown() {
        return Err(Error::UnknownEntry);
    }
    let n = g.dim;
    let a: Vec<Vec<Interval>> = (0..n)
        .map(|i| (0..n).map(|j| g.enclosure(i, j)).collect())
        .collect();
    if let Some(r) = inertia(&IntervalField, a) {
        return Ok(r);
    }
    if let Some(r) = exact_signature(g) {
        return Ok(r);
    }
    let mut bits = 64;
    while bits <= MAX_BITS {
        if let Some(r) = rational_signature(g, bits) {
            return Ok(r);
        }
        bits *= 2;
    }
    Err(Error::CertificationFailure)
}

/// Exact entries in a common quadratic tower, when every entry is constructible.
pub fn exact_entries(g: &GramMatrix) -> Option<(Tower, Vec<Vec<Coeffs>>)> {
    let n = g.dim;
    let mut tower = Tower::new();
    let mut cos: BTreeMap<u32, Coeffs> = BTreeMap::new();
    let mut raw: Vec<Vec<Coeffs>> = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let v = if j < i {
                raw[j][i].clone()
            } else {
                match g.entry(i, j) {
                    GramEntry::One => tower.int(1),
                    GramEntry::MinusOne => tower.int(-1),
                    GramEntry::AngleCos(2) => tower.int(0),
                    GramEntry::AngleCos(m) => {
                        if !cos.contains_key(m) {
                            let c = cos_pi_over_exact(&mut tower, *m)?;
                            cos.insert(*m, c);
                        }
                        tower.neg(&tower.lift(&cos[m]))
                    }
                    GramEntry::MinusW(w) => {
                        let v = tower.import(&w.tower, &w.value);
                        tower.neg(&v)
                    }
                    GramEntry::Unknown => return None,
                }
            };
            raw[i].push(v);
        }
    }
    let w = tower.width();
    let a = raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|mut c| {
                    c.resize(w, num_traits::Zero::zero());
                    c
                })
                .collect()
        })
        .collect();
    Some((tower, a))
}

fn exact_signature(g: &GramMatrix) -> Option<Inertia> {
    let (tower, a) = exact_entries(g)?;
    inertia(&ExactField(&tower), a)
}

fn rational_signature(g: &GramMatrix, bits: u32) -> Option<Inertia> {
    let n = g.dim;
    let mut cos: BTreeMap<u32, RatInterval> = BTreeMap::new();
    let mut a: Vec<Vec<RatInterval>> = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let v = match g.entry(i, j) {
                GramEntry::One => RatInterval::int(1, bits),
                GramEntry::MinusOne => RatInterval::int(-1, bits),
                GramEntry::AngleCos(2) => RatInterval::int(0, bits),
                GramEntry::AngleCos(m) => {
                    let c = cos
                        .entry(*m)
                        .or_insert_with(|| RatInterval::cos_pi_over(*m, bits));
                    -&*c
                }
                GramEntry::MinusW(w) => -&w.tower.enclose_rat(&w.value, bits),
                GramEntry::Unknown => return None,
            };
            a[i].push(v);
        }
    }
    inertia(&RatIntervalField, a)
}

/// Uncertified `f64` inertia, for screening only.
pub fn signature_f64(g: &GramMatrix) -> Inertia {
    arith::inertia_f64(&g.to_f64(), 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::EdgeKind;

    fn triangle(a: u32, b: u32, c: u32) -> CoxeterDiagram {
        CoxeterDiagram::new(3)
            .with(0, 1, EdgeKind::Angle(a))
            .with(1, 2, EdgeKind::Angle(b))
            .with(0, 2, EdgeKind::Angle(c))
    }

    #[test]
    fn small_signatures() {
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Angle(3));
        assert_eq!(signature(&gram_matrix(&d)), Ok(Inertia::new(2, 0, 0)));
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Bold);
        assert_eq!(signature(&gram_matrix(&d)), Ok(Inertia::new(1, 0, 1)));
        assert_eq!(
            signature(&gram_matrix(&triangle(3, 3, 7))),
            Ok(Inertia::new(2, 1, 0))
        );
        assert_eq!(
            signature(&gram_matrix(&triangle(3, 3, 3))),
            Ok(Inertia::new(2, 0, 1))
        );
        assert_eq!(
            signature(&gram_matrix(&triangle(2, 3, 6))),
            Ok(Inertia::new(2, 0, 1))
        );
        assert_eq!(
            signature(&gram_matrix(&triangle(2, 4, 4))),
            Ok(Inertia::new(2, 0, 1))
        );
    }

    #[test]
    fn unknown_entries_are_rejected() {
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Dotted(None));
        assert_eq!(signature(&gram_matrix(&d)), Err(Error::UnknownEntry));
    }

    #[test]
    fn exact_zero_needs_tower() {
        // ~E8: legs of length 1, 2, 5 from node 2; exactly one null direction
        let mut d = CoxeterDiagram::new(9);
        for (a, b) in [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (2, 8),
        ] {
            d.set_edge(a, b, EdgeKind::Angle(3)).unwrap();
        }
        assert_eq!(signature(&gram_matrix(&d)), Ok(Inertia::new(8, 0, 1)));
    }

    #[test]
    fn non_constructible_zero_is_not_claimed() {
        // (2,3,7) triangle: hyperbolic, nonsingular; certified via intervals
        assert_eq!(
            signature(&gram_matrix(&triangle(2, 3, 7))),
            Ok(Inertia::new(2, 1, 0))
        );
        // rational intervals settle nonzero determinants that f64 cannot
        let g = gram_matrix(&triangle(3, 3, 7));
        assert_eq!(rational_signature(&g, 128), Some(Inertia::new(2, 1, 0)));
    }
}
