//! Standard two-dimensional Gale diagrams.
//!
//! Polygon position `p` (0-based) sits at angle `p·π/k`. Facets are numbered
//! in position order, origin facets last. All geometry is integer arithmetic
//! on direction indices.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Facet subsets as bitmasks; facet counts stay far below 64.
pub type FacetSet = u64;

/// Upper bound on facets for the exhaustive face scan.
pub const FACE_SCAN_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaleDiagram {
    pub k: usize,
    pub labels: Vec<u32>,
    pub origin: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleViolation {
    /// `labels.len() != 2k` or `k < 2`.
    Shape { k: usize, len: usize },
    /// Rule 1: the label sum must be `n + 3` with `n ≥ 2`.
    TooFewFacets { sum: u32 },
    /// Rule 2: neighbouring positions both zero (0-based).
    NeighbourZeros(usize, usize),
    /// Rule 3: opposite positions both zero (0-based).
    OppositeZeros(usize, usize),
    /// Rule 4: the open half-plane containing positions `start..start+k-1`
    /// (cyclically, 0-based) carries label sum `sum < 2`.
    HalfPlane { start: usize, sum: u32 },
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::Shape { k, len } => {
                write!(f, "shape: k = {k} needs {} labels, got {len}", 2 * k)
            }
            RuleViolation::TooFewFacets { sum } => write!(f, "rule 1: label sum {sum} < 5"),
            RuleViolation::NeighbourZeros(a, b) => {
                write!(f, "rule 2: neighbours a{} and a{} are both 0", a + 1, b + 1)
            }
            RuleViolation::OppositeZeros(a, b) => {
                write!(f, "rule 3: opposite a{} and a{} are both 0", a + 1, b + 1)
            }
            RuleViolation::HalfPlane { start, sum } => {
                write!(
                    f,
                    "rule 4: open half-plane from a{} has label sum {sum} < 2",
                    start + 1
                )
            }
        }
    }
}

impl GaleDiagram {
    pub fn new(k: usize, labels: Vec<u32>, origin: u32) -> Self {
        GaleDiagram { k, labels, origin }
    }

    pub fn positions(&self) -> usize {
        2 * self.k
    }

    pub fn label_sum(&self) -> u32 {
        self.labels.iter().sum::<u32>() + self.origin
    }

    pub fn facet_count(&self) -> usize {
        self.label_sum() as usize
    }

    /// Represented dimension `n` (label sum minus three).
    pub fn dimension(&self) -> i64 {
        i64::from(self.label_sum()) - 3
    }

    /// Label at a cyclic 0-based position.
    pub fn label(&self, p: isize) -> u32 {
        let m = self.positions() as isize;
        self.labels[p.rem_euclid(m) as usize]
    }

    pub fn validate(&self) -> Vec<RuleViolation> {
        let k = self.k;
        let mut out = Vec::new();
        if k < 2 || self.labels.len() != 2 * k {
            out.push(RuleViolation::Shape {
                k,
                len: self.labels.len(),
            });
            return out;
        }
        let m = 2 * k;
        if self.label_sum() < 5 {
            out.push(RuleViolation::TooFewFacets {
                sum: self.label_sum(),
            });
        }
        for p in 0..m {
            let q = (p + 1) % m;
            if self.labels[p] == 0 && self.labels[q] == 0 {
                out.push(RuleViolation::NeighbourZeros(p, q));
            }
        }
        for p in 0..k {
            if self.labels[p] == 0 && self.labels[p + k] == 0 {
                out.push(RuleViolation::OppositeZeros(p, p + k));
            }
        }
        // An open half-plane through the origin holds k or k-1 consecutive
        // positions; the k-1 runs are the binding ones.
        for start in 0..m {
            let sum: u32 = (0..k - 1).map(|t| self.labels[(start + t) % m]).sum();
            if sum < 2 {
                out.push(RuleViolation::HalfPlane { start, sum });
            }
        }
        out
    }

    pub fn is_standard(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn is_pyramid(&self) -> bool {
        self.origin > 0
    }

    /// Image under the reflection `p ↦ -p`.
    pub fn mirrored(&self) -> GaleDiagram {
        let m = self.positions();
        let labels = (0..m).map(|p| self.labels[(m - p) % m]).collect();
        GaleDiagram {
            k: self.k,
            labels,
            origin: self.origin,
        }
    }

    /// Image under the rotation `p ↦ p + r`.
    pub fn rotated(&self, r: usize) -> GaleDiagram {
        let m = self.positions();
        let labels = (0..m).map(|p| self.labels[(p + m - r % m) % m]).collect();
        GaleDiagram {
            k: self.k,
            labels,
            origin: self.origin,
        }
    }

    /// Lexicographically smallest label vector over the dihedral group.
    pub fn canonical(&self) -> GaleDiagram {
        let m = self.positions();
        let mut best = self.labels.clone();
        let mut cand = vec![0u32; m];
        for refl in [false, true] {
            for r in 0..m {
                for (p, c) in cand.iter_mut().enumerate() {
                    let src = if refl { (m + r - p) % m } else { (p + r) % m };
                    *c = self.labels[src];
                }
                if cand < best {
                    best.clone_from(&cand);
                }
            }
        }
        GaleDiagram {
            k: self.k,
            labels: best,
            origin: self.origin,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical().labels == self.labels
    }
}

/// Facet numbering: facets of position `p` are consecutive, positions in order, origin last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetAssignment {
    pub polygon: Vec<Vec<usize>>,
    pub origin: Vec<usize>,
}

impl FacetAssignment {
    pub fn standard(g: &GaleDiagram) -> Self {
        let mut next = 0;
        let polygon = g
            .labels
            .iter()
            .map(|&l| {
                let v: Vec<usize> = (next..next + l as usize).collect();
                next += l as usize;
                v
            })
            .collect();
        let origin = (next..next + g.origin as usize).collect();
        FacetAssignment { polygon, origin }
    }

    pub fn facet_count(&self) -> usize {
        self.polygon.iter().map(Vec::len).sum::<usize>() + self.origin.len()
    }

    /// Position of each facet (`None` for origin facets).
    pub fn positions(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.facet_count()];
        for (p, fs) in self.polygon.iter().enumerate() {
            for &f in fs {
                out[f] = Some(p);
            }
        }
        out
    }

    pub fn mask_of(&self, facets: &[usize]) -> Result<FacetSet> {
        let n = self.facet_count();
        let mut m = 0;
        for &f in facets {
            if f >= n {
                return Err(Error::InvalidSubset(f));
            }
            m |= 1 << f;
        }
        Ok(m)
    }

    pub fn all(&self) -> FacetSet {
        full(self.facet_count())
    }
}

fn full(n: usize) -> FacetSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn members(s: FacetSet) -> Vec<usize> {
    (0..64).filter(|&i| s >> i & 1 == 1).collect()
}

/// Precomputed per-position facet masks for fast face tests.
#[derive(Clone, Debug)]
pub struct FaceOracle {
    k: usize,
    position_masks: Vec<FacetSet>,
    origin_mask: FacetSet,
    facets: usize,
}

impl FaceOracle {
    pub fn new(g: &GaleDiagram, asg: &FacetAssignment) -> Self {
        let position_masks = asg
            .polygon
            .iter()
            .map(|fs| fs.iter().fold(0, |m, &f| m | 1 << f))
            .collect();
        let origin_mask = asg.origin.iter().fold(0, |m, &f| m | 1 << f);
        FaceOracle {
            k: g.k,
            position_masks,
            origin_mask,
            facets: asg.facet_count(),
        }
    }

    pub fn facet_count(&self) -> usize {
        self.facets
    }

    /// Is the facet set `i` (a bitmask) a face?
    pub fn is_face(&self, i: FacetSet) -> bool {
        let rest = !i & full(self.facets);
        if rest & self.origin_mask != 0 {
            return true;
        }
        let m = 2 * self.k;
        let occupied: Vec<usize> = (0..m)
            .filter(|&p| self.position_masks[p] & rest != 0)
            .collect();
        if occupied.is_empty() {
            return false;
        }
        let mut max_gap = 0;
        for (t, &p) in occupied.iter().enumerate() {
            let q = occupied[(t + 1) % occupied.len()];
            let gap = if occupied.len() == 1 {
                m
            } else {
                (q + m - p) % m
            };
            max_gap = max_gap.max(gap);
        }
        max_gap <= self.k
    }

    /// Vertices from the structure of minimal origin-containing point sets:
    /// one origin facet, an antipodal pair, or a triangle with all gaps below `k`.
    pub fn vertex_sets(&self) -> Vec<FacetSet> {
        let all = full(self.facets);
        let m = 2 * self.k;
        let mut out: BTreeSet<FacetSet> = BTreeSet::new();
        for f in members(self.origin_mask) {
            out.insert(all & !(1 << f));
        }
        let singles: Vec<(usize, usize)> = (0..m)
            .flat_map(|p| {
                members(self.position_masks[p])
                    .into_iter()
                    .map(move |f| (p, f))
            })
            .collect();
        for (a, &(p, f)) in singles.iter().enumerate() {
            for (b, &(q, g)) in singles.iter().enumerate().skip(a + 1) {
                if (q + m - p) % m == self.k {
                    out.insert(all & !(1 << f) & !(1 << g));
                }
                for &(r, h) in &singles[b + 1..] {
                    let mut ps = [p, q, r];
                    ps.sort_unstable();
                    let gaps = [ps[1] - ps[0], ps[2] - ps[1], ps[0] + m - ps[2]];
                    if gaps.iter().all(|&x| x > 0 && x < self.k) {
                        out.insert(all & !(1 << f) & !(1 << g) & !(1 << h));
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

pub fn is_face(g: &GaleDiagram, asg: &FacetAssignment, facets: &[usize]) -> Result<bool> {
    let i = asg.mask_of(facets)?;
    Ok(FaceOracle::new(g, asg).is_face(i))
}

/// All faces (as sorted facet lists) by exhaustive subset scan.
pub fn faces(g: &GaleDiagram, asg: &FacetAssignment) -> Result<Vec<Vec<usize>>> {
    let n = asg.facet_count();
    if n > FACE_SCAN_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let o = FaceOracle::new(g, asg);
    let mut out: Vec<Vec<usize>> = (0..1u64 << n)
        .filter(|&s| o.is_face(s))
        .map(members)
        .collect();
    out.sort();
    Ok(out)
}

/// Vertices: maximal proper faces, by exhaustive scan.
pub fn vertices(g: &GaleDiagram, asg: &FacetAssignment) -> Result<Vec<Vec<usize>>> {
    let n = asg.facet_count();
    if n > FACE_SCAN_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let o = FaceOracle::new(g, asg);
    let mut out: Vec<Vec<usize>> = (0..1u64 << n)
        .filter(|&s| o.is_face(s) && (0..n).all(|f| s >> f & 1 == 1 || !o.is_face(s | 1 << f)))
        .map(members)
        .collect();
    out.sort();
    Ok(out)
}

/// Facets on the cyclic arc of positions `m..=l` (1-based, as in a_m, ..., a_l).
pub fn arc_facets(g: &GaleDiagram, asg: &FacetAssignment, m: usize, l: usize) -> Vec<usize> {
    let len = g.positions();
    let (m0, l0) = ((m + len - 1) % len, (l + len - 1) % len);
    let mut out = Vec::new();
    let mut p = m0;
    loop {
        out.extend_from_slice(&asg.polygon[p]);
        if p == l0 {
            break;
        }
        p = (p + 1) % len;
    }
    out.sort_unstable();
    out
}

/// All standard Gale diagrams with label sum `n + 3` and `2 ≤ k ≤ k_max`,
/// one per dihedral orbit, ordered by `k` then labels.
pub fn enumerate_standard(n: usize, k_max: usize) -> Vec<GaleDiagram> {
    let mut out = Vec::new();
    for k in 2..=k_max {
        enumerate_k(n, k, &mut |g| {
            out.push(g);
            true
        });
    }
    out
}

/// Stream the canonical standard diagrams for one `k`; the callback returns
/// `false` to stop early.
pub fn enumerate_k(n: usize, k: usize, emit: &mut dyn FnMut(GaleDiagram) -> bool) {
    fn rec(
        p: usize,
        k: usize,
        left: u32,
        labels: &mut Vec<u32>,
        emit: &mut dyn FnMut(GaleDiagram) -> bool,
    ) -> bool {
        if p == 2 * k {
            if leaf_ok(k, labels, left) {
                return emit(GaleDiagram {
                    k,
                    labels: labels.clone(),
                    origin: left,
                });
            }
            return true;
        }
        for v in 0..=left {
            labels[p] = v;
            let zero_clash =
                v == 0 && ((p > 0 && labels[p - 1] == 0) || (p >= k && labels[p - k] == 0));
            // the canonical rotation starts with a smallest label
            if zero_clash || (p > 0 && v < labels[0]) {
                continue;
            }
            // the (k-1)-run ending at p
            if p + 2 >= k && labels[p + 2 - k..=p].iter().sum::<u32>() < 2 {
                continue;
            }
            if !rec(p + 1, k, left - v, labels, emit) {
                return false;
            }
        }
        labels[p] = 0;
        true
    }
    let mut labels = vec![0u32; 2 * k];
    rec(0, k, (n + 3) as u32, &mut labels, emit);
}

/// Rules not already enforced by the prefix search (wrap-around zeros and
/// runs, total size) plus dihedral minimality, without allocating.
fn leaf_ok(k: usize, labels: &[u32], origin: u32) -> bool {
    let m = 2 * k;
    if labels.iter().sum::<u32>() + origin < 5 || (labels[m - 1] == 0 && labels[0] == 0) {
        return false;
    }
    for start in m + 2 - k..m {
        if (0..k - 1).map(|t| labels[(start + t) % m]).sum::<u32>() < 2 {
            return false;
        }
    }
    for refl in [false, true] {
        for r in 0..m {
            if (refl || r > 0) && labels[r] == labels[0] {
                for p in 0..m {
                    let src = if refl { (m + r - p) % m } else { (p + r) % m };
                    match labels[src].cmp(&labels[p]) {
                        core::cmp::Ordering::Less => return false,
                        core::cmp::Ordering::Greater => break,
                        core::cmp::Ordering::Equal => {}
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> GaleDiagram {
        GaleDiagram::new(5, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 0)
    }

    #[test]
    fn pentagon_rules_and_faces() {
        let g = pentagon();
        assert!(g.is_standard());
        assert_eq!(g.dimension(), 2);
        let a = FacetAssignment::standard(&g);
        assert!(!is_face(&g, &a, &[0, 1]).unwrap());
        assert!(is_face(&g, &a, &[0, 2]).unwrap());
        assert!(is_face(&g, &a, &[]).unwrap());
        assert_eq!(is_face(&g, &a, &[7]), Err(Error::InvalidSubset(7)));
        let v = vertices(&g, &a).unwrap();
        assert_eq!(
            v,
            vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4]]
        );
        let o = FaceOracle::new(&g, &a);
        let mut s: Vec<Vec<usize>> = o.vertex_sets().into_iter().map(members).collect();
        s.sort();
        assert_eq!(s, v);
    }

    #[test]
    fn rule_three_and_four() {
        let g = GaleDiagram::new(2, vec![1, 0, 1, 0], 0);
        let v = g.validate();
        assert!(v.contains(&RuleViolation::OppositeZeros(1, 3)));
    }

    #[test]
    fn arcs() {
        let g = pentagon();
        let a = FacetAssignment::standard(&g);
        assert_eq!(arc_facets(&g, &a, 2, 4), vec![1]);
        assert_eq!(arc_facets(&g, &a, 1, 10), vec![0, 1, 2, 3, 4]);
        assert_eq!(arc_facets(&g, &a, 9, 1), vec![0, 4]);
    }

    #[test]
    fn pyramid_over_cube() {
        let g = GaleDiagram::new(3, vec![2, 0, 2, 0, 2, 0], 1);
        assert!(g.is_standard() && g.is_pyramid());
        let a = FacetAssignment::standard(&g);
        assert_eq!(vertices(&g, &a).unwrap().len(), 9);
        let all_ones = GaleDiagram::new(3, vec![1; 6], 1);
        assert!(all_ones.is_standard());
        let a = FacetAssignment::standard(&all_ones);
        assert_eq!(vertices(&all_ones, &a).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_is_canonical_and_standard() {
        let gs = enumerate_standard(4, 7);
        assert!(!gs.is_empty());
        for g in &gs {
            assert!(g.is_standard());
            assert_eq!(g.label_sum(), 7);
            assert_eq!(g.canonical(), *g);
        }
        let mut c: Vec<_> = gs.iter().map(GaleDiagram::canonical).collect();
        c.dedup();
        assert_eq!(c.len(), gs.len());
    }
}
