//! Pyramids over products of three simplices: reference combinatorics, shape
//! detection on Gale diagrams, and the classification run.
//!
//! Facet numbering of the reference pyramid: the base is facet 0, then the
//! lateral facets family by family (`d1 + 1`, `d2 + 1`, `d3 + 1` of them).
//! Lateral facet `j` of family `i` is the pyramid over (facet `j` of the
//! i-th simplex) times the other two simplices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::CanonicalKey;
use crate::error::{Error, Result};
use crate::gale::{
    enumerate_k, members, FaceOracle, FacetAssignment, FacetSet, GaleDiagram, FACE_SCAN_LIMIT,
};
use crate::search::{merge_outcomes, process_gale, DimensionReport, Found, SearchSpec};

/// Largest dimension considered by the classification run.
pub const PYRAMID_MAX_DIMENSION: usize = 17;

/// Simplex dimensions, sorted in decreasing order, each at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyramidShape {
    dims: [usize; 3],
}

impl PyramidShape {
    pub fn new(d1: usize, d2: usize, d3: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 || d3 == 0 {
            return Err(Error::Precondition(format!(
                "simplex dimensions ({d1},{d2},{d3}) must be positive"
            )));
        }
        let mut dims = [d1, d2, d3];
        dims.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PyramidShape { dims })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// `d1 + d2 + d3 + 1`.
    pub fn dimension(&self) -> usize {
        self.dims.iter().sum::<usize>() + 1
    }

    pub fn facet_count(&self) -> usize {
        self.dimension() + 3
    }

    /// `(d1 + 1)(d2 + 1)(d3 + 1)` base vertices plus the apex.
    pub fn vertex_count(&self) -> usize {
        self.dims.iter().map(|d| d + 1).product::<usize>() + 1
    }

    /// All shapes of pyramid dimension `n`.
    pub fn all(n: usize) -> Vec<PyramidShape> {
        let mut out = Vec::new();
        let total = match n.checked_sub(1) {
            Some(t) if t >= 3 => t,
            _ => return out,
        };
        for d1 in (1..=total).rev() {
            for d2 in (1..=d1.min(total - d1)).rev() {
                let d3 = total - d1 - d2;
                if (1..=d2).contains(&d3) {
                    out.push(PyramidShape { dims: [d1, d2, d3] });
                }
            }
        }
        out
    }

    /// The standard Gale diagram: three points at 120 degrees carrying the
    /// lateral families, the origin carrying the base.
    pub fn gale(&self) -> GaleDiagram {
        let [a, b, c] = self.dims.map(|d| d as u32 + 1);
        GaleDiagram::new(3, vec![a, 0, b, 0, c, 0], 1)
    }

    fn family_ranges(&self) -> [core::ops::Range<usize>; 3] {
        let s0 = 1;
        let s1 = s0 + self.dims[0] + 1;
        let s2 = s1 + self.dims[1] + 1;
        [s0..s1, s1..s2, s2..s2 + self.dims[2] + 1]
    }
}

/// Vertex facet sets of the reference pyramid, sorted.
pub fn reference_vertices(shape: PyramidShape) -> Vec<FacetSet> {
    let [r0, r1, r2] = shape.family_ranges();
    let lateral = (1u64 << shape.facet_count()) - 2;
    let mut out = vec![lateral];
    for a in r0.clone() {
        for b in r1.clone() {
            for c in r2.clone() {
                // base vertex (a, b, c) lies on every lateral facet except the
                // three opposite to it
                out.push(1 | (lateral & !(1 << a | 1 << b | 1 << c)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every facet subset with non-empty intersection, as sorted facet lists in
/// sorted order (the encoding of `gale::faces`).
pub fn reference_lattice(shape: PyramidShape) -> Result<Vec<Vec<usize>>> {
    if shape.facet_count() > FACE_SCAN_LIMIT {
        return Err(Error::TooLarge(shape.facet_count()));
    }
    let vs = reference_vertices(shape);
    let mut out: Vec<Vec<usize>> = (0..1u64 << shape.facet_count())
        .filter(|&s| vs.iter().any(|&v| v & s == s))
        .map(members)
        .collect();
    out.sort();
    Ok(out)
}

/// Is there a facet bijection carrying the vertex family `a` onto `b`?
/// Both families are over facets `0..facets`.
pub fn lattices_isomorphic(a: &[FacetSet], b: &[FacetSet], facets: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let profile = |fam: &[FacetSet], f: usize| {
        let mut p: Vec<u32> = fam
            .iter()
            .filter(|&&v| v >> f & 1 == 1)
            .map(|v| v.count_ones())
            .collect();
        p.sort_unstable();
        p
    };
    let pa: Vec<Vec<u32>> = (0..facets).map(|f| profile(a, f)).collect();
    let pb: Vec<Vec<u32>> = (0..facets).map(|f| profile(b, f)).collect();
    let (mut sa, mut sb) = (pa.clone(), pb.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut target: Vec<FacetSet> = b.to_vec();
    target.sort_unstable();
    let mut map = vec![usize::MAX; facets];
    let mut used = 0u64;
    extend_map(a, &target, &pa, &pb, 0, &mut map, &mut used)
}

fn extend_map(
    a: &[FacetSet],
    b: &[FacetSet],
    pa: &[Vec<u32>],
    pb: &[Vec<u32>],
    f: usize,
    map: &mut [usize],
    used: &mut u64,
) -> bool {
    let facets = map.len();
    if f == facets {
        let mut img: Vec<FacetSet> = a
            .iter()
            .map(|&v| members(v).iter().fold(0u64, |m, &x| m | 1 << map[x]))
            .collect();
        img.sort_unstable();
        return img == b;
    }
    let done = (1u64 << (f + 1)) - 1;
    for g in 0..facets {
        if *used >> g & 1 == 1 || pa[f] != pb[g] {
            continue;
        }
        map[f] = g;
        *used |= 1 << g;
        // every partial image of an `a`-vertex must be a partial image of a `b`-vertex
        let ok = a.iter().all(|&v| {
            let part = members(v & done).iter().fold(0u64, |m, &x| m | 1 << map[x]);
            b.iter().any(|&w| w & *used == part)
        });
        if ok && extend_map(a, b, pa, pb, f + 1, map, used) {
            return true;
        }
        *used &= !(1 << g);
        map[f] = usize::MAX;
    }
    false
}

/// The shape whose reference pyramid has the combinatorics of `g`, if any.
/// The face family is the down-closure of the vertex sets, so comparing
/// vertex families compares face lattices.
pub fn is_pyramid_over_three_simplices(
    g: &GaleDiagram,
    asg: &FacetAssignment,
) -> Result<Option<PyramidShape>> {
    if !g.is_pyramid() {
        return Err(Error::Precondition(format!(
            "origin label is 0, not a pyramid: {:?}",
            g.labels
        )));
    }
    let facets = asg.facet_count();
    if facets > 64 {
        return Err(Error::TooLarge(facets));
    }
    let n = facets.saturating_sub(3);
    let vs = FaceOracle::new(g, asg).vertex_sets();
    Ok(PyramidShape::all(n).into_iter().find(|&s| {
        s.vertex_count() == vs.len() && lattices_isomorphic(&vs, &reference_vertices(s), facets)
    }))
}

/// Outcome of the pyramid classification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PyramidReport {
    /// One report per dimension, `found` certificates carry their shape.
    pub dimensions: Vec<DimensionReport>,
    pub shapes: usize,
}

impl PyramidReport {
    pub fn found(&self) -> impl Iterator<Item = &Found> {
        self.dimensions.iter().flat_map(|d| d.found.iter())
    }

    pub fn max_dimension(&self) -> Option<usize> {
        self.dimensions
            .iter()
            .filter(|d| !d.found.is_empty())
            .map(|d| d.n)
            .max()
    }

    pub fn unresolved(&self) -> usize {
        self.dimensions.iter().map(|d| d.unresolved.len()).sum()
    }
}

/// Classify Coxeter pyramids over products of three simplices in dimensions
/// `4..=max_n`. Each shape has a single standard Gale diagram; it is
/// re-checked against the reference lattice before completion. Lemma
/// constraints are off (they concern non-pyramids).
pub fn enumerate_pyramids_up_to(spec: &SearchSpec, max_n: usize) -> Result<PyramidReport> {
    let mut rep = PyramidReport::default();
    for n in 4..=max_n {
        let mut outcomes = Vec::new();
        for shape in PyramidShape::all(n) {
            rep.shapes += 1;
            let g = shape.gale();
            let asg = FacetAssignment::standard(&g);
            if is_pyramid_over_three_simplices(&g, &asg)? != Some(shape) {
                return Err(Error::Precondition(format!(
                    "Gale diagram of shape {:?} fails the lattice check",
                    shape.dims
                )));
            }
            let sp = SearchSpec { n, ..spec.clone() };
            let mut o = process_gale(&g, &sp)?;
            for f in &mut o.found {
                f.certificate.pyramid_shape = Some(shape.dims);
            }
            outcomes.push((g, o));
        }
        rep.dimensions.push(merge_outcomes(n, outcomes));
    }
    Ok(rep)
}

/// The full run over dimensions up to [`PYRAMID_MAX_DIMENSION`].
pub fn enumerate_pyramids(spec: &SearchSpec) -> Result<PyramidReport> {
    enumerate_pyramids_up_to(spec, PYRAMID_MAX_DIMENSION)
}

/// Standard pyramid Gale diagrams of dimension `n` (origin label at least
/// 1), split by whether they pass the shape test.
pub fn pyramid_gale_diagrams(
    n: usize,
) -> Result<(Vec<(GaleDiagram, PyramidShape)>, Vec<GaleDiagram>)> {
    let mut all = Vec::new();
    for k in 2..=n + 3 {
        enumerate_k(n, k, &mut |g| {
            if g.origin > 0 {
                all.push(g);
            }
            true
        });
    }
    let (mut shaped, mut other) = (Vec::new(), Vec::new());
    for g in all {
        match is_pyramid_over_three_simplices(&g, &FacetAssignment::standard(&g))? {
            Some(s) => shaped.push((g, s)),
            None => other.push(g),
        }
    }
    Ok((shaped, other))
}

/// Audit: run the completion pipeline on the pyramid Gale diagrams of
/// dimension `n` that are not of the three-simplex type; returns the
/// certificates found (expected none) keyed by diagram.
pub fn audit_other_pyramids(spec: &SearchSpec, n: usize) -> Result<DimensionReport> {
    let (_, other) = pyramid_gale_diagrams(n)?;
    let sp = SearchSpec { n, ..spec.clone() };
    let mut outcomes = Vec::new();
    for g in other {
        let o = process_gale(&g, &sp)?;
        outcomes.push((g, o));
    }
    Ok(merge_outcomes(n, outcomes))
}

/// Canonical keys of all certified pyramids, per shape.
pub fn keys_by_shape(rep: &PyramidReport) -> BTreeMap<[usize; 3], Vec<CanonicalKey>> {
    let mut out: BTreeMap<[usize; 3], Vec<CanonicalKey>> = BTreeMap::new();
    for f in rep.found() {
        if let Some(s) = f.certificate.pyramid_shape {
            out.entry(s).or_default().push(f.key.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_pyramid_reference() {
        let s = PyramidShape::new(1, 1, 1).unwrap();
        assert_eq!(s.facet_count(), 7);
        let vs = reference_vertices(s);
        assert_eq!(vs.len(), 9);
        assert_eq!(vs.iter().filter(|&&v| v & 1 == 1).count(), 8);
        assert_eq!(PyramidShape::new(2, 1, 1).unwrap().facet_count(), 8);
    }

    #[test]
    fn shapes_partition_dimension() {
        assert!(PyramidShape::all(3).is_empty());
        assert_eq!(
            PyramidShape::all(4),
            vec![PyramidShape::new(1, 1, 1).unwrap()]
        );
        // partitions of 6 into three positive parts: 4+1+1, 3+2+1, 2+2+2
        assert_eq!(PyramidShape::all(7).len(), 3);
    }

    #[test]
    fn cube_gale_diagram_is_detected() {
        let g = GaleDiagram::new(3, vec![2, 0, 2, 0, 2, 0], 1);
        let asg = FacetAssignment::standard(&g);
        assert_eq!(
            is_pyramid_over_three_simplices(&g, &asg).unwrap(),
            Some(PyramidShape::new(1, 1, 1).unwrap())
        );
        let bipyramid = GaleDiagram::new(3, vec![1; 6], 1);
        let asg = FacetAssignment::standard(&bipyramid);
        assert_eq!(
            is_pyramid_over_three_simplices(&bipyramid, &asg).unwrap(),
            None
        );
    }

    #[test]
    fn non_pyramid_is_a_precondition_error() {
        let g = GaleDiagram::new(5, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 0);
        let asg = FacetAssignment::standard(&g);
        assert!(matches!(
            is_pyramid_over_three_simplices(&g, &asg),
            Err(Error::Precondition(_))
        ));
    }
}
