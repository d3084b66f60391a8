//! Certification of finite-volume hyperbolic Coxeter polytopes from a Coxeter
//! diagram plus the combinatorics of a Gale diagram, and exact solving of
//! unknown dotted-edge weights.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{cos_pi_over_exact, Coeffs, Inertia, Tower};
use crate::diagram::dynkin::{components, recognize, ComponentKind};
use crate::diagram::{gram_matrix, signature, CoxeterDiagram, DottedWeight, EdgeKind, LabelMatrix};
use crate::error::{Error, Result};
use crate::gale::{members, FaceOracle, FacetAssignment, FacetSet, GaleDiagram};
use crate::lemmas::{check_lemma_kv, check_lemma_l, ConstraintReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Finite,
    Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub facets: Vec<usize>,
    /// `None` when the subdiagram is neither elliptic of rank n nor parabolic of rank n-1.
    pub kind: Option<VertexKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckFailure {
    /// Facet counts of the diagram, Gale diagram and dimension disagree, or the Gale diagram is not standard.
    Shape(String),
    Signature {
        found: Inertia,
    },
    /// Face pairs need an angle (or a bold edge at an ideal vertex); non-face pairs need bold or dotted.
    Pair {
        i: usize,
        j: usize,
        face: bool,
    },
    Vertex {
        facets: Vec<usize>,
    },
    /// A minimal non-face whose subdiagram is elliptic would be a face of the realised polytope.
    EllipticNonFace {
        facets: Vec<usize>,
    },
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::Shape(s) => write!(f, "shape: {s}"),
            CheckFailure::Signature { found } => {
                write!(
                    f,
                    "signature ({}, {}, {})",
                    found.positive, found.negative, found.zero
                )
            }
            CheckFailure::Pair { i, j, face: true } => {
                write!(f, "facets {i},{j} meet but carry no angle")
            }
            CheckFailure::Pair { i, j, face: false } => {
                write!(f, "facets {i},{j} do not meet but carry an angle")
            }
            CheckFailure::Vertex { facets } => {
                write!(f, "vertex {facets:?} is neither finite nor ideal")
            }
            CheckFailure::EllipticNonFace { facets } => {
                write!(f, "non-face {facets:?} is elliptic")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub dimension: usize,
    pub facets: usize,
    pub signature: Option<Inertia>,
    pub vertices: Vec<VertexRecord>,
    /// True iff no vertex is ideal.
    pub compact: bool,
    pub reports: ConstraintReport,
    pub failures: Vec<CheckFailure>,
    pub valid: bool,
    /// Simplex dimensions when the polytope is a pyramid over a product of three simplices.
    pub pyramid_shape: Option<[usize; 3]>,
}

/// Subdiagram kind at a vertex: elliptic on `n` nodes, or parabolic of rank `n - 1`.
pub fn vertex_kind(m: &LabelMatrix, facets: &[usize], n: usize) -> Option<VertexKind> {
    let comps = components(m, facets);
    let mut affine = 0;
    for c in &comps {
        match recognize(m, c) {
            ComponentKind::Elliptic(_) => {}
            ComponentKind::Affine(_) => affine += 1,
            ComponentKind::Neither => return None,
        }
    }
    if affine == 0 {
        (facets.len() == n).then_some(VertexKind::Finite)
    } else if affine == comps.len() && facets.len() - affine == n - 1 {
        Some(VertexKind::Ideal)
    } else {
        None
    }
}

/// Minimal facet sets that are not faces: the origin facets together with the
/// facets of `k` consecutive positions, minimised under inclusion.
pub fn minimal_nonfaces(g: &GaleDiagram, asg: &FacetAssignment) -> Vec<FacetSet> {
    let k = g.k;
    let m = g.positions();
    let origin: FacetSet = asg.origin.iter().fold(0, |s, &f| s | 1 << f);
    let mut sets: Vec<FacetSet> = (0..m)
        .map(|p| {
            (p..p + k)
                .flat_map(|q| asg.polygon[q % m].iter())
                .fold(origin, |s, &f| s | 1 << f)
        })
        .collect();
    sets.sort_unstable();
    sets.dedup();
    let all = sets.clone();
    sets.retain(|&s| !all.iter().any(|&t| t != s && t & s == t));
    sets
}

pub fn verify_polytope(
    d: &CoxeterDiagram,
    g: &GaleDiagram,
    asg: &FacetAssignment,
    n: usize,
) -> Result<Certificate> {
    if d.has_unknown_weights() {
        return Err(Error::UnknownEntry);
    }
    let facets = d.node_count();
    let mut cert = Certificate {
        dimension: n,
        facets,
        signature: None,
        vertices: Vec::new(),
        compact: true,
        reports: ConstraintReport::default(),
        failures: Vec::new(),
        valid: false,
        pyramid_shape: None,
    };
    if !g.is_standard()
        || g.facet_count() != n + 3
        || facets != n + 3
        || asg.facet_count() != facets
    {
        cert.failures.push(CheckFailure::Shape(alloc::format!(
            "{} nodes, Gale label sum {}, dimension {n}",
            facets,
            g.label_sum()
        )));
        return Ok(cert);
    }
    let sig = signature(&gram_matrix(d))?;
    cert.signature = Some(sig);
    if sig != Inertia::new(n, 1, 2) {
        cert.failures.push(CheckFailure::Signature { found: sig });
    }
    let oracle = FaceOracle::new(g, asg);
    for i in 0..facets {
        for j in i + 1..facets {
            let face = oracle.is_face(1 << i | 1 << j);
            let ok = match d.edge(i, j) {
                EdgeKind::Angle(_) => face,
                EdgeKind::Bold => true,
                EdgeKind::Dotted(_) => !face,
            };
            if !ok {
                cert.failures.push(CheckFailure::Pair { i, j, face });
            }
        }
    }
    let m = d.labels();
    let mut verts = oracle.vertex_sets();
    verts.sort_unstable_by_key(|&v| members(v));
    for v in verts {
        let fs = members(v);
        let kind = vertex_kind(&m, &fs, n);
        match kind {
            None => cert
                .failures
                .push(CheckFailure::Vertex { facets: fs.clone() }),
            Some(VertexKind::Ideal) => cert.compact = false,
            Some(VertexKind::Finite) => {}
        }
        cert.vertices.push(VertexRecord { facets: fs, kind });
    }
    for s in minimal_nonfaces(g, asg) {
        let fs = members(s);
        if fs.len() > 2 && crate::diagram::dynkin::is_elliptic(&m, &fs) {
            cert.failures
                .push(CheckFailure::EllipticNonFace { facets: fs });
        }
    }
    cert.reports = check_lemma_kv(g, asg, d)?;
    cert.reports.merge(check_lemma_l(g, asg, d)?);
    cert.valid = cert.failures.is_empty();
    Ok(cert)
}

/// Exact Gram entries in one tower; `None` marks an unknown dotted weight.
struct ExactGram {
    tower: Tower,
    e: Vec<Vec<Option<Coeffs>>>,
}

impl ExactGram {
    fn new(d: &CoxeterDiagram) -> Result<Self> {
        let n = d.node_count();
        let mut tower = Tower::new();
        let mut e = vec![vec![None; n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = Some(tower.int(1));
        }
        for i in 0..n {
            for j in i + 1..n {
                let v = match d.edge(i, j) {
                    EdgeKind::Angle(2) => Some(tower.int(0)),
                    EdgeKind::Angle(m) => {
                        let c =
                            cos_pi_over_exact(&mut tower, m).ok_or(Error::CertificationFailure)?;
                        Some(tower.neg(&c))
                    }
                    EdgeKind::Bold => Some(tower.int(-1)),
                    EdgeKind::Dotted(Some(w)) => {
                        let v = tower.import(&w.tower, &w.value);
                        Some(tower.neg(&v))
                    }
                    EdgeKind::Dotted(None) => None,
                };
                e[i][j] = v.clone();
                e[j][i] = v;
            }
        }
        Ok(ExactGram { tower, e })
    }

    fn get(&self, i: usize, j: usize) -> Option<&Coeffs> {
        self.e[i][j].as_ref()
    }

    fn set(&mut self, i: usize, j: usize, v: Coeffs) {
        self.e[i][j] = Some(v.clone());
        self.e[j][i] = Some(v);
    }
}

/// Solve `B x = b` exactly; `None` if `B` is singular.
fn solve_exact(t: &Tower, b_mat: &[Vec<Coeffs>], rhs: &[Vec<Coeffs>]) -> Option<Vec<Vec<Coeffs>>> {
    let n = b_mat.len();
    let mut a: Vec<Vec<Coeffs>> = b_mat.to_vec();
    let mut x: Vec<Vec<Coeffs>> = rhs.iter().map(|r| r.to_vec()).collect();
    // x is stored column-major: x[c][row]
    for col in 0..n {
        let piv = (col..n).find(|&r| !t.is_zero(&a[r][col]))?;
        a.swap(col, piv);
        for xc in x.iter_mut() {
            xc.swap(col, piv);
        }
        let inv = t.inv(&a[col][col]);
        for r in 0..n {
            if r == col || t.is_zero(&a[r][col]) {
                continue;
            }
            let f = t.mul(&a[r][col], &inv);
            for c in col..n {
                let v = t.sub(&a[r][c], &t.mul(&f, &a[col][c]));
                a[r][c] = v;
            }
            for xc in x.iter_mut() {
                let v = t.sub(&xc[r], &t.mul(&f, &xc[col]));
                xc[r] = v;
            }
        }
    }
    for xc in x.iter_mut() {
        for r in 0..n {
            xc[r] = t.div(&xc[r], &a[r][r]);
        }
    }
    Some(x)
}

fn dot(t: &Tower, a: &[Coeffs], b: &[Coeffs]) -> Coeffs {
    a.iter()
        .zip(b)
        .fold(t.zero(), |acc, (x, y)| t.add(&acc, &t.mul(x, y)))
}

/// One round of vertex propagation: every finite vertex `V` whose Gram block is
/// known determines `G_xy = g_x·B⁻¹g_y - sqrt((g_x·B⁻¹g_x - 1)(g_y·B⁻¹g_y - 1))`
/// for facets `x, y` off `V` with known entries against `V`.
fn propagate(eg: &mut ExactGram, finite: &[Vec<usize>]) -> Result<bool> {
    let n = eg.e.len();
    let mut progress = false;
    for v in finite {
        let pending: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| eg.get(i, j).is_none() && !v.contains(&i) && !v.contains(&j))
            .collect();
        if pending.is_empty() {
            continue;
        }
        if v.iter().any(|&a| v.iter().any(|&b| eg.get(a, b).is_none())) {
            continue;
        }
        let ready = |eg: &ExactGram, x: usize| v.iter().all(|&a| eg.get(x, a).is_some());
        let outside: Vec<usize> = (0..n).filter(|x| !v.contains(x) && ready(eg, *x)).collect();
        if !pending
            .iter()
            .any(|&(i, j)| outside.contains(&i) && outside.contains(&j))
        {
            continue;
        }
        let t = &eg.tower;
        let b: Vec<Vec<Coeffs>> = v
            .iter()
            .map(|&a| v.iter().map(|&c| t.lift(eg.get(a, c).unwrap())).collect())
            .collect();
        let gs: Vec<Vec<Coeffs>> = outside
            .iter()
            .map(|&x| v.iter().map(|&a| t.lift(eg.get(x, a).unwrap())).collect())
            .collect();
        let us = solve_exact(t, &b, &gs).ok_or(Error::CertificationFailure)?;
        let norms: Vec<Coeffs> = gs
            .iter()
            .zip(&us)
            .map(|(g, u)| t.sub(&dot(t, g, u), &t.int(1)))
            .collect();
        for (i, j) in pending {
            let (Some(a), Some(c)) = (
                outside.iter().position(|&x| x == i),
                outside.iter().position(|&x| x == j),
            ) else {
                continue;
            };
            if eg.get(i, j).is_some() {
                continue;
            }
            let t = &mut eg.tower;
            if t.sign(&norms[a]) != Ordering::Greater || t.sign(&norms[c]) != Ordering::Greater {
                return Err(Error::NoSolution);
            }
            let prod = t.mul(&norms[a], &norms[c]);
            let root = t.sqrt(&prod).ok_or(Error::NoSolution)?;
            let inner = dot(t, &gs[a], &us[c]);
            let entry = t.sub(&inner, &root);
            // weight = -entry must exceed 1
            if t.sign(&t.add(&entry, &t.int(1))) != Ordering::Less {
                return Err(Error::NoSolution);
            }
            eg.set(i, j, entry);
            progress = true;
        }
    }
    Ok(progress)
}

/// Univariate polynomial with tower coefficients, lowest degree first.
type Poly = Vec<Coeffs>;

fn trim(t: &Tower, p: &mut Poly) {
    while p.last().is_some_and(|c| t.is_zero(c)) {
        p.pop();
    }
}

fn det_exact(t: &Tower, mut a: Vec<Vec<Coeffs>>) -> Coeffs {
    let n = a.len();
    let mut det = t.int(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !t.is_zero(&a[r][col])) else {
            return t.int(0);
        };
        if piv != col {
            a.swap(col, piv);
            det = t.neg(&det);
        }
        det = t.mul(&det, &a[col][col]);
        let inv = t.inv(&a[col][col]);
        for r in col + 1..n {
            if t.is_zero(&a[r][col]) {
                continue;
            }
            let f = t.mul(&a[r][col], &inv);
            for c in col..n {
                let v = t.sub(&a[r][c], &t.mul(&f, &a[col][c]));
                a[r][c] = v;
            }
        }
    }
    det
}

/// Newton interpolation through `(i, ys[i])`, `i = 0..ys.len()`.
fn interpolate(t: &Tower, ys: &[Coeffs]) -> Poly {
    let k = ys.len();
    let mut dd: Vec<Coeffs> = ys.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            let diff = t.sub(&dd[i], &dd[i - 1]);
            dd[i] = t.scale(
                &diff,
                &BigRational::new(BigInt::one(), BigInt::from(level as i64)),
            );
        }
    }
    // expand sum dd[i] * prod_{j<i} (x - j)
    let mut poly: Poly = vec![t.zero()];
    for i in (0..k).rev() {
        // poly = poly * (x - i) + dd[i]
        let mut next: Poly = vec![t.zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = t.add(&next[d + 1], c);
            next[d] = t.sub(
                &next[d],
                &t.scale(c, &BigRational::from_integer(BigInt::from(i as i64))),
            );
        }
        next[0] = t.add(&next[0], &dd[i]);
        poly = next;
    }
    trim(t, &mut poly);
    poly
}

fn poly_rem(t: &Tower, a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead_inv = t.inv(b.last().unwrap());
    while r.len() >= b.len() && !r.is_empty() {
        let f = t.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - b.len();
        for (d, c) in b.iter().enumerate() {
            r[d + shift] = t.sub(&r[d + shift], &t.mul(&f, c));
        }
        r.pop();
        trim(t, &mut r);
    }
    r
}

fn poly_gcd(t: &Tower, a: Poly, b: Poly) -> Poly {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let r = poly_rem(t, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Real roots above 1 of a polynomial of degree at most 4 that is linear,
/// quadratic or biquadratic.
fn roots_above_one(t: &mut Tower, p: &Poly) -> Result<Vec<Coeffs>> {
    let one = t.int(1);
    let quad = |t: &mut Tower, c0: &Coeffs, c1: &Coeffs, c2: &Coeffs| -> Vec<Coeffs> {
        // roots of c2 x^2 + c1 x + c0
        let disc = t.sub(
            &t.mul(c1, c1),
            &t.scale(&t.mul(c0, c2), &BigRational::from_integer(BigInt::from(4))),
        );
        let Some(s) = t.sqrt(&disc) else {
            return Vec::new();
        };
        let den = t.scale(c2, &BigRational::from_integer(BigInt::from(2)));
        let mc1 = t.neg(c1);
        vec![t.div(&t.add(&mc1, &s), &den), t.div(&t.sub(&mc1, &s), &den)]
    };
    let cands: Vec<Coeffs> = match p.len() {
        0 => return Err(Error::Underdetermined),
        1 => return Err(Error::NoSolution),
        2 => vec![t.neg(&t.div(&p[0], &p[1]))],
        3 => quad(t, &p[0], &p[1], &p[2]),
        5 if t.is_zero(&p[1]) && t.is_zero(&p[3]) => {
            let mut out = Vec::new();
            for sq in quad(t, &p[0], &p[2], &p[4]) {
                if let Some(r) = t.sqrt(&sq) {
                    out.push(r);
                }
            }
            out
        }
        _ => return Err(Error::CertificationFailure),
    };
    let mut out: Vec<Coeffs> = Vec::new();
    for c in cands {
        if t.cmp(&c, &one) == Ordering::Greater
            && !out.iter().any(|o| t.cmp(o, &c) == Ordering::Equal)
        {
            out.push(c);
        }
    }
    out.sort_by(|a, b| t.cmp(a, b));
    Ok(out)
}

/// Principal minors of order `n+2` and `n+3` vanish iff the rank is at most `n+1`;
/// with every unknown weight equal to one variable they are univariate polynomials.
fn single_orbit_poly(eg: &ExactGram, n: usize) -> Poly {
    let size = eg.e.len();
    // principal minors of orders n+2 and n+3 (at most n+3 nodes by the caller)
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    if size >= n + 2 {
        subsets.push((0..size).collect());
    }
    if size == n + 3 {
        for skip in 0..size {
            subsets.push((0..size).filter(|&i| i != skip).collect());
        }
    }
    minors_gcd(eg, &subsets)
}

/// Gcd of the principal minors on `subsets`, as polynomials in one
/// variable standing for every unknown weight.
fn minors_gcd(eg: &ExactGram, subsets: &[Vec<usize>]) -> Poly {
    let size = eg.e.len();
    let t = &eg.tower;
    let at = |x: i64| -> Vec<Vec<Coeffs>> {
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| eg.get(i, j).map_or_else(|| t.int(-x), |v| t.lift(v)))
                    .collect()
            })
            .collect()
    };
    let samples: Vec<Vec<Vec<Coeffs>>> = (0..=size as i64).map(at).collect();
    let mut g: Poly = Vec::new();
    for s in subsets {
        let ys: Vec<Coeffs> = samples
            .iter()
            .map(|a| {
                det_exact(
                    t,
                    s.iter()
                        .map(|&i| s.iter().map(|&j| a[i][j].clone()).collect())
                        .collect(),
                )
            })
            .collect();
        let p = interpolate(t, &ys);
        g = if g.is_empty() { p } else { poly_gcd(t, g, p) };
    }
    g
}

/// Largest number of nodes on unknown pairs for which
/// [`weight_free_obstruction`] enumerates independent sets.
const OBSTRUCTION_NODE_LIMIT: usize = 16;

/// True when some principal submatrix free of unknown weights already rules
/// out a Gram matrix of signature `(n, 1)` and rank `n + 1`: it has two
/// negative eigenvalues, more than `n` positive ones, or rank above `n + 1`.
/// Only maximal such submatrices (independent sets of the unknown pairs) are
/// checked; ones whose signature cannot be certified are skipped.
fn weight_free_obstruction(d: &CoxeterDiagram, n: usize) -> bool {
    let size = d.node_count();
    let pairs: Vec<(usize, usize)> = d
        .edges()
        .filter(|(_, _, e)| matches!(e, EdgeKind::Dotted(None)))
        .map(|(i, j, _)| (i, j))
        .collect();
    let mut touched: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    touched.sort_unstable();
    touched.dedup();
    if touched.len() > OBSTRUCTION_NODE_LIMIT {
        return false;
    }
    let free: Vec<usize> = (0..size).filter(|v| !touched.contains(v)).collect();
    let bit = |v: usize| 1u32 << touched.iter().position(|&t| t == v).unwrap();
    let conflicts: Vec<u32> = pairs.iter().map(|&(i, j)| bit(i) | bit(j)).collect();
    let independent = |m: u32| conflicts.iter().all(|&c| m & c != c);
    let g = gram_matrix(d);
    (0u32..1 << touched.len())
        .filter(|&m| independent(m))
        // maximal: no further touched node can be added
        .filter(|&m| (0..touched.len()).all(|b| m >> b & 1 == 1 || !independent(m | 1 << b)))
        .any(|m| {
            let mut nodes = free.clone();
            nodes.extend(
                (0..touched.len())
                    .filter(|&b| m >> b & 1 == 1)
                    .map(|b| touched[b]),
            );
            nodes.sort_unstable();
            match signature(&g.principal(&nodes)) {
                Ok(s) => s.negative > 1 || s.positive > n || s.positive + s.negative > n + 1,
                Err(_) => false,
            }
        })
}

/// Fill in every `Dotted(None)` weight so that the Gram matrix has rank `n + 1`
/// with signature `(n, 1)`.
pub fn solve_dotted_weights(
    d: &CoxeterDiagram,
    g: &GaleDiagram,
    asg: &FacetAssignment,
    n: usize,
) -> Result<CoxeterDiagram> {
    solve_dotted_weights_with(d, g, asg, n, None)
}

/// As [`solve_dotted_weights`]; `orbits` groups unknown pairs whose weights are equal by symmetry.
pub fn solve_dotted_weights_with(
    d: &CoxeterDiagram,
    g: &GaleDiagram,
    asg: &FacetAssignment,
    n: usize,
    orbits: Option<&[Vec<(usize, usize)>]>,
) -> Result<CoxeterDiagram> {
    if !d.has_unknown_weights() {
        return Ok(d.clone());
    }
    if weight_free_obstruction(d, n) {
        return Err(Error::NoSolution);
    }
    let mut eg = ExactGram::new(d)?;
    let m = d.labels();
    let finite: Vec<Vec<usize>> = if g.facet_count() == d.node_count() {
        FaceOracle::new(g, asg)
            .vertex_sets()
            .into_iter()
            .map(members)
            .filter(|v| vertex_kind(&m, v, n) == Some(VertexKind::Finite))
            .collect()
    } else {
        Vec::new()
    };
    while propagate(&mut eg, &finite)? {}
    let size = d.node_count();
    let unknown: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
        .filter(|&(i, j)| eg.get(i, j).is_none())
        .collect();
    let (tower, roots): (Tower, Vec<Option<Coeffs>>) = if unknown.is_empty() {
        (eg.tower.clone(), vec![None])
    } else {
        let single = unknown.len() == 1
            || orbits.is_some_and(|o| {
                o.iter().any(|orb| {
                    unknown
                        .iter()
                        .all(|p| orb.contains(p) || orb.contains(&(p.1, p.0)))
                })
            });
        if !single {
            return solve_pair_by_pair(d, &eg, n, &unknown);
        }
        if size > n + 3 {
            return Err(Error::Precondition(alloc::format!(
                "{size} nodes exceed n + 3 = {}",
                n + 3
            )));
        }
        let poly = single_orbit_poly(&eg, n);
        let mut t = eg.tower.clone();
        let roots = roots_above_one(&mut t, &poly)?;
        (t, roots.into_iter().map(Some).collect())
    };
    for root in roots {
        let mut out = d.clone();
        for i in 0..size {
            for j in i + 1..size {
                if let EdgeKind::Dotted(None) = d.edge(i, j) {
                    let w = match eg.get(i, j) {
                        Some(v) => tower.neg(v),
                        None => root.clone().ok_or(Error::CertificationFailure)?,
                    };
                    set_weight(&mut out, i, j, &tower, w)?;
                }
            }
        }
        if signature(&gram_matrix(&out))? == Inertia::new(n, 1, 2) {
            return Ok(out);
        }
    }
    Err(Error::NoSolution)
}

/// Largest number of weight combinations [`solve_pair_by_pair`] tries.
const COMBINATION_LIMIT: usize = 256;

/// Several unrelated unknowns on `n + 3` nodes: solve each from the minors of
/// order `n + 2` in which it is the only unknown, then test every
/// combination of roots.
fn solve_pair_by_pair(
    d: &CoxeterDiagram,
    eg: &ExactGram,
    n: usize,
    unknown: &[(usize, usize)],
) -> Result<CoxeterDiagram> {
    let size = d.node_count();
    if size != n + 3 {
        return Err(Error::Underdetermined);
    }
    let mut solved: Vec<Result<(Tower, Vec<Coeffs>)>> = Vec::new();
    for &(i, j) in unknown {
        // dropping `skip` must remove every other unknown pair
        let subsets: Vec<Vec<usize>> = (0..size)
            .filter(|&skip| skip != i && skip != j)
            .filter(|&skip| {
                unknown
                    .iter()
                    .all(|&(a, b)| (a, b) == (i, j) || a == skip || b == skip)
            })
            .map(|skip| (0..size).filter(|&v| v != skip).collect())
            .collect();
        solved.push(if subsets.is_empty() {
            Err(Error::Underdetermined)
        } else {
            let poly = minors_gcd(eg, &subsets);
            let mut t = eg.tower.clone();
            roots_above_one(&mut t, &poly).map(|r| (t, r))
        });
    }
    // one pair without admissible roots settles it, whatever the others do
    if solved
        .iter()
        .any(|r| matches!(r, Ok((_, roots)) if roots.is_empty()))
    {
        return Err(Error::NoSolution);
    }
    let solved: Vec<(Tower, Vec<Coeffs>)> = solved.into_iter().collect::<Result<_>>()?;
    let total = solved
        .iter()
        .try_fold(1usize, |acc, (_, r)| acc.checked_mul(r.len()));
    if total.map_or(true, |t| t > COMBINATION_LIMIT) {
        return Err(Error::CertificationFailure);
    }
    let mut choice = vec![0usize; solved.len()];
    loop {
        let mut out = d.clone();
        for a in 0..size {
            for b in a + 1..size {
                if let EdgeKind::Dotted(None) = d.edge(a, b) {
                    match unknown.iter().position(|&p| p == (a, b)) {
                        Some(k) => {
                            let (t, roots) = &solved[k];
                            set_weight(&mut out, a, b, t, roots[choice[k]].clone())?;
                        }
                        None => {
                            let v = eg.get(a, b).ok_or(Error::CertificationFailure)?;
                            set_weight(&mut out, a, b, &eg.tower, eg.tower.neg(v))?;
                        }
                    }
                }
            }
        }
        if signature(&gram_matrix(&out))? == Inertia::new(n, 1, 2) {
            return Ok(out);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Err(Error::NoSolution);
            }
            choice[k] += 1;
            if choice[k] < solved[k].1.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Extend the partial automorphism `perm` (images of nodes `0..perm.len()`) in all ways.
fn automorphisms(
    d: &CoxeterDiagram,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let depth = perm.len();
    if depth == d.node_count() {
        if out.len() >= AUTOMORPHISM_LIMIT {
            return Err(Error::TooLarge(out.len()));
        }
        out.push(perm.clone());
        return Ok(());
    }
    for cand in 0..d.node_count() {
        if !used[cand] && (0..depth).all(|x| d.edge(x, depth) == d.edge(perm[x], cand)) {
            used[cand] = true;
            perm.push(cand);
            automorphisms(d, perm, used, out)?;
            perm.pop();
            used[cand] = false;
        }
    }
    Ok(())
}

/// Largest automorphism group [`dotted_orbits`] enumerates before giving up.
pub const AUTOMORPHISM_LIMIT: usize = 1 << 16;

/// Orbits of the unknown dotted pairs under the edge-kind preserving
/// automorphisms of `d`, for [`solve_dotted_weights_with`].
pub fn dotted_orbits(d: &CoxeterDiagram) -> Result<Vec<Vec<(usize, usize)>>> {
    let size = d.node_count();
    let unknown: Vec<(usize, usize)> = d
        .edges()
        .filter(|(_, _, e)| matches!(e, EdgeKind::Dotted(None)))
        .map(|(i, j, _)| (i, j))
        .collect();
    let index = |i: usize, j: usize| unknown.iter().position(|&p| p == (i.min(j), i.max(j)));
    let mut parent: Vec<usize> = (0..unknown.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut perm = Vec::with_capacity(size);
    let mut autos = Vec::new();
    automorphisms(d, &mut perm, &mut vec![false; size], &mut autos)?;
    for p in &autos {
        for (a, &(i, j)) in unknown.iter().enumerate() {
            let b = index(p[i], p[j]).ok_or(Error::CertificationFailure)?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut orbits: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (a, &p) in unknown.iter().enumerate() {
        orbits.entry(find(&mut parent, a)).or_default().push(p);
    }
    Ok(orbits.into_values().collect())
}

fn set_weight(
    d: &mut CoxeterDiagram,
    i: usize,
    j: usize,
    tower: &Tower,
    value: Coeffs,
) -> Result<()> {
    let w = DottedWeight {
        tower: tower.clone(),
        value: tower.lift(&value),
    };
    d.set_edge(i, j, EdgeKind::Dotted(Some(w)))
        .map_err(|e| Error::Precondition(alloc::format!("{e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> (GaleDiagram, FacetAssignment) {
        let g = GaleDiagram::new(5, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 0);
        let a = FacetAssignment::standard(&g);
        (g, a)
    }

    /// Right angles on face pairs, unknown dotted weights elsewhere.
    fn pentagon_diagram(
        g: &GaleDiagram,
        a: &FacetAssignment,
    ) -> (CoxeterDiagram, Vec<(usize, usize)>) {
        let o = FaceOracle::new(g, a);
        let mut d = CoxeterDiagram::new(5);
        let mut orbit = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                if !o.is_face(1 << i | 1 << j) {
                    d.set_edge(i, j, EdgeKind::Dotted(None)).unwrap();
                    orbit.push((i, j));
                }
            }
        }
        (d, orbit)
    }

    #[test]
    fn right_angled_pentagon() {
        let (g, a) = pentagon();
        let (d, orbit) = pentagon_diagram(&g, &a);
        assert_eq!(orbit.len(), 5);
        let solved = solve_dotted_weights_with(&d, &g, &a, 2, Some(&[orbit.clone()])).unwrap();
        assert_eq!(dotted_orbits(&d).unwrap(), vec![orbit.clone()]);
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        for &(i, j) in &orbit {
            let EdgeKind::Dotted(Some(w)) = solved.edge(i, j) else {
                panic!()
            };
            let e = w.enclosure();
            assert!(e.lo <= phi && phi <= e.hi && e.width() < 1e-12);
        }
        let c = verify_polytope(&solved, &g, &a, 2).unwrap();
        assert!(c.valid, "{:?}", c.failures);
        assert!(c.compact);
        assert_eq!(c.vertices.len(), 5);
        assert_eq!(c.signature, Some(Inertia::new(2, 1, 2)));
    }

    #[test]
    fn identity_gram_is_rejected() {
        let (g, a) = pentagon();
        let c = verify_polytope(&CoxeterDiagram::new(5), &g, &a, 2).unwrap();
        assert!(!c.valid);
        assert!(c.failures.contains(&CheckFailure::Signature {
            found: Inertia::new(5, 0, 0)
        }));
    }

    #[test]
    fn weight_solving_edge_cases() {
        let (g, a) = pentagon();
        let d = CoxeterDiagram::new(5);
        assert_eq!(solve_dotted_weights(&d, &g, &a, 2).unwrap(), d);
        let two = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Dotted(None));
        assert_eq!(
            solve_dotted_weights(&two, &g, &a, 1),
            Err(Error::Underdetermined)
        );
        let (d, _) = pentagon_diagram(&g, &a);
        assert_eq!(
            solve_dotted_weights(&d, &g, &a, 2),
            Err(Error::Underdetermined)
        );
    }

    #[test]
    fn pentagon_nonfaces_are_diagonals() {
        let (g, a) = pentagon();
        let mut nf: Vec<Vec<usize>> = minimal_nonfaces(&g, &a).into_iter().map(members).collect();
        nf.sort();
        assert_eq!(
            nf,
            vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
    }
}
