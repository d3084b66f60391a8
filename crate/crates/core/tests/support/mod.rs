//! Independent oracles shared by the integration tests of both crates.

#![allow(dead_code)]

use hypercox_core::diagram::DiagramClass;
use hypercox_core::gale::{members, FaceOracle, FacetAssignment, GaleDiagram};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// ---- exact convex-hull oracle -------------------------------------------

pub type Q = BigRational;

pub fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

/// Rational points with the cyclic order and antipodes of the regular
/// `2k`-gon, via the rational parametrisation of the unit circle. Only
/// orientations matter for hull membership of the origin, and those agree
/// with the regular polygon.
pub fn rational_positions(k: usize) -> Vec<(Q, Q)> {
    let half: Vec<(Q, Q)> = (0..k)
        .map(|p| {
            let t = q(p as i64, (k - p) as i64);
            let d = Q::one() + &t * &t;
            ((Q::one() - &t * &t) / &d, (q(2, 1) * &t) / &d)
        })
        .collect();
    let mut all = half.clone();
    all.extend(half.into_iter().map(|(x, y)| (-x, -y)));
    all
}

pub fn det(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub fn dot(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// Is the origin in the closed convex hull? By Carathéodory it suffices to
/// look at single points, pairs and triangles.
pub fn origin_in_hull(pts: &[(Q, Q)]) -> bool {
    if pts.iter().any(|p| p.0.is_zero() && p.1.is_zero()) {
        return true;
    }
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if det(a, b).is_zero() && dot(a, b).is_negative() {
                return true;
            }
        }
    }
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate().skip(i + 1) {
            for c in &pts[j + 1..] {
                let s = [det(a, b), det(b, c), det(c, a)];
                if s.iter().all(Zero::is_zero) {
                    continue;
                }
                if s.iter().all(|x| !x.is_negative()) || s.iter().all(|x| !x.is_positive()) {
                    return true;
                }
            }
        }
    }
    false
}

// ---- definitional classification oracle ---------------------------------

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akr) = (a[k][p], a[k][r]);
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let (apk, ark) = (a[p][k], a[r][k]);
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

pub const TOL: f64 = 1e-9;

/// Gram matrix in floating point, written out from the edge conventions.
pub fn float_gram(labels: &[Vec<u32>], nodes: &[usize]) -> Vec<Vec<f64>> {
    nodes
        .iter()
        .map(|&i| {
            nodes
                .iter()
                .map(|&j| match labels[i][j] {
                    _ if i == j => 1.0,
                    0 => -1.0,
                    m => -(std::f64::consts::PI / f64::from(m)).cos(),
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Shape {
    Elliptic,
    Parabolic,
    Neither,
}

pub fn connected(labels: &[Vec<u32>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut left: Vec<usize> = nodes.to_vec();
    while let Some(start) = left.pop() {
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            let (joined, rest): (Vec<usize>, Vec<usize>) =
                left.iter().partition(|&&y| labels[x][y] != 2);
            comp.extend(joined);
            left = rest;
            i += 1;
        }
        comps.push(comp);
    }
    comps
}

pub fn shape(labels: &[Vec<u32>], nodes: &[usize]) -> Shape {
    let ev = jacobi_eigenvalues(float_gram(labels, nodes));
    if ev.iter().all(|&e| e > TOL) {
        return Shape::Elliptic;
    }
    if ev.iter().any(|&e| e < -TOL) {
        return Shape::Neither;
    }
    let all_singular = connected(labels, nodes).iter().all(|c| {
        jacobi_eigenvalues(float_gram(labels, c))
            .iter()
            .any(|e| e.abs() <= TOL)
    });
    if all_singular {
        Shape::Parabolic
    } else {
        Shape::Neither
    }
}

pub fn brute_class(labels: &[Vec<u32>]) -> DiagramClass {
    let n = labels.len();
    let all: Vec<usize> = (0..n).collect();
    let comps = connected(labels, &all);
    match shape(labels, &all) {
        Shape::Elliptic => return DiagramClass::Elliptic,
        Shape::Parabolic => {
            return DiagramClass::Parabolic {
                connected: comps.len() == 1,
            }
        }
        Shape::Neither => {}
    }
    if comps.len() != 1 {
        return DiagramClass::Other;
    }
    let subs: Vec<Shape> = (1..(1u32 << n) - 1)
        .map(|mask| {
            shape(
                labels,
                &(0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>(),
            )
        })
        .collect();
    if subs.iter().all(|&s| s == Shape::Elliptic) {
        DiagramClass::Lanner
    } else if subs.iter().all(|&s| s != Shape::Neither) {
        DiagramClass::QuasiLanner
    } else {
        DiagramClass::Other
    }
}

/// Does the gap criterion agree with the exact hull on the given facet subsets?
/// Returns the first disagreeing subset.
pub fn face_test_disagreement(g: &GaleDiagram, masks: &[u64]) -> Option<Vec<usize>> {
    let asg = FacetAssignment::standard(g);
    let n = asg.facet_count();
    let oracle = FaceOracle::new(g, &asg);
    let pos = rational_positions(g.k);
    let origin = (Q::zero(), Q::zero());
    let point_of: Vec<(Q, Q)> = asg
        .positions()
        .into_iter()
        .map(|p| p.map_or(origin.clone(), |p| pos[p].clone()))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut subsets: Vec<u64> = masks.iter().map(|m| m & full).collect();
    subsets.extend((0..n).map(|f| full & !(1 << f)));
    subsets.extend([0, full]);
    subsets.into_iter().find_map(|s| {
        let rest: Vec<(Q, Q)> = members(full & !s)
            .into_iter()
            .map(|f| point_of[f].clone())
            .collect();
        (oracle.is_face(s) != origin_in_hull(&rest)).then(|| members(s))
    })
}

/// Every connected diagram on at most four nodes with labels in `2..=8` or
/// bold, as (label rows, diagram); 0 in a row encodes a bold edge.
pub fn small_connected_diagrams() -> Vec<(Vec<Vec<u32>>, hypercox_core::diagram::CoxeterDiagram)> {
    use hypercox_core::diagram::{CoxeterDiagram, EdgeKind};
    let choices = [2u32, 3, 4, 5, 6, 7, 8, 0];
    let mut out = Vec::new();
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for code in 0..choices.len().pow(pairs.len() as u32) {
            let mut labels = vec![vec![2u32; n]; n];
            let mut c = code;
            let mut d = CoxeterDiagram::new(n);
            for &(i, j) in &pairs {
                let l = choices[c % choices.len()];
                c /= choices.len();
                labels[i][j] = l;
                labels[j][i] = l;
                d.set_edge(
                    i,
                    j,
                    if l == 0 {
                        EdgeKind::Bold
                    } else {
                        EdgeKind::Angle(l)
                    },
                )
                .unwrap();
            }
            if d.is_connected() {
                out.push((labels, d));
            }
        }
    }
    out
}
