//! Canonical labelling of edge-labelled diagrams by colour refinement and
//! individualisation. Dotted edges compare by kind only.

use alloc::vec;
use alloc::vec::Vec;

use super::{Code, CoxeterDiagram, LabelMatrix, RIGHT};

/// Opaque key; equal iff the diagrams are isomorphic as edge-labelled graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<Code>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[Code] {
        &self.0
    }
}

pub fn canonical_key(d: &CoxeterDiagram) -> CanonicalKey {
    canonical_key_labels(&d.labels())
}

pub fn canonical_key_labels(m: &LabelMatrix) -> CanonicalKey {
    canonical_form(m).0
}

/// Canonical key together with an ordering: `order[t]` is the node placed at position `t`.
pub fn canonical_form(m: &LabelMatrix) -> (CanonicalKey, Vec<usize>) {
    let n = m.n;
    let nbrs: Vec<Vec<(usize, Code)>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && m.get(i, j) != RIGHT)
                .map(|j| (j, m.get(i, j)))
                .collect()
        })
        .collect();
    let colours = refine(&nbrs, vec![0; n]);
    let mut best: Option<(Vec<Code>, Vec<usize>)> = None;
    search(m, &nbrs, colours, &mut best);
    let (code, order) = best.unwrap_or_default();
    let mut key = Vec::with_capacity(code.len() + 1);
    key.push(n as Code);
    key.extend(code);
    (CanonicalKey(key), order)
}

/// Refine colours to the coarsest equitable partition finer than `colours`.
/// Colour values are ranks of canonical signatures, so the result is isomorphism-invariant.
fn refine(nbrs: &[Vec<(usize, Code)>], mut colours: Vec<u32>) -> Vec<u32> {
    let n = nbrs.len();
    let mut classes = count_classes(&colours);
    loop {
        let mut sigs: Vec<(u32, Vec<(Code, u32)>, usize)> = (0..n)
            .map(|v| {
                let mut s: Vec<(Code, u32)> =
                    nbrs[v].iter().map(|&(u, c)| (c, colours[u])).collect();
                s.sort_unstable();
                (colours[v], s, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; n];
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                rank = i as u32;
            }
            next[sigs[i].2] = rank;
        }
        let c = count_classes(&next);
        colours = next;
        if c == classes {
            return colours;
        }
        classes = c;
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(
    m: &LabelMatrix,
    nbrs: &[Vec<(usize, Code)>],
    colours: Vec<u32>,
    best: &mut Option<(Vec<Code>, Vec<usize>)>,
) {
    let n = colours.len();
    // smallest non-singleton cell, ties broken by colour value
    let mut cell: Option<(usize, u32)> = None;
    for &c in &colours {
        let size = colours.iter().filter(|&&x| x == c).count();
        if size > 1 && cell.map_or(true, |(s, cc)| (size, c) < (s, cc)) {
            cell = Some((size, c));
        }
    }
    let Some((_, target)) = cell else {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&v| colours[v]);
        let mut code = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                code.push(m.get(order[a], order[b]));
            }
        }
        if best.as_ref().map_or(true, |(bc, _)| code < *bc) {
            *best = Some((code, order));
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colours[v] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        // twins (same row up to the swapped pair) give isomorphic branches
        if tried.iter().any(|&u| twins(m, u, v)) {
            continue;
        }
        tried.push(v);
        let mut c = colours.clone();
        // individualise v: it keeps the cell's colour, the rest move just above
        for x in &mut c {
            if *x > target {
                *x += 1;
            }
        }
        for &u in &members {
            if u != v {
                c[u] = target + 1;
            }
        }
        let c = refine(nbrs, c);
        search(m, nbrs, c, best);
    }
}

fn twins(m: &LabelMatrix, u: usize, v: usize) -> bool {
    (0..m.n).all(|w| w == u || w == v || m.get(u, w) == m.get(v, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::EdgeKind;

    #[test]
    fn relabelled_paths_agree() {
        let a =
            CoxeterDiagram::new(3)
                .with(0, 1, EdgeKind::Angle(3))
                .with(1, 2, EdgeKind::Angle(4));
        let b =
            CoxeterDiagram::new(3)
                .with(2, 1, EdgeKind::Angle(3))
                .with(1, 0, EdgeKind::Angle(4));
        assert_eq!(canonical_key(&a), canonical_key(&b));
        let c =
            CoxeterDiagram::new(3)
                .with(0, 1, EdgeKind::Angle(3))
                .with(1, 2, EdgeKind::Angle(5));
        assert_ne!(canonical_key(&a), canonical_key(&c));
    }

    #[test]
    fn cycles_and_isolated_nodes() {
        let mut d = CoxeterDiagram::new(12);
        for i in 0..6 {
            d.set_edge(i, (i + 1) % 6, EdgeKind::Angle(3)).unwrap();
        }
        let perm = [5, 3, 11, 0, 7, 1, 2, 10, 4, 9, 8, 6];
        assert_eq!(canonical_key(&d), canonical_key(&d.permuted(&perm)));
    }
}
