//! Combinatorial recognition of connected elliptic and affine Coxeter diagrams.
//!
//! Used as a fast path by the search and as display labels; the definitional
//! classification in [`classify`](super::classify) never depends on it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Code, LabelMatrix, BOLD, DOTTED, RIGHT, UNSET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(u32),
    B(u32),
    D(u32),
    E(u32),
    F4,
    H(u32),
    I2(u32),
    ATilde(u32),
    BTilde(u32),
    CTilde(u32),
    DTilde(u32),
    ETilde(u32),
    FTilde4,
    GTilde2,
}

impl DynkinType {
    pub fn is_affine(&self) -> bool {
        use DynkinType::*;
        matches!(
            self,
            ATilde(_) | BTilde(_) | CTilde(_) | DTilde(_) | ETilde(_) | FTilde4 | GTilde2
        )
    }

    pub fn nodes(&self) -> u32 {
        use DynkinType::*;
        match *self {
            A(n) | B(n) | D(n) | E(n) | H(n) => n,
            F4 => 4,
            I2(_) => 2,
            ATilde(n) | BTilde(n) | CTilde(n) | DTilde(n) | ETilde(n) => n + 1,
            FTilde4 => 5,
            GTilde2 => 3,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DynkinType::*;
        match self {
            A(n) => write!(f, "A{n}"),
            B(n) => write!(f, "B{n}"),
            D(n) => write!(f, "D{n}"),
            E(n) => write!(f, "E{n}"),
            F4 => write!(f, "F4"),
            H(n) => write!(f, "H{n}"),
            I2(6) => write!(f, "G2"),
            I2(m) => write!(f, "I2({m})"),
            ATilde(n) => write!(f, "~A{n}"),
            BTilde(n) => write!(f, "~B{n}"),
            CTilde(n) => write!(f, "~C{n}"),
            DTilde(n) => write!(f, "~D{n}"),
            ETilde(n) => write!(f, "~E{n}"),
            FTilde4 => write!(f, "~F4"),
            GTilde2 => write!(f, "~G2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Elliptic(DynkinType),
    Affine(DynkinType),
    Neither,
}

/// Recognize the connected diagram on `nodes` (all pairs assigned).
///
/// The caller guarantees connectivity; the result is unspecified otherwise.
pub fn recognize(m: &LabelMatrix, nodes: &[usize]) -> ComponentKind {
    use ComponentKind::*;
    use DynkinType::*;
    let n = nodes.len();
    if n == 0 {
        return Neither;
    }
    if n == 1 {
        return Elliptic(A(1));
    }
    let mut edges: Vec<(usize, usize, Code)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = m.get(nodes[a], nodes[b]);
            match c {
                RIGHT => {}
                UNSET | DOTTED => return Neither,
                _ => edges.push((a, b, c)),
            }
        }
    }
    if edges.iter().any(|e| e.2 == BOLD) {
        return if n == 2 { Affine(ATilde(1)) } else { Neither };
    }
    if n == 2 {
        let c = u32::from(edges[0].2);
        return Elliptic(match c {
            3 => A(2),
            4 => B(2),
            _ => I2(c),
        });
    }
    let e = edges.len();
    if e > n {
        return Neither;
    }
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<(usize, Code)>> = vec![Vec::new(); n];
    for &(a, b, c) in &edges {
        deg[a] += 1;
        deg[b] += 1;
        adj[a].push((b, c));
        adj[b].push((a, c));
    }
    if e == n {
        return if deg.iter().all(|&d| d == 2) && edges.iter().all(|e| e.2 == 3) {
            Affine(ATilde(n as u32 - 1))
        } else {
            Neither
        };
    }
    // From here on the diagram is a tree.
    if edges.iter().any(|e| e.2 > 6) {
        return Neither;
    }
    let count = |l: Code| edges.iter().filter(|e| e.2 == l).count();
    let (c4, c5, c6) = (count(4), count(5), count(6));
    let maxdeg = *deg.iter().max().unwrap_or(&0);
    let nn = n as u32;

    if maxdeg <= 2 {
        let seq = path_labels(&adj, &deg);
        let last = seq.len() - 1;
        if c6 > 0 {
            return if n == 3 && c6 == 1 && c4 == 0 && c5 == 0 {
                Affine(GTilde2)
            } else {
                Neither
            };
        }
        if c5 > 0 {
            if c5 == 1 && c4 == 0 && (seq[0] == 5 || seq[last] == 5) && n <= 4 {
                return Elliptic(H(nn));
            }
            return Neither;
        }
        return match c4 {
            0 => Elliptic(A(nn)),
            1 => {
                if seq[0] == 4 || seq[last] == 4 {
                    Elliptic(B(nn))
                } else if seq == [3, 4, 3] {
                    Elliptic(F4)
                } else if seq == [3, 3, 4, 3] || seq == [3, 4, 3, 3] {
                    Affine(FTilde4)
                } else {
                    Neither
                }
            }
            2 if seq[0] == 4 && seq[last] == 4 => Affine(CTilde(nn - 1)),
            _ => Neither,
        };
    }
    if c5 > 0 || c6 > 0 {
        return Neither;
    }
    if maxdeg == 4 {
        return if n == 5 && c4 == 0 {
            Affine(DTilde(4))
        } else {
            Neither
        };
    }
    if maxdeg > 4 {
        return Neither;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] == 3).collect();
    if branch.len() == 1 {
        let b = branch[0];
        // (length, label of the leaf edge) for each leg
        let mut legs: Vec<(usize, Code, usize)> = adj[b]
            .iter()
            .map(|&(start, c0)| {
                let (len, last, fours) = walk_leg(&adj, b, start, c0);
                (len, last, fours)
            })
            .collect();
        legs.sort_unstable();
        let lens = [legs[0].0, legs[1].0, legs[2].0];
        if c4 == 0 {
            return match lens {
                [1, 1, c] => Elliptic(D(c as u32 + 3)),
                [1, 2, 2] => Elliptic(E(6)),
                [1, 2, 3] => Elliptic(E(7)),
                [1, 2, 4] => Elliptic(E(8)),
                [2, 2, 2] => Affine(ETilde(6)),
                [1, 3, 3] => Affine(ETilde(7)),
                [1, 2, 5] => Affine(ETilde(8)),
                _ => Neither,
            };
        }
        if c4 == 1 {
            // the 4 must sit on the leaf edge of one leg, the other two legs are single nodes
            let ok = legs.iter().any(|l| l.2 == 1 && l.1 == 4)
                && legs.iter().filter(|l| l.0 == 1 && l.2 == 0).count() >= 2;
            return if ok { Affine(BTilde(nn - 1)) } else { Neither };
        }
        return Neither;
    }
    if branch.len() == 2 && c4 == 0 {
        let leafy = |v: usize| adj[v].iter().filter(|&&(u, _)| deg[u] == 1).count() == 2;
        if leafy(branch[0]) && leafy(branch[1]) {
            return Affine(DTilde(nn - 1));
        }
    }
    Neither
}

/// Labels along a path, read from one endpoint.
fn path_labels(adj: &[Vec<(usize, Code)>], deg: &[usize]) -> Vec<Code> {
    let start = (0..deg.len()).find(|&v| deg[v] == 1).unwrap_or(0);
    let mut seq = Vec::with_capacity(deg.len());
    let (mut prev, mut cur) = (usize::MAX, start);
    loop {
        let next = adj[cur].iter().find(|&&(u, _)| u != prev);
        match next {
            Some(&(u, c)) => {
                seq.push(c);
                prev = cur;
                cur = u;
            }
            None => break,
        }
    }
    seq
}

/// Walk a leg from the branch node; returns (length, leaf-edge label, number of 4-labels).
fn walk_leg(
    adj: &[Vec<(usize, Code)>],
    branch: usize,
    start: usize,
    first: Code,
) -> (usize, Code, usize) {
    let (mut prev, mut cur) = (branch, start);
    let mut len = 1;
    let mut last = first;
    let mut fours = usize::from(first == 4);
    while let Some(&(u, c)) = adj[cur].iter().find(|&&(u, _)| u != prev) {
        prev = cur;
        cur = u;
        len += 1;
        last = c;
        fours += usize::from(c == 4);
    }
    (len, last, fours)
}

/// Connected components of the subdiagram induced by `mask`.
pub fn components(m: &LabelMatrix, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; nodes.len()];
    let mut out = Vec::new();
    for s in 0..nodes.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for b in 0..nodes.len() {
                if !seen[b] && m.joined(nodes[a], nodes[b]) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        out.push(comp.into_iter().map(|i| nodes[i]).collect());
    }
    out
}

/// Coarse shape of an arbitrary (possibly disconnected) subdiagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Elliptic(Vec<DynkinType>),
    /// Every component affine.
    Parabolic(Vec<DynkinType>),
    /// Some components elliptic, some affine.
    Mixed,
    /// Some component neither elliptic nor affine.
    Other,
}

pub fn shape(m: &LabelMatrix, nodes: &[usize]) -> Shape {
    let mut ell = Vec::new();
    let mut aff = Vec::new();
    for c in components(m, nodes) {
        match recognize(m, &c) {
            ComponentKind::Elliptic(t) => ell.push(t),
            ComponentKind::Affine(t) => aff.push(t),
            ComponentKind::Neither => return Shape::Other,
        }
    }
    ell.sort_unstable();
    aff.sort_unstable();
    match (ell.is_empty(), aff.is_empty()) {
        (_, true) => Shape::Elliptic(ell),
        (true, false) => Shape::Parabolic(aff),
        _ => Shape::Mixed,
    }
}

/// Is the subdiagram on `nodes` elliptic?
pub fn is_elliptic(m: &LabelMatrix, nodes: &[usize]) -> bool {
    components(m, nodes)
        .iter()
        .all(|c| matches!(recognize(m, c), ComponentKind::Elliptic(_)))
}

/// Is the subdiagram on `nodes` a single connected affine diagram?
pub fn is_connected_affine(m: &LabelMatrix, nodes: &[usize]) -> bool {
    matches!(recognize(m, nodes), ComponentKind::Affine(_)) && components(m, nodes).len() == 1
}

/// One labelled representative of every connected affine type on `nodes`
/// nodes, in a fixed order.
pub fn affine_representatives(nodes: usize) -> Vec<(DynkinType, LabelMatrix)> {
    use DynkinType::*;
    let s = nodes;
    let build = |edges: &[(usize, usize, Code)]| {
        let mut m = LabelMatrix::new(s);
        for &(a, b, c) in edges {
            m.set(a, b, c);
        }
        m
    };
    let path = |first: Code, last: Code| -> Vec<(usize, usize, Code)> {
        (0..s - 1)
            .map(|i| {
                (
                    i,
                    i + 1,
                    if i == 0 {
                        first
                    } else if i == s - 2 {
                        last
                    } else {
                        3
                    },
                )
            })
            .collect()
    };
    // a tree: centre 0 with arms of the given lengths
    let star = |arms: &[usize]| -> Vec<(usize, usize, Code)> {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next, 3));
                prev = next;
                next += 1;
            }
        }
        edges
    };
    let mut out = Vec::new();
    let r = (s as u32).saturating_sub(1);
    match s {
        0 | 1 => return out,
        2 => out.push((ATilde(1), build(&[(0, 1, BOLD)]))),
        _ => {
            let mut cycle = path(3, 3);
            cycle.push((s - 1, 0, 3));
            out.push((ATilde(r), build(&cycle)));
            out.push((CTilde(r), build(&path(4, 4))));
        }
    }
    if s == 3 {
        out.push((GTilde2, build(&path(3, 6))));
    }
    if s >= 4 {
        // fork 0,1 -> 2, then a path ending in a 4
        let mut e = vec![(0, 2, 3), (1, 2, 3)];
        e.extend((2..s - 1).map(|i| (i, i + 1, if i == s - 2 { 4 } else { 3 })));
        out.push((BTilde(r), build(&e)));
    }
    if s == 5 {
        out.push((DTilde(4), build(&star(&[1, 1, 1, 1]))));
        out.push((
            FTilde4,
            build(&[(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)]),
        ));
    }
    if s >= 6 {
        let mut e = vec![(0, 2, 3), (1, 2, 3), (s - 3, s - 2, 3), (s - 3, s - 1, 3)];
        e.extend((2..s - 3).map(|i| (i, i + 1, 3)));
        out.push((DTilde(r), build(&e)));
    }
    match s {
        7 => out.push((ETilde(6), build(&star(&[2, 2, 2])))),
        8 => out.push((ETilde(7), build(&star(&[3, 3, 1])))),
        9 => out.push((ETilde(8), build(&star(&[5, 2, 1])))),
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{CoxeterDiagram, EdgeKind};

    fn path(labels: &[u32]) -> LabelMatrix {
        let mut d = CoxeterDiagram::new(labels.len() + 1);
        for (i, &l) in labels.iter().enumerate() {
            d.set_edge(i, i + 1, EdgeKind::Angle(l)).unwrap();
        }
        d.labels()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn paths() {
        use ComponentKind::*;
        use DynkinType::*;
        assert_eq!(recognize(&path(&[3, 3, 3]), &all(4)), Elliptic(A(4)));
        assert_eq!(recognize(&path(&[4, 3, 3]), &all(4)), Elliptic(B(4)));
        assert_eq!(recognize(&path(&[3, 4, 3]), &all(4)), Elliptic(F4));
        assert_eq!(recognize(&path(&[5, 3, 3]), &all(4)), Elliptic(H(4)));
        assert_eq!(recognize(&path(&[5, 3, 3, 3]), &all(5)), Neither);
        assert_eq!(recognize(&path(&[4, 3, 3, 4]), &all(5)), Affine(CTilde(4)));
        assert_eq!(recognize(&path(&[3, 3, 4, 3]), &all(5)), Affine(FTilde4));
        assert_eq!(recognize(&path(&[3, 6]), &all(3)), Affine(GTilde2));
        assert_eq!(recognize(&path(&[4, 4]), &all(3)), Affine(CTilde(2)));
        assert_eq!(recognize(&path(&[3, 7]), &all(3)), Neither);
        assert_eq!(recognize(&path(&[9]), &all(2)), Elliptic(I2(9)));
    }

    #[test]
    fn branched() {
        use ComponentKind::*;
        use DynkinType::*;
        // star with centre 0
        let mut d = CoxeterDiagram::new(5);
        for v in 1..5 {
            d.set_edge(0, v, EdgeKind::Angle(3)).unwrap();
        }
        assert_eq!(recognize(&d.labels(), &all(5)), Affine(DTilde(4)));
        assert_eq!(recognize(&d.labels(), &all(4)), Elliptic(D(4)));
        // B~3: fork at 1 with leaves 0, 2; leg 1-3 labelled 4
        let d = CoxeterDiagram::new(4)
            .with(0, 1, EdgeKind::Angle(3))
            .with(1, 2, EdgeKind::Angle(3))
            .with(1, 3, EdgeKind::Angle(4));
        assert_eq!(recognize(&d.labels(), &all(4)), Affine(BTilde(3)));
        // E~6
        let mut d = CoxeterDiagram::new(7);
        for (a, b) in [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)] {
            d.set_edge(a, b, EdgeKind::Angle(3)).unwrap();
        }
        assert_eq!(recognize(&d.labels(), &all(7)), Affine(ETilde(6)));
        // A~3 cycle, and the bold pair
        let d = CoxeterDiagram::new(4)
            .with(0, 1, EdgeKind::Angle(3))
            .with(1, 2, EdgeKind::Angle(3))
            .with(2, 3, EdgeKind::Angle(3))
            .with(3, 0, EdgeKind::Angle(3));
        assert_eq!(recognize(&d.labels(), &all(4)), Affine(ATilde(3)));
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Bold);
        assert_eq!(recognize(&d.labels(), &all(2)), Affine(ATilde(1)));
    }

    #[test]
    fn affine_representatives_cover_each_type_once() {
        // counts of connected affine types on s nodes
        let expected = [0, 0, 1, 3, 3, 5, 4, 5, 5, 5, 4, 4];
        for (s, &count) in expected.iter().enumerate() {
            let reps = affine_representatives(s);
            assert_eq!(reps.len(), count, "s = {s}");
            for (t, m) in &reps {
                assert_eq!(recognize(m, &all(s)), ComponentKind::Affine(*t));
                assert_eq!(t.nodes() as usize, s);
            }
        }
    }
}
