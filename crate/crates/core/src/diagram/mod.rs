//! Coxeter diagrams: one node per facet, edges encode dihedral angles π/m,
//! parallel facets (bold edges) and divergent facets (dotted edges weighted by
//! the hyperbolic cosine of their distance).

pub mod canon;
pub mod classify;
pub mod dynkin;
pub mod generate;
pub mod gram;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Coeffs, Interval, Tower};

pub use canon::{canonical_key, canonical_key_labels, CanonicalKey};
pub use classify::{classify, DiagramClass};
pub use dynkin::{ComponentKind, DynkinType};
pub use generate::{generate_class, ClassCatalogue, TargetClass};
pub use gram::{gram_matrix, signature, GramEntry, GramMatrix};

/// Exact weight of a dotted edge, `cosh ρ > 1`, as an element of a quadratic tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DottedWeight {
    pub tower: Tower,
    pub value: Coeffs,
}

impl DottedWeight {
    pub fn rational(value: num_rational::BigRational) -> Self {
        let tower = Tower::new();
        let value = tower.rational(value);
        DottedWeight { tower, value }
    }

    pub fn enclosure(&self) -> Interval {
        self.tower.enclose(&self.value)
    }

    pub fn approx(&self) -> f64 {
        self.tower.to_f64(&self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Dihedral angle π/m. `Angle(2)` is a right angle and is never stored.
    Angle(u32),
    /// Parallel facets.
    Bold,
    /// Divergent facets; `None` while the weight is still to be solved for.
    Dotted(Option<DottedWeight>),
}

impl EdgeKind {
    pub fn is_angle(&self) -> bool {
        matches!(self, EdgeKind::Angle(_))
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Angle(m) => write!(f, "{m}"),
            EdgeKind::Bold => write!(f, "inf"),
            EdgeKind::Dotted(None) => write!(f, "dotted"),
            EdgeKind::Dotted(Some(w)) => write!(f, "dotted {}", w.approx()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("node index {index} out of range for {nodes} nodes")]
    OutOfRange { index: usize, nodes: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("edge label {0} is not an integer ≥ 2")]
    BadAngle(u32),
    #[error("dotted weight must exceed 1")]
    BadWeight,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoxeterDiagram {
    node_count: usize,
    edges: BTreeMap<(usize, usize), EdgeKind>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl CoxeterDiagram {
    pub fn new(node_count: usize) -> Self {
        CoxeterDiagram {
            node_count,
            edges: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Set the edge between `i` and `j`; `Angle(2)` clears it.
    pub fn set_edge(&mut self, i: usize, j: usize, kind: EdgeKind) -> Result<(), DiagramError> {
        for x in [i, j] {
            if x >= self.node_count {
                return Err(DiagramError::OutOfRange {
                    index: x,
                    nodes: self.node_count,
                });
            }
        }
        if i == j {
            return Err(DiagramError::SelfLoop(i));
        }
        match &kind {
            EdgeKind::Angle(m) if *m < 2 => return Err(DiagramError::BadAngle(*m)),
            EdgeKind::Angle(2) => {
                self.edges.remove(&key(i, j));
                return Ok(());
            }
            EdgeKind::Dotted(Some(w)) => {
                if !w.enclosure().is_positive()
                    || w.tower
                        .sign(&w.tower.sub(&w.value, &w.tower.int(1)))
                        .is_le()
                {
                    return Err(DiagramError::BadWeight);
                }
            }
            _ => {}
        }
        self.edges.insert(key(i, j), kind);
        Ok(())
    }

    /// Builder-style variant of [`set_edge`](Self::set_edge) for known-good input.
    pub fn with(mut self, i: usize, j: usize, kind: EdgeKind) -> Self {
        self.set_edge(i, j, kind).expect("valid edge");
        self
    }

    pub fn edge(&self, i: usize, j: usize) -> EdgeKind {
        self.edges
            .get(&key(i, j))
            .cloned()
            .unwrap_or(EdgeKind::Angle(2))
    }

    pub fn edge_ref(&self, i: usize, j: usize) -> Option<&EdgeKind> {
        self.edges.get(&key(i, j))
    }

    /// Non-right-angle edges, `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &EdgeKind)> {
        self.edges.iter().map(|(&(i, j), k)| (i, j, k))
    }

    pub fn has_unknown_weights(&self) -> bool {
        self.edges
            .values()
            .any(|k| matches!(k, EdgeKind::Dotted(None)))
    }

    /// Induced subdiagram; node `t` of the result is `nodes[t]` of `self`.
    pub fn subdiagram(&self, nodes: &[usize]) -> CoxeterDiagram {
        let mut d = CoxeterDiagram::new(nodes.len());
        for (a, &i) in nodes.iter().enumerate() {
            for (b, &j) in nodes.iter().enumerate().skip(a + 1) {
                if let Some(k) = self.edge_ref(i, j) {
                    d.edges.insert((a, b), k.clone());
                }
            }
        }
        d
    }

    /// Relabel nodes: node `i` of `self` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterDiagram {
        let mut d = CoxeterDiagram::new(self.node_count);
        for (&(i, j), k) in &self.edges {
            d.edges.insert(key(perm[i], perm[j]), k.clone());
        }
        d
    }

    /// Connected components (any non-right edge connects), each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count;
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in self.edges.keys() {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                for &v in &adj[comp[k]] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count > 0 && self.components().len() == 1
    }

    pub fn labels(&self) -> LabelMatrix {
        let mut m = LabelMatrix::new(self.node_count);
        for (&(i, j), k) in &self.edges {
            let c = match k {
                EdgeKind::Angle(a) => (*a).min(u32::from(MAX_ANGLE_CODE)) as Code,
                EdgeKind::Bold => BOLD,
                EdgeKind::Dotted(_) => DOTTED,
            };
            m.set(i, j, c);
        }
        m
    }

    /// Diagram from a fully assigned label matrix (dotted weights left unknown).
    pub fn from_labels(m: &LabelMatrix) -> Self {
        let mut d = CoxeterDiagram::new(m.n);
        for i in 0..m.n {
            for j in i + 1..m.n {
                let kind = match m.get(i, j) {
                    RIGHT | UNSET => continue,
                    BOLD => EdgeKind::Bold,
                    DOTTED => EdgeKind::Dotted(None),
                    a => EdgeKind::Angle(u32::from(a)),
                };
                d.edges.insert((i, j), kind);
            }
        }
        d
    }
}

/// Compact edge code used by the combinatorial routines.
pub type Code = u16;
pub const UNSET: Code = 0;
pub const RIGHT: Code = 2;
pub const BOLD: Code = Code::MAX;
pub const DOTTED: Code = Code::MAX - 1;
pub const MAX_ANGLE_CODE: Code = Code::MAX - 2;

/// Dense symmetric matrix of edge codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelMatrix {
    pub n: usize,
    codes: Vec<Code>,
}

impl LabelMatrix {
    pub fn new(n: usize) -> Self {
        let mut codes = vec![RIGHT; n * n];
        for i in 0..n {
            codes[i * n + i] = UNSET;
        }
        LabelMatrix { n, codes }
    }

    pub fn unset(n: usize) -> Self {
        LabelMatrix {
            n,
            codes: vec![UNSET; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Code {
        self.codes[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, c: Code) {
        self.codes[i * self.n + j] = c;
        self.codes[j * self.n + i] = c;
    }

    /// Is there a (non-right-angle) edge between `i` and `j`?
    #[inline]
    pub fn joined(&self, i: usize, j: usize) -> bool {
        let c = self.get(i, j);
        c != RIGHT && c != UNSET
    }
}
