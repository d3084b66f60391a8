//! Definitional generation of Lannér and quasi-Lannér diagrams.
//!
//! Every connected diagram has a non-cut node, so each target on `N` nodes is
//! a connected elliptic-or-parabolic diagram on `N - 1` nodes plus one node.
//! Growth therefore only needs the connected elliptic / connected parabolic
//! diagrams of each size, whose classes come from certified signatures
//! (memoised by canonical key).
//!
//! On three nodes the targets form infinite families in the edge labels, so
//! they are listed up to a label cap and the catalogue is flagged truncated.
//! On four or more nodes every edge lies in a connected three-node proper
//! subdiagram, which bounds its label; the bound is observed, not assumed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::canon::{canonical_key_labels, CanonicalKey};
use super::classify::{classify, DiagramClass};
use super::gram::{gram_matrix, signature};
use super::{Code, CoxeterDiagram, LabelMatrix, BOLD, RIGHT};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetClass {
    Lanner,
    QuasiLanner,
}

/// Label cap used for the three-node families unless overridden.
pub const DEFAULT_CAP: u32 = 12;

#[derive(Clone, Debug)]
pub struct ClassCatalogue {
    /// Canonical representatives, sorted by canonical key.
    pub diagrams: Vec<CoxeterDiagram>,
    pub keys: Vec<CanonicalKey>,
    pub cap: u32,
    /// True when infinite families were cut off at `cap`.
    pub truncated: bool,
    /// Largest angle label seen on a connected elliptic or parabolic
    /// diagram with at least three nodes.
    pub observed_bound: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct GenerateOptions {
    pub cap: u32,
    /// Permutes the internal generation order; the result does not depend on it.
    pub seed: u64,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            cap: DEFAULT_CAP,
            seed: 0,
        }
    }
}

pub fn generate_class(target: TargetClass, max_nodes: usize) -> Result<ClassCatalogue> {
    generate_class_with(target, max_nodes, GenerateOptions::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Elliptic,
    Parabolic,
    Neither,
}

struct Memo {
    kinds: BTreeMap<CanonicalKey, Kind>,
}

impl Memo {
    /// Certified class of the connected diagram on `nodes`.
    fn connected_kind(&mut self, m: &LabelMatrix, nodes: &[usize]) -> Result<Kind> {
        let sub = restrict(m, nodes);
        let key = canonical_key_labels(&sub);
        if let Some(&k) = self.kinds.get(&key) {
            return Ok(k);
        }
        let s = signature(&gram_matrix(&CoxeterDiagram::from_labels(&sub)))?;
        let k = if s.negative > 0 {
            Kind::Neither
        } else if s.zero == 0 {
            Kind::Elliptic
        } else {
            Kind::Parabolic
        };
        self.kinds.insert(key, k);
        Ok(k)
    }

    /// Is the diagram on `nodes` elliptic, or (when allowed) connected parabolic?
    fn admissible(
        &mut self,
        m: &LabelMatrix,
        nodes: &[usize],
        allow_parabolic: bool,
    ) -> Result<bool> {
        let comps = components(m, nodes);
        if comps.len() == 1 {
            return Ok(match self.connected_kind(m, &comps[0])? {
                Kind::Elliptic => true,
                Kind::Parabolic => allow_parabolic,
                Kind::Neither => false,
            });
        }
        for c in &comps {
            if self.connected_kind(m, c)? != Kind::Elliptic {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn restrict(m: &LabelMatrix, nodes: &[usize]) -> LabelMatrix {
    let mut out = LabelMatrix::new(nodes.len());
    for (a, &i) in nodes.iter().enumerate() {
        for (b, &j) in nodes.iter().enumerate().skip(a + 1) {
            out.set(a, b, m.get(i, j));
        }
    }
    out
}

fn components(m: &LabelMatrix, nodes: &[usize]) -> Vec<Vec<usize>> {
    super::dynkin::components(m, nodes)
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = (self.next() % (i as u64 + 1)) as usize;
            v.swap(i, j);
        }
    }
}

pub fn generate_class_with(
    target: TargetClass,
    max_nodes: usize,
    opts: GenerateOptions,
) -> Result<ClassCatalogue> {
    if max_nodes < 2 {
        return Err(Error::Precondition("max_nodes must be at least 2".into()));
    }
    let cap = opts.cap.max(7);
    let allow_parabolic = target == TargetClass::QuasiLanner;
    let mut rng = Lcg(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut memo = Memo {
        kinds: BTreeMap::new(),
    };
    let mut found: BTreeMap<CanonicalKey, CoxeterDiagram> = BTreeMap::new();
    let mut truncated = false;
    let mut observed_bound = 0;

    // Three-node diagrams: connected ones, labels up to the cap.
    let mut triangle_labels: Vec<Code> = (2..=cap as Code).collect();
    triangle_labels.push(BOLD);
    rng.shuffle(&mut triangle_labels);
    let mut level: BTreeMap<CanonicalKey, LabelMatrix> = BTreeMap::new();
    if max_nodes >= 3 {
        for &a in &triangle_labels {
            for &b in &triangle_labels {
                for &c in &triangle_labels {
                    let mut m = LabelMatrix::new(3);
                    m.set(0, 1, a);
                    m.set(1, 2, b);
                    m.set(0, 2, c);
                    if components(&m, &[0, 1, 2]).len() != 1 {
                        continue;
                    }
                    let key = canonical_key_labels(&m);
                    if level.contains_key(&key) || found.contains_key(&key) {
                        continue;
                    }
                    match memo.connected_kind(&m, &[0, 1, 2])? {
                        k @ (Kind::Elliptic | Kind::Parabolic) => {
                            for l in [a, b, c] {
                                if l != BOLD {
                                    observed_bound = observed_bound.max(u32::from(l));
                                }
                            }
                            if [a, b, c].iter().any(|&l| l == BOLD || u32::from(l) == cap) {
                                return Err(Error::CapTooSmall(cap));
                            }
                            if k == Kind::Elliptic || allow_parabolic {
                                level.insert(key, m);
                            }
                        }
                        Kind::Neither => {
                            let d = CoxeterDiagram::from_labels(&m);
                            if is_target(&d, target)? {
                                if [a, b, c].iter().any(|&l| l == BOLD || u32::from(l) == cap) {
                                    truncated = true;
                                }
                                found.insert(key, d);
                            }
                        }
                    }
                }
            }
        }
    }

    // Grow connected elliptic/parabolic diagrams one node at a time.
    let mut labels: Vec<Code> = (2..=observed_bound.max(2) as Code).collect();
    rng.shuffle(&mut labels);
    for k in 3..max_nodes {
        let mut seeds: Vec<LabelMatrix> = level.values().cloned().collect();
        rng.shuffle(&mut seeds);
        let mut next: BTreeMap<CanonicalKey, LabelMatrix> = BTreeMap::new();
        for s in seeds {
            let s = bfs_ordered(&s);
            let mut m = LabelMatrix::new(k + 1);
            for i in 0..k {
                for j in i + 1..k {
                    m.set(i, j, s.get(i, j));
                }
            }
            extend(
                &mut m,
                k,
                0,
                &labels,
                allow_parabolic,
                &mut memo,
                &mut |m, memo| {
                    let all: Vec<usize> = (0..=k).collect();
                    if components(m, &all).len() != 1 {
                        return Ok(());
                    }
                    // every maximal proper subdiagram must be admissible
                    for u in 0..k {
                        let rest: Vec<usize> = all.iter().copied().filter(|&x| x != u).collect();
                        if !memo.admissible(m, &rest, allow_parabolic)? {
                            return Ok(());
                        }
                    }
                    let key = canonical_key_labels(m);
                    if next.contains_key(&key) || found.contains_key(&key) {
                        return Ok(());
                    }
                    match memo.connected_kind(m, &all)? {
                        Kind::Elliptic => {
                            next.insert(key, m.clone());
                        }
                        Kind::Parabolic => {
                            if allow_parabolic {
                                next.insert(key, m.clone());
                            }
                        }
                        Kind::Neither => {
                            let d = CoxeterDiagram::from_labels(m);
                            if is_target(&d, target)? {
                                found.insert(key, d);
                            }
                        }
                    }
                    Ok(())
                },
            )?;
        }
        level = next;
    }

    let keys: Vec<CanonicalKey> = found.keys().cloned().collect();
    let diagrams = found.into_values().collect();
    Ok(ClassCatalogue {
        diagrams,
        keys,
        cap,
        truncated,
        observed_bound,
    })
}

fn is_target(d: &CoxeterDiagram, target: TargetClass) -> Result<bool> {
    let c = classify(d)?;
    Ok(match target {
        TargetClass::Lanner => c == DiagramClass::Lanner,
        TargetClass::QuasiLanner => c == DiagramClass::QuasiLanner,
    })
}

/// Assign the row of the new node `v` against nodes `j..v`, pruning on proper prefixes.
fn extend(
    m: &mut LabelMatrix,
    v: usize,
    j: usize,
    labels: &[Code],
    allow_parabolic: bool,
    memo: &mut Memo,
    emit: &mut dyn FnMut(&LabelMatrix, &mut Memo) -> Result<()>,
) -> Result<()> {
    if j == v {
        return emit(m, memo);
    }
    for &c in labels {
        m.set(j, v, c);
        if j + 1 < v {
            let mut nodes: Vec<usize> = (0..=j).collect();
            nodes.push(v);
            if !memo.admissible(m, &nodes, allow_parabolic)? {
                continue;
            }
        }
        extend(m, v, j + 1, labels, allow_parabolic, memo, emit)?;
    }
    m.set(j, v, RIGHT);
    Ok(())
}

/// Relabel a connected diagram so that every prefix is connected.
fn bfs_ordered(m: &LabelMatrix) -> LabelMatrix {
    let n = m.n;
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        for u in 0..n {
            if !seen[u] && m.joined(order[i], u) {
                seen[u] = true;
                order.push(u);
            }
        }
        i += 1;
    }
    restrict(m, &order)
}

/// Keys of a catalogue as a set, for comparisons.
pub fn key_set(c: &ClassCatalogue) -> BTreeSet<CanonicalKey> {
    c.keys.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanner_two_nodes_is_empty() {
        let c = generate_class(TargetClass::Lanner, 2).unwrap();
        assert!(c.diagrams.is_empty());
        let c = generate_class(TargetClass::QuasiLanner, 2).unwrap();
        assert!(c.diagrams.is_empty());
    }

    #[test]
    fn lanner_small_counts() {
        let c = generate_class(TargetClass::Lanner, 5).unwrap();
        let four = c.diagrams.iter().filter(|d| d.node_count() == 4).count();
        let five = c.diagrams.iter().filter(|d| d.node_count() == 5).count();
        // the classical tables list 9 compact tetrahedra and 5 compact 4-simplices
        assert_eq!((four, five), (9, 5));
        assert!(c.truncated);
        assert_eq!(c.observed_bound, 6);
    }

    #[test]
    fn quasi_lanner_counts_by_size() {
        let c = generate_class(TargetClass::QuasiLanner, 12).unwrap();
        let mut counts = [0usize; 13];
        for d in &c.diagrams {
            counts[d.node_count()] += 1;
        }
        assert_eq!(&counts[4..], &[23, 9, 12, 3, 4, 4, 3, 0, 0]);
    }
}
