//! Arc constraints on Coxeter diagrams read off a Gale diagram, and
//! Gale-level prefilters for the search.
//!
//! Arcs are given as 1-based inclusive position ranges `(m, l)` taken
//! cyclically, matching `S_{m,l}`; zero-labelled positions contribute no facets.

use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{classify, CoxeterDiagram, DiagramClass};
use crate::error::Result;
use crate::gale::{FacetAssignment, GaleDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Opposite non-zero labels must both equal 1.
    OppositeLabels,
    /// The two arcs strictly between opposite non-zero positions are connected parabolic.
    CuspArcs,
    /// Arc `S_{i+1,k+i}` is quasi-Lannér when `a_{i+1}`, `a_{k+i+1}` are non-zero.
    QuasiLannerAdjacent,
    /// Arc `S_{i+2,k+i}` is quasi-Lannér when `a_{i+1}` is zero.
    QuasiLannerZero,
    /// Arc `S_{i+1,k+i-2}` is Lannér when `a_i`, `a_{k+i-1}` are zero.
    Lanner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    LabelsOne,
    ConnectedParabolic,
    QuasiLanner,
    Lanner,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    /// 1-based cyclic arc (or the offending position pair for label rules).
    pub arc: (usize, usize),
    pub expected: Expected,
    pub observed: Option<DiagramClass>,
    /// True when found in the reflected orientation of the Gale diagram.
    pub mirrored: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub violations: Vec<Violation>,
    /// Number of individual constraints evaluated (zero means vacuous).
    pub evaluated: usize,
}

impl ConstraintReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ConstraintReport) {
        self.violations.extend(other.violations);
        self.evaluated += other.evaluated;
    }
}

/// Positions `start, start+1, ..., start+len-1` (0-based, cyclic) in one orientation.
#[derive(Clone, Copy)]
struct Orientation {
    k: usize,
    mirror: bool,
}

impl Orientation {
    fn pos(&self, p: isize) -> usize {
        let m = 2 * self.k as isize;
        let q = if self.mirror { -p } else { p };
        q.rem_euclid(m) as usize
    }

    fn label(&self, g: &GaleDiagram, p: isize) -> u32 {
        g.labels[self.pos(p)]
    }

    /// Facets of the arc of `len` positions starting at oriented position `start`.
    fn arc(&self, asg: &FacetAssignment, start: isize, len: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..len as isize)
            .flat_map(|t| asg.polygon[self.pos(start + t)].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// 1-based original endpoints of an oriented arc.
    fn endpoints(&self, start: isize, len: usize) -> (usize, usize) {
        let a = self.pos(start);
        let b = self.pos(start + len as isize - 1);
        if self.mirror {
            (b + 1, a + 1)
        } else {
            (a + 1, b + 1)
        }
    }
}

/// One arc the lemmas force into a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcRequirement {
    pub rule: Rule,
    /// 1-based cyclic endpoints in the original orientation.
    pub arc: (usize, usize),
    pub facets: Vec<usize>,
    pub expected: Expected,
    pub mirrored: bool,
}

impl ArcRequirement {
    pub fn accepts(&self, c: DiagramClass) -> bool {
        match self.expected {
            Expected::ConnectedParabolic => c == DiagramClass::Parabolic { connected: true },
            Expected::QuasiLanner => c == DiagramClass::QuasiLanner,
            Expected::Lanner => c == DiagramClass::Lanner,
            Expected::LabelsOne => true,
        }
    }
}

/// Opposite non-zero positions whose labels are not both 1 (1-based).
pub fn opposite_label_violations(g: &GaleDiagram) -> Vec<(usize, usize)> {
    let k = g.k;
    (0..2 * k)
        .filter(|&i| {
            let (a, b) = (g.labels[i], g.labels[(i + k) % (2 * k)]);
            a != 0 && b != 0 && (a != 1 || b != 1)
        })
        .map(|i| (i + 1, (i + k) % (2 * k) + 1))
        .collect()
}

/// Number of opposite non-zero position pairs (ordered), each a label constraint.
fn opposite_pairs(g: &GaleDiagram) -> usize {
    let k = g.k;
    (0..2 * k)
        .filter(|&i| g.labels[i] != 0 && g.labels[(i + k) % (2 * k)] != 0)
        .count()
}

/// Arcs forced to be connected parabolic or quasi-Lannér, in both orientations.
pub fn kv_requirements(g: &GaleDiagram, asg: &FacetAssignment) -> Vec<ArcRequirement> {
    let mut out = Vec::new();
    let k = g.k as isize;
    let ku = g.k;
    for mirror in [false, true] {
        let o = Orientation { k: ku, mirror };
        for i in 0..2 * k {
            if o.label(g, i) == 0 || o.label(g, k + i) == 0 {
                continue;
            }
            // statement 1 is symmetric under reflection; record it once
            if !mirror {
                for start in [i + 1, k + i + 1] {
                    out.push(ArcRequirement {
                        rule: Rule::CuspArcs,
                        arc: o.endpoints(start, ku - 1),
                        facets: o.arc(asg, start, ku - 1),
                        expected: Expected::ConnectedParabolic,
                        mirrored: false,
                    });
                }
            }
            let (rule, start, len) = if o.label(g, i + 1) != 0 && o.label(g, k + i + 1) != 0 {
                (Rule::QuasiLannerAdjacent, i + 1, ku)
            } else if o.label(g, i + 1) == 0 {
                (Rule::QuasiLannerZero, i + 2, ku - 1)
            } else {
                continue;
            };
            out.push(ArcRequirement {
                rule,
                arc: o.endpoints(start, len),
                facets: o.arc(asg, start, len),
                expected: Expected::QuasiLanner,
                mirrored: o.mirror,
            });
        }
    }
    out
}

/// Arcs forced to be Lannér. The rule is reflection-symmetric.
pub fn l_requirements(g: &GaleDiagram, asg: &FacetAssignment) -> Vec<ArcRequirement> {
    let o = Orientation {
        k: g.k,
        mirror: false,
    };
    let k = g.k as isize;
    let len = g.k.saturating_sub(2);
    (0..2 * k)
        .filter(|&i| g.k >= 2 && o.label(g, i) == 0 && o.label(g, k + i - 1) == 0)
        .map(|i| ArcRequirement {
            rule: Rule::Lanner,
            arc: if len == 0 {
                (o.pos(i + 1) + 1, o.pos(i) + 1)
            } else {
                o.endpoints(i + 1, len)
            },
            facets: if len == 0 {
                Vec::new()
            } else {
                o.arc(asg, i + 1, len)
            },
            expected: Expected::Lanner,
            mirrored: false,
        })
        .collect()
}

fn evaluate(reqs: Vec<ArcRequirement>, d: &CoxeterDiagram, r: &mut ConstraintReport) -> Result<()> {
    for q in reqs {
        r.evaluated += 1;
        let c = if q.facets.is_empty() {
            DiagramClass::Other
        } else {
            classify(&d.subdiagram(&q.facets))?
        };
        if !q.accepts(c) {
            r.violations.push(Violation {
                rule: q.rule,
                arc: q.arc,
                expected: q.expected,
                observed: Some(c),
                mirrored: q.mirrored,
            });
        }
    }
    Ok(())
}

pub fn check_lemma_kv(
    g: &GaleDiagram,
    asg: &FacetAssignment,
    d: &CoxeterDiagram,
) -> Result<ConstraintReport> {
    let mut r = ConstraintReport {
        violations: Vec::new(),
        evaluated: opposite_pairs(g),
    };
    for arc in opposite_label_violations(g) {
        r.violations.push(Violation {
            rule: Rule::OppositeLabels,
            arc,
            expected: Expected::LabelsOne,
            observed: None,
            mirrored: false,
        });
    }
    evaluate(kv_requirements(g, asg), d, &mut r)?;
    Ok(r)
}

pub fn check_lemma_l(
    g: &GaleDiagram,
    asg: &FacetAssignment,
    d: &CoxeterDiagram,
) -> Result<ConstraintReport> {
    let mut r = ConstraintReport::default();
    evaluate(l_requirements(g, asg), d, &mut r)?;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reject {
    /// Two zero labels two steps apart, but label sum above 20.
    Lemma3,
    /// `n ≥ 16` and `k > 13`.
    KBound,
    /// `n ≥ 16` and two disjoint zero pairs `(i, k+i-1)` force two Lannér arcs.
    TwoLannerArcs,
    /// An arc forced to be Lannér, quasi-Lannér or connected parabolic has an impossible size.
    ArcSize(Rule),
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reject::Lemma3 => write!(f, "labels two apart are zero but the label sum exceeds 20"),
            Reject::KBound => write!(f, "n >= 16 requires k <= 13"),
            Reject::TwoLannerArcs => write!(f, "n >= 16 excludes two forced Lanner arcs"),
            Reject::ArcSize(r) => write!(f, "arc of impossible size for {r:?}"),
        }
    }
}

/// Lemma 3 alone: some `μ_i = μ_{i+2} = 0` while the label sum exceeds 20.
pub fn lemma3_rejects(g: &GaleDiagram) -> bool {
    let m = g.positions();
    g.label_sum() > 20 && (0..m).any(|i| g.labels[i] == 0 && g.labels[(i + 2) % m] == 0)
}

pub fn gale_prefilter(g: &GaleDiagram) -> core::result::Result<(), Reject> {
    if lemma3_rejects(g) {
        return Err(Reject::Lemma3);
    }
    let n = g.dimension();
    if n >= 16 && g.k > 13 {
        return Err(Reject::KBound);
    }
    if n >= 16 {
        let m = g.positions();
        let pairs: Vec<(usize, usize)> = (0..m)
            .map(|i| (i, (i + g.k + m - 1) % m))
            .filter(|&(a, b)| g.labels[a] == 0 && g.labels[b] == 0)
            .collect();
        for (x, p) in pairs.iter().enumerate() {
            for q in &pairs[x + 1..] {
                if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                    return Err(Reject::TwoLannerArcs);
                }
            }
        }
    }
    Ok(())
}

/// Size bounds implied by the arc lemmas: Lannér arcs have 2..=5 facets,
/// quasi-Lannér arcs 3..=10, connected parabolic arcs at least 2, and
/// opposite non-zero labels equal 1.
pub fn gale_arc_filter(g: &GaleDiagram) -> core::result::Result<(), Reject> {
    gale_arc_filter_with(g, LANNER_MAX_NODES, QUASI_LANNER_MAX_NODES)
}

/// Largest Lannér diagram (node count).
pub const LANNER_MAX_NODES: u32 = 5;
/// Largest quasi-Lannér diagram (node count).
pub const QUASI_LANNER_MAX_NODES: u32 = 10;

/// [`gale_arc_filter`] with explicit class-size caps.
pub fn gale_arc_filter_with(
    g: &GaleDiagram,
    lanner_max: u32,
    ql_max: u32,
) -> core::result::Result<(), Reject> {
    let k = g.k as isize;
    let ku = g.k;
    for mirror in [false, true] {
        let o = Orientation { k: ku, mirror };
        let size = |start: isize, len: usize| -> u32 {
            (0..len as isize).map(|t| o.label(g, start + t)).sum()
        };
        for i in 0..2 * k {
            if o.label(g, i) != 0 && o.label(g, k + i) != 0 {
                if o.label(g, i) != 1 || o.label(g, k + i) != 1 {
                    return Err(Reject::ArcSize(Rule::OppositeLabels));
                }
                if size(i + 1, ku - 1) < 2 || size(k + i + 1, ku - 1) < 2 {
                    return Err(Reject::ArcSize(Rule::CuspArcs));
                }
                let ql = if o.label(g, i + 1) != 0 && o.label(g, k + i + 1) != 0 {
                    Some((Rule::QuasiLannerAdjacent, size(i + 1, ku)))
                } else if o.label(g, i + 1) == 0 {
                    Some((Rule::QuasiLannerZero, size(i + 2, ku - 1)))
                } else {
                    None
                };
                if let Some((rule, s)) = ql {
                    if !(3..=ql_max).contains(&s) {
                        return Err(Reject::ArcSize(rule));
                    }
                }
            }
            if !mirror && o.label(g, i) == 0 && o.label(g, k + i - 1) == 0 {
                let s = if ku >= 2 { size(i + 1, ku - 2) } else { 0 };
                if !(2..=lanner_max).contains(&s) {
                    return Err(Reject::ArcSize(Rule::Lanner));
                }
            }
        }
    }
    Ok(())
}
