//! Definitional classification from certified Gram signatures.

use alloc::vec::Vec;

use super::dynkin::{self, ComponentKind, DynkinType};
use super::gram::{gram_matrix, signature, GramMatrix};
use super::{CoxeterDiagram, EdgeKind};
use crate::arith::Inertia;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramClass {
    Elliptic,
    Parabolic { connected: bool },
    Lanner,
    QuasiLanner,
    Other,
}

/// Signature-level shape of a (possibly disconnected) subdiagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Elliptic,
    Parabolic,
    Neither,
}

fn kind_of(g: &GramMatrix, comps: &[Vec<usize>]) -> Result<Kind> {
    let s = signature(g)?;
    if s.negative > 0 {
        return Ok(Kind::Neither);
    }
    if s.zero == 0 {
        return Ok(Kind::Elliptic);
    }
    // PSD and singular: every component must be singular.
    for c in comps {
        if comps.len() > 1 && signature(&g.principal(c))?.zero == 0 {
            return Ok(Kind::Neither);
        }
    }
    Ok(Kind::Parabolic)
}

fn sub_kind(g: &GramMatrix, d: &CoxeterDiagram, nodes: &[usize]) -> Result<Kind> {
    let comps = d.subdiagram(nodes).components();
    kind_of(&g.principal(nodes), &comps)
}

pub fn classify(d: &CoxeterDiagram) -> Result<DiagramClass> {
    // A dotted pair alone is Lannér and makes every larger diagram other,
    // whatever its weight.
    if d.edges().any(|(_, _, e)| matches!(e, EdgeKind::Dotted(_))) {
        return Ok(if d.node_count() == 2 {
            DiagramClass::Lanner
        } else {
            DiagramClass::Other
        });
    }
    let g = gram_matrix(d);
    let comps = d.components();
    let n = d.node_count();
    match kind_of(&g, &comps)? {
        Kind::Elliptic => return Ok(DiagramClass::Elliptic),
        Kind::Parabolic => {
            return Ok(DiagramClass::Parabolic {
                connected: comps.len() == 1,
            })
        }
        Kind::Neither => {}
    }
    if comps.len() != 1 {
        return Ok(DiagramClass::Other);
    }
    // Every proper subdiagram lies in a maximal one, and subdiagrams of elliptic
    // diagrams are elliptic, so the (n-1)-node subdiagrams decide both classes.
    let mut all_elliptic = true;
    for skip in 0..n {
        let nodes: Vec<usize> = (0..n).filter(|&v| v != skip).collect();
        match sub_kind(&g, d, &nodes)? {
            Kind::Elliptic => {}
            Kind::Parabolic => {
                all_elliptic = false;
                // a proper parabolic subdiagram must be connected for its own
                // subdiagrams to stay elliptic or parabolic
                if d.subdiagram(&nodes).components().len() != 1 {
                    return Ok(DiagramClass::Other);
                }
            }
            Kind::Neither => return Ok(DiagramClass::Other),
        }
    }
    Ok(if all_elliptic {
        DiagramClass::Lanner
    } else {
        DiagramClass::QuasiLanner
    })
}

/// Classical names of the components, for display. `None` if some component
/// is neither elliptic nor affine or carries a dotted edge.
pub fn component_names(d: &CoxeterDiagram) -> Option<Vec<DynkinType>> {
    let m = d.labels();
    let mut out = Vec::new();
    for c in d.components() {
        match dynkin::recognize(&m, &c) {
            ComponentKind::Elliptic(t) | ComponentKind::Affine(t) => out.push(t),
            ComponentKind::Neither => return None,
        }
    }
    out.sort_unstable();
    Some(out)
}

/// Signature of the whole diagram's Gram matrix.
pub fn diagram_signature(d: &CoxeterDiagram) -> Result<Inertia> {
    signature(&gram_matrix(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::EdgeKind;

    #[test]
    fn basic_classes() {
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Angle(3));
        assert_eq!(classify(&d), Ok(DiagramClass::Elliptic));
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Bold);
        assert_eq!(
            classify(&d),
            Ok(DiagramClass::Parabolic { connected: true })
        );
        let d = CoxeterDiagram::new(3)
            .with(0, 1, EdgeKind::Angle(3))
            .with(1, 2, EdgeKind::Angle(3))
            .with(0, 2, EdgeKind::Angle(7));
        assert_eq!(classify(&d), Ok(DiagramClass::Lanner));
        let d = CoxeterDiagram::new(3)
            .with(0, 1, EdgeKind::Bold)
            .with(1, 2, EdgeKind::Angle(3));
        assert_eq!(classify(&d), Ok(DiagramClass::QuasiLanner));
        let d = CoxeterDiagram::new(3).with(0, 1, EdgeKind::Bold);
        assert_eq!(classify(&d), Ok(DiagramClass::Other));
        let d = CoxeterDiagram::new(4)
            .with(0, 1, EdgeKind::Bold)
            .with(2, 3, EdgeKind::Bold);
        assert_eq!(
            classify(&d),
            Ok(DiagramClass::Parabolic { connected: false })
        );
    }

    #[test]
    fn dotted_edges_need_no_weight() {
        let d = CoxeterDiagram::new(2).with(0, 1, EdgeKind::Dotted(None));
        assert_eq!(classify(&d), Ok(DiagramClass::Lanner));
        let d3 = CoxeterDiagram::new(3)
            .with(0, 1, EdgeKind::Dotted(None))
            .with(1, 2, EdgeKind::Angle(3));
        assert_eq!(classify(&d3), Ok(DiagramClass::Other));
    }
}
