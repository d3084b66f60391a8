use std::collections::BTreeSet;

use hypercox_core::diagram::{canonical_key, EdgeKind};
use hypercox_core::gale::{enumerate_k, vertices, FacetAssignment, GaleDiagram};
use hypercox_core::lemmas::{check_lemma_kv, check_lemma_l};
use hypercox_core::search::{
    complete_coxeter_diagrams, gale_filter, merge_outcomes, process_gale, SearchSpec,
};
use hypercox_core::verify::verify_polytope;

fn pentagon() -> GaleDiagram {
    GaleDiagram::new(5, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 0)
}

fn h16() -> GaleDiagram {
    GaleDiagram::new(6, vec![0, 1, 0, 1, 0, 1, 6, 1, 1, 1, 6, 1], 0)
}

#[test]
fn pentagon_completion_contains_the_right_angled_pattern() {
    let g = pentagon();
    let asg = FacetAssignment::standard(&g);
    let vs: BTreeSet<Vec<usize>> = vertices(&g, &asg).unwrap().into_iter().collect();
    assert_eq!(vs.len(), 5);
    let candidates = complete_coxeter_diagrams(&g, &asg, &SearchSpec::new(2)).unwrap();
    // adjacent sides meet at right angles, the others diverge
    let right_angled = candidates.iter().any(|d| {
        (0..5).all(|i| {
            (i + 1..5).all(|j| match d.edge(i, j) {
                EdgeKind::Angle(2) => vs.contains(&vec![i, j]),
                EdgeKind::Dotted(_) => !vs.contains(&vec![i, j]),
                _ => false,
            })
        })
    });
    assert!(right_angled, "{candidates:?}");
}

#[test]
fn candidates_satisfy_the_arc_constraints_and_are_distinct() {
    let spec = SearchSpec::new(4);
    for labels in [
        vec![0, 1, 1, 1, 1, 1, 1, 1],
        vec![0, 1, 0, 1, 0, 1, 1, 1, 1, 1],
    ] {
        let g = GaleDiagram::new(labels.len() / 2, labels, 0);
        let asg = FacetAssignment::standard(&g);
        let candidates = complete_coxeter_diagrams(&g, &asg, &spec).unwrap();
        assert!(!candidates.is_empty());
        let keys: BTreeSet<_> = candidates.iter().map(canonical_key).collect();
        assert_eq!(keys.len(), candidates.len());
        for d in &candidates {
            assert!(check_lemma_kv(&g, &asg, d).unwrap().is_empty(), "{d:?}");
            assert!(check_lemma_l(&g, &asg, d).unwrap().is_empty(), "{d:?}");
        }
    }
}

#[test]
fn found_polytopes_reverify() {
    let g = GaleDiagram::new(5, vec![0, 1, 0, 1, 0, 1, 1, 1, 1, 1], 0);
    let asg = FacetAssignment::standard(&g);
    let out = process_gale(&g, &SearchSpec::new(4)).unwrap();
    assert!(!out.found.is_empty());
    for f in &out.found {
        assert_eq!(f.key, canonical_key(&f.diagram));
        let again = verify_polytope(&f.diagram, &g, &asg, 4).unwrap();
        assert!(again.valid);
        assert_eq!(again, f.certificate);
    }
}

#[test]
fn h16_gale_diagram_yields_one_polytope() {
    let g = h16();
    assert_eq!(g.dimension(), 16);
    let spec = SearchSpec::new(16);
    assert!(gale_filter(&g, &spec).is_ok());
    let out = process_gale(&g, &spec).unwrap();
    assert_eq!(out.found.len(), 1);
    assert!(out.unresolved.is_empty());
    let c = &out.found[0].certificate;
    assert_eq!(c.facets, 19);
    assert!(!c.compact);
    let s = c.signature.unwrap();
    assert_eq!((s.positive, s.negative, s.zero), (16, 1, 2));
    assert_eq!(process_gale(&g, &spec).unwrap(), out);
}

#[test]
fn merged_reports_do_not_depend_on_order() {
    let spec = SearchSpec::new(4);
    let gs = [
        GaleDiagram::new(4, vec![0, 1, 1, 1, 1, 1, 1, 1], 0),
        GaleDiagram::new(5, vec![0, 1, 0, 1, 0, 1, 1, 1, 1, 1], 0),
    ];
    let outs: Vec<_> = gs
        .iter()
        .map(|g| (g.clone(), process_gale(g, &spec).unwrap()))
        .collect();
    let mut rev = outs.clone();
    rev.reverse();
    let a = merge_outcomes(4, outs);
    let b = merge_outcomes(4, rev);
    assert_eq!(a.found, b.found);
    assert_eq!(a.candidates, b.candidates);
    let keys: Vec<_> = a.found.iter().map(|f| f.key.clone()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn filtered_out_gale_diagrams_have_no_polytopes() {
    for n in [4, 6] {
        let spec = SearchSpec::new(n);
        let mut rejected = Vec::new();
        for k in 2..=spec.effective_k_max() {
            enumerate_k(n, k, &mut |g| {
                if g.origin == 0 && gale_filter(&g, &spec).is_err() {
                    rejected.push(g);
                }
                true
            });
        }
        assert!(!rejected.is_empty());
        let off = SearchSpec {
            prefilter: false,
            node_budget: Some(2_000_000),
            ..spec
        };
        let step = (rejected.len() / 10).max(1);
        for g in rejected.iter().step_by(step).take(10) {
            assert!(process_gale(g, &off).unwrap().found.is_empty(), "{g:?}");
        }
    }
}
