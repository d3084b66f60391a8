use hypercox_core::gale::{
    enumerate_k, vertices, FaceOracle, FacetAssignment, FacetSet, GaleDiagram,
};
use hypercox_core::pyramid::{
    enumerate_pyramids_up_to, is_pyramid_over_three_simplices, lattices_isomorphic,
    reference_lattice, reference_vertices, PyramidShape,
};
use hypercox_core::search::{process_gale, SearchSpec};
use hypercox_core::verify::verify_polytope;

#[test]
fn vertex_and_facet_counts_match_the_closed_forms() {
    for n in 4..=11 {
        for s in PyramidShape::all(n) {
            let [a, b, c] = s.dims();
            assert_eq!(a + b + c, n - 1);
            assert_eq!(s.facet_count(), n + 3);
            let vs = reference_vertices(s);
            assert_eq!(vs.len(), (a + 1) * (b + 1) * (c + 1) + 1, "{s:?}");
            // the base is facet 0: every vertex but the apex lies on it
            assert_eq!(vs.iter().filter(|&&v| v & 1 == 0).count(), 1);
            // each vertex of a simple base lies on n facets, the apex on all lateral ones
            for &v in &vs {
                let k = v.count_ones() as usize;
                assert!(k == n || (v & 1 == 0 && k == n + 2), "{s:?} {v:b}");
            }
        }
    }
}

#[test]
fn reference_lattice_agrees_with_the_gale_faces() {
    let s = PyramidShape::new(1, 1, 1).unwrap();
    let g = s.gale();
    assert_eq!(g, GaleDiagram::new(3, vec![2, 0, 2, 0, 2, 0], 1));
    let asg = FacetAssignment::standard(&g);
    assert_eq!(vertices(&g, &asg).unwrap().len(), 9);
    assert_eq!(
        reference_lattice(s).unwrap().len(),
        hypercox_core::gale::faces(&g, &asg).unwrap().len()
    );
    for n in 4..=11 {
        for s in PyramidShape::all(n) {
            let g = s.gale();
            assert_eq!(
                is_pyramid_over_three_simplices(&g, &FacetAssignment::standard(&g)).unwrap(),
                Some(s)
            );
        }
    }
}

/// Isomorphism of vertex families by trying every facet permutation.
fn brute_isomorphic(a: &[FacetSet], b: &[FacetSet], facets: usize) -> bool {
    fn image(v: FacetSet, perm: &[usize]) -> FacetSet {
        perm.iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .fold(0, |m, (_, &p)| m | 1 << p)
    }
    fn go(perm: &mut Vec<usize>, used: &mut [bool], a: &[FacetSet], b: &[FacetSet]) -> bool {
        if perm.len() == used.len() {
            let mut mapped: Vec<FacetSet> = a.iter().map(|&v| image(v, perm)).collect();
            mapped.sort_unstable();
            return mapped == b;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                perm.push(x);
                let ok = go(perm, used, a, b);
                perm.pop();
                used[x] = false;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    if a.len() != b.len() {
        return false;
    }
    let mut b = b.to_vec();
    b.sort_unstable();
    go(&mut Vec::new(), &mut vec![false; facets], a, &b)
}

fn scrambled(vs: &[FacetSet], facets: usize, seed: usize) -> Vec<FacetSet> {
    // a fixed, seed-dependent permutation: multiplication by a unit mod `facets`
    let unit = (1..facets)
        .filter(|u| gcd(*u, facets) == 1)
        .nth(seed % 3)
        .unwrap_or(1);
    let perm: Vec<usize> = (0..facets).map(|i| (i * unit + seed) % facets).collect();
    vs.iter()
        .map(|&v| {
            (0..facets)
                .filter(|&i| v >> i & 1 == 1)
                .fold(0, |m, i| m | 1 << perm[i])
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn lattice_isomorphism_matches_brute_force() {
    let mut families: Vec<(usize, Vec<FacetSet>)> = Vec::new();
    for n in 4..=6 {
        for s in PyramidShape::all(n) {
            let vs = reference_vertices(s);
            families.push((n + 3, scrambled(&vs, n + 3, n)));
            families.push((n + 3, vs));
        }
        // pyramid Gale diagrams of every type with at most 9 facets
        for k in 2..=4 {
            enumerate_k(n, k, &mut |g| {
                if g.origin > 0 {
                    let asg = FacetAssignment::standard(&g);
                    families.push((n + 3, FaceOracle::new(&g, &asg).vertex_sets()));
                }
                true
            });
        }
    }
    let mut checked = 0;
    for (i, (fa, a)) in families.iter().enumerate() {
        for (fb, b) in &families[i..] {
            if fa != fb || a.len() != b.len() {
                continue;
            }
            assert_eq!(
                lattices_isomorphic(a, b, *fa),
                brute_isomorphic(a, b, *fa),
                "{a:?} vs {b:?}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn pyramid_and_non_pyramid_branches_are_disjoint() {
    let rep = enumerate_pyramids_up_to(&SearchSpec::new(6), 6).unwrap();
    assert!(rep.found().count() > 0);
    for f in rep.found() {
        assert!(f.gale.origin > 0);
        assert!(f.certificate.pyramid_shape.is_some());
        let asg = FacetAssignment::standard(&f.gale);
        let again = verify_polytope(&f.diagram, &f.gale, &asg, f.certificate.dimension).unwrap();
        assert!(again.valid);
    }
    // low dimensions carry large infinite families, so sample two quick Gale diagrams
    let mut found = 0;
    for labels in [
        vec![0, 1, 1, 1, 1, 1, 1, 1],
        vec![0, 1, 0, 1, 0, 1, 1, 1, 1, 1],
    ] {
        let g = GaleDiagram::new(labels.len() / 2, labels, 0);
        for f in process_gale(&g, &SearchSpec::new(4)).unwrap().found {
            assert!(f.certificate.pyramid_shape.is_none());
            found += 1;
        }
    }
    assert!(found > 0);
}
