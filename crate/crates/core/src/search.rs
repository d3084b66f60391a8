//! Completion of Gale diagrams to Coxeter diagrams, and the per-dimension
//! pipeline: enumerate, filter, complete, solve weights, verify.
//!
//! Completion is a backtracking search over the upper triangle of the label
//! matrix, one node row at a time. Every combinatorial vertex, every forced
//! arc and every minimal non-face becomes a constraint set; a set is checked
//! whenever an edge inside it is assigned, reading not-yet-assigned entries as
//! right angles (deleting edges from an elliptic or connected affine diagram
//! leaves an elliptic one, so the partial checks are sound).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::diagram::dynkin::{affine_representatives, recognize, ComponentKind};
use crate::diagram::{
    canonical_key_labels, CanonicalKey, Code, CoxeterDiagram, EdgeKind, LabelMatrix, BOLD, DOTTED,
    RIGHT,
};
use crate::error::{Error, Result};
use crate::gale::{enumerate_k, members, FaceOracle, FacetAssignment, GaleDiagram};
use crate::lemmas::{
    gale_arc_filter_with, gale_prefilter, kv_requirements, l_requirements,
    opposite_label_violations, Expected, Reject, LANNER_MAX_NODES, QUASI_LANNER_MAX_NODES,
};
use crate::verify::{solve_dotted_weights, verify_polytope, Certificate};

/// Labels above 6 only occur on isolated edges, as infinite families; the
/// search tries them up to this bound.
pub const DEFAULT_ANGLE_CAP: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    /// Largest half-size of the Gale polygon; `None` for the default.
    pub k_max: Option<usize>,
    /// Gale-level filters and arc constraints from the lemmas.
    pub prefilter: bool,
    pub lanner_cap: u32,
    pub quasi_lanner_cap: u32,
    pub angle_cap: u32,
    /// Maximum number of search nodes per Gale diagram.
    pub node_budget: Option<u64>,
}

impl SearchSpec {
    pub fn new(n: usize) -> Self {
        SearchSpec {
            n,
            k_max: None,
            prefilter: true,
            lanner_cap: LANNER_MAX_NODES,
            quasi_lanner_cap: QUASI_LANNER_MAX_NODES,
            angle_cap: DEFAULT_ANGLE_CAP,
            node_budget: None,
        }
    }

    /// 13 for `n ≥ 16`, otherwise `n + 3` (each non-zero position holds a facet).
    pub fn effective_k_max(&self) -> usize {
        self.k_max
            .unwrap_or(if self.n >= 16 { 13 } else { self.n + 3 })
    }
}

/// Why a Gale diagram was skipped before completion.
pub fn gale_filter(g: &GaleDiagram, spec: &SearchSpec) -> core::result::Result<(), Reject> {
    gale_prefilter(g)?;
    gale_arc_filter_with(g, spec.lanner_cap, spec.quasi_lanner_cap)
}

/// Standard non-pyramid Gale diagrams of dimension `n` within `k_max`, with
/// the filters applied when `spec.prefilter` is set.
pub fn gale_candidates(spec: &SearchSpec) -> Vec<GaleDiagram> {
    let mut out = Vec::new();
    for k in 2..=spec.effective_k_max() {
        enumerate_k(spec.n, k, &mut |g| {
            if g.origin == 0 && (!spec.prefilter || gale_filter(&g, spec).is_ok()) {
                out.push(g);
            }
            true
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Req {
    /// Simple vertex: elliptic, or connected affine.
    Simple,
    /// Non-simple vertex: exactly this many affine components.
    Ideal(usize),
    Lanner,
    QuasiLanner,
    ConnectedAffine,
    /// Minimal non-face: not elliptic.
    NonElliptic,
    /// The node (search index) is joined to the rest of the set.
    Joined(usize),
}

#[derive(Clone, Debug)]
struct Check {
    mask: u64,
    last: usize,
    req: Req,
}

/// Everything the backtracking needs, in search order (node `i` is facet `order[i]`).
struct Problem {
    size: usize,
    order: Vec<usize>,
    face: Vec<u64>,
    checks: Vec<Check>,
    pair_checks: Vec<Vec<u32>>,
    ending: Vec<Vec<u32>>,
    /// Connected affine targets containing node `t` that complete later.
    growing: Vec<Vec<u32>>,
    /// Labels fixed in advance, indexed `s * size + t` for `s < t`.
    forced: Vec<Option<Code>>,
    /// Largest angle label allowed on a pair, same indexing.
    cap: Vec<Code>,
    /// Parabolic components made of interchangeable facets: their internal
    /// diagram is one representative per affine type.
    seeds: Vec<(Vec<usize>, Vec<LabelMatrix>)>,
    swaps: Vec<(usize, usize)>,
}

impl Problem {
    /// `None` when the lemmas already rule the Gale diagram out.
    fn build(
        g: &GaleDiagram,
        asg: &FacetAssignment,
        spec: &SearchSpec,
        lemmas: bool,
    ) -> Option<Problem> {
        let size = asg.facet_count();
        let n = spec.n;
        // positions in cyclic order, origin facets first
        let mut order: Vec<usize> = asg.origin.clone();
        let mut groups: Vec<Vec<usize>> = vec![asg.origin.clone()];
        for p in 0..g.positions() {
            order.extend(&asg.polygon[p]);
            groups.push(asg.polygon[p].clone());
        }
        let mut idx = vec![0usize; size];
        for (i, &f) in order.iter().enumerate() {
            idx[f] = i;
        }
        let to_mask = |facets: &[usize]| facets.iter().fold(0u64, |s, &f| s | 1 << idx[f]);
        let oracle = FaceOracle::new(g, asg);
        let mut face = vec![0u64; size];
        for a in 0..size {
            for b in 0..size {
                if a != b && oracle.is_face(1 << a | 1 << b) {
                    face[idx[a]] |= 1 << idx[b];
                }
            }
        }
        let mut reqs: BTreeMap<(u64, Req), ()> = BTreeMap::new();
        for v in oracle.vertex_sets() {
            let fs = members(v);
            let req = if fs.len() == n {
                Req::Simple
            } else {
                Req::Ideal(fs.len() + 1 - n)
            };
            reqs.insert((to_mask(&fs), req), ());
        }
        for s in crate::verify::minimal_nonfaces(g, asg) {
            let fs = members(s);
            if fs.len() > 2 {
                reqs.insert((to_mask(&fs), Req::NonElliptic), ());
            }
        }
        let mut forced: Vec<Option<Code>> = vec![None; size * size];
        let mut force = |a: usize, b: usize, c: Code| -> bool {
            let (s, t) = if a < b { (a, b) } else { (b, a) };
            let is_face = face[t] >> s & 1 == 1;
            if (c == DOTTED && is_face) || (c != DOTTED && c != BOLD && !is_face) {
                return false;
            }
            match forced[s * size + t] {
                Some(old) => old == c,
                None => {
                    forced[s * size + t] = Some(c);
                    true
                }
            }
        };
        if lemmas {
            if !opposite_label_violations(g).is_empty() {
                return None;
            }
            for a in kv_requirements(g, asg)
                .into_iter()
                .chain(l_requirements(g, asg))
            {
                let req = match a.expected {
                    Expected::ConnectedParabolic => Req::ConnectedAffine,
                    Expected::QuasiLanner => Req::QuasiLanner,
                    Expected::Lanner => Req::Lanner,
                    Expected::LabelsOne => continue,
                };
                let min = if req == Req::QuasiLanner { 3 } else { 2 };
                if a.facets.len() < min {
                    return None;
                }
                if a.facets.len() == 2 {
                    let c = if req == Req::Lanner { DOTTED } else { BOLD };
                    if !force(idx[a.facets[0]], idx[a.facets[1]], c) {
                        return None;
                    }
                }
                reqs.insert((to_mask(&a.facets), req), ());
            }
        }
        // A vertex on more than n facets is ideal; its parabolic components
        // are read off from the face lattice. No edges run between
        // components, each component is connected affine, and every facet
        // missing the vertex is joined to every component.
        let vertex_masks: Vec<u64> = oracle.vertex_sets().to_vec();
        let mut seeds: Vec<(Vec<usize>, Vec<LabelMatrix>)> = Vec::new();
        for &v in &vertex_masks {
            if (v.count_ones() as usize) <= n {
                continue;
            }
            let comps = cusp_components(v, v.count_ones() as usize + 1 - n, &vertex_masks);
            let Some(comps) = comps else { return None };
            let comps: Vec<Vec<usize>> = comps
                .iter()
                .map(|&c| members(c).iter().map(|&f| idx[f]).collect())
                .collect();
            for (i, a) in comps.iter().enumerate() {
                for b in &comps[i + 1..] {
                    for &u in a {
                        for &w in b {
                            if !force(u, w, RIGHT) {
                                return None;
                            }
                        }
                    }
                }
                if a.len() == 2 && !force(a[0], a[1], BOLD) {
                    return None;
                }
                let am = a.iter().fold(0u64, |m, &u| m | 1 << u);
                reqs.insert((am, Req::ConnectedAffine), ());
                let interchangeable = groups
                    .iter()
                    .any(|g| a.iter().all(|&u| g.contains(&order[u])));
                if a.len() >= 3 && interchangeable && !seeds.iter().any(|(b, _)| b == a) {
                    let mut nodes = a.clone();
                    nodes.sort_unstable();
                    let reps = affine_representatives(nodes.len())
                        .into_iter()
                        .map(|(_, m)| m)
                        .collect();
                    seeds.push((nodes, reps));
                }
                for x in (0..size).filter(|&x| v >> order[x] & 1 == 0) {
                    reqs.insert((am | 1 << x, Req::Joined(x)), ());
                }
            }
        }
        // In a connected target on four or more nodes every edge lies in a
        // connected three-node proper subdiagram, which is elliptic or
        // parabolic; that bounds the label.
        let mut cap = vec![Code::MAX; size * size];
        for &(mask, req) in reqs.keys() {
            let nodes = mask.count_ones();
            let bound = match req {
                Req::ConnectedAffine if nodes >= 4 => 4,
                Req::ConnectedAffine if nodes == 3 => 6,
                Req::Lanner if nodes >= 4 => 5,
                Req::QuasiLanner if nodes >= 4 => 6,
                _ => continue,
            };
            for a in members(mask) {
                for b in members(mask) {
                    if a < b {
                        cap[a * size + b] = cap[a * size + b].min(bound);
                    }
                }
            }
        }
        let checks: Vec<Check> = reqs
            .into_keys()
            .map(|(mask, req)| Check {
                mask,
                last: 63 - mask.leading_zeros() as usize,
                req,
            })
            .collect();
        let mut pair_checks = vec![Vec::new(); size * size];
        let mut ending = vec![Vec::new(); size];
        let mut growing = vec![Vec::new(); size];
        for (c, ch) in checks.iter().enumerate() {
            ending[ch.last].push(c as u32);
            if ch.req == Req::ConnectedAffine {
                for t in 0..ch.last {
                    if ch.mask >> t & 1 == 1 {
                        growing[t].push(c as u32);
                    }
                }
            }
            for s in 0..size {
                for t in s + 1..size {
                    if ch.mask >> s & 1 == 1 && ch.mask >> t & 1 == 1 {
                        pair_checks[s * size + t].push(c as u32);
                    }
                }
            }
        }
        // Seeded nodes have their symmetry spent on the representative;
        // every other swap fixes them, so the lex-leader rule stays sound.
        let seeded: u64 = seeds
            .iter()
            .flat_map(|(a, _)| a.iter())
            .fold(0, |m, &u| m | 1 << u);
        let mut swaps = Vec::new();
        for grp in &groups {
            for w in grp.windows(2) {
                let (a, b) = (idx[w[0]], idx[w[1]]);
                if seeded >> a & 1 == 0 && seeded >> b & 1 == 0 {
                    swaps.push((a, b));
                }
            }
        }
        Some(Problem {
            size,
            order,
            face,
            checks,
            pair_checks,
            ending,
            growing,
            forced,
            cap,
            seeds,
            swaps,
        })
    }
}

/// Smallest vertex set containing `x` (the facets of the face spanned by `x`).
fn closure(x: u64, vertices: &[u64]) -> u64 {
    vertices
        .iter()
        .filter(|&&v| v & x == x)
        .fold(!0u64, |c, &v| c & v)
}

/// Parabolic components of an ideal vertex `v` with `c` components, as facet
/// masks. The cusp section is a product of `c` simplices, so the faces just
/// above the vertex omit exactly one facet of each component; two facets share
/// a component iff no such face omits both. `None` if the lattice does not
/// have this shape.
fn cusp_components(v: u64, c: usize, vertices: &[u64]) -> Option<Vec<u64>> {
    let fs = members(v);
    let mut apart = vec![0u64; 64];
    let mut transversals = 0usize;
    let mut pick = Vec::with_capacity(c);
    fn walk(
        fs: &[usize],
        from: usize,
        c: usize,
        v: u64,
        vertices: &[u64],
        pick: &mut Vec<usize>,
        apart: &mut [u64],
        count: &mut usize,
    ) {
        if pick.len() == c {
            let t = pick.iter().fold(0u64, |m, &f| m | 1 << f);
            if closure(v & !t, vertices) == v & !t {
                *count += 1;
                for &a in pick.iter() {
                    apart[a] |= t & !(1 << a);
                }
            }
            return;
        }
        for i in from..fs.len() {
            pick.push(fs[i]);
            walk(fs, i + 1, c, v, vertices, pick, apart, count);
            pick.pop();
        }
    }
    walk(
        &fs,
        0,
        c,
        v,
        vertices,
        &mut pick,
        &mut apart,
        &mut transversals,
    );
    let mut left = v;
    let mut comps = Vec::new();
    while left != 0 {
        let f = left.trailing_zeros() as usize;
        let comp = v & !apart[f];
        if comp & left != comp || comp >> f & 1 == 0 {
            return None;
        }
        left &= !comp;
        comps.push(comp);
    }
    let product: usize = comps.iter().map(|c| c.count_ones() as usize).product();
    (comps.len() == c && product == transversals).then_some(comps)
}

/// Component statistics of a node mask.
struct Shape {
    components: usize,
    elliptic: usize,
    affine: usize,
    neither: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Elliptic,
    Affine,
    Neither,
}

struct Searcher<'a> {
    p: &'a Problem,
    memo: RefCell<Vec<(u64, Kind)>>,
    forced: Vec<Option<Code>>,
    m: LabelMatrix,
    adj: Vec<u64>,
    domain_face: Vec<Code>,
    visited: u64,
    budget: Option<u64>,
    exceeded: bool,
    emit: &'a mut dyn FnMut(&LabelMatrix),
}

fn nodes_of(mask: u64) -> Vec<usize> {
    members(mask)
}

impl Searcher<'_> {
    fn shape(&self, r: u64, stop_on_neither: bool) -> Shape {
        let mut sh = Shape {
            components: 0,
            elliptic: 0,
            affine: 0,
            neither: false,
        };
        let mut left = r;
        while left != 0 {
            let s = left.trailing_zeros() as usize;
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & r & !comp;
                comp |= new;
                frontier |= new;
            }
            left &= !comp;
            sh.components += 1;
            if comp.count_ones() == 1 {
                sh.elliptic += 1;
                continue;
            }
            match self.kind(comp) {
                Kind::Elliptic => sh.elliptic += 1,
                Kind::Affine => sh.affine += 1,
                Kind::Neither => {
                    sh.neither = true;
                    if stop_on_neither {
                        return sh;
                    }
                }
            }
        }
        sh
    }

    /// Kind of a connected node set, memoised until the next assignment.
    fn kind(&self, comp: u64) -> Kind {
        let mut memo = self.memo.borrow_mut();
        if let Some(&(_, k)) = memo.iter().find(|(c, _)| *c == comp) {
            return k;
        }
        let k = match recognize(&self.m, &nodes_of(comp)) {
            ComponentKind::Elliptic(_) => Kind::Elliptic,
            ComponentKind::Affine(_) => Kind::Affine,
            ComponentKind::Neither => Kind::Neither,
        };
        memo.push((comp, k));
        k
    }

    fn elliptic(&self, r: u64) -> bool {
        let sh = self.shape(r, true);
        !sh.neither && sh.affine == 0
    }

    fn elliptic_or_connected_affine(&self, r: u64) -> bool {
        let sh = self.shape(r, true);
        !sh.neither && (sh.affine == 0 || (sh.affine == 1 && sh.components == 1))
    }

    fn partial_ok(&self, ch: &Check, t: usize) -> bool {
        let full = ch.last == t;
        let r = ch.mask & ((2u64 << t) - 1);
        match ch.req {
            Req::Simple | Req::ConnectedAffine => {
                if full {
                    self.elliptic_or_connected_affine(r)
                } else {
                    self.elliptic(r)
                }
            }
            Req::Ideal(c) => {
                let sh = self.shape(r, true);
                !sh.neither && sh.affine <= c
            }
            Req::Lanner => full || self.elliptic(r),
            Req::QuasiLanner => full || self.elliptic_or_connected_affine(r),
            Req::NonElliptic | Req::Joined(_) => true,
        }
    }

    /// After row `t` is complete: a connected affine target missing `r`
    /// nodes has at most `r + 3` components so far (at most two branch
    /// nodes of degree 3, or one of degree 4).
    fn growing_ok(&self, ch: &Check, t: usize) -> bool {
        let r = ch.mask & ((2u64 << t) - 1);
        let missing = (ch.mask & !r).count_ones() as usize;
        self.components(r) <= missing + 3
    }

    fn components(&self, r: u64) -> usize {
        let mut left = r;
        let mut count = 0;
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & r & !comp;
                comp |= new;
                frontier |= new;
            }
            left &= !comp;
            count += 1;
        }
        count
    }

    fn complete_ok(&self, ch: &Check) -> bool {
        let r = ch.mask;
        let drop_one = |f: &dyn Fn(u64) -> bool| {
            let mut bits = r;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits &= bits - 1;
                if !f(r & !b) {
                    return false;
                }
            }
            true
        };
        match ch.req {
            Req::Simple => self.elliptic_or_connected_affine(r),
            Req::ConnectedAffine => {
                let sh = self.shape(r, true);
                !sh.neither && sh.components == 1 && sh.affine == 1
            }
            Req::Ideal(c) => {
                let sh = self.shape(r, true);
                !sh.neither && sh.components == c && sh.affine == c
            }
            Req::NonElliptic => !self.elliptic(r),
            Req::Joined(x) => self.adj[x] & r & !(1 << x) != 0,
            Req::Lanner => {
                if r.count_ones() == 2 {
                    let v = nodes_of(r);
                    return self.m.get(v[0], v[1]) == DOTTED;
                }
                let sh = self.shape(r, false);
                sh.components == 1 && sh.neither && drop_one(&|s| self.elliptic(s))
            }
            Req::QuasiLanner => {
                let sh = self.shape(r, false);
                sh.components == 1
                    && sh.neither
                    && drop_one(&|s| self.elliptic_or_connected_affine(s))
                    && !drop_one(&|s| self.elliptic(s))
            }
        }
    }

    /// Lex-leader test for swapping interchangeable nodes `a < b`, on rows `0..=t`.
    fn lex_ok(&self, t: usize) -> bool {
        for &(a, b) in &self.p.swaps {
            if b > t {
                continue;
            }
            let first = (0..a).map(|i| (self.m.get(i, a), self.m.get(i, b)));
            let later = (b + 1..=t).map(|j| (self.m.get(a, j), self.m.get(b, j)));
            for (x, y) in first.chain(later) {
                if x < y {
                    break;
                }
                if x > y {
                    return false;
                }
            }
        }
        true
    }

    fn set(&mut self, s: usize, t: usize, c: Code) {
        self.memo.get_mut().clear();
        self.m.set(s, t, c);
        if c == RIGHT {
            self.adj[s] &= !(1 << t);
            self.adj[t] &= !(1 << s);
        } else {
            self.adj[s] |= 1 << t;
            self.adj[t] |= 1 << s;
        }
    }

    fn rec(&mut self, t: usize, s: usize) {
        if self.exceeded {
            return;
        }
        self.visited += 1;
        if self.budget.is_some_and(|b| self.visited > b) {
            self.exceeded = true;
            return;
        }
        let p = self.p;
        if t == p.size {
            (self.emit)(&self.m);
            return;
        }
        if s == t {
            let ok = p.ending[t]
                .iter()
                .all(|&c| self.complete_ok(&p.checks[c as usize]))
                && p.growing[t]
                    .iter()
                    .all(|&c| self.growing_ok(&p.checks[c as usize], t))
                && self.lex_ok(t);
            if ok {
                self.rec(t + 1, 0);
            }
            return;
        }
        let face = p.face[t] >> s & 1 == 1;
        let cap = p.cap[s * p.size + t];
        let domain: Vec<Code> = match self.forced[s * p.size + t] {
            Some(c) => vec![c],
            None if face => self
                .domain_face
                .iter()
                .copied()
                .filter(|&c| c == RIGHT || c <= cap)
                .collect(),
            None if cap < Code::MAX => Vec::new(),
            None => vec![DOTTED, BOLD],
        };
        for c in domain {
            self.set(s, t, c);
            let ok = c == RIGHT
                || p.pair_checks[s * p.size + t]
                    .iter()
                    .all(|&k| self.partial_ok(&p.checks[k as usize], t));
            if ok {
                self.rec(t, s + 1);
            }
        }
        self.set(s, t, RIGHT);
    }
}

/// The forced labels with the chosen representative written onto each seed;
/// `None` if a representative clashes with the face structure.
fn seeded_forcing(p: &Problem, choice: &[usize]) -> Option<Vec<Option<Code>>> {
    let mut forced = p.forced.clone();
    for ((nodes, reps), &c) in p.seeds.iter().zip(choice) {
        let rep = &reps[c];
        for (i, &a) in nodes.iter().enumerate() {
            for (j, &b) in nodes.iter().enumerate().skip(i + 1) {
                let code = rep.get(i, j);
                let face = p.face[b] >> a & 1 == 1;
                if (code == DOTTED && face) || (code != DOTTED && code != BOLD && !face) {
                    return None;
                }
                if code != BOLD && code != RIGHT && code > p.cap[a * p.size + b] {
                    return None;
                }
                match forced[a * p.size + b] {
                    Some(old) if old != code => return None,
                    _ => forced[a * p.size + b] = Some(code),
                }
            }
        }
    }
    Some(forced)
}

/// Statistics of one completion run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionStats {
    pub search_nodes: u64,
    pub emitted: usize,
}

/// Stream every Coxeter diagram on the facets of `g` compatible with the
/// vertex, non-face and (when `lemmas`) arc constraints, as label matrices
/// in facet numbering. Interchangeable facets are reduced by a lex-leader
/// rule; callers deduplicate isomorphic outputs.
pub fn complete_with(
    g: &GaleDiagram,
    asg: &FacetAssignment,
    spec: &SearchSpec,
    lemmas: bool,
    emit: &mut dyn FnMut(&LabelMatrix),
) -> Result<CompletionStats> {
    if asg.facet_count() > 64 {
        return Err(Error::TooLarge(asg.facet_count()));
    }
    let Some(p) = Problem::build(g, asg, spec, lemmas) else {
        return Ok(CompletionStats::default());
    };
    let mut domain_face: Vec<Code> = vec![RIGHT, 3, 4, 5, 6];
    domain_face.extend((7..=spec.angle_cap).map(|m| m as Code));
    domain_face.push(BOLD);
    let mut emitted = 0usize;
    let size = p.size;
    let order = p.order.clone();
    let mut relabel = |m: &LabelMatrix| {
        let mut out = LabelMatrix::new(size);
        for i in 0..size {
            for j in i + 1..size {
                out.set(order[i], order[j], m.get(i, j));
            }
        }
        emitted += 1;
        emit(&out);
    };
    let mut s = Searcher {
        p: &p,
        memo: RefCell::new(Vec::new()),
        forced: Vec::new(),
        m: LabelMatrix::new(size),
        adj: vec![0; size],
        domain_face,
        visited: 0,
        budget: spec.node_budget,
        exceeded: false,
        emit: &mut relabel,
    };
    // one run per combination of seed representatives
    let mut choice = vec![0usize; p.seeds.len()];
    'combos: loop {
        if let Some(forced) = seeded_forcing(&p, &choice) {
            s.forced = forced;
            s.rec(0, 0);
            if s.exceeded {
                return Err(Error::BudgetExceeded);
            }
        }
        for (c, (_, reps)) in choice.iter_mut().zip(&p.seeds) {
            *c += 1;
            if *c < reps.len() {
                continue 'combos;
            }
            *c = 0;
        }
        break;
    }
    let visited = s.visited;
    Ok(CompletionStats {
        search_nodes: visited,
        emitted,
    })
}

/// Candidate diagrams for `g` (lemma constraints on iff `spec.prefilter`),
/// one per isomorphism class, sorted by canonical key.
pub fn complete_coxeter_diagrams(
    g: &GaleDiagram,
    asg: &FacetAssignment,
    spec: &SearchSpec,
) -> Result<Vec<CoxeterDiagram>> {
    let mut seen: BTreeMap<CanonicalKey, LabelMatrix> = BTreeMap::new();
    complete_with(g, asg, spec, spec.prefilter && !g.is_pyramid(), &mut |m| {
        seen.entry(canonical_key_labels(m))
            .or_insert_with(|| m.clone());
    })?;
    Ok(seen.values().map(CoxeterDiagram::from_labels).collect())
}

/// A certified polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub key: CanonicalKey,
    pub diagram: CoxeterDiagram,
    pub gale: GaleDiagram,
    pub certificate: Certificate,
}

/// Outcome of the pipeline on one Gale diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GaleOutcome {
    pub candidates: usize,
    pub search_nodes: u64,
    pub found: Vec<Found>,
    /// Candidates whose weights could not be decided, with the reason.
    pub unresolved: Vec<(CoxeterDiagram, Error)>,
}

/// Complete, solve and verify one Gale diagram.
pub fn process_gale(g: &GaleDiagram, spec: &SearchSpec) -> Result<GaleOutcome> {
    let asg = FacetAssignment::standard(g);
    let lemmas = spec.prefilter && !g.is_pyramid();
    let mut seen: BTreeMap<CanonicalKey, LabelMatrix> = BTreeMap::new();
    let stats = complete_with(g, &asg, spec, lemmas, &mut |m| {
        seen.entry(canonical_key_labels(m))
            .or_insert_with(|| m.clone());
    })?;
    let mut out = GaleOutcome {
        candidates: seen.len(),
        search_nodes: stats.search_nodes,
        ..Default::default()
    };
    for (key, m) in seen {
        let d = CoxeterDiagram::from_labels(&m);
        let solved = match solve_dotted_weights(&d, g, &asg, spec.n) {
            Ok(s) => s,
            Err(Error::NoSolution) => continue,
            Err(e) => {
                out.unresolved.push((d, e));
                continue;
            }
        };
        match verify_polytope(&solved, g, &asg, spec.n) {
            Ok(cert) if cert.valid => out.found.push(Found {
                key,
                diagram: solved,
                gale: g.clone(),
                certificate: cert,
            }),
            Ok(_) => {}
            Err(e) => out.unresolved.push((solved, e)),
        }
    }
    Ok(out)
}

/// Result of a whole-dimension run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimensionReport {
    pub n: usize,
    pub gale_diagrams: usize,
    pub candidates: usize,
    pub search_nodes: u64,
    /// Deduplicated by canonical key, sorted by it.
    pub found: Vec<Found>,
    pub unresolved: Vec<(GaleDiagram, CoxeterDiagram, Error)>,
}

/// Merge per-Gale outcomes deterministically.
pub fn merge_outcomes(n: usize, outcomes: Vec<(GaleDiagram, GaleOutcome)>) -> DimensionReport {
    let mut rep = DimensionReport {
        n,
        gale_diagrams: outcomes.len(),
        ..Default::default()
    };
    let mut found: BTreeMap<CanonicalKey, Found> = BTreeMap::new();
    for (g, o) in outcomes {
        rep.candidates += o.candidates;
        rep.search_nodes += o.search_nodes;
        for f in o.found {
            found.entry(f.key.clone()).or_insert(f);
        }
        rep.unresolved
            .extend(o.unresolved.into_iter().map(|(d, e)| (g.clone(), d, e)));
    }
    rep.found = found.into_values().collect();
    rep
}

/// Sequential full pipeline over the non-pyramid Gale diagrams of dimension `spec.n`.
pub fn enumerate_dimension(spec: &SearchSpec) -> Result<DimensionReport> {
    if spec.n < 2 {
        return Err(Error::Precondition(alloc::format!(
            "dimension {} < 2",
            spec.n
        )));
    }
    let mut outcomes = Vec::new();
    for g in gale_candidates(spec) {
        let o = process_gale(&g, spec)?;
        outcomes.push((g, o));
    }
    Ok(merge_outcomes(spec.n, outcomes))
}

/// Convenience: the label code of an edge kind.
pub fn code_of(e: &EdgeKind) -> Code {
    match e {
        EdgeKind::Angle(m) => *m as Code,
        EdgeKind::Bold => BOLD,
        EdgeKind::Dotted(_) => DOTTED,
    }
}
