//! End-to-end acceptance run: one pass/fail line per criterion, then a
//! single assertion over all of them.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hypercox::format::{parse_coxeter, parse_gale};
use hypercox_core::diagram::generate::{generate_class_with, key_set, GenerateOptions};
use hypercox_core::diagram::{canonical_key, classify, EdgeKind, TargetClass};
use hypercox_core::gale::{enumerate_k, vertices, FacetAssignment, GaleDiagram};
use hypercox_core::lemmas::lemma3_rejects;
use hypercox_core::pyramid::{is_pyramid_over_three_simplices, PyramidShape};
use hypercox_core::search::{gale_filter, process_gale, SearchSpec};
use hypercox_core::verify::{dotted_orbits, solve_dotted_weights_with};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Exit code and parsed JSON output of the binary, plus its wall time.
fn run_json(args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hypercox"))
        .args(args)
        .arg("--json")
        .current_dir(root())
        .output()
        .unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, start.elapsed())
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fixture_key() -> hypercox_core::diagram::CanonicalKey {
    canonical_key(
        &parse_coxeter(&fs::read_to_string(root().join("fixtures/h16.cox")).unwrap()).unwrap(),
    )
}

fn polytopes(v: &Value) -> Vec<Value> {
    v["polytopes"].as_array().cloned().unwrap_or_default()
}

fn verify_fixture() -> Outcome {
    let (code, v, t) = run_json(&["verify", "fixtures/h16.cox"]);
    let c = &v["certificate"];
    let ok = code == 0
        && c["verdict"] == "valid"
        && c["facets"] == 19
        && c["signature"] == serde_json::json!([16, 1, 2])
        && c["compact"] == false
        && t < Duration::from_secs(10);
    outcome(
        ok,
        format!(
            "verdict {}, signature {}, compact {}, {:.2}s",
            c["verdict"],
            c["signature"],
            c["compact"],
            t.as_secs_f64()
        ),
    )
}

fn dimensions_16_and_17() -> Outcome {
    let budget = Duration::from_secs(30 * 60);
    let (c17, v17, t17) = run_json(&["enumerate", "--dim", "17"]);
    let (c16, v16, t16) = run_json(&["enumerate", "--dim", "16"]);
    let found16 = polytopes(&v16);
    let iso = found16.len() == 1
        && parse_coxeter(found16[0]["diagram"].as_str().unwrap_or(""))
            .is_ok_and(|d| canonical_key(&d) == fixture_key());
    let ok =
        c17 == 0 && c16 == 0 && polytopes(&v17).is_empty() && iso && t17 < budget && t16 < budget;
    outcome(
        ok,
        format!(
            "dim 17: {} polytopes in {:.0}s; dim 16: {} polytope(s), fixture isomorphic {iso}, {:.0}s",
            polytopes(&v17).len(),
            t17.as_secs_f64(),
            found16.len(),
            t16.as_secs_f64()
        ),
    )
}

fn dimension_15() -> Outcome {
    let (code, v, t) = run_json(&["enumerate", "--dim", "15"]);
    let facets: Vec<u64> = polytopes(&v)
        .iter()
        .filter_map(|p| p["certificate"]["facets"].as_u64())
        .collect();
    let ok = code == 0 && facets.contains(&18);
    outcome(
        ok,
        format!(
            "{} polytope(s) with facet counts {facets:?}, {:.0}s",
            facets.len(),
            t.as_secs_f64()
        ),
    )
}

fn pyramids() -> Outcome {
    let (code, v, t) = run_json(&["pyramids"]);
    let max = v["max_dimension"].as_u64();
    let cube = GaleDiagram::new(3, vec![2, 0, 2, 0, 2, 0], 1);
    let shape = is_pyramid_over_three_simplices(&cube, &FacetAssignment::standard(&cube))
        .ok()
        .flatten();
    let ok = code == 0 && max.is_some_and(|m| m <= 11) && shape == PyramidShape::new(1, 1, 1).ok();
    outcome(
        ok,
        format!(
            "largest dimension {max:?}, cube pyramid detected as {shape:?}, {:.1}s",
            t.as_secs_f64()
        ),
    )
}

fn generated_classes() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (target, max_nodes, bound) in [
        (TargetClass::Lanner, 10, 5),
        (TargetClass::QuasiLanner, 12, 10),
    ] {
        let runs: Vec<_> = [0u64, 1, 0xdead_beef]
            .into_iter()
            .map(|seed| {
                generate_class_with(
                    target,
                    max_nodes,
                    GenerateOptions {
                        seed,
                        ..Default::default()
                    },
                )
                .unwrap()
            })
            .collect();
        let largest = runs[0]
            .diagrams
            .iter()
            .map(|d| d.node_count())
            .max()
            .unwrap_or(0);
        let stable = runs.windows(2).all(|w| key_set(&w[0]) == key_set(&w[1]));
        ok &= largest <= bound && stable;
        details.push(format!(
            "{target:?}: {} diagrams, at most {largest} nodes, seed-stable {stable}",
            runs[0].diagrams.len()
        ));
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(300);
    outcome(
        ok,
        format!("{}; {:.1}s", details.join("; "), t.as_secs_f64()),
    )
}

fn lemma_three() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (2usize..=10).prop_flat_map(|k| {
        (
            Just(k),
            proptest::collection::vec(prop_oneof![2 => Just(0u32), 3 => 1u32..=4], 2 * k),
        )
    });
    let result = runner.run(&strategy, |(k, labels)| {
        let m = 2 * k;
        let sum: u32 = labels.iter().sum();
        let expected = sum > 20 && (0..m).any(|i| labels[i] == 0 && labels[(i + 2) % m] == 0);
        prop_assert_eq!(lemma3_rejects(&GaleDiagram::new(k, labels, 0)), expected);
        Ok(())
    });
    outcome(result.is_ok(), format!("10000 label vectors: {result:?}"))
}

fn oracles() -> Outcome {
    // face test against the exact hull on random standard Gale diagrams
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        max_global_rejects: 1_000_000,
        failure_persistence: None,
        ..Config::default()
    });
    let gale = (2usize..=7)
        .prop_flat_map(|k| {
            (
                Just(k),
                proptest::collection::vec(0u32..=2, 2 * k),
                0u32..=2,
            )
        })
        .prop_map(|(k, labels, origin)| GaleDiagram::new(k, labels, origin))
        .prop_filter("standard", GaleDiagram::is_standard);
    let faces = runner.run(
        &(gale, proptest::collection::vec(any::<u64>(), 24)),
        |(g, masks)| {
            prop_assert_eq!(support::face_test_disagreement(&g, &masks), None);
            Ok(())
        },
    );

    // the pentagon's vertex graph is a 5-cycle
    let g =
        parse_gale(&fs::read_to_string(root().join("fixtures/pentagon.gale")).unwrap()).unwrap();
    let asg = FacetAssignment::standard(&g);
    let vs = vertices(&g, &asg).unwrap();
    let mut degree = [0; 5];
    vs.iter().flatten().for_each(|&f| degree[f] += 1);
    let mut reached = BTreeSet::from([0usize]);
    for _ in 0..5 {
        let next: Vec<usize> = vs
            .iter()
            .filter(|v| v.iter().any(|f| reached.contains(f)))
            .flatten()
            .copied()
            .collect();
        reached.extend(next);
    }
    let cycle =
        vs.len() == 5 && vs.iter().all(|v| v.len() == 2) && degree == [2; 5] && reached.len() == 5;

    // the right-angled pentagon's dotted weights are the golden ratio
    let d =
        parse_coxeter(&fs::read_to_string(root().join("fixtures/pentagon.cox")).unwrap()).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let widest = dotted_orbits(&d)
        .and_then(|o| solve_dotted_weights_with(&d, &g, &asg, 2, Some(&o)))
        .map(|s| {
            s.edges()
                .filter_map(|(_, _, e)| match e {
                    EdgeKind::Dotted(Some(w)) => Some(w.enclosure()),
                    _ => None,
                })
                .map(|e| {
                    if e.lo <= phi && phi <= e.hi {
                        e.width()
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max)
        });
    let golden = matches!(widest, Ok(w) if w < 1e-12);

    // classification against the definition on small diagrams
    let small = support::small_connected_diagrams();
    let mismatches = small
        .iter()
        .filter(|(labels, d)| classify(d).ok() != Some(support::brute_class(labels)))
        .count();

    let ok = faces.is_ok() && cycle && golden && mismatches == 0;
    outcome(
        ok,
        format!(
            "face test {}; pentagon 5-cycle {cycle}; weight enclosure width {widest:?}; classify mismatches {mismatches}/{}",
            if faces.is_ok() { "agrees on 1000 diagrams" } else { "disagrees" },
            small.len()
        ),
    )
}

fn prefilter_audit() -> Outcome {
    let start = Instant::now();
    let mut pools = Vec::new();
    for n in 4..=10 {
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
        pools.push((n, rejected));
    }
    // spread 100 samples over the dimensions, evenly within each
    pools.sort_by_key(|(_, r)| r.len());
    let mut sample = Vec::new();
    let dims = pools.len();
    for (i, (n, rejected)) in pools.into_iter().enumerate() {
        let take = rejected.len().min((100 - sample.len()) / (dims - i));
        sample.extend((0..take).map(|t| (n, rejected[t * rejected.len() / take].clone())));
    }
    let (mut found, mut uncertain) = (0, 0);
    for (n, g) in &sample {
        let spec = SearchSpec {
            prefilter: false,
            node_budget: Some(5_000_000),
            ..SearchSpec::new(*n)
        };
        match process_gale(g, &spec) {
            Ok(o) => {
                found += o.found.len();
                uncertain += o.unresolved.len();
            }
            Err(_) => uncertain += 1,
        }
    }
    let t = start.elapsed();
    let ok =
        sample.len() == 100 && found == 0 && uncertain == 0 && t < Duration::from_secs(15 * 60);
    outcome(
        ok,
        format!(
            "{} rejected Gale diagrams: {found} polytopes, {uncertain} undecided, {:.1}s",
            sample.len(),
            t.as_secs_f64()
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("verify fixture", verify_fixture),
        ("dimensions 17 and 16", dimensions_16_and_17),
        ("dimension 15", dimension_15),
        ("pyramids", pyramids),
        ("generated classes", generated_classes),
        ("lemma 3 filter", lemma_three),
        ("oracles", oracles),
        ("prefilter audit", prefilter_audit),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        // bypasses the test harness capture so the report lands in plain logs
        writeln!(
            std::io::stderr(),
            "criterion {} [{}] {name}: {}",
            i + 1,
            if o.passed { "pass" } else { "FAIL" },
            o.detail
        )
        .unwrap();
        if !o.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
