//! One-shot reproduction of the dimension bound: no polytope with `n + 3`
//! facets in dimension 17, exactly one in dimension 16, and no pyramid
//! above dimension 11.

use std::fs;
use std::path::Path;

use hypercox_core::diagram::canonical_key;
use hypercox_core::pyramid::{enumerate_pyramids, PYRAMID_MAX_DIMENSION};
use hypercox_core::search::SearchSpec;
use serde::{Deserialize, Serialize};

use crate::driver::{run_dimension, DriverOptions, Status};
use crate::format::parse_coxeter;

/// Largest dimension of a Coxeter pyramid with `n + 3` facets.
pub const PYRAMID_DIMENSION_BOUND: usize = 11;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub assertions: Vec<Assertion>,
    /// `matched`, `mismatch`, `missing` or `unreadable: ...`.
    pub fixture: String,
    /// Overrides that differ from the defaults, for provenance.
    pub overrides: Vec<String>,
    /// True when some run stopped early; assertions are then not conclusive.
    pub incomplete: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        !self.incomplete && self.assertions.iter().all(|a| a.passed)
    }
}

pub struct TheoremOptions<'a> {
    pub driver: DriverOptions,
    pub fixture: &'a Path,
    pub prefilter: bool,
    pub k_max: Option<usize>,
}

pub fn reproduce(opts: &TheoremOptions<'_>) -> anyhow::Result<TheoremReport> {
    let mut rep = TheoremReport::default();
    if !opts.prefilter {
        rep.overrides.push("prefilter off".into());
    }
    if let Some(k) = opts.k_max {
        rep.overrides.push(format!("k_max = {k}"));
    }
    let spec = |n: usize| SearchSpec {
        k_max: opts.k_max,
        prefilter: opts.prefilter,
        ..SearchSpec::new(n)
    };
    let driver = |n: usize| DriverOptions {
        checkpoint: opts
            .driver
            .checkpoint
            .as_ref()
            .map(|p| p.with_extension(format!("dim{n}.json"))),
        ..opts.driver.clone()
    };

    let r17 = run_dimension(&spec(17), &driver(17))?;
    rep.incomplete |= r17.status != Status::Complete;
    rep.assertions.push(Assertion {
        name: "dimension 17 is empty".into(),
        passed: r17.report.found.is_empty(),
        detail: format!(
            "{} polytopes from {} Gale diagrams",
            r17.report.found.len(),
            r17.report.gale_diagrams
        ),
    });

    let r16 = run_dimension(&spec(16), &driver(16))?;
    rep.incomplete |= r16.status != Status::Complete;
    let fixture_key = match fs::read_to_string(opts.fixture) {
        Ok(text) => match parse_coxeter(&text) {
            Ok(d) => Some(canonical_key(&d)),
            Err(e) => {
                rep.fixture = format!("unreadable: {e}");
                None
            }
        },
        Err(_) => {
            rep.fixture = "missing".into();
            None
        }
    };
    let unique = r16.report.found.len() == 1;
    let matches = match (&fixture_key, r16.report.found.first()) {
        (Some(k), Some(f)) => {
            rep.fixture = if *k == f.key { "matched" } else { "mismatch" }.into();
            *k == f.key
        }
        // without a fixture, uniqueness is still checked
        (None, _) => true,
        (Some(_), None) => {
            rep.fixture = "mismatch".into();
            false
        }
    };
    rep.assertions.push(Assertion {
        name: "dimension 16 has a unique polytope".into(),
        passed: unique && matches,
        detail: format!(
            "{} polytopes; fixture {}",
            r16.report.found.len(),
            rep.fixture
        ),
    });

    let pyr = enumerate_pyramids(&SearchSpec::new(PYRAMID_MAX_DIMENSION))?;
    rep.incomplete |= pyr.unresolved() > 0;
    let max = pyr.max_dimension();
    rep.assertions.push(Assertion {
        name: format!("pyramids have dimension at most {PYRAMID_DIMENSION_BOUND}"),
        passed: max.map_or(true, |m| m <= PYRAMID_DIMENSION_BOUND),
        detail: format!(
            "{} pyramids over {} shapes, largest dimension {max:?}",
            pyr.found().count(),
            pyr.shapes
        ),
    });
    Ok(rep)
}
