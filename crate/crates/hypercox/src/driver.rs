//! Parallel, budgeted and resumable whole-dimension search.
//!
//! Work is partitioned by Gale diagram. Each branch is independent, so the
//! final report only depends on the set of completed branches: outcomes are
//! merged in Gale-diagram order and certificates sorted by canonical key,
//! whatever the scheduling. A checkpoint records the branches still to run
//! plus the results of the finished ones.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use hypercox_core::diagram::canonical_key;
use hypercox_core::gale::{enumerate_k, FacetAssignment, GaleDiagram};
use hypercox_core::search::{
    gale_filter, merge_outcomes, process_gale, DimensionReport, Found, GaleOutcome, SearchSpec,
};
use hypercox_core::verify::verify_polytope;
use hypercox_core::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{parse_coxeter, write_coxeter};

pub const CHECKPOINT_FORMAT: &str = "hypercox-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// How often a running search rewrites its checkpoint.
const SAVE_INTERVAL: Duration = Duration::from_secs(60);

#[derive(Clone, Debug)]
pub struct DriverOptions {
    /// Worker threads, at least 1.
    pub jobs: usize,
    /// Wall-clock budget for the whole run; branches already started finish.
    pub budget: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
    /// Continue from `checkpoint` if it exists.
    pub resume: bool,
}

impl Default for DriverOptions {
    fn default() -> Self {
        DriverOptions {
            jobs: 1,
            budget: None,
            checkpoint: None,
            resume: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// The wall-clock budget ran out, or some branch hit the node budget.
    Incomplete,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: DimensionReport,
    pub status: Status,
    /// Branches not started before the deadline.
    pub remaining: usize,
    /// Branches whose completion exceeded `spec.node_budget`.
    pub node_budget_hits: Vec<GaleDiagram>,
    /// Where the checkpoint was written, if it was.
    pub checkpoint: Option<PathBuf>,
    pub resumed_branches: usize,
    pub elapsed: Duration,
}

/// Search parameters that must agree between a checkpoint and its resume.
/// The node budget is deliberately absent: raising it on resume re-runs
/// the branches that hit it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub n: usize,
    pub k_max: usize,
    pub prefilter: bool,
    pub lanner_cap: u32,
    pub quasi_lanner_cap: u32,
    pub angle_cap: u32,
}

impl From<&SearchSpec> for SpecJson {
    fn from(s: &SearchSpec) -> Self {
        SpecJson {
            n: s.n,
            k_max: s.effective_k_max(),
            prefilter: s.prefilter,
            lanner_cap: s.lanner_cap,
            quasi_lanner_cap: s.quasi_lanner_cap,
            angle_cap: s.angle_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnresolvedJson {
    pub diagram: String,
    pub error: String,
}

/// Progress token of one finished branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub gale: String,
    /// `done` or `node-budget`.
    pub status: String,
    pub candidates: usize,
    pub search_nodes: u64,
    pub found: Vec<String>,
    pub unresolved: Vec<UnresolvedJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub spec: SpecJson,
    /// Canonical forms of the Gale diagrams still to process.
    pub remaining: Vec<String>,
    pub completed: Vec<Branch>,
}

/// Compact canonical form `k:l1,l2,...:origin`.
pub fn gale_token(g: &GaleDiagram) -> String {
    let labels: Vec<String> = g.labels.iter().map(u32::to_string).collect();
    format!("{}:{}:{}", g.k, labels.join(","), g.origin)
}

pub fn parse_gale_token(s: &str) -> anyhow::Result<GaleDiagram> {
    let parts: Vec<&str> = s.split(':').collect();
    let [k, labels, origin] = parts[..] else {
        bail!("malformed Gale token `{s}`")
    };
    let labels = labels
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<u32>, _>>()?;
    let g = GaleDiagram::new(k.parse()?, labels, origin.parse()?);
    if g.labels.len() != 2 * g.k {
        bail!("malformed Gale token `{s}`");
    }
    Ok(g)
}

fn error_tag(e: &Error) -> String {
    match e {
        Error::Precondition(s) => format!("Precondition: {s}"),
        other => format!("{other:?}"),
    }
}

fn error_from_tag(s: &str) -> Error {
    match s {
        "UnknownEntry" => Error::UnknownEntry,
        "CertificationFailure" => Error::CertificationFailure,
        "NoSolution" => Error::NoSolution,
        "Underdetermined" => Error::Underdetermined,
        "BudgetExceeded" => Error::BudgetExceeded,
        other => Error::Precondition(
            other
                .strip_prefix("Precondition: ")
                .unwrap_or(other)
                .to_string(),
        ),
    }
}

fn branch_of(g: &GaleDiagram, o: &GaleOutcome, status: &str) -> Branch {
    Branch {
        gale: gale_token(g),
        status: status.into(),
        candidates: o.candidates,
        search_nodes: o.search_nodes,
        found: o.found.iter().map(|f| write_coxeter(&f.diagram)).collect(),
        unresolved: o
            .unresolved
            .iter()
            .map(|(d, e)| UnresolvedJson {
                diagram: write_coxeter(d),
                error: error_tag(e),
            })
            .collect(),
    }
}

/// Rebuild an outcome from its token; found diagrams are re-verified.
fn outcome_of(b: &Branch, n: usize) -> anyhow::Result<(GaleDiagram, GaleOutcome)> {
    let g = parse_gale_token(&b.gale)?;
    let asg = FacetAssignment::standard(&g);
    let mut o = GaleOutcome {
        candidates: b.candidates,
        search_nodes: b.search_nodes,
        ..Default::default()
    };
    for text in &b.found {
        let d = parse_coxeter(text)?;
        let certificate = verify_polytope(&d, &g, &asg, n)?;
        if !certificate.valid {
            bail!("checkpointed polytope for {} no longer verifies", b.gale);
        }
        o.found.push(Found {
            key: canonical_key(&d),
            diagram: d,
            gale: g.clone(),
            certificate,
        });
    }
    for u in &b.unresolved {
        o.unresolved
            .push((parse_coxeter(&u.diagram)?, error_from_tag(&u.error)));
    }
    Ok((g, o))
}

pub fn read_checkpoint(path: &Path) -> anyhow::Result<Checkpoint> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let c: Checkpoint = serde_json::from_str(&text)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    if c.format != CHECKPOINT_FORMAT || c.version != CHECKPOINT_VERSION {
        bail!(
            "{} is not a version {CHECKPOINT_VERSION} checkpoint",
            path.display()
        );
    }
    Ok(c)
}

pub fn write_checkpoint(path: &Path, c: &Checkpoint) -> anyhow::Result<()> {
    // write-then-rename so an interrupted save never leaves a torn file
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(c)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

/// Default checkpoint location for a dimension.
pub fn default_checkpoint(n: usize) -> PathBuf {
    PathBuf::from(format!("hypercox-dim{n}.checkpoint.json"))
}

/// The Gale diagrams a run covers, enumerated in parallel over `k` and
/// concatenated in `k` order.
pub fn candidate_gale_diagrams(spec: &SearchSpec) -> Vec<GaleDiagram> {
    let per_k: Vec<Vec<GaleDiagram>> = (2..=spec.effective_k_max())
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            enumerate_k(spec.n, k, &mut |g| {
                if g.origin == 0 && (!spec.prefilter || gale_filter(&g, spec).is_ok()) {
                    out.push(g);
                }
                true
            });
            out
        })
        .collect();
    per_k.into_iter().flatten().collect()
}

struct Shared {
    done: Vec<Option<Branch>>,
    outcomes: Vec<Option<(GaleDiagram, GaleOutcome)>>,
    last_save: Instant,
}

fn snapshot(spec: &SearchSpec, todo: &[GaleDiagram], prior: &[Branch], s: &Shared) -> Checkpoint {
    let remaining = todo
        .iter()
        .zip(&s.done)
        .filter(|(_, d)| d.is_none())
        .map(|(g, _)| gale_token(g))
        .collect();
    let completed = prior
        .iter()
        .chain(s.done.iter().flatten())
        .cloned()
        .collect();
    Checkpoint {
        format: CHECKPOINT_FORMAT.into(),
        version: CHECKPOINT_VERSION,
        spec: spec.into(),
        remaining,
        completed,
    }
}

/// Run the full pipeline for `spec.n` under `opts`.
pub fn run_dimension(spec: &SearchSpec, opts: &DriverOptions) -> anyhow::Result<RunOutcome> {
    if spec.n < 2 {
        bail!("dimension {} < 2", spec.n);
    }
    if opts.jobs == 0 {
        bail!("jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()?;
    pool.install(|| run_in_pool(spec, opts))
}

fn run_in_pool(spec: &SearchSpec, opts: &DriverOptions) -> anyhow::Result<RunOutcome> {
    let start = Instant::now();
    let deadline = opts.budget.map(|b| start + b);
    let mut prior: Vec<Branch> = Vec::new();
    let todo: Vec<GaleDiagram> = match opts
        .checkpoint
        .as_deref()
        .filter(|p| opts.resume && p.exists())
    {
        Some(path) => {
            let c = read_checkpoint(path)?;
            if c.spec != SpecJson::from(spec) {
                bail!(
                    "checkpoint {} was written for different search parameters",
                    path.display()
                );
            }
            let mut todo = c
                .remaining
                .iter()
                .map(|s| parse_gale_token(s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            for b in c.completed {
                if b.status == "done" {
                    prior.push(b);
                } else {
                    todo.push(parse_gale_token(&b.gale)?);
                }
            }
            todo
        }
        None => candidate_gale_diagrams(spec),
    };
    let resumed_branches = prior.len();

    let stop = AtomicBool::new(false);
    let shared = Mutex::new(Shared {
        done: vec![None; todo.len()],
        outcomes: vec![None; todo.len()],
        last_save: Instant::now(),
    });
    todo.par_iter()
        .enumerate()
        .try_for_each(|(i, g)| -> anyhow::Result<()> {
            if stop.load(Ordering::Relaxed) || deadline.is_some_and(|d| Instant::now() >= d) {
                stop.store(true, Ordering::Relaxed);
                return Ok(());
            }
            let (branch, outcome) = match process_gale(g, spec) {
                Ok(o) => (branch_of(g, &o, "done"), o),
                Err(Error::BudgetExceeded) => (
                    branch_of(g, &GaleOutcome::default(), "node-budget"),
                    GaleOutcome::default(),
                ),
                Err(e) => return Err(e).with_context(|| format!("Gale diagram {}", gale_token(g))),
            };
            let mut s = shared
                .lock()
                .expect("no worker panics while holding the lock");
            s.done[i] = Some(branch);
            s.outcomes[i] = Some((g.clone(), outcome));
            if let Some(path) = &opts.checkpoint {
                if s.last_save.elapsed() >= SAVE_INTERVAL {
                    write_checkpoint(path, &snapshot(spec, &todo, &prior, &s))?;
                    s.last_save = Instant::now();
                }
            }
            Ok(())
        })?;
    let shared = shared.into_inner().expect("workers have finished");

    let remaining = shared.done.iter().filter(|d| d.is_none()).count();
    let node_budget_hits: Vec<GaleDiagram> = prior
        .iter()
        .chain(shared.done.iter().flatten())
        .filter(|b| b.status != "done")
        .map(|b| parse_gale_token(&b.gale))
        .collect::<anyhow::Result<_>>()?;
    let status = if remaining == 0 && node_budget_hits.is_empty() {
        Status::Complete
    } else {
        Status::Incomplete
    };

    let mut checkpoint = opts.checkpoint.clone();
    if status == Status::Incomplete && checkpoint.is_none() {
        checkpoint = Some(default_checkpoint(spec.n));
    }
    if let Some(path) = &checkpoint {
        write_checkpoint(path, &snapshot(spec, &todo, &prior, &shared))?;
    }

    let mut outcomes: Vec<(GaleDiagram, GaleOutcome)> = prior
        .iter()
        .map(|b| outcome_of(b, spec.n))
        .collect::<anyhow::Result<_>>()?;
    outcomes.extend(shared.outcomes.into_iter().flatten());
    outcomes.sort_by(|a, b| a.0.cmp(&b.0));
    let mut report = merge_outcomes(spec.n, outcomes);
    report.gale_diagrams = todo.len() + resumed_branches;
    Ok(RunOutcome {
        report,
        status,
        remaining,
        node_budget_hits,
        checkpoint,
        resumed_branches,
        elapsed: start.elapsed(),
    })
}
