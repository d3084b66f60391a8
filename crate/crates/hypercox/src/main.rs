use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hypercox::driver::{run_dimension, DriverOptions, RunOutcome, Status};
use hypercox::format::{parse_coxeter, parse_gale};
use hypercox::json::{CertificateJson, ClassifyJson, FacesJson, GaleJson, PolytopeJson};
use hypercox::theorem::{reproduce, TheoremOptions, PYRAMID_DIMENSION_BOUND};
use hypercox_core::gale::{faces, vertices, FacetAssignment};
use hypercox_core::pyramid::{
    audit_other_pyramids, enumerate_pyramids_up_to, PYRAMID_MAX_DIMENSION,
};
use hypercox_core::search::SearchSpec;
use hypercox_core::verify::{dotted_orbits, solve_dotted_weights_with, verify_polytope};
use serde::Serialize;

/// Exit statuses: success, failed assertion, bad input, budget exhausted.
const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hypercox",
    version,
    about = "Hyperbolic Coxeter polytopes with n + 3 facets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a Coxeter diagram and print its Gram matrix and signature.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Certify a Coxeter diagram against a Gale diagram.
    Verify {
        file: PathBuf,
        /// Gale diagram; defaults to FILE with the extension `.gale`.
        #[arg(long)]
        gale: Option<PathBuf>,
        /// Dimension; defaults to the label sum of the Gale diagram minus 3.
        #[arg(long)]
        dim: Option<usize>,
        /// Give unknown dotted edges in one orbit of the diagram's automorphism group equal weights.
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        json: bool,
    },
    /// Inspect a Gale diagram.
    Gale {
        #[command(subcommand)]
        action: GaleAction,
    },
    /// Classify all non-pyramid polytopes of one dimension.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify the pyramids over products of three simplices.
    Pyramids {
        #[arg(long, default_value_t = PYRAMID_MAX_DIMENSION)]
        max_dim: usize,
        /// Also run the pipeline on pyramid Gale diagrams of other types up to this dimension.
        #[arg(long)]
        audit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check emptiness in dimension 17, uniqueness in 16 and the pyramid bound.
    ReproduceTheorem {
        #[arg(long, default_value = "fixtures/h16.cox")]
        fixture: PathBuf,
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum GaleAction {
    /// Check the standardness rules.
    Validate { file: PathBuf },
    /// List faces and vertices as facet subsets.
    Faces {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Skip the Gale-level filters and arc constraints.
    #[arg(long)]
    no_prefilter: bool,
    #[arg(long, default_value_t = default_jobs(), value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, env = "HYPERCOX_BUDGET_SECS", default_value_t = 1800, value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: u64,
    /// Search-node budget per Gale diagram.
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint if it exists.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[arg(long)]
    json: bool,
}

fn default_jobs() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

impl RunArgs {
    fn driver(&self) -> DriverOptions {
        DriverOptions {
            jobs: self.jobs as usize,
            budget: Some(Duration::from_secs(self.budget_secs)),
            checkpoint: self.checkpoint.clone(),
            resume: self.resume,
        }
    }

    fn overrides(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.no_prefilter {
            v.push("prefilter off".to_string());
        }
        if let Some(b) = self.node_budget {
            v.push(format!("node budget {b}"));
        }
        v
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn classify_cmd(file: &Path, json: bool) -> anyhow::Result<u8> {
    let d = parse_coxeter(&read(file)?).with_context(|| file.display().to_string())?;
    let c = ClassifyJson::new(&d)?;
    if json {
        print_json(&c)?;
    } else {
        let extra = match (&c.connected, &c.components) {
            (Some(false), _) => " (disconnected)".to_string(),
            (_, Some(names)) => format!(" ({})", names.join(" + ")),
            _ => String::new(),
        };
        println!("{} nodes: {}{extra}", c.nodes, c.class);
        println!(
            "signature ({}, {}, {})",
            c.signature[0], c.signature[1], c.signature[2]
        );
        for row in &c.gram.exact_terms {
            println!("  {}", row.join("  "));
        }
    }
    Ok(EXIT_OK)
}

fn verify_cmd(
    file: &Path,
    gale: Option<&Path>,
    dim: Option<usize>,
    symmetric: bool,
    json: bool,
) -> anyhow::Result<u8> {
    let d = parse_coxeter(&read(file)?).with_context(|| file.display().to_string())?;
    let gpath = gale.map_or_else(|| file.with_extension("gale"), Path::to_path_buf);
    let g = parse_gale(&read(&gpath)?).with_context(|| gpath.display().to_string())?;
    let n = match dim {
        Some(n) => n,
        None => usize::try_from(g.dimension()).context("Gale diagram has fewer than 3 facets")?,
    };
    let asg = FacetAssignment::standard(&g);
    let orbits = if symmetric {
        Some(dotted_orbits(&d)?)
    } else {
        None
    };
    let solved = solve_dotted_weights_with(&d, &g, &asg, n, orbits.as_deref())?;
    let cert = verify_polytope(&solved, &g, &asg, n)?;
    let out = PolytopeJson {
        diagram: hypercox::format::write_coxeter(&solved),
        gale: (&g).into(),
        certificate: CertificateJson::new(&cert, &solved),
    };
    if json {
        print_json(&out)?;
    } else {
        let c = &out.certificate;
        println!(
            "{}: {} facets, dimension {}",
            c.verdict, c.facets, c.dimension
        );
        if let Some(s) = c.signature {
            println!("signature ({}, {}, {})", s[0], s[1], s[2]);
        }
        println!(
            "{} vertices ({} ideal), {}",
            c.vertices.len(),
            c.ideal_vertices(),
            if c.compact { "compact" } else { "non-compact" }
        );
        for f in &c.failures {
            println!("  failed: {f}");
        }
    }
    Ok(if cert.valid { EXIT_OK } else { EXIT_FAILED })
}

fn gale_cmd(action: &GaleAction) -> anyhow::Result<u8> {
    let (GaleAction::Validate { file } | GaleAction::Faces { file, .. }) = action;
    let g = parse_gale(&read(file)?).with_context(|| file.display().to_string())?;
    match action {
        GaleAction::Validate { .. } => {
            let v = g.validate();
            if v.is_empty() {
                let kind = if g.is_pyramid() {
                    "standard pyramid"
                } else {
                    "standard"
                };
                println!("{kind}, n={}", g.dimension());
                Ok(EXIT_OK)
            } else {
                println!("not standard");
                for r in v {
                    println!("  {r}");
                }
                Ok(EXIT_FAILED)
            }
        }
        GaleAction::Faces { json, .. } => {
            let asg = FacetAssignment::standard(&g);
            let out = FacesJson {
                faces: faces(&g, &asg)?,
                vertices: vertices(&g, &asg)?,
            };
            if *json {
                print_json(&out)?;
            } else {
                println!("{} faces, {} vertices", out.faces.len(), out.vertices.len());
                for v in &out.vertices {
                    println!("  vertex {v:?}");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct EnumerateJson {
    dimension: usize,
    /// `complete` or `incomplete`.
    status: String,
    gale_diagrams: usize,
    candidates: usize,
    search_nodes: u64,
    polytopes: Vec<PolytopeJson>,
    /// Candidates whose dotted weights or signature could not be decided, by reason.
    unresolved: BTreeMap<String, usize>,
    remaining: usize,
    node_budget_hits: Vec<GaleJson>,
    checkpoint: Option<String>,
    overrides: Vec<String>,
}

fn enumerate_json(r: &RunOutcome, overrides: Vec<String>) -> EnumerateJson {
    let mut unresolved = BTreeMap::new();
    for (_, _, e) in &r.report.unresolved {
        *unresolved.entry(format!("{e:?}")).or_insert(0) += 1;
    }
    EnumerateJson {
        dimension: r.report.n,
        status: if r.status == Status::Complete {
            "complete"
        } else {
            "incomplete"
        }
        .into(),
        gale_diagrams: r.report.gale_diagrams,
        candidates: r.report.candidates,
        search_nodes: r.report.search_nodes,
        polytopes: r.report.found.iter().map(PolytopeJson::new).collect(),
        unresolved,
        remaining: r.remaining,
        node_budget_hits: r.node_budget_hits.iter().map(GaleJson::from).collect(),
        checkpoint: r.checkpoint.as_ref().map(|p| p.display().to_string()),
        overrides,
    }
}

fn gale_line(g: &GaleJson) -> String {
    let labels: Vec<String> = g.labels.iter().map(u32::to_string).collect();
    format!(
        "k={} labels [{}] origin {}",
        g.k,
        labels.join(" "),
        g.origin
    )
}

fn enumerate_cmd(dim: usize, k_max: Option<usize>, run: &RunArgs) -> anyhow::Result<u8> {
    let spec = SearchSpec {
        k_max,
        prefilter: !run.no_prefilter,
        node_budget: run.node_budget,
        ..SearchSpec::new(dim)
    };
    let mut overrides = run.overrides();
    if let Some(k) = k_max {
        overrides.push(format!("k_max {k}"));
    }
    let r = run_dimension(&spec, &run.driver())?;
    eprintln!("elapsed {:.1}s", r.elapsed.as_secs_f64());
    let out = enumerate_json(&r, overrides);
    if run.json {
        print_json(&out)?;
    } else {
        println!(
            "dimension {}: {} polytope(s), {} ({} Gale diagrams, {} candidates, {} search nodes)",
            out.dimension,
            out.polytopes.len(),
            out.status,
            out.gale_diagrams,
            out.candidates,
            out.search_nodes
        );
        for (i, p) in out.polytopes.iter().enumerate() {
            let c = &p.certificate;
            println!(
                "polytope {}: {}; {} facets, {} vertices ({} ideal)",
                i + 1,
                gale_line(&p.gale),
                c.facets,
                c.vertices.len(),
                c.ideal_vertices()
            );
            for line in p.diagram.lines().skip(2) {
                println!("  {line}");
            }
        }
        for (reason, count) in &out.unresolved {
            println!("unresolved ({reason}): {count}");
        }
        if !out.overrides.is_empty() {
            println!("overrides: {}", out.overrides.join(", "));
        }
        if out.remaining > 0 || !out.node_budget_hits.is_empty() {
            println!(
                "budget exhausted: {} Gale diagrams not started, {} over the node budget",
                out.remaining,
                out.node_budget_hits.len()
            );
        }
        if let Some(p) = &out.checkpoint {
            println!("checkpoint: {p}");
        }
    }
    Ok(if r.status == Status::Complete {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

#[derive(Serialize)]
struct PyramidsJson {
    shapes: usize,
    max_dimension: Option<usize>,
    bound: usize,
    polytopes: Vec<PolytopeJson>,
    unresolved: usize,
    audit: Option<Vec<(usize, usize)>>,
}

fn pyramids_cmd(max_dim: usize, audit: Option<usize>, json: bool) -> anyhow::Result<u8> {
    let spec = SearchSpec::new(max_dim);
    let rep = enumerate_pyramids_up_to(&spec, max_dim)?;
    let audit = match audit {
        Some(m) => {
            let mut v = Vec::new();
            for n in 4..=m {
                v.push((n, audit_other_pyramids(&spec, n)?.found.len()));
            }
            Some(v)
        }
        None => None,
    };
    let out = PyramidsJson {
        shapes: rep.shapes,
        max_dimension: rep.max_dimension(),
        bound: PYRAMID_DIMENSION_BOUND,
        polytopes: rep.found().map(PolytopeJson::new).collect(),
        unresolved: rep.unresolved(),
        audit,
    };
    let within = out
        .max_dimension
        .map_or(true, |m| m <= PYRAMID_DIMENSION_BOUND);
    let audit_clean = out.audit.iter().flatten().all(|&(_, found)| found == 0);
    if json {
        print_json(&out)?;
    } else {
        for d in &rep.dimensions {
            println!("dimension {}: {} pyramid(s)", d.n, d.found.len());
        }
        println!(
            "{} shapes, largest dimension {:?} (bound {})",
            out.shapes, out.max_dimension, out.bound
        );
        if out.unresolved > 0 {
            println!("unresolved candidates: {}", out.unresolved);
        }
        for (n, found) in out.audit.iter().flatten() {
            println!("audit dimension {n}: {found} certified pyramid(s) of other types");
        }
    }
    Ok(if !within || !audit_clean {
        EXIT_FAILED
    } else if out.unresolved > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn theorem_cmd(fixture: &Path, k_max: Option<usize>, run: &RunArgs) -> anyhow::Result<u8> {
    let opts = TheoremOptions {
        driver: run.driver(),
        fixture,
        prefilter: !run.no_prefilter,
        k_max,
    };
    let mut rep = reproduce(&opts)?;
    rep.overrides
        .extend(run.overrides().into_iter().filter(|o| o != "prefilter off"));
    if run.json {
        print_json(&rep)?;
    } else {
        for a in &rep.assertions {
            println!(
                "[{}] {}: {}",
                if a.passed { "pass" } else { "FAIL" },
                a.name,
                a.detail
            );
        }
        if rep.fixture == "missing" {
            println!("fixture missing: {}", fixture.display());
        }
        if !rep.overrides.is_empty() {
            println!("overrides: {}", rep.overrides.join(", "));
        }
        if rep.incomplete {
            println!("some runs stopped early; rerun with --resume to finish");
        }
    }
    Ok(if rep.incomplete {
        EXIT_BUDGET
    } else if rep.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { file, json } => classify_cmd(file, *json),
        Command::Verify {
            file,
            gale,
            dim,
            symmetric,
            json,
        } => verify_cmd(file, gale.as_deref(), *dim, *symmetric, *json),
        Command::Gale { action } => gale_cmd(action),
        Command::Enumerate { dim, k_max, run } => enumerate_cmd(*dim, *k_max, run),
        Command::Pyramids {
            max_dim,
            audit,
            json,
        } => pyramids_cmd(*max_dim, *audit, *json),
        Command::ReproduceTheorem {
            fixture,
            k_max,
            run,
        } => theorem_cmd(fixture, *k_max, run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
