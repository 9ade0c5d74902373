//! Batch front-end: generate benchmark instances, evaluate metrics, compute
//! spectra and ranks, run the expansion solvers and the distinguisher, and
//! query the exact oracle, all with machine-readable JSON reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error. `distinguish`
//! always exits 0 on a completed run; the decision lives in the report.

use clap::{Args, Parser, Subcommand};
use modcluster::distinguisher::{self, DistinguisherReport};
use modcluster::generators::FamilySpec;
use modcluster::graph::{Clustering, Graph, NodeSet};
use modcluster::metrics::{self, ClusteringMetrics};
use modcluster::oracle::{self, OracleResult};
use modcluster::profile::ParamProfile;
use modcluster::spectral::{spectral_summary, ResidualView, SpectralSummary};
use modcluster::sse::{self, ExtractionTrace, SseResult};
use serde::Serialize;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

const SCHEMA_VERSION: &str = "1.0";

#[derive(Parser)]
#[command(name = "modcluster", version, about = "Modularity clustering analysis toolkit")]
struct Cli {
    /// Cap the worker thread pool (0 = library default). Output does not
    /// depend on the thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance as an edge list
    Gen(GenArgs),
    /// Evaluate set and clustering metrics for a partition file
    Metrics {
        #[arg(long)]
        graph: PathBuf,
        /// One part per line, space-separated node ids
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk-matrix spectrum and tau-threshold rank
    Rank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an expansion solver on the whole graph
    Sse {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "desk")]
        profile: String,
        /// Target set size for the windowed low-rank solver
        #[arg(long, required_unless_present = "high_rank")]
        target: Option<usize>,
        /// Run the high-rank extractor instead of the windowed solver
        #[arg(long)]
        high_rank: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated high-rank extraction down to a low-rank residual
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "desk")]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide HIGH vs LOW optimal modularity with an exact certificate
    Distinguish {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "desk")]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-candidate trace as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Compare against the exact oracle when the graph is small enough
        #[arg(long)]
        oracle_check: bool,
    },
    /// Exact optima by exhaustive enumeration
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = ["opt", "opt2", "sse"], default_value = "opt")]
        mode: String,
        /// Size band for --mode sse
        #[arg(long)]
        lo: Option<usize>,
        #[arg(long)]
        hi: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the case-closing objective bounds from a profile
    VerifyBounds {
        #[arg(long, default_value = "paper")]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = ["clique_union", "matched_clique_union", "random_regular", "complement_3regular"])]
    family: String,
    /// Number of cliques (clique families)
    #[arg(long)]
    k: Option<usize>,
    /// Clique size (clique families)
    #[arg(long)]
    s: Option<usize>,
    /// Node count (random families)
    #[arg(long)]
    n: Option<usize>,
    /// Degree (random_regular)
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Computation(String),
}

fn usage_err<E: Display>(context: String) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Usage(format!("{context}: {e}"))
}

fn computation_err<E: Display>(context: String) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Computation(format!("{context}: {e}"))
}

#[derive(Serialize)]
struct Manifest {
    subcommand: String,
    input: Option<String>,
    profile: Option<String>,
    seed: Option<u64>,
    output: Option<String>,
}

#[derive(Serialize)]
struct Timings {
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: &'static str,
    manifest: Manifest,
    #[serde(flatten)]
    payload: T,
    timings: Timings,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            // --help / --version
            print!("{e}");
            std::process::exit(0);
        }
    };
    if cli.threads > 0 {
        // build_global fails only if a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(usage_err(format!("cannot read {}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::parse(&read_file(path)?)
        .map_err(computation_err(format!("parsing {}", path.display())))
}

/// `desk` and `paper` name the presets; anything else is a profile file path.
fn load_profile(spec: &str) -> Result<ParamProfile, CliError> {
    match spec {
        "desk" => Ok(ParamProfile::desk()),
        "paper" => Ok(ParamProfile::paper()),
        path => ParamProfile::parse(&read_file(Path::new(path))?)
            .map_err(computation_err(format!("parsing profile {path}"))),
    }
}

fn parse_partition_file(text: &str, n: usize) -> Result<Clustering, CliError> {
    let mut parts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let members = line
            .split_whitespace()
            .map(|tok| tok.parse::<u32>())
            .collect::<Result<Vec<u32>, _>>()
            .map_err(computation_err(format!("partition line {}", idx + 1)))?;
        parts.push(
            NodeSet::new(members)
                .map_err(computation_err(format!("partition line {}", idx + 1)))?,
        );
    }
    Clustering::new(n, parts).map_err(computation_err("partition file".into()))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(computation_err(format!("writing {}", path.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(
    out: Option<&PathBuf>,
    manifest: Manifest,
    payload: T,
    started: Instant,
) -> Result<(), CliError> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        manifest,
        payload,
        timings: Timings { elapsed_ms: started.elapsed().as_secs_f64() * 1e3 },
    };
    let text = serde_json::to_string_pretty(&report)
        .map_err(computation_err("serializing report".into()))?;
    emit(out, &(text + "\n"))
}

fn manifest(
    subcommand: &str,
    input: Option<&Path>,
    profile: Option<&str>,
    seed: Option<u64>,
    output: Option<&PathBuf>,
) -> Manifest {
    Manifest {
        subcommand: subcommand.to_string(),
        input: input.map(|p| p.display().to_string()),
        profile: profile.map(|s| s.to_string()),
        seed,
        output: output.map(|p| p.display().to_string()),
    }
}

#[derive(Serialize)]
struct PartReport {
    part: usize,
    size: usize,
    mu: f64,
    /// Absent when the part is the whole node set.
    phi: Option<f64>,
    density: Option<f64>,
    modularity: f64,
}

#[derive(Serialize)]
struct MetricsPayload {
    n: usize,
    m: usize,
    parts: Vec<PartReport>,
    clustering: ClusteringMetrics,
}

#[derive(Serialize)]
struct RankPayload {
    n: usize,
    d: u32,
    summary: SpectralSummary,
}

#[derive(Serialize)]
struct SsePayload {
    result: SseResult,
}

#[derive(Serialize)]
struct ExtractPayload {
    trace: ExtractionTrace,
}

#[derive(Serialize)]
struct PromiseCheck {
    opt_exact: f64,
    /// Whether the instance actually lies in one of the two promise classes;
    /// when false the decision is reported anyway but carries no guarantee.
    within_promise: bool,
}

#[derive(Serialize)]
struct DistinguishPayload {
    #[serde(flatten)]
    report: DistinguisherReport,
    /// Present only under --oracle-check on oracle-sized graphs.
    promise_check: Option<PromiseCheck>,
}

#[derive(Serialize)]
struct OraclePayload {
    mode: String,
    result: OracleResult,
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    let started = Instant::now();
    match cmd {
        Command::Gen(args) => {
            let spec = family_spec(&args)?;
            let graph = spec.generate().map_err(computation_err("generator".into()))?;
            let text =
                graph.to_edge_list(&[spec.header(), format!("n={} m={}", graph.n(), graph.m())]);
            emit(args.out.as_ref(), &text)
        }
        Command::Metrics { graph, partition, out } => {
            let g = load_graph(&graph)?;
            let clustering = parse_partition_file(&read_file(&partition)?, g.n())?;
            let cm = metrics::clustering_metrics(&g, &clustering)
                .map_err(computation_err("metrics".into()))?;
            let mut parts = Vec::new();
            for (i, part) in clustering.parts().iter().enumerate() {
                let proper = part.len() < g.n();
                let phi = if proper {
                    Some(
                        metrics::expansion(&g, part)
                            .map_err(computation_err(format!("expansion of part {i}")))?,
                    )
                } else {
                    None
                };
                parts.push(PartReport {
                    part: i,
                    size: part.len(),
                    mu: part.len() as f64 / g.n() as f64,
                    phi,
                    density: phi.map(|p| 1.0 - p),
                    modularity: metrics::modularity_set(&g, part)
                        .map_err(computation_err(format!("modularity of part {i}")))?,
                });
            }
            emit_report(
                out.as_ref(),
                manifest("metrics", Some(&graph), None, None, out.as_ref()),
                MetricsPayload { n: g.n(), m: g.m(), parts, clustering: cm },
                started,
            )
        }
        Command::Rank { graph, tau, out } => {
            if !(0.0..1.0).contains(&tau) {
                return Err(CliError::Usage(format!("tau must lie in [0, 1), got {tau}")));
            }
            let g = load_graph(&graph)?;
            let view = ResidualView::fresh(&g).map_err(computation_err("rank".into()))?;
            let d = view.d();
            let summary = spectral_summary(&view, tau);
            emit_report(
                out.as_ref(),
                manifest("rank", Some(&graph), None, None, out.as_ref()),
                RankPayload { n: g.n(), d, summary },
                started,
            )
        }
        Command::Sse { graph, profile, target, high_rank, out } => {
            let g = load_graph(&graph)?;
            let p = load_profile(&profile)?;
            let view = ResidualView::fresh(&g).map_err(computation_err("sse".into()))?;
            let result = if high_rank {
                sse::sse_high_rank_extract(&view, &p)
            } else {
                sse::sse_low_rank(&view, target.expect("enforced by clap"), &p)
            }
            .map_err(computation_err("sse".into()))?;
            emit_report(
                out.as_ref(),
                manifest("sse", Some(&graph), Some(&profile), Some(p.seed), out.as_ref()),
                SsePayload { result },
                started,
            )
        }
        Command::Extract { graph, profile, out } => {
            let g = load_graph(&graph)?;
            let p = load_profile(&profile)?;
            let trace =
                sse::extract_partition(&g, &p).map_err(computation_err("extract".into()))?;
            emit_report(
                out.as_ref(),
                manifest("extract", Some(&graph), Some(&profile), Some(p.seed), out.as_ref()),
                ExtractPayload { trace },
                started,
            )
        }
        Command::Distinguish { graph, profile, out, csv, oracle_check } => {
            let g = load_graph(&graph)?;
            let p = load_profile(&profile)?;
            let report =
                distinguisher::run(&g, &p).map_err(computation_err("distinguish".into()))?;
            if let Some(csv_path) = &csv {
                write_trace_csv(csv_path, &report)?;
            }
            let promise_check = if oracle_check && g.n() <= oracle::OPT_EXACT_MAX_N {
                let opt = oracle::opt_exact(&g)
                    .map_err(computation_err("oracle check".into()))?
                    .value;
                Some(PromiseCheck {
                    opt_exact: opt,
                    within_promise: opt >= 1.0 - p.eps || opt <= p.eps,
                })
            } else {
                None
            };
            emit_report(
                out.as_ref(),
                manifest("distinguish", Some(&graph), Some(&profile), Some(p.seed), out.as_ref()),
                DistinguishPayload { report, promise_check },
                started,
            )
        }
        Command::Oracle { graph, mode, lo, hi, out } => {
            let g = load_graph(&graph)?;
            let result = match mode.as_str() {
                "opt" => oracle::opt_exact(&g),
                "opt2" => oracle::opt2_exact(&g),
                "sse" => {
                    let (lo, hi) = match (lo, hi) {
                        (Some(lo), Some(hi)) => (lo, hi),
                        _ => {
                            return Err(CliError::Usage(
                                "--mode sse requires --lo and --hi".into(),
                            ))
                        }
                    };
                    oracle::sse_exact(&g, lo, hi)
                }
                _ => unreachable!("enforced by clap"),
            }
            .map_err(computation_err("oracle".into()))?;
            emit_report(
                out.as_ref(),
                manifest("oracle", Some(&graph), None, None, out.as_ref()),
                OraclePayload { mode, result },
                started,
            )
        }
        Command::VerifyBounds { profile, out } => {
            let p = load_profile(&profile)?;
            let report = distinguisher::verify_paper_bounds(&p);
            let ok = report.all_exceed_eps;
            emit_report(
                out.as_ref(),
                manifest("verify-bounds", None, Some(&profile), None, out.as_ref()),
                report,
                started,
            )?;
            if !ok {
                return Err(CliError::Computation(
                    "a case-closing bound does not exceed eps; the profile is mis-set".into(),
                ));
            }
            Ok(())
        }
    }
}

fn family_spec(args: &GenArgs) -> Result<FamilySpec, CliError> {
    let need = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| {
            CliError::Usage(format!("--{name} is required for family {}", args.family))
        })
    };
    Ok(match args.family.as_str() {
        "clique_union" => FamilySpec::CliqueUnion { k: need(args.k, "k")?, s: need(args.s, "s")? },
        "matched_clique_union" => FamilySpec::MatchedCliqueUnion {
            k: need(args.k, "k")?,
            s: need(args.s, "s")?,
            seed: args.seed,
        },
        "random_regular" => FamilySpec::RandomRegular {
            n: need(args.n, "n")?,
            d: need(args.d, "d")?,
            seed: args.seed,
        },
        "complement_3regular" => {
            FamilySpec::Complement3Regular { n: need(args.n, "n")?, seed: args.seed }
        }
        _ => unreachable!("enforced by clap"),
    })
}

fn write_trace_csv(path: &Path, report: &DistinguisherReport) -> Result<(), CliError> {
    let mut text = String::from("case,s_target,size,mu,phi,density,f_exact,d_star_nearest,set\n");
    for c in &report.trace {
        let case = match c.case {
            distinguisher::CaseTag::CaseI => "case-i",
            distinguisher::CaseTag::CaseIIa => "case-iia",
            distinguisher::CaseTag::CaseIIb => "case-iib",
        };
        let target = c.s_target.map_or(String::new(), |s| s.to_string());
        let members = c.set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        text.push_str(&format!(
            "{case},{target},{},{},{},{},{},{},\"{members}\"\n",
            c.size, c.mu, c.phi, c.density, c.f_exact, c.d_star_nearest
        ));
    }
    std::fs::write(path, text).map_err(computation_err(format!("writing {}", path.display())))
}
