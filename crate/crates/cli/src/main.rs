//! `severi`: enumerate small profiles, build landscapes, draw partition
//! graphs and run the verification sweeps.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on a usage
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use severi_landscape::curve::verify_example;
use severi_landscape::landscape::{build_landscape, enumerate_small_profiles, LandscapeGraph};
use severi_landscape::partition::{graph_geq, graph_leq, graph_p, PartitionGraph};
use severi_landscape::profile::ProfileDocument;
use severi_landscape::verify::{all_contexts, run_suite, Suite, SuiteOptions, MAX_DEGREE, MAX_N};
use severi_landscape::{EnumerationContext, LegSymmetry};

#[derive(Parser)]
#[command(name = "severi", version, about = "Small landscapes of plane curve degenerations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the small profiles of a context.
    Enumerate(ContextArgs),
    /// Build the landscape graph of a context.
    Landscape(ContextArgs),
    /// Decide landscape connectivity for one context or for every context up to `--dmax`.
    Connectivity(ConnectivityArgs),
    /// Draw a partition merge graph.
    Partitions(PartitionArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Check the explicit rational curve of a given degree.
    Curve(CurveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Legs {
    /// Legs with equal multiplicity are interchangeable.
    Multiplicity,
    /// Every leg keeps its index.
    Labeled,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ContextArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    g: u32,
    /// Comma-separated multiplicities; all ones when omitted.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "multiplicity")]
    legs: Legs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConnectivityArgs {
    #[arg(long, requires = "g", conflicts_with = "dmax")]
    d: Option<u32>,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u32>>,
    /// Sweep every context with degree at most this.
    #[arg(long)]
    dmax: Option<u32>,
    #[arg(long, value_enum, default_value = "multiplicity")]
    legs: Legs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PartitionArgs {
    /// Single-vertex graph of degree `d` (with `--g`).
    #[arg(long, requires = "g")]
    d: Option<u32>,
    #[arg(long)]
    g: Option<u32>,
    /// Partitions of `n` (with `--geq` or `--leq`).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "leq")]
    geq: Option<i64>,
    #[arg(long)]
    leq: Option<i64>,
    /// Draw rejected merges as dashed edges.
    #[arg(long)]
    rejected: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    All,
    Lemmas,
    Identities,
    Landscape,
    Curve,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteName,
    #[arg(long, default_value_t = 7)]
    dmax: u32,
    #[arg(long, default_value_t = 12)]
    nmax: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// How a command ended, short of an I/O failure.
enum Failure {
    Usage(String),
    Verification(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| usage(format!("stdout: {e}")))
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn symmetry(legs: Legs) -> LegSymmetry {
    match legs {
        Legs::Multiplicity => LegSymmetry::Multiplicity,
        Legs::Labeled => LegSymmetry::Labeled,
    }
}

fn context(d: u32, g: u32, m: &Option<Vec<u32>>, legs: Legs) -> Result<EnumerationContext, Failure> {
    let m = m.clone().unwrap_or_else(|| vec![1; d as usize]);
    EnumerationContext::new(d, g, m)
        .map(|ctx| ctx.with_leg_symmetry(symmetry(legs)))
        .map_err(usage)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn enumerate(args: &ContextArgs) -> Outcome {
    let ctx = context(args.d, args.g, &args.m, args.legs)?;
    let profiles = enumerate_small_profiles(&ctx);
    let count = plural(profiles.len(), "profile");
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = format!("{count}\n");
            for p in &profiles {
                s.push_str(&format!("{}\n", ctx.canonical_key(p)));
            }
            s
        }
        Format::Json => {
            eprintln!("{count}");
            let docs: Vec<ProfileDocument> =
                profiles.iter().map(|p| ProfileDocument::verbatim(p, &ctx)).collect();
            pretty(&docs)
        }
        Format::Dot => {
            eprintln!("{count}");
            // A landscape without edges draws every profile in the same style.
            let gallery = LandscapeGraph {
                context: ctx.clone(),
                nodes: build_landscape(&ctx).map_err(|e| Failure::Verification(e.to_string()))?.nodes,
                edges: Vec::new(),
            };
            gallery.to_dot()
        }
    };
    emit(&args.output.out, &text)
}

fn landscape(args: &ContextArgs) -> Outcome {
    let ctx = context(args.d, args.g, &args.m, args.legs)?;
    let graph = build_landscape(&ctx).map_err(|e| Failure::Verification(e.to_string()))?;
    let conn = graph.connectivity().map_err(|e| Failure::Verification(e.to_string()))?;
    let sub = graph.sublandscape_report();
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = format!(
                "{}, {}, {}\n",
                plural(graph.node_count(), "node"),
                plural(graph.edge_count(), "edge"),
                if conn.connected { "connected" } else { "disconnected" }
            );
            for (i, n) in graph.nodes.iter().enumerate() {
                s.push_str(&format!("{i}: {}\n", n.key));
            }
            for e in &graph.edges {
                s.push_str(&format!("{} -- {} {}\n", e.a, e.b, e.op));
            }
            s.push_str(&format!(
                "single-vertex sub-landscape {} the partition graph\n",
                if sub.ok { "matches" } else { "does not match" }
            ));
            s
        }
        Format::Json => {
            let mut value = graph.to_json();
            value["connected"] = json!(conn.connected);
            value["certificate"] = json!(conn.certificate);
            value["sublandscape"] = json!(sub);
            pretty(&value)
        }
        Format::Dot => graph.to_dot(),
    };
    emit(&args.output.out, &text)
}

fn connectivity(args: &ConnectivityArgs) -> Outcome {
    let format = args.output.format.unwrap_or(Format::Json);
    if format == Format::Dot {
        return Err(usage("connectivity output is json or text"));
    }
    let contexts = match (args.d, args.g, args.dmax) {
        (Some(d), Some(g), None) => vec![context(d, g, &args.m, args.legs)?],
        (None, _, Some(dmax)) if dmax <= MAX_DEGREE => all_contexts(dmax, symmetry(args.legs)),
        (None, _, Some(dmax)) => return Err(usage(format!("--dmax {dmax} exceeds {MAX_DEGREE}"))),
        _ => return Err(usage("give --d and --g, or --dmax")),
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for ctx in &contexts {
        let verdict = build_landscape(ctx).and_then(|g| g.connectivity().map(|c| (g, c)));
        match verdict {
            Ok((graph, conn)) => {
                if !conn.connected || !graph.verify_certificate(&conn.certificate) {
                    failures.push(ctx.to_string());
                }
                results.push(json!({
                    "context": ctx,
                    "nodes": graph.node_count(),
                    "edges": graph.edge_count(),
                    "connected": conn.connected,
                    "certificate": if contexts.len() == 1 { json!(conn.certificate) } else { json!(null) },
                }));
            }
            Err(e) => {
                failures.push(format!("{ctx}: {e}"));
                results.push(json!({ "context": ctx, "error": e.to_string() }));
            }
        }
    }
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&format!("{} connected={}\n", r["context"], r["connected"]));
            }
            s.push_str(&format!(
                "{} of {} connected\n",
                contexts.len() - failures.len(),
                contexts.len()
            ));
            s
        }
        _ => pretty(&json!({ "contexts": contexts.len(), "failures": failures, "results": results })),
    };
    emit(&args.output.out, &text)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} disconnected", failures.len())))
    }
}

fn partitions(args: &PartitionArgs) -> Outcome {
    let graph: PartitionGraph = match (args.d, args.g, args.n, args.geq, args.leq) {
        (Some(d), Some(g), None, None, None) => {
            let max = severi_landscape::choose2(i64::from(d) - 1);
            if d < 2 || i64::from(g) > max {
                return Err(usage(format!("need d ≥ 2 and g ≤ {max}")));
            }
            graph_p(d, g)
        }
        (None, None, Some(n), Some(k), None) if n >= 1 && k <= i64::from(n) => graph_geq(n, k),
        (None, None, Some(n), None, Some(k)) if n >= 1 && k >= 1 => graph_leq(n, k),
        _ => return Err(usage("give --d and --g, or --n with --geq or --leq (k ≤ n)")),
    };
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Dot => graph.to_dot(args.rejected),
        Format::Json => pretty(&graph),
        Format::Text => {
            let connected = match graph.is_connected() {
                Ok(c) => if c { "connected" } else { "disconnected" }.to_string(),
                Err(e) => e.to_string(),
            };
            let mut s = format!(
                "{}, {}, {connected}\n",
                plural(graph.node_count(), "node"),
                plural(graph.edge_count(), "edge")
            );
            for e in &graph.edges {
                s.push_str(&format!("{} -- {}\n", graph.nodes[e.from], graph.nodes[e.to]));
            }
            for w in &graph.warnings {
                s.push_str(&format!("warning: {w}\n"));
            }
            s
        }
    };
    emit(&args.output.out, &text)
}

fn verify(args: &VerifyArgs) -> Outcome {
    if args.dmax > MAX_DEGREE || args.dmax < 2 {
        return Err(usage(format!("--dmax must lie in 2..={MAX_DEGREE}")));
    }
    if args.nmax > MAX_N || args.nmax < 3 {
        return Err(usage(format!("--nmax must lie in 3..={MAX_N}")));
    }
    if !(1e-12..=1e-6).contains(&args.tol) {
        return Err(usage("--tol must lie in [1e-12, 1e-6]"));
    }
    let suite = match args.suite {
        SuiteName::All => Suite::All,
        SuiteName::Lemmas => Suite::Lemmas,
        SuiteName::Identities => Suite::Identities,
        SuiteName::Landscape => Suite::Landscape,
        SuiteName::Curve => Suite::Curve,
    };
    let options = SuiteOptions {
        dmax: args.dmax,
        nmax: args.nmax,
        tol: args.tol,
        seed: args.seed,
    };
    let report = run_suite(suite, &options);
    emit(&args.out, &pretty(&report))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} failing cases", report.failures.len())))
    }
}

fn curve(args: &CurveArgs) -> Outcome {
    let report = verify_example(args.d, args.tol, args.seed).map_err(usage)?;
    emit(&args.out, &pretty(&report))?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("degree {} check failed", args.d)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Landscape(a) => landscape(a),
        Command::Connectivity(a) => connectivity(a),
        Command::Partitions(a) => partitions(a),
        Command::Verify(a) => verify(a),
        Command::Curve(a) => curve(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `severi --help` for usage.");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
