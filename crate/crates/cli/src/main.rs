//! `sqw`: run staggered quantum walks, solve the resonator circuit and
//! compile flux schedules from the command line.

mod angle;
mod output;
mod plot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sqw_core::circuit::{flux_sweep, CircuitParams, CircuitReport};
use sqw_core::graph::{
    generate_lattice_tessellations, generate_path_tessellations, greedy_tessellate, Graph, TessellationSet,
};
use sqw_core::io::parse_graph_json;
use sqw_core::schedule::{compile_schedule, emit_schedule, parse_schedule, validate_schedule};
use sqw_core::walk::{initial_basis_state, spread_statistics, Convention, StaggeredWalk, WalkConfig};
use sqw_core::ErrorClass;

use crate::output::{csv, fmt_f64, pretty_json, OutputSet};

/// Bad invocation: exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "sqw", version, about = "Staggered quantum walks on resonator arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a walker and write its probability distribution per step.
    Walk(WalkOpts),
    /// Solve the resonator circuit for the on/off coupler settings.
    Circuit(CircuitOpts),
    /// Compile a walk into a per-SQUID flux pulse schedule.
    Schedule(ScheduleOpts),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Linear array of N resonators.
    #[arg(long, value_name = "N")]
    path: Option<usize>,
    /// Rectangular lattice, e.g. `3,3` or `4,4,2` (row-major numbering).
    #[arg(long, value_name = "D1,D2[,D3]", value_delimiter = ',')]
    lattice: Option<Vec<usize>>,
    /// Graph JSON file; tessellations are generated when it has none.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct WalkOpts {
    #[command(flatten)]
    source: GraphSource,
    /// Angle θ per local unitary: decimal or `pi/3`-style.
    #[arg(long, default_value = "pi/3", value_parser = angle::parse_angle, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    /// Starting node; defaults to the middle node.
    #[arg(long)]
    start: Option<usize>,
    #[arg(long, default_value_t = Convention::Physical)]
    convention: Convention,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
    /// Also write an SVG bar chart of the final distribution.
    #[arg(long)]
    plot: bool,
    /// Update disjoint pairs in parallel (thread count from SQW_THREADS).
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct CircuitOpts {
    /// Circuit parameter JSON; the built-in reference device otherwise.
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    /// Angle used to derive the pulse length for the feasibility notes.
    #[arg(long, default_value = "pi/3", value_parser = angle::parse_angle, allow_hyphen_values = true)]
    theta: f64,
    /// Sample one coupler's flux over [0, Φ₀] at this many points.
    #[arg(long, value_name = "POINTS")]
    sweep: Option<usize>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ScheduleOpts {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value = "pi/3", value_parser = angle::parse_angle, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    /// Check an existing schedule file against the graph instead of compiling.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["out", "params"])]
    validate: Option<PathBuf>,
    #[arg(long, value_name = "DIR", required_unless_present = "validate")]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

struct LoadedInput {
    graph: Graph,
    tessellations: TessellationSet,
    source: &'static str,
}

fn read_input(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(UsageError(format!("input file {} does not exist", path.display())).into());
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(source: &GraphSource) -> Result<LoadedInput> {
    let (graph, tessellations, source) = if let Some(n) = source.path {
        let (g, ts) = generate_path_tessellations(n)?;
        (g, ts, "path")
    } else if let Some(dims) = &source.lattice {
        let (g, ts) = generate_lattice_tessellations(dims)?;
        (g, ts, "lattice")
    } else {
        let file = source.graph.as_deref().expect("clap enforces one graph source");
        let loaded = parse_graph_json(&read_input(file)?).with_context(|| format!("in {}", file.display()))?;
        match loaded.tessellations {
            Some(ts) => (loaded.graph, ts, "file"),
            None => {
                let ts = greedy_tessellate(&loaded.graph)?;
                (loaded.graph, ts, "greedy")
            }
        }
    };
    if tessellations.len() > graph.max_degree().max(1) {
        eprintln!(
            "warning: {} tessellations used for maximum degree {}",
            tessellations.len(),
            graph.max_degree()
        );
    }
    Ok(LoadedInput {
        graph,
        tessellations,
        source,
    })
}

fn load_params(path: Option<&Path>) -> Result<CircuitParams> {
    match path {
        Some(p) => Ok(CircuitParams::from_json(&read_input(p)?).with_context(|| format!("in {}", p.display()))?),
        None => Ok(CircuitParams::reference()),
    }
}

#[derive(Serialize)]
struct WalkMetadata {
    n: usize,
    theta: f64,
    steps: usize,
    convention: Convention,
    tessellation_source: &'static str,
    tessellations: usize,
    start: usize,
    parallel: bool,
}

fn cmd_walk(opts: &WalkOpts) -> Result<()> {
    let input = load_graph(&opts.source)?;
    let n = input.graph.node_count();
    let start = opts.start.unwrap_or(n / 2);
    let psi = initial_basis_state(n, start)?;
    let cfg = WalkConfig::new(opts.theta, opts.steps, opts.convention)?.with_parallel(opts.parallel);
    let walk = StaggeredWalk::on_graph(&input.graph, &input.tessellations)?;
    let (_, history) = walk.evolve_recording(&psi, &cfg)?;

    let rows = history.iter().enumerate().flat_map(|(step, p)| {
        p.iter()
            .enumerate()
            .map(move |(node, &prob)| vec![step.to_string(), node.to_string(), fmt_f64(prob)])
    });
    let metadata = WalkMetadata {
        n,
        theta: opts.theta,
        steps: opts.steps,
        convention: opts.convention,
        tessellation_source: input.source,
        tessellations: input.tessellations.len(),
        start,
        parallel: opts.parallel,
    };

    let mut out = OutputSet::new(&opts.out, opts.force);
    out.add("distribution.csv", csv(&["step", "node", "probability"], rows));
    out.add("metadata.json", pretty_json(&metadata));
    let last = history.last().expect("history holds the initial state");
    if opts.plot {
        let title = format!("P(n) after {} steps, θ = {:.6}, start {start}", opts.steps, opts.theta);
        out.add("distribution.svg", plot::distribution_svg(last, &title));
    }
    for path in out.write()? {
        println!("wrote {}", path.display());
    }
    let sigma = spread_statistics(&history, start)?;
    println!("σ({}) = {:.6}", opts.steps, sigma[opts.steps]);
    Ok(())
}

#[derive(Serialize)]
struct CircuitOutput<'a> {
    #[serde(flatten)]
    report: &'a CircuitReport,
    theta: f64,
    warnings: &'a [String],
}

fn cmd_circuit(opts: &CircuitOpts) -> Result<()> {
    let params = load_params(opts.params.as_deref())?;
    let report = CircuitReport::solve(&params)?;
    let warnings = report.feasibility_warnings(opts.theta);
    for w in &warnings {
        eprintln!("{w}");
    }
    let json = pretty_json(&CircuitOutput {
        report: &report,
        theta: opts.theta,
        warnings: &warnings,
    });

    let sweep = match opts.sweep {
        Some(points) if points < 2 => {
            return Err(UsageError("--sweep needs at least 2 points".into()).into());
        }
        Some(points) => Some(flux_sweep(&params, points)?),
        None => None,
    };
    let sweep_csv = sweep.map(|points| {
        csv(
            &["flux_ratio", "chi_l", "kL", "kappa_cap", "kappa_ind", "kappa_total"],
            points.iter().map(|p| {
                [p.flux_ratio, p.chi_l, p.kl, p.kappa_cap, p.kappa_ind, p.kappa_total]
                    .into_iter()
                    .map(fmt_f64)
                    .collect()
            }),
        )
    });

    match &opts.out {
        Some(dir) => {
            let mut out = OutputSet::new(dir, opts.force);
            out.add("circuit.json", json);
            if let Some(text) = sweep_csv {
                out.add("sweep.csv", text);
            }
            for path in out.write()? {
                println!("wrote {}", path.display());
            }
        }
        None => {
            print!("{json}");
            if let Some(text) = sweep_csv {
                print!("{text}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ScheduleReport<'a> {
    valid: bool,
    nodes: usize,
    edges: usize,
    tessellation_source: &'static str,
    tessellations: usize,
    theta: f64,
    steps: usize,
    intervals: usize,
    tau_s: f64,
    total_duration_s: f64,
    kappa_rad_s: f64,
    flux_on: f64,
    flux_off: f64,
    warnings: &'a [String],
}

fn cmd_schedule(opts: &ScheduleOpts) -> Result<()> {
    let input = load_graph(&opts.source)?;
    if let Some(file) = &opts.validate {
        let schedule = parse_schedule(&read_input(file)?).with_context(|| format!("in {}", file.display()))?;
        validate_schedule(&schedule, &input.graph)
            .map_err(sqw_core::Error::InvalidSchedule)
            .with_context(|| format!("in {}", file.display()))?;
        for w in schedule.feasibility_warnings() {
            eprintln!("{w}");
        }
        println!("{}: valid, {} intervals", file.display(), schedule.intervals.len());
        return Ok(());
    }

    let params = load_params(opts.params.as_deref())?;
    let run = compile_schedule(&input.graph, &input.tessellations, opts.theta, &params, opts.steps)?;
    // compiled output must always pass the same check a loader applies
    validate_schedule(&run.schedule, &input.graph).map_err(sqw_core::Error::InvalidSchedule)?;

    // the schedule states the τ budget per interval; skip the circuit's copy
    let mut warnings = run.schedule.feasibility_warnings();
    warnings.extend(
        run.circuit
            .feasibility_warnings(opts.theta)
            .into_iter()
            .filter(|w| !w.contains("switching budget")),
    );
    for w in &warnings {
        eprintln!("{w}");
    }
    let report = ScheduleReport {
        valid: true,
        nodes: input.graph.node_count(),
        edges: input.graph.edge_count(),
        tessellation_source: input.source,
        tessellations: input.tessellations.len(),
        theta: opts.theta,
        steps: opts.steps,
        intervals: run.schedule.intervals.len(),
        tau_s: run.schedule.tau_seconds,
        total_duration_s: run.schedule.total_duration(),
        kappa_rad_s: run.circuit.kappa_pair_on,
        flux_on: run.schedule.flux_on_ratio,
        flux_off: run.schedule.flux_off_ratio,
        warnings: &warnings,
    };

    let dir = opts.out.as_deref().expect("clap requires --out when compiling");
    let mut out = OutputSet::new(dir, opts.force);
    out.add("schedule.json", emit_schedule(&run.schedule));
    out.add("report.json", pretty_json(&report));
    for path in out.write()? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("SQW_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| UsageError(format!("SQW_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<sqw_core::Error>().map(sqw_core::Error::class) {
        Some(ErrorClass::Numeric) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Walk(opts) => cmd_walk(opts),
        Command::Circuit(opts) => cmd_circuit(opts),
        Command::Schedule(opts) => cmd_schedule(opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
