use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netfba::evaluation::{aggregate, run_experiment, write_detail_csv, write_summary_csv, ExperimentConfig, Method};
use netfba::io::{bounds_to_json, emit_graph, graph_from_json, graph_to_json, ingest, parse_timestamp, write_edge_list};
use netfba::io::{Ingested, WindowMode, WindowSpec};
use netfba::{
    bounds_report, forecast_graph_with, generate_pa_series, prepare_forecast, Error, Formulation, GraphSeries,
    ForecasterKind, PaConfig, Params, Problem, Result, Scheme, SolverKind,
};

#[derive(Parser)]
#[command(name = "netfba", version, about = "Forecast the structure of growing graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a preferential-attachment series as a `u v t` edge list.
    Synth(SynthArgs),
    /// Forecast the graph `h` windows after the last one in the input.
    Forecast(ForecastArgs),
    /// Rolling-origin evaluation against held-out snapshots.
    Evaluate(EvaluateArgs),
    /// Solution-count bounds of a degree-bounded selection problem.
    Bounds(BoundsArgs),
}

#[derive(Args, Clone)]
struct PaArgs {
    /// Nodes of the seed ring.
    #[arg(long, default_value_t = 50)]
    s0: usize,
    /// Edges per arriving node.
    #[arg(long, default_value_t = 10)]
    s: usize,
    #[arg(long, default_value_t = 5)]
    nodes_per_step: usize,
    /// Number of snapshots, the seed ring included.
    #[arg(long, default_value_t = 30)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    delete_per_step: usize,
}

impl PaArgs {
    fn config(&self, seed: u64) -> PaConfig {
        PaConfig {
            s0: self.s0,
            s: self.s,
            nodes_per_step: self.nodes_per_step,
            steps: self.steps,
            delete_per_step: self.delete_per_step,
            seed,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    pa: PaArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge list; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Whitespace-separated `u v t` edge list.
    #[arg(long)]
    input: PathBuf,
    /// day, month or count:N (N distinct timestamps per window).
    #[arg(long, default_value = "day")]
    window: String,
    /// Ignore events before this timestamp.
    #[arg(long)]
    start: Option<String>,
    /// Ignore events at or after this timestamp.
    #[arg(long)]
    end: Option<String>,
    /// Keep edgeless snapshots for empty day/month windows.
    #[arg(long)]
    keep_empty: bool,
}

impl InputArgs {
    fn load(&self) -> Result<Ingested> {
        let stamp = |name: &'static str, s: &Option<String>| {
            s.as_deref()
                .map(|s| parse_timestamp(s).ok_or_else(|| bad(name, format!("bad timestamp `{s}`"))))
                .transpose()
        };
        let spec = WindowSpec {
            mode: self.window.parse::<WindowMode>()?,
            start: stamp("start", &self.start)?,
            end: stamp("end", &self.end)?,
            keep_empty: self.keep_empty,
        };
        ingest(&self.input, &spec)
    }
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Coefficient scheme C1..C6.
    #[arg(long, default_value = "C5")]
    scheme: Scheme,
    /// F1 (degree bounds) or F2 (degree and total edge bounds).
    #[arg(long, default_value = "F2")]
    formulation: Formulation,
    /// Quantile level of the node-count forecast.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Quantile level of the degree and edge-count bounds.
    #[arg(long, default_value_t = 0.55)]
    u: f64,
    /// Number of popular nodes new nodes may attach to [default: all nodes].
    #[arg(long = "K")]
    k: Option<usize>,
    /// exact, heuristic or auto.
    #[arg(long, default_value = "auto")]
    solver: SolverKind,
    /// Largest problem handed to the exact solver.
    #[arg(long, default_value_t = netfba::optimizer::DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    /// Average degree of arriving nodes; estimated from history when omitted.
    #[arg(long)]
    d_avg: Option<f64>,
    /// Univariate model: trend (mean or linear trend by AICc) or drift.
    #[arg(long, default_value = "trend")]
    forecaster: ForecasterKind,
}

impl ModelArgs {
    fn params(&self) -> Params {
        let mut p = Params::default()
            .with_scheme(self.scheme)
            .with_formulation(self.formulation)
            .with_gamma(self.gamma)
            .with_u(self.u)
            .with_solver(self.solver)
            .with_exact_limit(self.exact_limit)
            .with_model(self.forecaster);
        p.k = self.k;
        p.d_avg = self.d_avg;
        p
    }
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    horizon: usize,
    #[command(flatten)]
    model: ModelArgs,
    /// Recorded for reproducibility; the forecast itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output graph JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Edge list to evaluate on; a synthetic series per repeat when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "day")]
    window: String,
    #[arg(long)]
    keep_empty: bool,
    /// Training cut-offs, e.g. `25`, `20-30` or `20,25`.
    #[arg(long, default_value = "25")]
    origins: String,
    #[arg(long, default_value = "1-5")]
    horizons: String,
    /// Methods: any of C1..C6 and LS.
    #[arg(long, default_value = "C5,C6,LS")]
    methods: String,
    /// Synthetic runs (seeds seed, seed+1, ...) or passes over the input.
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    pa: PaArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Per-cell CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mean and sd per method and horizon.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Edge list; the instance is the F1 problem of a forecast from it.
    #[arg(long, conflicts_with = "graph")]
    input: Option<PathBuf>,
    #[arg(long, default_value = "day")]
    window: String,
    #[arg(long, default_value_t = 1)]
    horizon: usize,
    #[command(flatten)]
    model: ModelArgs,
    /// Graph JSON whose edges are the candidates; needs --bounds.
    #[arg(long, requires = "bounds")]
    graph: Option<PathBuf>,
    /// Comma-separated degree bound per node.
    #[arg(long)]
    bounds: Option<String>,
    /// Count feasible solutions exhaustively (small instances only).
    #[arg(long)]
    enumerate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn bad(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn parse_list(name: &'static str, s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(name, format!("`{t}` is not a count")));
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(bad(name, format!("empty range `{part}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(bad(name, "empty list"));
    }
    Ok(out)
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut w = sink(path)?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

fn synth(a: SynthArgs) -> Result<()> {
    let series = generate_pa_series(&a.pa.config(a.seed))?;
    write_edge_list(sink(&a.out)?, &series)
}

fn forecast(a: ForecastArgs) -> Result<()> {
    let ing = a.input.load()?;
    let params = a.model.params();
    let fc = forecast_graph_with(&ing.series, a.horizon, &params, &params.model)?;
    match &a.out {
        Some(p) => emit_graph(&fc.graph, Some(&ing.ids), p),
        None => write_text(&None, &graph_to_json(&fc.graph, Some(&ing.ids))?),
    }
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let methods = a
        .methods
        .split(',')
        .map(|m| m.trim().parse::<Method>())
        .collect::<Result<Vec<_>>>()?;
    let cfg = ExperimentConfig {
        origins: parse_list("origins", &a.origins)?,
        horizons: parse_list("horizons", &a.horizons)?,
        methods,
        params: a.model.params(),
    };
    if a.repeats == 0 {
        return Err(bad("repeats", "must be at least 1"));
    }
    let seeds = a.seed..a.seed + a.repeats;
    let runs: Vec<(u64, GraphSeries)> = match &a.input {
        Some(path) => {
            let spec = WindowSpec {
                keep_empty: a.keep_empty,
                ..WindowSpec::new(a.window.parse()?)
            };
            let series = ingest(path, &spec)?.series;
            seeds.map(|s| (s, series.clone())).collect()
        }
        None => seeds
            .map(|s| generate_pa_series(&a.pa.config(s)).map(|g| (s, g)))
            .collect::<Result<_>>()?,
    };
    let rows = run_experiment(&runs, &cfg)?;
    write_detail_csv(sink(&a.out)?, &rows)?;
    if a.summary.is_some() {
        write_summary_csv(sink(&a.summary)?, &aggregate(&rows))?;
    }
    Ok(())
}

fn bounds_problem(a: &BoundsArgs) -> Result<Problem> {
    if let Some(path) = &a.input {
        let spec = WindowSpec::new(a.window.parse()?);
        let series = ingest(path, &spec)?.series;
        let params = a.model.params().with_formulation(Formulation::F1);
        return Ok(prepare_forecast(&series, a.horizon, &params, &params.model)?.problem);
    }
    let (Some(graph), Some(bounds)) = (&a.graph, &a.bounds) else {
        return Err(bad("input", "give --input, or --graph with --bounds"));
    };
    let (g, _) = graph_from_json(&std::fs::read_to_string(graph)?)?;
    let bounds: Vec<usize> = bounds
        .split(',')
        .map(|b| b.trim().parse().map_err(|_| bad("bounds", format!("`{b}` is not a count"))))
        .collect::<Result<_>>()?;
    Problem::new(g.n_nodes(), g.edges().map(|e| (e, 1.0)), bounds, None)
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let report = bounds_report(&bounds_problem(&a)?, a.enumerate)?;
    write_text(&a.out, &bounds_to_json(&report)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => synth(a),
        Command::Forecast(a) => forecast(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
