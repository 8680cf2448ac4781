//! Command-line front end: graph inspection, oracle queries and experiment
//! runs. The binary is a thin wrapper around [`main_with`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::admg::{catalog, parse_graph, Admg};
use crate::error::{GraphError, HarnessError, ModelError};
use crate::harness::{run_sweep, write_report, ExperimentConfig, Oracle, RegretReport, SweepAxis};
use crate::scm::{
    load_model, make_parallel_model, make_random_model, make_xor_model, optimal_value, ArmSet,
    CostSet, ParallelParams, Scm,
};
use crate::seed::{self, Purpose};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for unreadable or invalid input files.
pub const EXIT_CONFIG: i32 = 3;
/// Exit status for failures while computing.
pub const EXIT_RUNTIME: i32 = 4;

/// Budgeted causal bandits on graphs with hidden confounders.
#[derive(Debug, Parser)]
#[command(name = "causal-bandits", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print c-components, conditioning sets and per-arm graph properties.
    InspectGraph(InspectArgs),
    /// Print exact arm means, the optimal arms and the knapsack benchmark.
    Oracle(OracleArgs),
    /// Run an experiment config, optionally at a single budget.
    Run(RunArgs),
    /// Run every sweep point of an experiment config.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Graph file, or a catalog name such as `front-door` or `parallel-7`.
    pub graph: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true)))]
pub struct OracleArgs {
    /// Model file.
    #[arg(long, group = "source", value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Parallel model with N parents and standard parameters.
    #[arg(long, group = "source", value_name = "N")]
    pub parallel: Option<usize>,
    /// XOR model drawn on a graph file or catalog graph.
    #[arg(long, group = "source", value_name = "GRAPH")]
    pub xor: Option<String>,
    /// Model with random tables drawn on a graph file or catalog graph.
    #[arg(long, group = "source", value_name = "GRAPH")]
    pub random: Option<String>,
    /// Seed for drawn models.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Uniform interventional cost.
    #[arg(long, default_value_t = 1.0, conflicts_with = "costs")]
    pub cost: f64,
    /// Comma-separated interventional costs, one per interventional arm.
    #[arg(long, value_delimiter = ',', value_name = "C,..")]
    pub costs: Option<Vec<f64>>,
    /// Budget for the knapsack benchmark R*(B).
    #[arg(long)]
    pub budget: Option<f64>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Base seed (overrides the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per sweep point (overrides the config).
    #[arg(long)]
    pub trials: Option<usize>,
    /// CSV output path; the JSON sidecar is written next to it.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment config file.
    pub config: PathBuf,
    /// Run only this budget instead of the config's sweep.
    #[arg(long)]
    pub budget: Option<f64>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Experiment config file.
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl ToString) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    fn runtime(message: impl ToString) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        let config = match &e {
            HarnessError::ConfigInvalid(_) | HarnessError::Io { .. } => true,
            HarnessError::Graph(GraphError::Parse { .. }) => true,
            HarnessError::Model(m) => is_input_error(m),
            _ => false,
        };
        if config {
            CliError::config(e)
        } else {
            CliError::runtime(e)
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        if is_input_error(&e) {
            CliError::config(e)
        } else {
            CliError::runtime(e)
        }
    }
}

fn is_input_error(e: &ModelError) -> bool {
    matches!(
        e,
        ModelError::Parse { .. }
            | ModelError::Graph(GraphError::Parse { .. })
            | ModelError::InvalidCpt { .. }
            | ModelError::InvalidLatent(_)
            | ModelError::InvalidCost { .. }
    )
}

/// Long help of the whole command, as printed by `--help`.
pub fn help_text() -> String {
    let mut cmd = Cli::command();
    let mut text = cmd.render_long_help().to_string();
    for sub in cmd.get_subcommands_mut() {
        text.push_str(&format!("\n--- {} ---\n", sub.get_name()));
        text.push_str(&sub.render_long_help().to_string());
    }
    text
}

/// Parses `args` (program name first), runs the command, and returns the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Runs one parsed command.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::InspectGraph(args) => inspect_graph(args, out),
        Command::Oracle(args) => oracle(args, out),
        Command::Run(args) => {
            let mut config = load_config(&args.config, &args.overrides)?;
            if let Some(budget) = args.budget {
                match config.axis() {
                    SweepAxis::Budget => config.sweep.budgets = Some(vec![budget]),
                    SweepAxis::Cost => config.sweep.budget = Some(budget),
                }
            }
            experiment(&config, &args.overrides, out)
        }
        Command::Sweep(args) => {
            let config = load_config(&args.config, &args.overrides)?;
            experiment(&config, &args.overrides, out)
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(CliError::runtime)
}

fn read_graph(name: &str) -> Result<Admg, CliError> {
    if let Some(g) = catalog::by_name(name) {
        return Ok(g);
    }
    let source = std::fs::read_to_string(name)
        .map_err(|e| CliError::config(format!("cannot read {name}: {e}")))?;
    parse_graph(&source).map_err(|e| CliError::config(format!("{name}: {e}")))
}

/// Text report of the graph's structure.
pub fn graph_report(g: &Admg) -> Result<String, GraphError> {
    let mut s = String::new();
    let names: Vec<&str> = g.topological_order().iter().map(|&v| g.name(v)).collect();
    s.push_str(&format!("nodes (topological): {}\n", names.join(", ")));
    s.push_str(&format!("reward: {}\n", g.name(g.reward())));
    let components: Vec<String> = g.c_components().iter().map(|c| g.format_set(c)).collect();
    s.push_str(&format!("c-components: {{{}}}\n", components.join(", ")));
    s.push_str(&format!("no-backdoor: {}\n", g.is_no_backdoor()));
    s.push_str("conditioning sets:\n");
    for &j in g.topological_order() {
        s.push_str(&format!(
            "  {}: Z = {}\n",
            g.name(j),
            g.format_set(&g.factorization_parents(j))
        ));
    }
    s.push_str("intervenable nodes:\n");
    for &i in g.intervenable() {
        let (pa, k) = g.component_parents(i)?;
        s.push_str(&format!(
            "  {}: effective parents = {}, k = {}, no-backdoor: {}, identifiable (sufficient): {}\n",
            g.name(i),
            g.format_set(&pa),
            k,
            !g.has_unblocked_backdoor(i)?,
            g.identifiable_sufficient(i)?
        ));
    }
    Ok(s)
}

fn inspect_graph(args: &InspectArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = read_graph(&args.graph)?;
    let report = graph_report(&g).map_err(CliError::runtime)?;
    write_out(out, &report)
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    #[serde(flatten)]
    oracle: &'a Oracle,
    budget: Option<f64>,
    optimal_value: Option<f64>,
}

fn oracle_model(args: &OracleArgs) -> Result<Scm, CliError> {
    let mut rng = seed::stream(args.seed, 0, Purpose::Model);
    if let Some(path) = &args.model {
        return Ok(load_model(path)?);
    }
    if let Some(n) = args.parallel {
        if n == 0 {
            return Err(CliError::config("--parallel needs at least one parent"));
        }
        return Ok(make_parallel_model(&ParallelParams::standard(n))?);
    }
    if let Some(graph) = &args.xor {
        return Ok(make_xor_model(&read_graph(graph)?, &mut rng)?);
    }
    let graph = args.random.as_deref().unwrap_or_default();
    Ok(make_random_model(&read_graph(graph)?, &mut rng)?)
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let scm = oracle_model(args)?;
    let arms = ArmSet::for_graph(scm.graph());
    let costs = match &args.costs {
        Some(values) => {
            if values.len() + 1 != arms.len() {
                return Err(CliError::config(format!(
                    "--costs lists {} values but the model has {} interventional arms",
                    values.len(),
                    arms.len() - 1
                )));
            }
            let mut all = vec![1.0];
            all.extend(values);
            CostSet::explicit(all)?
        }
        None => CostSet::uniform(&arms, args.cost)?,
    };
    let oracle = Oracle::new(&scm, &costs)?;
    let optimal = match args.budget {
        Some(b) if b < 0.0 => return Err(CliError::config("--budget must be non-negative")),
        Some(b) => Some(optimal_value(&oracle.means, &costs, b)?),
        None => None,
    };
    if args.json {
        let output = OracleOutput {
            oracle: &oracle,
            budget: args.budget,
            optimal_value: optimal,
        };
        let json = serde_json::to_string_pretty(&output).map_err(CliError::runtime)?;
        return write_out(out, &(json + "\n"));
    }
    let width = oracle
        .labels
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(3)
        .max(3);
    let mut s = format!(
        "{:<width$}  {:>8}  {:>6}  {:>8}\n",
        "arm", "mean", "cost", "delta"
    );
    for (a, label) in oracle.labels.iter().enumerate() {
        s.push_str(&format!(
            "{:<width$}  {:>8.6}  {:>6}  {:>8.6}\n",
            label, oracle.means[a], oracle.costs[a], oracle.deltas[a]
        ));
    }
    s.push_str(&format!("best arm: {}\n", oracle.labels[oracle.best_arm]));
    s.push_str(&format!(
        "ratio-optimal arm: {}\n",
        oracle.labels[oracle.ratio_best_arm]
    ));
    if let (Some(b), Some(v)) = (args.budget, optimal) {
        s.push_str(&format!("R*({b}) = {v:.6}\n"));
    }
    write_out(out, &s)
}

fn load_config(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(trials) = overrides.trials {
        if trials == 0 {
            return Err(CliError::config("--trials must be at least 1"));
        }
        config.trials = trials;
    }
    Ok(config)
}

/// Where a config's report goes: `--out`, else the config's `output`
/// relative to its directory, else `results/<name>.csv`.
pub fn output_path(config: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    match (out, &config.output) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(o)) => config.resolve(o),
        (None, None) => PathBuf::from("results").join(format!("{}.csv", config.name)),
    }
}

/// Per-point table of `mean ± stderr` with one column per policy.
pub fn summary_table(report: &RegretReport) -> String {
    let policies: Vec<String> = report.config.policies.iter().map(|p| p.label()).collect();
    let axis = report
        .cells
        .first()
        .map_or("budget", |c| c.sweep_axis.as_str());
    let mut points: Vec<f64> = Vec::new();
    for c in &report.cells {
        if !points.contains(&c.sweep_value) {
            points.push(c.sweep_value);
        }
    }
    let width = policies.iter().map(String::len).max().unwrap_or(0).max(20);
    let mut s = format!("{axis:>8}");
    for p in &policies {
        s.push_str(&format!("  {p:>width$}"));
    }
    s.push('\n');
    for v in points {
        s.push_str(&format!("{v:>8}"));
        for p in &policies {
            let cell = report.cell(p, v).map_or_else(
                || "-".to_string(),
                |c| format!("{:.4} ± {:.4}", c.mean_regret, c.stderr),
            );
            s.push_str(&format!("  {cell:>width$}"));
        }
        s.push('\n');
    }
    s
}

fn experiment(
    config: &ExperimentConfig,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let report = run_sweep(config, overrides.jobs)?;
    let path = output_path(config, overrides.out.as_deref());
    write_report(&report, &path)?;
    let kind = report.cells.first().map_or("", |c| match c.regret_kind {
        crate::harness::RegretKind::Simple => "simple",
        crate::harness::RegretKind::Cumulative => "cumulative",
    });
    let mut s = format!(
        "{}: {} trials per point, seed {}, {} regret\n",
        config.name, config.trials, config.seed, kind
    );
    s.push_str(&summary_table(&report));
    s.push_str(&format!("wrote {}\n", path.display()));
    write_out(out, &s)
}
