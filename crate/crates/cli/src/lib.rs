//! Command-line front end for `kz-coreset`: ingestion, configuration and the
//! `build`, `eval`, `sweep`, `inspect` and `net-verify` subcommands.
//!
//! Exit codes: 0 on success, 2 on input errors (bad flags, unreadable or
//! malformed data), 3 when an internal invariant or a verifier fails.

pub mod ingest;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kz_coreset::decompose::render_table;
use kz_coreset::eval::{evaluate, solution_panel, sweep, sweep_csv};
use kz_coreset::nets::{build_candidates, verify_centroid_property, DEFAULT_CANDIDATE_CAP};
use kz_coreset::pipeline::{default_union_budget, identity_coreset, prepare};
use kz_coreset::{build, build_context, delta_heuristic, dz_seed, BuildConfig, Coreset, PointSet, Variant};
use serde_json::json;

pub use ingest::{ingest, Format};

/// Seed of the fixed evaluation panel; independent of the build seed so
/// that builds with different seeds face the same solutions.
pub const DEFAULT_PANEL_SEED: u64 = 77;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<kz_coreset::Error> for CliError {
    fn from(e: kz_coreset::Error) -> Self {
        if e.is_input() {
            CliError::Input(e.to_string())
        } else {
            CliError::Invariant(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kzcoreset", version, about = "Coresets for (k, z)-clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a coreset and write it as JSON (or CSV when `--out` ends in `.csv`).
    Build(BuildArgs),
    /// Compare coreset and exact costs over a fixed solution panel.
    Eval(EvalArgs),
    /// Build over a grid of sample sizes and seeds; one summary row per build.
    Sweep(SweepArgs),
    /// Dump the point labels and group table of the decomposition.
    Inspect(InspectArgs),
    /// Build centroid candidates and check the approximate-centroid property.
    NetVerify(NetVerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "points_csv")]
    pub format: Format,
    /// Norm exponent for `points_csv` inputs, in [1, 2].
    #[arg(long, default_value_t = 2.0)]
    pub norm: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub z: u32,
    /// Accuracy parameter, in (0, 1/3).
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Single-swap local search sweeps applied to the seed solution.
    #[arg(long, default_value_t = 0)]
    pub refine_swaps: usize,
}

/// Either both explicit sample sizes, or the failure probability (with an
/// optional union budget) for the heuristic.
#[derive(Debug, Clone, Default, Args)]
pub struct DeltaArgs {
    #[arg(long)]
    pub delta_main: Option<usize>,
    #[arg(long)]
    pub delta_outer: Option<usize>,
    #[arg(long)]
    pub pi: Option<f64>,
    #[arg(long)]
    pub union_budget: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub delta: DeltaArgs,
    #[arg(long, default_value = "main")]
    pub variant: Variant,
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON summary of the build (size, bound, provenance counts).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub delta: DeltaArgs,
    #[arg(long, default_value = "main")]
    pub variant: Variant,
    /// Coreset JSON written by `build`; built on the fly when absent.
    #[arg(long, conflicts_with = "identity")]
    pub coreset: Option<PathBuf>,
    /// Evaluate the input itself as its own coreset.
    #[arg(long)]
    pub identity: bool,
    /// Solutions per panel kind (four kinds).
    #[arg(long, default_value_t = 50)]
    pub per_kind: usize,
    #[arg(long, default_value_t = DEFAULT_PANEL_SEED)]
    pub panel_seed: u64,
    /// Report path; CSV when it ends in `.csv`, JSON otherwise. Stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value = "main")]
    pub variant: Variant,
    /// Sample sizes; each build uses the value for both samplers.
    #[arg(long, value_delimiter = ',', required = true)]
    pub deltas: Vec<usize>,
    /// Build seeds; defaults to `--seed`.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    pub per_kind: usize,
    #[arg(long, default_value_t = DEFAULT_PANEL_SEED)]
    pub panel_seed: u64,
    /// CSV path; stdout when absent.
    #[arg(long, alias = "report")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Table path; stdout when absent.
    #[arg(long, alias = "report")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NetVerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Random solutions of `k` host sites to check.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Refuse inputs with more clients than this.
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    pub cap: usize,
    /// Candidate sites are written here as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Sample sizes from explicit flags or the heuristic, never both.
pub fn resolve_deltas(
    delta: &DeltaArgs,
    points: &PointSet<f64>,
    problem: &ProblemArgs,
) -> Result<(usize, usize), CliError> {
    let explicit = delta.delta_main.is_some() || delta.delta_outer.is_some();
    let heuristic = delta.pi.is_some() || delta.union_budget.is_some();
    match (explicit, heuristic) {
        (true, true) => Err(CliError::Input(
            "give either --delta-main/--delta-outer or --pi/--union-budget, not both".into(),
        )),
        (false, false) => Err(CliError::Input(
            "give --delta-main and --delta-outer, or --pi for the heuristic".into(),
        )),
        (true, false) => match (delta.delta_main, delta.delta_outer) {
            (Some(m), Some(o)) => Ok((m, o)),
            _ => Err(CliError::Input("--delta-main and --delta-outer go together".into())),
        },
        (false, true) => {
            let pi = delta.pi.ok_or_else(|| CliError::Input("--union-budget needs --pi".into()))?;
            let budget = delta.union_budget.unwrap_or_else(|| default_union_budget(points, problem.k));
            Ok(delta_heuristic(problem.eps, problem.k, problem.z, pi, budget)?)
        }
    }
}

fn config(problem: &ProblemArgs, deltas: (usize, usize), variant: Variant) -> Result<BuildConfig<f64>, CliError> {
    let cfg = BuildConfig::new(problem.k, problem.z, problem.eps, deltas.0, deltas.1, problem.seed)
        .with_variant(variant)
        .with_refine_swaps(problem.refine_swaps);
    cfg.validate()?;
    Ok(cfg)
}

fn load(input: &InputArgs) -> Result<PointSet<f64>, CliError> {
    ingest(&input.input, input.format, input.norm)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn to_json(value: &serde_json::Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Invariant(format!("serialize: {e}")))
}

/// Runs one subcommand to completion.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => run_build(&a),
        Command::Eval(a) => run_eval(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Inspect(a) => run_inspect(&a),
        Command::NetVerify(a) => run_net_verify(&a),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_build(a: &BuildArgs) -> Result<(), CliError> {
    let points = load(&a.input)?;
    let deltas = resolve_deltas(&a.delta, &points, &a.problem)?;
    let cfg = config(&a.problem, deltas, a.variant)?;
    let coreset = build(&points, &cfg)?;
    let body = if is_csv(&a.out) { coreset.to_csv()? } else { coreset.to_json()? };
    write(&a.out, &body)?;
    if let Some(report) = &a.report {
        let summary = json!({
            "input_size": points.len(),
            "size": coreset.len(),
            "cardinality_bound": coreset.cardinality_bound(),
            "total_weight": coreset.total_weight(),
            "input_weight": points.total_weight(),
            "delta_main": cfg.delta_main,
            "delta_outer": cfg.delta_outer,
            "counts": coreset.meta.counts,
            "sampled_groups": coreset.meta.sampled_groups,
            "outer_groups": coreset.meta.outer_groups,
            "seed_cost": coreset.meta.seed_cost,
        });
        write(report, &to_json(&summary)?)?;
    }
    Ok(())
}

fn panel(points: &PointSet<f64>, problem: &ProblemArgs, per_kind: usize, seed: u64) -> Result<Vec<kz_coreset::Solution<f64>>, CliError> {
    if per_kind == 0 {
        return Err(CliError::Input("--per-kind must be at least 1".into()));
    }
    let a = dz_seed(points, problem.k, problem.z, seed)?;
    let ctx = build_context(points, &a, problem.z)?;
    Ok(solution_panel(points, &ctx, problem.k, per_kind, seed)?)
}

fn run_eval(a: &EvalArgs) -> Result<(), CliError> {
    let points = load(&a.input)?;
    let coreset = if a.identity {
        identity_coreset(&points, a.problem.k, a.problem.z)
    } else if let Some(path) = &a.coreset {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let coreset = Coreset::<f64>::from_json(&text)?;
        if coreset.meta.source != points.fingerprint() {
            return Err(CliError::Input(format!("{} was built from a different input", path.display())));
        }
        if coreset.meta.z != a.problem.z || coreset.meta.k != a.problem.k {
            return Err(CliError::Input(format!(
                "coreset was built for k = {}, z = {}",
                coreset.meta.k, coreset.meta.z
            )));
        }
        coreset
    } else {
        let deltas = resolve_deltas(&a.delta, &points, &a.problem)?;
        build(&points, &config(&a.problem, deltas, a.variant)?)?
    };
    let solutions = panel(&points, &a.problem, a.per_kind, a.panel_seed)?;
    let report = evaluate(&points, &coreset, &solutions)?;
    let body = match &a.report {
        Some(p) if is_csv(p) => report.to_csv()?,
        _ => report.to_json()?,
    };
    emit(a.report.as_deref(), &body)
}

fn run_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let points = load(&a.input)?;
    let seeds = if a.seeds.is_empty() { vec![a.problem.seed] } else { a.seeds.clone() };
    let base = config(&a.problem, (1, 1), a.variant)?;
    let solutions = panel(&points, &a.problem, a.per_kind, a.panel_seed)?;
    let rows = sweep(&points, &base, &a.deltas, &seeds, &solutions)?;
    emit(a.out.as_deref(), &sweep_csv(&rows)?)
}

fn run_inspect(a: &InspectArgs) -> Result<(), CliError> {
    let points = load(&a.input)?;
    let cfg = config(&a.problem, (1, 1), Variant::Main)?;
    let construction = prepare(&points, &cfg)?;
    let table = render_table(&construction.decomposition, &construction.registry, &points);
    emit(a.out.as_deref(), &table)
}

fn run_net_verify(a: &NetVerifyArgs) -> Result<(), CliError> {
    let points = load(&a.input)?;
    let cfg = config(&a.problem, (1, 1), Variant::Main)?;
    let a_sol = dz_seed(&points, cfg.k, cfg.z, cfg.seed)?;
    let ctx = build_context(&points, &a_sol, cfg.z)?;
    let candidates = build_candidates(&points, &ctx, cfg.eps, a.cap)?;
    let report = verify_centroid_property(&points, &ctx, &candidates, cfg.k, a.trials, cfg.seed)?;
    if let Some(out) = &a.out {
        write(out, &candidates.to_json()?)?;
    }
    let body = to_json(&json!({
        "candidates": candidates.len(),
        "far_sentinel": candidates.far_sentinel,
        "report": report,
    }))?;
    emit(a.report.as_deref(), &body)?;
    if report.violations > 0 {
        return Err(CliError::Invariant(format!(
            "{} gated violations of the centroid property (worst ratio {})",
            report.violations, report.worst_ratio
        )));
    }
    Ok(())
}
