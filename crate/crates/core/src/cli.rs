//! The `discord` command line: `compute`, `sweep`, `verify` and `generate`.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 unsupported.
//! Errors go to stderr as one JSON object `{"error": <kind>, "message": ...}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::Tolerances;
use crate::correlation::{closed_form_2xn, lower_bound};
use crate::error::{Error, Result};
use crate::families::{rows_to_csv, sweep, Family, ParamGrid, SweepOptions};
use crate::linalg::{self, Subsystem};
use crate::measures::{optimize_discord, pure_discord, DiscordResult, Measure, MeasurementParams, OptimizeOptions, Strategy};
use crate::states::{self, BipartiteState};
use crate::verify::{self, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "discord", version, about = "Affinity-based geometric discord of bipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute discord measures for a state file.
    Compute(ComputeArgs),
    /// Tabulate a state family against its closed forms as CSV.
    Sweep(SweepArgs),
    /// Run the consistency suite; one JSON line per criterion.
    Verify(VerifyArgs),
    /// Write a family member as a state file.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Affinity,
    Hs,
    Remedied,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Closed,
    Bound,
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Grid,
    Multistart,
    Hybrid,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Grid => Strategy::Grid,
            StrategyArg::Multistart => Strategy::MultistartLocal,
            StrategyArg::Hybrid => Strategy::Hybrid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, value_enum, default_value = "hybrid")]
    pub strategy: StrategyArg,
    /// Functional evaluations per optimization.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl OptimizerArgs {
    fn options(&self) -> OptimizeOptions {
        let mut opts = OptimizeOptions { strategy: self.strategy.into(), seed: self.seed, ..Default::default() };
        if let Some(b) = self.budget {
            opts.budget = b;
        }
        opts
    }
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long = "tol-hermitian", value_name = "X")]
    hermitian: Option<f64>,
    #[arg(long = "tol-state-hermitian", value_name = "X")]
    state_hermitian: Option<f64>,
    #[arg(long = "tol-trace", value_name = "X")]
    trace: Option<f64>,
    #[arg(long = "tol-psd", value_name = "X")]
    psd: Option<f64>,
    #[arg(long = "tol-imag", value_name = "X")]
    imag: Option<f64>,
    #[arg(long = "tol-bloch", value_name = "X")]
    bloch: Option<f64>,
    #[arg(long = "tol-radicand", value_name = "X")]
    radicand: Option<f64>,
}

impl ToleranceArgs {
    fn tolerances(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        let given = [
            self.hermitian,
            self.state_hermitian,
            self.trace,
            self.psd,
            self.imag,
            self.bloch,
            self.radicand,
        ];
        for (key, value) in Tolerances::KEYS.iter().zip(given) {
            if let Some(v) = value {
                tol.set(key, v)?;
            }
        }
        Ok(tol)
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_name = "PATH")]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value = "affinity")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// werner2, belldiag, werner or isotropic.
    #[arg(long)]
    pub family: String,
    /// Local dimension for werner and isotropic.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Bell-diagonal direction c1,c2,c3 (the parameter scales it).
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0, 1.0], allow_negative_numbers = true)]
    pub c: Vec<f64>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        if self.c.len() != 3 {
            return Err(Error::Parse(format!("--c needs three comma-separated values, got {}", self.c.len())));
        }
        Family::parse(&self.family, self.m, [self.c[0], self.c[1], self.c[2]])
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// `all` tabulates affinity and hs.
    #[arg(long, value_enum, default_value = "all")]
    pub measure: MeasureArg,
    /// Leave the optimized and gap columns empty.
    #[arg(long)]
    pub analytic_only: bool,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the tolerance of every optimizer-based comparison.
    #[arg(long = "tol-optimizer", value_name = "X")]
    pub tol_optimizer: Option<f64>,
    /// Run only these criteria (comma separated ids).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Compute(args) => compute(&args).map(|_| 0),
        Command::Sweep(args) => run_sweep(&args).map(|_| 0),
        Command::Verify(args) => run_verify(&args),
        Command::Generate(args) => generate(&args).map(|_| 0),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn compute_measures(m: MeasureArg) -> Vec<Measure> {
    match m {
        MeasureArg::Affinity => vec![Measure::Affinity],
        MeasureArg::Hs => vec![Measure::HilbertSchmidt],
        MeasureArg::Remedied => vec![Measure::Remedied],
        MeasureArg::All => Measure::ALL.to_vec(),
    }
}

/// Resolves the method for one measure and evaluates it.
pub fn evaluate(state: &BipartiteState, measure: Measure, method: MethodArg, opts: &OptimizeOptions) -> Result<DiscordResult> {
    let closed_applies = measure != Measure::HilbertSchmidt;
    let pure = state.as_pure(1e-10);
    let closed = || -> Result<DiscordResult> {
        if !closed_applies {
            return Err(Error::UnsupportedDimension("no closed form for the hs measure".into()));
        }
        if let Some(psi) = &pure {
            return Ok(pure_discord(psi));
        }
        if state.dim_a() == 2 {
            return closed_form_2xn(state);
        }
        Err(Error::UnsupportedDimension(format!(
            "closed form needs a pure state or dim_a = 2, got dim_a = {}",
            state.dim_a()
        )))
    };
    match method {
        MethodArg::Closed => closed(),
        MethodArg::Bound => {
            if !closed_applies {
                return Err(Error::UnsupportedDimension("the lower bound applies to the affinity discord".into()));
            }
            Ok(DiscordResult {
                value: lower_bound(state)?.value,
                method: crate::measures::Method::Bound,
                optimal_measurement: None,
                evaluations: 0,
            })
        }
        MethodArg::Optimize => optimize_discord(state, measure, opts),
        MethodArg::Auto => {
            if closed_applies && (pure.is_some() || state.dim_a() == 2) {
                closed()
            } else {
                optimize_discord(state, measure, opts)
            }
        }
    }
}

fn measurement_json(p: &MeasurementParams) -> Value {
    let vectors: Vec<Vec<[f64; 2]>> =
        p.basis.vectors().iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect();
    let mut obj = json!({ "basis": vectors });
    if let Some(b) = p.bloch {
        obj["bloch"] = json!(b);
    }
    if let Some(a) = p.angles {
        obj["angles"] = json!({ "theta": a[0], "phi": a[1] });
    }
    if let Some(g) = &p.generator {
        obj["generator"] = json!(g);
    }
    if let Some(s) = p.start {
        obj["start"] = json!(s);
    }
    obj
}

fn spectrum(m: &linalg::ComplexMatrix) -> Result<Vec<f64>> {
    let mut ev = linalg::hermitian_eig(m)?.eigenvalues;
    ev.reverse();
    Ok(ev)
}

pub fn compute_report(state: &BipartiteState, measures: &[Measure], method: MethodArg, opts: &OptimizeOptions) -> Result<Value> {
    let bound = lower_bound(state)?.value;
    let mut results = Vec::new();
    for &measure in measures {
        let r = evaluate(state, measure, method, opts)?;
        results.push(json!({
            "measure": measure.as_str(),
            "value": r.value,
            "method": r.method.as_str(),
            "evaluations": r.evaluations,
            "bound": if measure == Measure::HilbertSchmidt { Value::Null } else { json!(bound) },
            "optimal_measurement": r.optimal_measurement.as_ref().map_or(Value::Null, measurement_json),
        }));
    }
    let mut diagnostics = json!({
        "purity": state.purity(),
        "marginal_a_spectrum": spectrum(&state.marginal(Subsystem::A))?,
        "marginal_b_spectrum": spectrum(&state.marginal(Subsystem::B))?,
    });
    if let Some(psi) = state.as_pure(1e-10) {
        diagnostics["schmidt_spectrum"] = json!(states::schmidt_spectrum(&psi).0);
    }
    let mut report = if results.len() == 1 { results.pop().expect("one result") } else { json!({ "results": results }) };
    report["dim_a"] = json!(state.dim_a());
    report["dim_b"] = json!(state.dim_b());
    report["diagnostics"] = diagnostics;
    report["seed"] = json!(opts.seed);
    Ok(report)
}

fn compute(args: &ComputeArgs) -> Result<()> {
    let tol = args.tolerances.tolerances()?;
    let state = states::read_state_file(&args.state, &tol)?;
    let opts = args.optimizer.options();
    let report = compute_report(&state, &compute_measures(args.measure), args.method, &opts)?;
    let text = match args.format {
        FormatArg::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        FormatArg::Csv => {
            let rows = report.get("results").and_then(Value::as_array).cloned().unwrap_or_else(|| vec![report.clone()]);
            let mut out = String::from("measure,value,method,bound,evaluations\n");
            for r in rows {
                let bound = r["bound"].as_f64().map(|b| format!("{b:.11e}")).unwrap_or_default();
                out.push_str(&format!(
                    "{},{:.11e},{},{},{}\n",
                    r["measure"].as_str().unwrap_or_default(),
                    r["value"].as_f64().unwrap_or(f64::NAN),
                    r["method"].as_str().unwrap_or_default(),
                    bound,
                    r["evaluations"]
                ));
            }
            out
        }
    };
    emit(args.out.as_deref(), &text)
}

fn sweep_measures(m: MeasureArg) -> Vec<Measure> {
    match m {
        MeasureArg::All => vec![Measure::Affinity, Measure::HilbertSchmidt],
        other => compute_measures(other),
    }
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let family = args.family.family()?;
    let grid = ParamGrid { from: args.from, to: args.to, steps: args.steps };
    let opts = SweepOptions { optimizer: args.optimizer.options(), analytic_only: args.analytic_only };
    let rows = sweep(&family, &grid, &sweep_measures(args.measure), &opts)?;
    emit(args.out.as_deref(), &rows_to_csv(&rows))
}

fn run_verify(args: &VerifyArgs) -> Result<i32> {
    let cfg = VerifyConfig { seed: args.seed, optimizer_tol: args.tol_optimizer };
    let ids: Vec<u8> = if args.only.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { args.only.clone() };
    let mut text = String::new();
    let mut failed = 0;
    for &id in &ids {
        let report = verify::run_criterion(id, &cfg)?;
        if !report.passed {
            failed += 1;
        }
        text.push_str(&report.to_json_line());
        text.push('\n');
    }
    text.push_str(&json!({ "summary": { "seed": args.seed, "passed": ids.len() - failed, "failed": failed } }).to_string());
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let state = args.family.family()?.state(args.param)?;
    states::write_state_file(&args.out, &state)
}
