//! Command-line front end. Every subcommand is a thin adapter over the
//! library: outputs are byte-identical to calling the library directly.
//!
//! Exit codes: 0 on success, 1 for argument/parse/validation errors (with
//! line-numbered diagnostics on stderr), 2 for infeasibility under
//! `--strict` and for `--verify` mismatches.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use conceptfock::dataset::VERIFY_TOL;
use conceptfock::{
    analyze, build_concept_vectors, build_fock_state, build_projector, eval, expectation,
    fit_params, parse_csv_with_source, simulate, write_report, AnalysisOptions, AnalysisReport,
    CombinationKind, Dataset, FitStrategy, HilbertError, MembershipRecord, ModelParams,
    ModelVariant, SimulationConfig,
};

#[derive(Parser)]
#[command(
    name = "conceptfock",
    version,
    about = "Membership-weight diagnostics and two-sector model fitting for concept combinations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Interference placement for eval, construct and simulate.
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Printed)]
    variant: VariantArg,
    /// Promote per-record infeasibilities to exit code 2.
    #[arg(long, global = true)]
    strict: bool,
    /// Cross-check the closed form against the explicit construction on
    /// every realizable record; any mismatch beyond 1e-10 exits with code 2.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classical-representability diagnostics for each record.
    Classify(InputArgs),
    /// Fit sector weights and interference angles for each record.
    Fit(AnalyzeArgs),
    /// Full analysis report (classification, fits, intervals, dominance).
    Report(AnalyzeArgs),
    /// Evaluate the model at explicit weights and parameters.
    Eval(EvalArgs),
    /// Emit the explicit vectors, projectors and combination state as JSON.
    Construct(ConstructArgs),
    /// Draw seeded synthetic judgments for each record.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV dataset with header exemplar,concept_a,concept_b,mu_a,mu_b,mu_comb,kind.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
}

#[derive(Args)]
struct FitFlags {
    /// Pin the sector-2 weight and fit only the angle.
    #[arg(long, value_name = "REAL", conflicts_with = "strategy")]
    m2: Option<f64>,
    /// Weight-selection strategy (default: max-sector-1).
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitFlags,
    /// Reference angle (degrees) to evaluate against each record's observed
    /// combination weight.
    #[arg(long, value_name = "DEG")]
    theta: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_name = "REAL")]
    mu_a: f64,
    #[arg(long, value_name = "REAL")]
    mu_b: f64,
    #[arg(long, value_name = "REAL")]
    m2: f64,
    /// Interference angle in degrees.
    #[arg(long, value_name = "DEG")]
    theta: f64,
    #[arg(long, value_enum)]
    kind: KindArg,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_name = "REAL")]
    mu_a: f64,
    #[arg(long, value_name = "REAL")]
    mu_b: f64,
    /// Interference angle in degrees.
    #[arg(long, value_name = "DEG")]
    theta: f64,
    #[arg(long, value_enum, default_value_t = KindArg::And)]
    kind: KindArg,
    /// Also assemble the combination state at this sector-2 weight and
    /// report its expectation against the closed form.
    #[arg(long, value_name = "REAL")]
    m2: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitFlags,
    /// Judgments drawn per question.
    #[arg(long, value_name = "N")]
    trials: u64,
    /// RNG seed; runs are bit-reproducible per seed.
    #[arg(long, value_name = "SEED")]
    seed: u64,
    /// Explicit angle in degrees (skips fitting); requires --m2.
    #[arg(long, value_name = "DEG", requires = "m2")]
    theta: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Printed,
    Unscaled,
}

impl From<VariantArg> for ModelVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Printed => ModelVariant::Printed,
            VariantArg::Unscaled => ModelVariant::UnscaledInterference,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    And,
    Or,
}

impl From<KindArg> for CombinationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::And => CombinationKind::Conjunction,
            KindArg::Or => CombinationKind::Disjunction,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    #[value(name = "max-sector-1")]
    MaxSector1,
    #[value(name = "midpoint")]
    Midpoint,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 1,
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            diagnostic(&e.to_string());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            diagnostic(&e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Styled `error:` prefix on stderr; CONCEPTFOCK_NO_COLOR disables the ANSI
/// styling.
fn diagnostic(message: &str) {
    if std::env::var_os("CONCEPTFOCK_NO_COLOR").is_some() {
        eprintln!("error: {message}");
    } else {
        eprintln!("\x1b[1;31merror:\x1b[0m {message}");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let variant = cli.variant.into();
    let output = match &cli.command {
        Command::Classify(args) => {
            let dataset = load_dataset(&args.input)?;
            let options = AnalysisOptions {
                fit: None,
                reference_theta_deg: None,
                verify: cli.verify,
            };
            let report = analyze(&dataset, &options);
            check_report(&report, &cli)?;
            write_report(&report)
        }
        Command::Fit(args) | Command::Report(args) => {
            let dataset = load_dataset(&args.input.input)?;
            let options = AnalysisOptions {
                fit: Some(strategy_from_flags(&args.fit)?),
                reference_theta_deg: args.theta,
                verify: cli.verify,
            };
            let report = analyze(&dataset, &options);
            check_report(&report, &cli)?;
            write_report(&report)
        }
        Command::Eval(args) => run_eval(args, variant)?,
        Command::Construct(args) => run_construct(args, &cli)?,
        Command::Simulate(args) => run_simulate(args, variant, &cli)?,
    };
    emit(&cli.output, &output)
}

fn load_dataset(path: &PathBuf) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    parse_csv_with_source(&text, &path.display().to_string())
        .map_err(|e| CliError::validation(e.to_string()))
}

fn strategy_from_flags(flags: &FitFlags) -> Result<FitStrategy, CliError> {
    if let Some(m2) = flags.m2 {
        if !(0.0..=1.0).contains(&m2) || !m2.is_finite() {
            return Err(CliError::validation(format!(
                "--m2 must lie in [0, 1], got {m2}"
            )));
        }
        return Ok(FitStrategy::FixedM(m2));
    }
    Ok(match flags.strategy {
        Some(StrategyArg::Midpoint) => FitStrategy::MidpointTheta,
        // Largest emergent participation is the default reading.
        Some(StrategyArg::MaxSector1) | None => FitStrategy::MaxSector1,
    })
}

fn check_report(report: &AnalysisReport, cli: &Cli) -> Result<(), CliError> {
    if let Some(max_diff) = report.max_verify_diff() {
        if max_diff > VERIFY_TOL {
            return Err(CliError::infeasible(format!(
                "verification failed: closed form and explicit construction differ by {max_diff:e}"
            )));
        }
    }
    if cli.strict {
        let infeasible = report.infeasible_fits();
        if !infeasible.is_empty() {
            let listing = infeasible
                .iter()
                .map(|(exemplar, error)| format!("{exemplar}: {error}"))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(CliError::infeasible(format!("infeasible fits: {listing}")));
        }
    }
    Ok(())
}

fn run_eval(args: &EvalArgs, variant: ModelVariant) -> Result<String, CliError> {
    let params = ModelParams::new(args.m2, args.theta, args.kind.into(), variant)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let value = eval(args.mu_a, args.mu_b, &params)
        .map_err(|e| CliError::validation(e.to_string()))?;
    Ok(pretty(&serde_json::json!({
        "value": value.value,
        "in_range": value.in_range,
    })))
}

fn run_construct(args: &ConstructArgs, cli: &Cli) -> Result<String, CliError> {
    let kind: CombinationKind = args.kind.into();
    let pair = match build_concept_vectors(args.mu_a, args.mu_b, args.theta) {
        Ok(pair) => pair,
        Err(HilbertError::Domain(e)) => return Err(CliError::validation(e.to_string())),
        Err(e) => {
            // Not constructible at these marginals: report it as data unless
            // --strict promotes it.
            if cli.strict {
                return Err(CliError::infeasible(e.to_string()));
            }
            return Ok(pretty(&serde_json::json!({ "error": e.to_string() })));
        }
    };
    let projector = build_projector(kind);
    let fock_state = match args.m2 {
        None => serde_json::Value::Null,
        Some(m2) => {
            let params = ModelParams::new(m2, args.theta, kind, ModelVariant::Printed)
                .map_err(|e| CliError::validation(e.to_string()))?;
            let state = build_fock_state(&pair, &params)
                .map_err(|e| CliError::validation(e.to_string()))?;
            let direct = expectation(&state, &projector)
                .map_err(|e| CliError::validation(e.to_string()))?;
            let closed = eval(args.mu_a, args.mu_b, &params)
                .map_err(|e| CliError::validation(e.to_string()))?
                .value;
            serde_json::json!({
                "m_sq": m2,
                "state": state,
                "expectation": direct,
                "closed_form_printed": closed,
                "abs_diff": (direct - closed).abs(),
            })
        }
    };
    Ok(pretty(&serde_json::json!({
        "kind": kind,
        "vectors": pair,
        "projector": projector,
        "fock_state": fock_state,
    })))
}

fn run_simulate(args: &SimulateArgs, variant: ModelVariant, cli: &Cli) -> Result<String, CliError> {
    let dataset = load_dataset(&args.input.input)?;
    if args.trials == 0 {
        return Err(CliError::validation("--trials must be at least 1"));
    }
    let mut rows = Vec::with_capacity(dataset.len());
    let mut failures = Vec::new();
    for record in dataset.records() {
        match simulate_record(record, args, variant, cli)? {
            Ok(row) => rows.push(row),
            Err(message) => {
                failures.push(format!("{}: {message}", record.exemplar()));
                rows.push(serde_json::json!({
                    "exemplar": record.exemplar(),
                    "concept_a": record.concept_a(),
                    "concept_b": record.concept_b(),
                    "kind": record.kind(),
                    "error": message,
                }));
            }
        }
    }
    if cli.strict && !failures.is_empty() {
        return Err(CliError::infeasible(failures.join("; ")));
    }
    Ok(pretty(&serde_json::json!({
        "trials": args.trials,
        "seed": args.seed,
        "records": rows,
    })))
}

/// Inner result distinguishes per-record infeasibility (recorded, not fatal)
/// from hard CLI errors.
fn simulate_record(
    record: &MembershipRecord,
    args: &SimulateArgs,
    variant: ModelVariant,
    cli: &Cli,
) -> Result<Result<serde_json::Value, String>, CliError> {
    let params = match (args.theta, &args.fit) {
        (Some(theta), flags) => {
            let m2 = flags.m2.expect("clap enforces --theta requires --m2");
            match ModelParams::new(m2, theta, record.kind(), variant) {
                Ok(p) => p,
                Err(e) => return Err(CliError::validation(e.to_string())),
            }
        }
        (None, flags) => match fit_params(record, strategy_from_flags(flags)?, variant) {
            Ok(p) => p,
            Err(e) => return Ok(Err(e.to_string())),
        },
    };
    if cli.verify {
        verify_record(record, &params)?;
    }
    let analytic = eval(record.mu_a(), record.mu_b(), &params)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let config = SimulationConfig {
        trials: args.trials,
        seed: args.seed,
        record: record.clone(),
        params,
    };
    match simulate(&config) {
        Ok(result) => Ok(Ok(serde_json::json!({
            "exemplar": record.exemplar(),
            "concept_a": record.concept_a(),
            "concept_b": record.concept_b(),
            "kind": record.kind(),
            "params": params,
            "analytic_value": analytic.value,
            "result": result,
        }))),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn verify_record(record: &MembershipRecord, params: &ModelParams) -> Result<(), CliError> {
    if !(record.mu_a() + record.mu_b() >= 1.0 && record.mu_a() > 0.0) {
        return Ok(());
    }
    let printed = ModelParams::new(
        params.m_sq(),
        params.theta_deg(),
        record.kind(),
        ModelVariant::Printed,
    )
    .expect("parameters already validated");
    let pair = build_concept_vectors(record.mu_a(), record.mu_b(), params.theta_deg())
        .expect("realizability checked above");
    let state = build_fock_state(&pair, &printed).expect("constructed pair is orthogonal");
    let direct =
        expectation(&state, &build_projector(record.kind())).expect("dimensions are fixed");
    let closed = eval(record.mu_a(), record.mu_b(), &printed)
        .expect("record weights already validated")
        .value;
    if (direct - closed).abs() > VERIFY_TOL {
        return Err(CliError::infeasible(format!(
            "verification failed for '{}': |{direct} - {closed}| > 1e-10",
            record.exemplar()
        )));
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON rendering is infallible");
    text.push('\n');
    text
}

fn emit(target: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match target {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::validation(format!("cannot write output: {e}")))?;
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display()))),
    }
}
