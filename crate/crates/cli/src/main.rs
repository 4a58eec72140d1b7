//! `pluri`: plurigenera, admissibility and exhaustive checks from the
//! command line. Reports go to stdout as JSON (default), CSV or a table.
//!
//! Exit codes: 0 success, 1 malformed input, 2 inadmissible or
//! inconsistent input (the report lists what is wrong).

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plurigenera::classifier::{classify, torsion_solutions, SurfaceInvariants};
use plurigenera::congruence::{
    check_condition_u, check_condition_u_bruteforce, ConditionUInstance, DEFAULT_ORACLE_BOUND,
};
use plurigenera::factory::{cover_to_type, riemann_hurwitz_genus, AbelianGroupData};
use plurigenera::verifier::{
    enumerate_types, find_sharp_cases, is_admissible, verify_all, verify_main_theorem,
    EnumerationBounds,
};
use plurigenera::{Characteristic, Error, FibrationNumericalType};
use serde::Serialize;
use serde_json::{json, Value};

use output::{render, Format, ReportEnvelope, Table};

/// Nothing in the CLI is randomized; the seed is reported for completeness.
const DETERMINISTIC_SEED: u64 = 0;
/// Columns `P_1..P_14` in tabular type listings.
const TABLE_N_MAX: u64 = 14;

#[derive(Parser, Debug)]
#[command(
    name = "pluri",
    version,
    about = "Plurigenera of elliptic and quasi-elliptic fibrations"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P_0..P_n for a numerical type read from a JSON file.
    Compute(ComputeArgs),
    /// Admissibility and the four growth statements for one type.
    Verify(TypeArgs),
    /// Check the four statements on every type within bounds.
    VerifyAll(SweepArgs),
    /// List admissible types within bounds.
    Enumerate(EnumerateArgs),
    /// Types within bounds where a named estimate is attained.
    Sharp(SharpArgs),
    /// Kodaira class from P_12 and K^2.
    Classify(ClassifyArgs),
    /// Fibration type from abelian cover data.
    Factory(FactoryArgs),
    /// Decide condition U_i.
    UCheck(UCheckArgs),
}

#[derive(Args, Debug, Serialize)]
struct TypeArgs {
    /// JSON file holding a numerical type.
    #[arg(long = "type")]
    type_file: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ComputeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ty: TypeArgs,
    #[arg(long, default_value_t = 14)]
    n_max: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
struct BoundsArgs {
    #[arg(long, default_value_t = 30)]
    max_mult: u64,
    #[arg(long, default_value_t = 8)]
    max_fibres: usize,
    #[arg(long, default_value_t = 4)]
    max_chi_plus_t: u32,
    #[arg(long, value_delimiter = ',', default_value = "0,2,3,5,7")]
    characteristics: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    max_genus: u32,
    /// Tame fibres only.
    #[arg(long)]
    no_wild: bool,
    #[arg(long)]
    no_quasi_elliptic: bool,
    /// Evaluate dominated subtrees one type at a time instead of skipping them.
    #[arg(long)]
    no_prune: bool,
}

impl BoundsArgs {
    fn bounds(&self) -> EnumerationBounds {
        EnumerationBounds {
            max_mult: self.max_mult,
            max_fibres: self.max_fibres,
            max_chi_plus_t: self.max_chi_plus_t,
            characteristics: self.characteristics.clone(),
            include_wild: !self.no_wild,
            include_quasi_elliptic: !self.no_quasi_elliptic,
            max_genus: self.max_genus,
            prune_dominated: !self.no_prune,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    bounds: BoundsArgs,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    #[serde(skip)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    sweep: SweepArgs,
    /// Stop after this many types.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct SharpArgs {
    /// One of p123-zero, pn-le-1-through-7, p13-equals-1.
    #[arg(long)]
    predicate: String,
    #[command(flatten)]
    #[serde(flatten)]
    sweep: SweepArgs,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[arg(long, required_unless_present = "torsion_solutions")]
    p12: Option<u64>,
    /// K^2 of a minimal model.
    #[arg(
        long,
        allow_negative_numbers = true,
        required_unless_present = "torsion_solutions"
    )]
    k2: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pg: u64,
    #[arg(long, default_value_t = 0)]
    q: u64,
    /// Smallest m >= 1 with mK = 0.
    #[arg(long)]
    torsion: Option<u64>,
    #[arg(long, default_value_t = 0)]
    p: u32,
    /// K^2 was not taken on a minimal model.
    #[arg(long)]
    not_minimal: bool,
    /// List the tuples with sum (1 - 1/m_j) = 2 instead.
    #[arg(long)]
    torsion_solutions: bool,
}

#[derive(Args, Debug, Serialize)]
struct FactoryArgs {
    /// Invariant factors, e.g. 2,6.
    #[arg(long, value_delimiter = ',', required = true)]
    factors: Vec<u64>,
    /// Local monodromies separated by ';', components by ',', e.g. "1,0;0,1;1,5".
    #[arg(long)]
    monodromy: String,
}

#[derive(Args, Debug, Serialize)]
struct UCheckArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    nu: Vec<u64>,
    /// Distinguished index, 1-based.
    #[arg(long)]
    i: usize,
    /// Also run the brute-force search (bounded by PLURI_MAX_ORACLE).
    #[arg(long)]
    oracle: bool,
}

/// Result of a command before rendering.
struct Report {
    inputs: Value,
    result: Value,
    table: Option<Table>,
    exit: u8,
}

impl Report {
    fn ok(inputs: Value, result: Value, table: Option<Table>) -> Report {
        Report {
            inputs,
            result,
            table,
            exit: 0,
        }
    }
}

/// A failure: either malformed input (exit 1, message on stderr) or an
/// inadmissible/inconsistent one (exit 2, report on stdout).
enum Failure {
    Malformed(String),
    Rejected { inputs: Value, error: Error },
}

impl Failure {
    fn from_error(inputs: &Value, error: Error) -> Failure {
        match error {
            Error::Inadmissible(_)
            | Error::InconsistentFibre { .. }
            | Error::InconsistentInvariants(_)
            | Error::InvalidGroupData(_) => Failure::Rejected {
                inputs: inputs.clone(),
                error,
            },
            other => Failure::Malformed(other.to_string()),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_type(path: &Path) -> Result<FibrationNumericalType, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn series_row(ty: &FibrationNumericalType, n_max: u64) -> Vec<String> {
    let mut row = vec![ty.to_string(), (ty.g == 0).to_string()];
    row.extend((1..=n_max).map(|n| ty.plurigenus(n).value.to_string()));
    row
}

fn series_headers(n_max: u64) -> Vec<String> {
    let mut h = vec!["type".to_string(), "exact".to_string()];
    h.extend((1..=n_max).map(|n| format!("P_{n}")));
    h
}

fn compute(args: &ComputeArgs) -> Result<Report, Failure> {
    let ty = read_type(&args.ty.type_file)?;
    let inputs = json!({ "type_file": args.ty.type_file, "type": ty, "n_max": args.n_max });
    let series = ty.plurigenera_series(args.n_max);
    let result = json!({
        "type": ty,
        "label": ty.label(),
        "delta_degree": ty.delta_degree(),
        "slope": ty.slope().to_string(),
        "period": ty.period(),
        "exact": ty.g == 0,
        "series": series.iter().map(|v| v.value).collect::<Vec<_>>(),
    });
    let table = Table {
        headers: series_headers(args.n_max),
        rows: vec![series_row(&ty, args.n_max)],
    };
    Ok(Report::ok(inputs, result, Some(table)))
}

fn verify(args: &TypeArgs) -> Result<Report, Failure> {
    let ty = read_type(&args.type_file)?;
    let inputs = json!({ "type_file": args.type_file, "type": ty });
    let admissibility = is_admissible(&ty);
    if !admissibility.admissible {
        let result = json!({ "type": ty, "admissibility": admissibility });
        return Ok(Report {
            inputs,
            result,
            table: None,
            exit: 2,
        });
    }
    let report = verify_main_theorem(&ty).map_err(|e| Failure::from_error(&inputs, e))?;
    let result = json!({
        "type": ty,
        "admissibility": admissibility,
        "holds": report.holds(),
        "report": report,
    });
    let mut table = Table::key_value(&to_value(&report));
    table.rows.retain(|r| r[0] != "series");
    table.rows.insert(0, vec!["type".into(), ty.to_string()]);
    Ok(Report::ok(inputs, result, Some(table)))
}

fn install_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Failure::Malformed("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Malformed(e.to_string()))?;
    }
    Ok(())
}

fn verify_all_cmd(args: &SweepArgs) -> Result<Report, Failure> {
    install_jobs(args.jobs)?;
    let bounds = args.bounds.bounds();
    let inputs = to_value(&bounds);
    let report = verify_all(&bounds).map_err(|e| Failure::from_error(&inputs, e))?;
    let summary = json!({
        "visited_types": report.visited_types,
        "pruned_subtrees": report.pruned_subtrees,
        "counterexamples": report.counterexamples.len(),
        "max_first_nonzero": report.extremes.max_first_nonzero,
        "max_first_ge2": report.extremes.max_first_ge2,
        "extremes_exact": report.extremes.exact,
        "p13_at_most_one": report.extremes.p13_at_most_one.len(),
        "cases": report.cases,
        "case_replay_failures": report.case_replay_failures.len(),
        "case_uncovered": report.case_uncovered.len(),
    });
    Ok(Report::ok(
        inputs,
        to_value(&report),
        Some(Table::key_value(&summary)),
    ))
}

fn enumerate_cmd(args: &EnumerateArgs) -> Result<Report, Failure> {
    install_jobs(args.sweep.jobs)?;
    let bounds = args.sweep.bounds.bounds();
    let inputs = json!({ "bounds": bounds, "limit": args.limit });
    let stream = enumerate_types(&bounds).map_err(|e| Failure::from_error(&inputs, e))?;
    let types: Vec<FibrationNumericalType> =
        stream.take(args.limit.unwrap_or(usize::MAX)).collect();
    let rows = types.iter().map(|t| series_row(t, TABLE_N_MAX)).collect();
    let result = json!({ "count": types.len(), "types": types });
    Ok(Report::ok(
        inputs,
        result,
        Some(Table {
            headers: series_headers(TABLE_N_MAX),
            rows,
        }),
    ))
}

fn sharp_cmd(args: &SharpArgs) -> Result<Report, Failure> {
    install_jobs(args.sweep.jobs)?;
    let bounds = args.sweep.bounds.bounds();
    let inputs = json!({ "predicate": args.predicate, "bounds": bounds });
    let types =
        find_sharp_cases(&bounds, &args.predicate).map_err(|e| Failure::from_error(&inputs, e))?;
    let rows = types.iter().map(|t| series_row(t, TABLE_N_MAX)).collect();
    let result = json!({
        "count": types.len(),
        "labels": types.iter().map(|t| t.label()).collect::<Vec<_>>(),
        "types": types,
    });
    Ok(Report::ok(
        inputs,
        result,
        Some(Table {
            headers: series_headers(TABLE_N_MAX),
            rows,
        }),
    ))
}

fn classify_cmd(args: &ClassifyArgs) -> Result<Report, Failure> {
    let inputs = to_value(args);
    if args.torsion_solutions {
        let tuples = torsion_solutions();
        let rows = tuples
            .iter()
            .map(|t| {
                vec![t
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")]
            })
            .collect();
        let table = Table {
            headers: vec!["tuple".into()],
            rows,
        };
        return Ok(Report::ok(
            inputs,
            json!({ "torsion_solutions": tuples }),
            Some(table),
        ));
    }
    let p = Characteristic::new(args.p).map_err(|e| Failure::Malformed(e.to_string()))?;
    let (Some(p12), Some(k2_min)) = (args.p12, args.k2) else {
        return Err(Failure::Malformed("--p12 and --k2 are required".into()));
    };
    let inv = SurfaceInvariants {
        p12,
        k2_min,
        minimal: !args.not_minimal,
        pg: args.pg,
        q: args.q,
        canonical_torsion: args.torsion,
        p,
    };
    let class = classify(&inv).map_err(|e| Failure::from_error(&inputs, e))?;
    Ok(Report::ok(
        inputs,
        json!({ "invariants": inv, "class": class }),
        None,
    ))
}

fn parse_monodromy(text: &str) -> Result<Vec<Vec<u64>>, Failure> {
    text.split(';')
        .map(|g| {
            g.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|e| Failure::Malformed(format!("monodromy entry {x:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

fn factory_cmd(args: &FactoryArgs) -> Result<Report, Failure> {
    let inputs = to_value(args);
    let monodromies = parse_monodromy(&args.monodromy)?;
    let data = AbelianGroupData::new(args.factors.clone(), monodromies)
        .map_err(|e| Failure::from_error(&inputs, e))?;
    let ty = cover_to_type(&data).map_err(|e| Failure::from_error(&inputs, e))?;
    let genus = riemann_hurwitz_genus(&data).map_err(|e| Failure::from_error(&inputs, e))?;
    let admissibility = is_admissible(&ty);
    let verification = verify_main_theorem(&ty).ok();
    let result = json!({
        "group_order": data.order(),
        "multiplicities": data.multiplicities(),
        "cover_genus": genus,
        "bad_primes": data.bad_primes(),
        "type": ty,
        "label": ty.label(),
        "admissibility": admissibility,
        "report": verification,
    });
    Ok(Report::ok(inputs, result, None))
}

fn oracle_bound() -> Result<u128, Failure> {
    match std::env::var("PLURI_MAX_ORACLE") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|e| Failure::Malformed(format!("PLURI_MAX_ORACLE={s:?}: {e}"))),
        Err(_) => Ok(DEFAULT_ORACLE_BOUND),
    }
}

fn u_check_cmd(args: &UCheckArgs) -> Result<Report, Failure> {
    let inputs = to_value(args);
    let inst = ConditionUInstance::new(args.m.clone(), args.nu.clone(), args.i)
        .map_err(|e| Failure::Malformed(e.to_string()))?;
    let holds = check_condition_u(&inst);
    let mut result = json!({ "holds": holds });
    if args.oracle {
        let bound = oracle_bound()?;
        let oracle = check_condition_u_bruteforce(&inst, bound)
            .map_err(|e| Failure::Malformed(e.to_string()))?;
        result["oracle"] = json!(oracle);
    }
    Ok(Report::ok(inputs, result, None))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Compute(_) => "compute",
        Command::Verify(_) => "verify",
        Command::VerifyAll(_) => "verify-all",
        Command::Enumerate(_) => "enumerate",
        Command::Sharp(_) => "sharp",
        Command::Classify(_) => "classify",
        Command::Factory(_) => "factory",
        Command::UCheck(_) => "u-check",
    }
}

fn envelope(command: &str, inputs: Value, result: Value) -> ReportEnvelope {
    ReportEnvelope {
        command: command.to_string(),
        inputs,
        result,
        tool_version: env!("CARGO_PKG_VERSION"),
        deterministic_seed: DETERMINISTIC_SEED,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    let outcome = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => verify(a),
        Command::VerifyAll(a) => verify_all_cmd(a),
        Command::Enumerate(a) => enumerate_cmd(a),
        Command::Sharp(a) => sharp_cmd(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Factory(a) => factory_cmd(a),
        Command::UCheck(a) => u_check_cmd(a),
    };
    match outcome {
        Ok(report) => {
            let env = envelope(name, report.inputs, report.result);
            print!("{}", render(cli.format, &env, report.table));
            ExitCode::from(report.exit)
        }
        Err(Failure::Rejected { inputs, error }) => {
            let violations = match &error {
                Error::Inadmissible(v) => v.clone(),
                _ => Vec::new(),
            };
            let result = json!({ "error": error.to_string(), "violations": violations });
            print!(
                "{}",
                render(cli.format, &envelope(name, inputs, result), None)
            );
            ExitCode::from(2)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("pluri {name}: {msg}");
            ExitCode::from(1)
        }
    }
}
