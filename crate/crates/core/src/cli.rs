//! Command-line front end: `solve`, `bench`, `oracle` and `plot`.
//!
//! Exit codes: 0 success, 1 not certified or oracle mismatch, 2 usage or
//! input error, 3 runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench::{
    gen_unique_instance, read_csv, run_experiment, summarize, write_csv, write_csv_to, write_svg,
    ExperimentConfig, DESCENT_SLACK,
};
use crate::descent::{run_method, DescentConfig, HMode, IterationRecord, Method};
use crate::error::Error;
use crate::oracle::{brute_force, OracleResult, MAX_ORACLE_N};
use crate::problem::BooleanQpInstance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "boolsdr",
    version,
    about = "Rank-one seeking SDP relaxations for binary quadratic programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance with one method.
    Solve(SolveArgs),
    /// Run a recovery-rate sweep over random instances.
    Bench(BenchArgs),
    /// Brute-force an instance, optionally checking a method against it.
    Oracle(OracleArgs),
    /// Render an SVG from a results CSV.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct DescentArgs {
    #[arg(long, default_value_t = 1e-4)]
    lambda: f64,
    /// Descent steps per segment.
    #[arg(long, default_value_t = 3)]
    iters: usize,
    #[arg(long, default_value_t = 5)]
    reinits: usize,
    /// Log-det regularizer.
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl DescentArgs {
    fn config(&self, h_mode: HMode) -> DescentConfig {
        DescentConfig {
            lambda: self.lambda,
            iterations: self.iters,
            max_reinits: self.reinits,
            seed: self.seed,
            h_mode,
            epsilon: self.epsilon,
            ..DescentConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "kbe2")]
    method: Method,
    #[command(flatten)]
    descent: DescentArgs,
    /// Cardinality of the solution. Without a value, the instance's `k` is
    /// used; without the flag, `k` counts as known only if the instance has one.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    known_k: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Values as `start:stop:step` (inclusive), a comma list, or one number.
    #[arg(long, default_value = "30")]
    m: String,
    #[arg(long, default_value = "25")]
    k: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value = "kbe1,kbe2,sdr-bool,sdr-spin,nuclear,logdet")]
    methods: String,
    /// Append the row `1^T x = k` and use `h = k + 1`.
    #[arg(long)]
    known_k: bool,
    #[command(flatten)]
    descent: DescentArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG next to the CSV.
    #[arg(long, requires = "out")]
    plot: bool,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write `runtime_ms` as 0 so repeated runs give identical bytes.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Instance JSON file; alternatively generate one with --n, --m, --k.
    #[arg(long, conflicts_with_all = ["n", "m", "k"])]
    instance: Option<PathBuf>,
    #[arg(long, requires_all = ["m", "k"])]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// With a generated instance, append the cardinality row.
    #[arg(long)]
    known_k: bool,
    /// Also run this method and compare.
    #[arg(long)]
    check: Option<Method>,
    #[command(flatten)]
    descent: DescentArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Results CSV written by `bench`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    /// Bad input data is a usage error; everything else is a runtime failure.
    fn from_error(e: &Error) -> Self {
        match e {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Dimension(_)
            | Error::NonFinite(_)
            | Error::NotSymmetric { .. }
            | Error::InvalidParameter(_)
            | Error::NotBinary { .. }
            | Error::OracleTooLarge { .. } => Self::usage(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }
}

/// Parses a sweep list: `a:b:s` with inclusive stop, `a,b,c`, or `a`.
pub fn parse_values(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid number {s:?} in {text:?}"))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, s] => (num(a)?, num(b)?, num(s)?),
            _ => return Err(format!("range {text:?} must be start:stop[:step]")),
        };
        if step == 0 {
            return Err(format!("range {text:?} has zero step"));
        }
        if start > stop {
            return Err(format!("range {text:?} is empty"));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        text.split(',').map(num).collect()
    }
}

fn parse_methods(text: &str) -> Result<Vec<Method>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<Method>().map_err(|e| e.to_string()))
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::runtime(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::runtime(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct SolveReport {
    method: Method,
    certified: bool,
    rank1: bool,
    x_hat: Vec<f64>,
    x_binary: Option<Vec<u8>>,
    objective: f64,
    lambda1: f64,
    lambda2: f64,
    binarity_defect: f64,
    sdp_iterations: usize,
    reinits: usize,
    monotonicity_violations: usize,
    trace: Vec<IterationRecord>,
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|x| {
            if *x == x.round() {
                format!("{x:.0}")
            } else {
                format!("{x:.4}")
            }
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

fn solve_text(r: &SolveReport) -> String {
    let mut s = format!(
        "method: {}\ncertified: {}\nrank1: {}\nx_hat: {}\nobjective: {:.6e}\nlambda1: {:.6e}\nlambda2: {:.6e}\nbinarity_defect: {:.3e}\nsdp_iterations: {}\nreinits: {}\n",
        r.method,
        r.certified,
        r.rank1,
        fmt_vec(&r.x_hat),
        r.objective,
        r.lambda1,
        r.lambda2,
        r.binarity_defect,
        r.sdp_iterations,
        r.reinits
    );
    s.push_str("trace (attempt t f F lambda2 solver_iterations):\n");
    for rec in &r.trace {
        s.push_str(&format!(
            "  {} {} {:.9e} {:.9e} {:.3e} {}\n",
            rec.attempt,
            rec.t,
            rec.f_value,
            rec.penalized,
            rec.second_eigenvalue,
            rec.solver_iterations
        ));
    }
    s
}

fn resolve_h_mode(flag: &Option<String>, inst: &BooleanQpInstance) -> Result<HMode, Failure> {
    match flag.as_deref() {
        None => Ok(inst.k.map_or(HMode::Unknown, HMode::KnownK)),
        Some("") => inst.k.map(HMode::KnownK).ok_or_else(|| {
            Failure::usage("--known-k without a value needs an instance with a `k` field")
        }),
        Some(v) => {
            let k: usize = v
                .parse()
                .map_err(|_| Failure::usage(format!("--known-k expects an integer, got {v:?}")))?;
            if k > inst.n() {
                return Err(Failure::usage(format!(
                    "--known-k {k} exceeds n = {}",
                    inst.n()
                )));
            }
            Ok(HMode::KnownK(k))
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<i32, Failure> {
    let inst = BooleanQpInstance::read_json(&args.instance).map_err(|e| Failure::from_error(&e))?;
    let h_mode = resolve_h_mode(&args.known_k, &inst)?;
    let cfg = args.descent.config(h_mode);
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let res = run_method(args.method, &inst, &cfg).map_err(|e| Failure::runtime(e.to_string()))?;
    let report = SolveReport {
        method: res.method,
        certified: res.certified,
        rank1: res.rank1,
        x_hat: res.x_hat.clone(),
        x_binary: res.x_binary.clone(),
        objective: res.objective,
        lambda1: res.report.lambda1,
        lambda2: res.report.lambda2,
        binarity_defect: res.report.binarity_defect,
        sdp_iterations: res.sdp_iterations,
        reinits: res.trace.reinit_count,
        monotonicity_violations: res.trace.monotonicity_violations(DESCENT_SLACK).len(),
        trace: res.trace.records.clone(),
    };
    let text = match args.format {
        Format::Text => solve_text(&report),
        Format::Json => to_json(&report),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(if res.certified {
        EXIT_OK
    } else {
        EXIT_NOT_CERTIFIED
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<i32, Failure> {
    let m_values = parse_values(&args.m).map_err(Failure::usage)?;
    let k_values = parse_values(&args.k).map_err(Failure::usage)?;
    let methods = parse_methods(&args.methods).map_err(Failure::usage)?;
    let cfg = ExperimentConfig {
        n: args.n,
        m_values,
        k_values,
        trials: args.trials,
        methods,
        known_k: args.known_k,
        seed: args.descent.seed,
        descent: args.descent.config(HMode::Unknown),
        jobs: args.jobs,
        record_timing: !args.no_timing,
    };
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let records = run_experiment(&cfg).map_err(|e| Failure::runtime(e.to_string()))?;
    match &args.out {
        Some(path) => write_csv(&records, path).map_err(|e| Failure::runtime(e.to_string()))?,
        None => {
            let mut buf = Vec::new();
            write_csv_to(&records, &mut buf).map_err(|e| Failure::runtime(e.to_string()))?;
            emit(None, &String::from_utf8_lossy(&buf))?;
        }
    }
    let table = summarize(&records);
    if args.plot {
        let out = args.out.as_ref().expect("clap enforces --out with --plot");
        write_svg(&table, &out.with_extension("svg"))
            .map_err(|e| Failure::runtime(e.to_string()))?;
    }
    if args.out.is_some() {
        let summary = match args.format {
            Format::Json => to_json(&table),
            Format::Text => table
                .iter()
                .map(|r| {
                    format!(
                        "{} m={} k={}: {}/{} ({:.2})\n",
                        r.method, r.m, r.k, r.successes, r.trials, r.rate
                    )
                })
                .collect(),
        };
        emit(None, &summary)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OracleReport {
    #[serde(flatten)]
    oracle: OracleResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckReport>,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    method: Method,
    certified: bool,
    x_hat: Vec<f64>,
    agrees: bool,
}

fn cmd_oracle(args: &OracleArgs) -> Result<i32, Failure> {
    let inst = match (&args.instance, args.n) {
        (Some(path), _) => {
            BooleanQpInstance::read_json(path).map_err(|e| Failure::from_error(&e))?
        }
        (None, Some(n)) => {
            if n > MAX_ORACLE_N {
                return Err(Failure::usage(format!(
                    "oracle supports n <= {MAX_ORACLE_N}, got n = {n}"
                )));
            }
            let (m, k) = (args.m.unwrap_or(0), args.k.unwrap_or(0));
            let mut rng = ChaCha8Rng::seed_from_u64(args.descent.seed);
            let (mut inst, _) = gen_unique_instance(n, m, k, args.known_k, &mut rng)
                .map_err(|e| Failure::from_error(&e))?;
            inst.seed = Some(args.descent.seed);
            inst
        }
        (None, None) => return Err(Failure::usage("give --instance or --n/--m/--k")),
    };
    let oracle = brute_force(&inst).map_err(|e| Failure::from_error(&e))?;
    let mut code = EXIT_OK;
    let check = match args.check {
        Some(method) => {
            let h_mode = inst.k.map_or(HMode::Unknown, HMode::KnownK);
            let cfg = args.descent.config(h_mode);
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            let res =
                run_method(method, &inst, &cfg).map_err(|e| Failure::runtime(e.to_string()))?;
            let agrees = res.certified && res.x_binary.as_ref() == Some(&oracle.x_opt);
            if !agrees {
                code = EXIT_NOT_CERTIFIED;
            }
            Some(CheckReport {
                method,
                certified: res.certified,
                x_hat: res.x_hat,
                agrees,
            })
        }
        None => None,
    };
    let report = OracleReport { oracle, check };
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let o = &report.oracle;
            let x: Vec<String> = o.x_opt.iter().map(u8::to_string).collect();
            let mut s = format!(
                "x_opt: [{}]\nvalue: {:.9e}\nunique: {}\nevaluated: {}\n",
                x.join(" "),
                o.value,
                o.unique,
                o.evaluated
            );
            if let Some(c) = &report.check {
                s.push_str(&format!(
                    "check {}: certified={} agrees={}\n",
                    c.method, c.certified, c.agrees
                ));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(code)
}

fn cmd_plot(args: &PlotArgs) -> Result<i32, Failure> {
    let records = read_csv(&args.input).map_err(|e| Failure::from_error(&e))?;
    write_svg(&summarize(&records), &args.out).map_err(|e| Failure::runtime(e.to_string()))?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_values("14:34:2").unwrap().len(), 11);
        assert_eq!(parse_values("22:28:2").unwrap(), vec![22, 24, 26, 28]);
        assert_eq!(parse_values("5:45:5").unwrap().last(), Some(&45));
        assert_eq!(parse_values("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_values("30").unwrap(), vec![30]);
        assert_eq!(parse_values("5,25,45").unwrap(), vec![5, 25, 45]);
        assert!(parse_values("5:1").is_err());
        assert!(parse_values("1:5:0").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["boolsdr", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["boolsdr", "solve"]), EXIT_USAGE);
        assert_eq!(
            run(["boolsdr", "oracle", "--n", "30", "--m", "5", "--k", "2"]),
            EXIT_USAGE
        );
        assert_eq!(
            run(["boolsdr", "solve", "--instance", "/nonexistent/t.json"]),
            EXIT_USAGE
        );
    }
}
