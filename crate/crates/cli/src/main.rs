//! `striplab`: apply zero-strip operators to polynomials and run the
//! verification suites.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use striplab::fourier::{fourier_eval, real_zero_verdict, KernelPoly};
use striplab::ops::{apply_strong_sum, op_strong, OpJson};
use striplab::random;
use striplab::suites::{run_suite, CaseStatus, SuiteConfig, SuiteReport, SUITES};
use striplab::{find_roots, DiffOp, Error, MultiplierOp, Poly};

const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

const DEFAULT_LAST: &str = "striplab-last-report.json";

#[derive(Parser, Debug)]
#[command(name = "striplab", version, about = "Zero-strip operator laboratory")]
struct Cli {
    /// Worker threads for suite cases (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Apply an operator to a polynomial and report roots and widths.
    Apply(ApplyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Re-emit the last suite report.
    Report(ReportArgs),
    /// Zero count for the Fourier transform of `e^{H(it)}` with no pass/fail
    /// claim, for kernels outside the proven cases.
    Experiment(ExperimentArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    /// Operator JSON, inline or a file path.
    #[arg(long)]
    op: String,
    /// Input polynomial JSON, inline or a file path.
    #[arg(long, conflicts_with = "random_degree")]
    poly: Option<String>,
    /// Use a seeded random real polynomial of this degree instead of `--poly`.
    #[arg(long)]
    random_degree: Option<usize>,
    /// Strip half-width for the random polynomial.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = striplab::roots::DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of cases (suite default if omitted).
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Kernel for the fourier suite: `-t4`-style terms of `H(it)`, inline
    /// JSON, or a JSON file `{"H_coeffs": [...], "tol": ...}`.
    #[arg(long, allow_hyphen_values = true)]
    kernel: Option<String>,
    /// Largest tolerated fraction of inconclusive cases, in `[0, 1]`.
    #[arg(long, default_value_t = 0.05, value_parser = fraction)]
    max_inconclusive: f64,
    /// Where the report is kept for `report`.
    #[arg(long, default_value = DEFAULT_LAST)]
    last: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_LAST)]
    last: PathBuf,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, allow_hyphen_values = true)]
    kernel: String,
    #[arg(long, default_value_t = 8.0)]
    x_max: f64,
    #[arg(long, default_value_t = 0.05)]
    y_lo: f64,
    #[arg(long, default_value_t = 2.0)]
    y_hi: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unconverged
            | Error::PhaseJump { .. }
            | Error::TolNotMet { .. }
            | Error::BoundaryZero { .. }
            | Error::NoDecay => EXIT_SOLVER,
            _ => EXIT_USAGE,
        };
        Fail { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let r = match cli.cmd {
        Cmd::Apply(a) => cmd_apply(&a),
        Cmd::Verify(a) => cmd_verify(&a),
        Cmd::Report(a) => cmd_report(&a),
        Cmd::Experiment(a) => cmd_experiment(&a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

/// Inline JSON if the text starts with `{` or `[`, otherwise a file path.
fn read_json(arg: &str) -> Result<Value, Fail> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Fail::usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Fail::usage(format!("malformed JSON: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = io::stdout().lock();
            writeln!(s, "{text}").map_err(|e| Fail::usage(e.to_string()))
        }
    }
}

fn width_or_zero(p: &Poly, tol: f64) -> Result<(f64, Option<striplab::RootSet>), Fail> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok((0.0, None));
    }
    let rs = find_roots(p, tol)?;
    let w = rs.strip_width()?;
    Ok((w, Some(rs)))
}

enum AnyOp {
    Diff(DiffOp),
    StrongSum(Poly, f64),
    Multiplier(MultiplierOp),
}

fn parse_op(v: &Value, order: usize) -> Result<AnyOp, Fail> {
    let j: OpJson = serde_json::from_value(v.clone()).map_err(|e| Fail::usage(format!("operator: {e}")))?;
    match j.family.as_str() {
        "multiplier" => {
            let gamma: Vec<f64> = serde_json::from_value(j.params.get("gamma").cloned().unwrap_or(Value::Null))
                .map_err(|e| Fail::usage(format!("multiplier gamma: {e}")))?;
            Ok(AnyOp::Multiplier(MultiplierOp::new(gamma)))
        }
        // Without an explicit `conj` flag a strong operator means T + T*.
        "strong" if j.params.get("conj").is_none() => {
            let h: Poly = serde_json::from_value(j.params.get("h").cloned().unwrap_or(json!({"coeffs": [[1.0, 0.0]]})))
                .map_err(|e| Fail::usage(format!("strong h: {e}")))?;
            let lambda = j.params.get("lambda").and_then(Value::as_f64).unwrap_or(0.0);
            Ok(AnyOp::StrongSum(h, lambda))
        }
        _ => Ok(AnyOp::Diff(DiffOp::from_json(&j, order)?)),
    }
}

fn cmd_apply(a: &ApplyArgs) -> Result<u8, Fail> {
    let p: Poly = match (&a.poly, a.random_degree) {
        (Some(s), _) => serde_json::from_value(read_json(s)?).map_err(|e| Fail::usage(format!("polynomial: {e}")))?,
        (None, Some(d)) => random::real_strip_poly(&mut random::rng(a.seed), d, a.mu),
        (None, None) => return Err(Fail::usage("either --poly or --random-degree is required")),
    };
    let deg = p.degree().ok_or_else(|| Fail::usage("zero polynomial"))?;
    let op = parse_op(&read_json(&a.op)?, deg)?;
    let (in_width, _) = width_or_zero(&p, a.tol)?;
    let (out, predicted, op_json) = match &op {
        AnyOp::Diff(d) => (d.apply(&p)?, d.predicted_width(in_width).ok(), serde_json::to_value(d.to_json()).unwrap()),
        AnyOp::StrongSum(h, lambda) => {
            let pair = op_strong(h, *lambda, deg)?;
            let out = apply_strong_sum(&pair, &p)?;
            let pred = if p.is_real() { pair.0.predicted_width(in_width).ok() } else { None };
            (out, pred, json!({"family": "strong", "params": {"h": h, "lambda": lambda, "sum": true}}))
        }
        AnyOp::Multiplier(m) => (
            m.apply(&p)?,
            m.predicted_width(in_width).ok(),
            json!({"family": "multiplier", "params": {"gamma": m.gamma}}),
        ),
    };
    let (out_width, roots) = width_or_zero(&out, a.tol)?;
    let report = json!({
        "op": op_json,
        "input": p,
        "output": out,
        "roots": roots,
        "input_width": in_width,
        "output_width": out_width,
        "predicted_width": predicted,
    });
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(0)
}

/// Parses a kernel argument into coefficients of `H`.
///
/// The shorthand lists terms of `H(it)` as a real even polynomial in `t`,
/// for example `-t4` or `-t4+0.5t2-1`. A term `c t^k` becomes the
/// coefficient `c (-1)^{k/2}` of `z^k` in `H`.
fn parse_kernel(arg: &str) -> Result<(Vec<f64>, Option<f64>), Fail> {
    let t = arg.trim();
    if t.starts_with('{') || t.starts_with('[') || t.ends_with(".json") {
        let v = read_json(t)?;
        let (coeffs, tol) = match &v {
            Value::Array(_) => (v.clone(), None),
            _ => (v.get("H_coeffs").cloned().unwrap_or(Value::Null), v.get("tol").and_then(Value::as_f64)),
        };
        let h: Vec<f64> = serde_json::from_value(coeffs).map_err(|e| Fail::usage(format!("H_coeffs: {e}")))?;
        return Ok((h, tol));
    }
    let mut h: Vec<f64> = Vec::new();
    let s: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if i > 0 && (ch == '+' || ch == '-') && !s[..i].ends_with(['e', 'E']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let bad = || Fail::usage(format!("bad kernel term `{term}`"));
        let (coef, power) = match term.find('t') {
            Some(p) => {
                let c = match &term[..p] {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
                };
                let e = term[p + 1..].trim_start_matches('^');
                let k = if e.is_empty() { 1 } else { e.parse::<usize>().map_err(|_| bad())? };
                (c, k)
            }
            None => (term.parse::<f64>().map_err(|_| bad())?, 0),
        };
        if power % 2 == 1 {
            return Err(Fail::usage(format!("odd power in `{term}`: H would not be real")));
        }
        if h.len() <= power {
            h.resize(power + 1, 0.0);
        }
        h[power] += if (power / 2) % 2 == 0 { coef } else { -coef };
    }
    Ok((h, None))
}

fn exit_code(r: &SuiteReport, max_inconclusive: f64) -> u8 {
    if r.count(CaseStatus::Counterexample) > 0 {
        EXIT_COUNTEREXAMPLE
    } else if r.count(CaseStatus::SolverFailure) > 0 {
        EXIT_SOLVER
    } else if r.count(CaseStatus::Inconclusive) as f64 > max_inconclusive * r.cases.len() as f64 {
        EXIT_INCONCLUSIVE
    } else {
        0
    }
}

fn render(r: &SuiteReport, format: Format) -> Result<String, Fail> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(r).unwrap()),
        Format::Csv => to_csv(r),
    }
}

fn to_csv(r: &SuiteReport) -> Result<String, Fail> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Fail::usage(e.to_string());
    w.write_record(["suite", "case", "predicted", "observed", "margin", "status"]).map_err(io)?;
    let num = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for c in &r.cases {
        let status = serde_json::to_value(c.status).unwrap();
        w.write_record([
            r.suite_id.clone(),
            c.case.to_string(),
            num(c.predicted),
            num(c.observed),
            num(c.margin),
            status.as_str().unwrap_or_default().to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Fail::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Fail> {
    if !SUITES.contains(&a.suite.as_str()) {
        return Err(Fail::usage(format!("unknown suite `{}`; expected one of {}", a.suite, SUITES.join(", "))));
    }
    let mut cfg = SuiteConfig::new(a.seed);
    cfg.n_cases = a.n;
    cfg.tol = a.tol;
    if let Some(k) = &a.kernel {
        let (h, tol) = parse_kernel(k)?;
        cfg.kernel = Some(h);
        cfg.tol = cfg.tol.or(tol);
    }
    let report = run_suite(&a.suite, &cfg)?;
    let stored = serde_json::to_string(&report).unwrap();
    fs::write(&a.last, stored).map_err(|e| Fail::usage(format!("{}: {e}", a.last.display())))?;
    eprintln!(
        "suite {} seed {}: {} cases, {} pass, {} counterexample, {} inconclusive, {} solver failure, {} ms",
        report.suite_id,
        report.seed,
        report.cases.len(),
        report.count(CaseStatus::Pass),
        report.count(CaseStatus::Counterexample),
        report.count(CaseStatus::Inconclusive),
        report.count(CaseStatus::SolverFailure),
        report.elapsed_ms
    );
    if let Some(out) = &a.out {
        emit(Some(out), &render(&report, a.format)?)?;
    } else if a.format == Format::Csv {
        emit(None, &render(&report, a.format)?)?;
    }
    Ok(exit_code(&report, a.max_inconclusive))
}

fn cmd_report(a: &ReportArgs) -> Result<u8, Fail> {
    let text = fs::read_to_string(&a.last).map_err(|e| Fail::usage(format!("{}: {e}", a.last.display())))?;
    let report: SuiteReport =
        serde_json::from_str(&text).map_err(|e| Fail::usage(format!("{}: {e}", a.last.display())))?;
    emit(a.out.as_deref(), &render(&report, a.format)?)?;
    Ok(0)
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<u8, Fail> {
    let (h, ktol) = parse_kernel(&a.kernel)?;
    let tol = a.tol.or(ktol).unwrap_or(1e-12);
    let k = KernelPoly::from_coeffs(&h)?;
    let r = real_zero_verdict(|z| fourier_eval(&k, z, tol), (-a.x_max, a.x_max), (a.y_lo, a.y_hi), 321)?;
    let out = json!({"H_coeffs": h, "tol": tol, "report": r});
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&out).unwrap())?;
    Ok(0)
}
