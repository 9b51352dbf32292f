//! Command-line front end: argument handling, dispatch and rendering.
//!
//! JSON on stdout is the machine interface. Exit codes: 0 success, 1
//! mathematical rejection, 2 usage error, 3 undecided at the precision cap.

pub mod parse;
pub mod render;

use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use specpoint::bounds::{compute_bounds, BoundInput};
use specpoint::cm::{class_poly, Disc};
use specpoint::poly::{cyclotomic, IntPoly, NumberFieldSpec, PolyError};
use specpoint::solver::{special_points, CurveInput, SolverError};
use specpoint::verify::run_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "specpoint", version, about = "Special points (j(tau), lambda) on plane curves")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Explicit bounds for a curve of given degrees and height.
    Bounds(BoundsArgs),
    /// Enumerate certified special points on F = 0.
    Solve(SolveArgs),
    /// Hilbert class polynomial of a discriminant.
    Classpoly {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Cyclotomic polynomial.
    Cyclo {
        #[arg(long)]
        n: u64,
    },
    /// Run a verification battery.
    Verify {
        #[arg(long)]
        check: String,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Degree of the number field.
    #[arg(long)]
    pub d: u64,
    /// Degree in X.
    #[arg(long)]
    pub dx: u64,
    /// Degree in Y.
    #[arg(long)]
    pub dy: u64,
    /// Logarithmic height h(F).
    #[arg(long)]
    pub height: f64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Polynomial in X and Y (and T with --field).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Monic irreducible minimal polynomial in T of the coefficient field.
    #[arg(long)]
    pub field: Option<String>,
    /// Accept --field without an irreducibility certificate.
    #[arg(long)]
    pub trust_field: bool,
    /// Discriminant cap replacing the certified one.
    #[arg(long)]
    pub delta_cap: Option<u64>,
    /// Restrict the order of lambda to at most this value.
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    #[arg(long)]
    pub table: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Outcome {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Integer as a JSON number of arbitrary size.
pub fn big(v: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&v.to_string()).expect("integer literal"))
}

/// Parses arguments and runs; never exits the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return Outcome::fail(EXIT_USAGE, "--threads must be positive");
        }
        // a second global init in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.cmd {
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Classpoly { disc } => cmd_classpoly(disc),
        Command::Cyclo { n } => cmd_cyclo(n),
        Command::Verify { check, max_n, trials } => cmd_verify(&check, max_n, trials),
    }
}

fn cmd_bounds(a: &BoundsArgs) -> Outcome {
    let input = BoundInput { d: a.d, delta1: a.dx, delta2: a.dy, h_f: a.height };
    match compute_bounds(&input) {
        Ok(r) => Outcome::ok(json_out(&json!({
            "a": r.a,
            "n_candidates": r.n_candidates,
            "n_cap": r.n_cap,
            "delta_cap": r.delta_cap,
        }))),
        Err(e) => Outcome::fail(EXIT_USAGE, e),
    }
}

fn parse_field(text: &str, trusted: bool) -> Result<NumberFieldSpec, Outcome> {
    let c = parse::parse_t_poly(text).map_err(|e| Outcome::fail(EXIT_USAGE, format!("--field: {e}")))?;
    if c.iter().any(|v| !v.is_integer()) {
        return Err(Outcome::fail(EXIT_REJECTED, "--field: minimal polynomial must have integer coefficients"));
    }
    let m = IntPoly::new(c.iter().map(|v| v.to_integer()).collect());
    if !m.lc().is_one() {
        return Err(Outcome::fail(EXIT_REJECTED, PolyError::NotMonic));
    }
    NumberFieldSpec::new(m, 0, trusted).map_err(|e| {
        let hint = matches!(e, PolyError::IrreducibilityUnknown(_));
        let msg = if hint { format!("--field: {e}; pass --trust-field to accept it") } else { format!("--field: {e}") };
        Outcome::fail(EXIT_REJECTED, msg)
    })
}

fn solver_exit(e: &SolverError) -> i32 {
    match e {
        SolverError::InfeasibleDeltaCap { .. } => EXIT_USAGE,
        SolverError::Cm(_) => EXIT_UNDECIDED,
        _ => EXIT_REJECTED,
    }
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let input = match &a.field {
        None => match parse::parse_poly(&a.poly) {
            Ok(f) => CurveInput::over_q(&f),
            Err(e) => return Outcome::fail(EXIT_USAGE, format!("--poly: {e}")),
        },
        Some(ft) => {
            let k = match parse_field(ft, a.trust_field) {
                Ok(k) => k,
                Err(o) => return o,
            };
            match parse::parse_field_poly(&a.poly) {
                Ok(f) => CurveInput::over_field(f, k),
                Err(e) => return Outcome::fail(EXIT_USAGE, format!("--poly: {e}")),
            }
        }
    };
    let input = CurveInput { delta_cap_override: a.delta_cap, n_max_override: a.n_max, ..input };
    match special_points(&input) {
        Ok(sol) => {
            let stdout = if a.table { render::solution_table(&sol) } else { json_out(&render::solution_json(&sol)) };
            let code = if sol.undecided_count() > 0 { EXIT_UNDECIDED } else { EXIT_OK };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome::fail(solver_exit(&e), e),
    }
}

fn cmd_classpoly(d: i64) -> Outcome {
    let disc = match Disc::new(d) {
        Ok(d) => d,
        Err(e) => return Outcome::fail(EXIT_USAGE, e),
    };
    match class_poly(disc) {
        Ok(h) => Outcome::ok(json_out(&json!({
            "disc": d,
            "class_number": h.h,
            "coeffs": h.coeffs_desc().iter().map(big).collect::<Vec<_>>(),
            "cert_margin": h.cert_margin,
            "precision": h.precision,
        }))),
        Err(e) => Outcome::fail(EXIT_UNDECIDED, e),
    }
}

/// Largest order accepted by `cyclo`.
pub const MAX_CYCLO: u64 = 1_000_000;

fn cmd_cyclo(n: u64) -> Outcome {
    if n == 0 || n > MAX_CYCLO {
        return Outcome::fail(EXIT_USAGE, format!("--n must be in 1..={MAX_CYCLO}"));
    }
    let p = cyclotomic(n);
    Outcome::ok(json_out(&json!({
        "n": n,
        "degree": p.deg(),
        "coeffs": p.coeffs().iter().rev().map(big).collect::<Vec<_>>(),
    })))
}

fn cmd_verify(check: &str, max_n: Option<u64>, trials: Option<u64>) -> Outcome {
    match run_check(check, max_n, trials) {
        Ok(r) => {
            let code = if r.passed { EXIT_OK } else { EXIT_REJECTED };
            Outcome { code, stdout: json_out(&serde_json::to_value(&r).expect("serializable")), stderr: String::new() }
        }
        Err(e) => Outcome::fail(EXIT_USAGE, e),
    }
}
