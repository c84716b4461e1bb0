//! Command-line front end.
//!
//! [`run_command`] is the whole program minus process plumbing: it takes the
//! argument vector and standard input and returns the exit code and both
//! output streams, which keeps the CLI testable in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};

use crate::checks::{run_suite, suite_names};
use crate::coeff::CoeffMode;
use crate::error::{Error, Result};
use crate::exponent::{q_independent, q_member, SubgroupBasis};
use crate::parse::{parse_exponent, parse_exponent_list};
use crate::series::Series;
use crate::session::{Session, SessionConfig, Value};
use crate::valuation::{additive_decompose, mult_decompose, residue};

/// Exit code when a check suite reports failures.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for usage and syntax errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hahn", version, about = "Exact arithmetic on truncated Hahn series")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Rank d of the exponent group ℚ^d.
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,
    /// Coefficient mode: `rational` or `real:P` with P significant digits.
    #[arg(long, global = true, default_value = "rational", value_parser = parse_mode)]
    coeff: CoeffMode,
    /// Cutoff for infinite expansions (default 12, or [12,0,…] when d > 1).
    #[arg(long, global = true)]
    order: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest n used by the E3 suite.
    #[arg(long = "e3-bound", global = true, default_value_t = 5)]
    e3_bound: u32,
    /// Register a polynomial in X1..X3, as NAME=EXPR. Repeatable.
    #[arg(long = "poly", global = true, value_name = "NAME=EXPR")]
    polys: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print the resulting series.
    Eval {
        /// Expression, or `-` to read it from standard input.
        expr: String,
    },
    /// Print the valuation of an expression (`+inf` for exact zero).
    V { expr: String },
    /// Print the residue of an element of the valuation ring.
    Res { expr: String },
    /// Print the additive decomposition (infinite, real, infinitesimal
    /// parts), or with `--mult` the multiplicative one (t^gamma, c, eps),
    /// one component per line.
    Decompose {
        expr: String,
        #[arg(long)]
        mult: bool,
    },
    /// Decide ℚ-linear independence of exponents modulo the span of a basis.
    Indep {
        /// Semicolon-separated exponents.
        #[arg(long)]
        gammas: String,
        /// Semicolon-separated generators of the subgroup (may be empty).
        #[arg(long, default_value = "")]
        basis: String,
    },
    /// Run a randomized property suite.
    Check {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        /// Emit the reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Parse series, one per line, and print their canonical forms.
    Parse {
        /// File to read, or `-` for standard input.
        #[arg(long = "roundtrip", value_name = "FILE")]
        file: String,
    },
}

fn parse_mode(text: &str) -> std::result::Result<CoeffMode, String> {
    if text == "rational" {
        return Ok(CoeffMode::Rational);
    }
    match text.strip_prefix("real:").map(str::parse::<u32>) {
        Some(Ok(p)) => Ok(CoeffMode::Real(p)),
        _ => Err(format!("expected `rational` or `real:P`, got `{text}`")),
    }
}

/// Output of one command invocation.
#[derive(Debug, Default)]
struct Output {
    stdout: String,
    stderr: String,
}

impl Output {
    fn line(&mut self, text: impl std::fmt::Display) {
        let _ = writeln!(self.stdout, "{text}");
    }
}

/// Runs the CLI on `argv` (including the program name) with the given
/// standard input, returning `(exit_code, stdout, stderr)`.
pub fn run_command(argv: &[String], stdin: &str) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    let mut out = Output::default();
    let code = match execute(&cli, stdin, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out.stderr, "error: {e}");
            e.exit_code()
        }
    };
    (code, out.stdout, out.stderr)
}

fn config_from(g: &GlobalOpts) -> Result<SessionConfig> {
    if g.dim == 0 {
        return Err(Error::Config("--dim must be at least 1".into()));
    }
    let mut config = SessionConfig::new(g.dim, g.coeff);
    if let Some(order) = &g.order {
        config.default_cutoff = parse_exponent(order, g.dim)?;
    }
    config.seed = g.seed;
    config.e3_bound = g.e3_bound;
    for spec in &g.polys {
        let (name, src) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--poly expects NAME=EXPR, got `{spec}`")))?;
        config.polys.push((name.trim().to_string(), src.to_string()));
    }
    config.validate()?;
    Ok(config)
}

fn read_arg<'a>(arg: &'a str, stdin: &'a str) -> &'a str {
    if arg == "-" {
        stdin
    } else {
        arg
    }
}

fn execute(cli: &Cli, stdin: &str, out: &mut Output) -> Result<i32> {
    let config = config_from(&cli.global)?;
    let session = Session::new(config.clone())?;
    let eval = |text: &str| -> Result<Series> { session.eval_series(read_arg(text, stdin).trim()) };
    match &cli.command {
        Command::Eval { expr } => {
            let value = session.eval_str(read_arg(expr, stdin).trim())?;
            out.line(value);
        }
        Command::V { expr } => {
            let v = eval(expr)?.valuation()?;
            out.line(Value::Valuation(v));
        }
        Command::Res { expr } => {
            let r = residue(&eval(expr)?)?;
            out.line(Series::constant(session.ctx(), r));
        }
        Command::Decompose { expr, mult } => {
            let a = eval(expr)?;
            if *mult {
                let d = mult_decompose(&a)?;
                out.line(Series::t_pow(a.ctx(), d.gamma));
                out.line(Series::constant(a.ctx(), d.c));
                out.line(d.eps);
            } else {
                let d = additive_decompose(&a)?;
                out.line(d.infinite_part);
                out.line(Series::constant(a.ctx(), d.real_part));
                out.line(d.infinitesimal_part);
            }
        }
        Command::Indep { gammas, basis } => {
            let gs = parse_exponent_list(gammas, config.dim)?;
            if gs.is_empty() {
                return Err(Error::Config("--gammas must list at least one exponent".into()));
            }
            let sb = SubgroupBasis::new(config.dim, parse_exponent_list(basis, config.dim)?)?;
            let indep = q_independent(&gs, &sb)?;
            out.line(if indep { "independent" } else { "dependent" });
            for g in &gs {
                match q_member(g, &sb)? {
                    Some(cert) => {
                        let cs: Vec<String> = cert.iter().map(|q| q.to_string()).collect();
                        out.line(format_args!("{g}: in span, coefficients [{}]", cs.join(", ")));
                    }
                    None => out.line(format_args!("{g}: not in span")),
                }
            }
        }
        Command::Check { suite, cases, json } => {
            let seed = config.seed;
            if !suite_names().contains(&suite.as_str()) {
                return Err(Error::UnknownSuite(format!(
                    "{suite} (known: {})",
                    suite_names().join(", ")
                )));
            }
            let reports = run_suite(suite, *cases, seed, &config)?;
            for r in &reports {
                let _ = writeln!(out.stderr, "suite {}: {} ms", r.suite, r.wall_time_ms);
            }
            if *json {
                let values: Vec<_> = reports.iter().map(|r| r.to_json_value(false)).collect();
                let doc = if values.len() == 1 {
                    values.into_iter().next().expect("one report")
                } else {
                    serde_json::Value::Array(values)
                };
                out.line(serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            } else {
                for r in &reports {
                    out.line(r);
                }
            }
            if reports.iter().any(|r| !r.is_green()) {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Parse { file } => {
            let text = if file == "-" {
                stdin.to_string()
            } else {
                std::fs::read_to_string(file).map_err(|e| Error::Config(format!("cannot read `{file}`: {e}")))?
            };
            let mut mismatches = 0;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let s = session.parse_series(line).map_err(|e| match e {
                    Error::Syntax { offset, column, message, .. } => Error::Syntax {
                        offset,
                        line: lineno + 1,
                        column,
                        message,
                    },
                    other => other,
                })?;
                let printed = s.to_string();
                if session.parse_series(&printed)? != s {
                    mismatches += 1;
                    let _ = writeln!(out.stderr, "line {}: `{printed}` does not reparse to the same series", lineno + 1);
                }
                out.line(printed);
            }
            if mismatches > 0 {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(0)
}
