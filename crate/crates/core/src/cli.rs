//! The `pi` command line: argument parsing, dispatch and rendering.
//!
//! [`dispatch`] never prints or exits; it returns the text and status so the
//! binary stays a two-liner and tests can call it directly.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::normalize::{canonical_of, normalizer};
use crate::permutation::{compile, parse_perm, to_dense, PermDense, PermError};
use crate::rewrite::{check_proof, parse_proof, rule_registry, RuleRecord};
use crate::semantics::{compare, eval, trace, EvalError, DEFAULT_BRUTE_FORCE_CAP};
use crate::syntax::{adjoint, infer, parse_comb, parse_type, parse_value, Comb, ParseError, Ty, TypeError};

/// Environment variable overriding the equivalence-check size limit.
pub const CAP_VAR: &str = "PI_BRUTE_FORCE_CAP";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pi", version, about = "Run, invert, compile and compare reversible combinators")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a program on one value.
    Run {
        file: PathBuf,
        /// Input type of the program.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        value: String,
        /// Run the program backwards; the value then belongs to its output type.
        #[arg(long)]
        reverse: bool,
        /// Print every top-level step.
        #[arg(long)]
        trace: bool,
    },
    /// Print the inverse program.
    Invert { file: PathBuf },
    /// Print the dense permutation of a program (needs --in) or of a
    /// transposition file (starts with `arity:`).
    Perm {
        file: PathBuf,
        #[arg(long = "in")]
        input: Option<String>,
    },
    /// Compare two programs on every value of a type.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long = "in")]
        input: String,
    },
    /// Print the combinator taking a type to its canonical form.
    Normalize {
        #[arg(long = "type")]
        ty: String,
    },
    /// Check an equational proof script.
    Prove { file: PathBuf },
    /// List the rewrite rules.
    Rules {
        /// Emit the full registry as JSON.
        #[arg(long)]
        dump: bool,
    },
}

/// What the binary should print, and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome { status: 0, output }
    }
}

/// A failure, rendered as `ERROR <kind>: <message>`.
#[derive(Debug)]
struct Failure {
    status: i32,
    kind: String,
    message: String,
}

impl Failure {
    fn domain(kind: impl Into<String>, message: impl Display) -> Failure {
        Failure {
            status: 1,
            kind: kind.into(),
            message: message.to_string(),
        }
    }

    fn usage(message: impl Display) -> Failure {
        Failure {
            status: 2,
            kind: "Usage".into(),
            message: message.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::domain("ParseError", e)
    }
}

impl From<TypeError> for Failure {
    fn from(e: TypeError) -> Failure {
        Failure::domain("TypeError", e)
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let kind = match &e {
            EvalError::Type(t) => return t.clone().into(),
            EvalError::IllTypedValue { .. } => "IllTypedValue",
            EvalError::ImpossibleValue { .. } => "ImpossibleValue",
            EvalError::IndexOutOfRange { .. } => "IndexOutOfRange",
            EvalError::RefusedTooLarge { .. } => "RefusedTooLarge",
        };
        Failure::domain(kind, e)
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Failure {
        let kind = match &e {
            PermError::Parse(p) => return p.clone().into(),
            PermError::Type(t) => return t.clone().into(),
            PermError::IndexOutOfRange { .. } => "IndexOutOfRange",
            PermError::ArityMismatch { .. } => "ArityMismatch",
            PermError::InvalidSwap { .. } => "InvalidSwap",
            PermError::NotABijection(_) => "NotABijection",
            PermError::RefusedTooLarge { .. } => "RefusedTooLarge",
        };
        Failure::domain(kind, e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_comb(path: &Path) -> Result<Comb, Failure> {
    let text = read(path)?;
    parse_comb(&text).map_err(|e| Failure::domain("ParseError", format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn brute_force_cap() -> Result<u64, Failure> {
    match std::env::var(CAP_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{CAP_VAR} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_BRUTE_FORCE_CAP),
    }
}

fn dense_json(p: &PermDense) -> String {
    to_json(&json!({ "arity": p.arity(), "image": p.image() }))
}

fn run(
    format: Format,
    file: &Path,
    input: &str,
    value: &str,
    reverse: bool,
    traced: bool,
) -> Result<String, Failure> {
    let c = load_comb(file)?;
    let input = parse_type(input)?;
    let v = parse_value(value)?;
    let out_ty = infer(&c, &input)?;
    let (c, from, to) = if reverse { (adjoint(&c), out_ty, input) } else { (c, input, out_ty) };
    if !v.has_type(&from) {
        return Err(Failure::domain("IllTypedValue", format!("value {v} does not have type {from}")));
    }
    if traced {
        let t = trace(&c, &v)?;
        return Ok(match format {
            Format::Text => t.to_string(),
            Format::Json => to_json(&t.records()),
        });
    }
    let r = eval(&c, &v)?;
    Ok(match format {
        Format::Text => format!("{r}\n"),
        Format::Json => to_json(&json!({ "value": r.to_string(), "type": to.to_string() })),
    })
}

fn perm(format: Format, file: &Path, input: Option<&str>) -> Result<String, Failure> {
    let text = read(file)?;
    let dense = if text.lines().any(|l| l.trim_start().starts_with("arity:")) {
        to_dense(&parse_perm(&text)?)
    } else {
        let input = input.ok_or_else(|| Failure::usage("perm on a combinator needs --in <type>"))?;
        let c = parse_comb(&text)?;
        compile(&c, &parse_type(input)?)?
    };
    Ok(match format {
        Format::Text => format!("{dense}\n"),
        Format::Json => dense_json(&dense),
    })
}

fn equiv(format: Format, f1: &Path, f2: &Path, input: &str) -> Result<String, Failure> {
    let (c1, c2) = (load_comb(f1)?, load_comb(f2)?);
    let domain = parse_type(input)?;
    let report = compare(&c1, &c2, &domain, brute_force_cap()?)?;
    if !report.equivalent {
        return Err(Failure::domain("NotEquivalent", &report));
    }
    Ok(match format {
        Format::Text => format!("{report}\n"),
        Format::Json => to_json(&json!({
            "equivalent": true,
            "agreeing": report.agreeing,
            "total": report.total,
        })),
    })
}

fn normalize(format: Format, ty: &str) -> Result<String, Failure> {
    let b: Ty = parse_type(ty)?;
    let c = normalizer(&b);
    let out = infer(&c, &b)?;
    debug_assert_eq!(out, canonical_of(&b));
    Ok(match format {
        Format::Text => format!("{c}\n: {b} <-> {out}\n"),
        Format::Json => to_json(&json!({
            "type": b.to_string(),
            "combinator": c.to_string(),
            "codomain": out.to_string(),
        })),
    })
}

fn prove(format: Format, file: &Path) -> Result<String, Failure> {
    let text = read(file)?;
    let script = parse_proof(&text).map_err(|e| Failure::domain("ParseError", e))?;
    let report = check_proof(&script);
    if let Some(f) = &report.failure {
        let at = if f.line > 0 {
            format!("step {} (line {})", f.step, f.line)
        } else {
            format!("step {}", f.step)
        };
        return Err(Failure::domain(f.kind.clone(), format!("{at}: {}", f.message)));
    }
    Ok(match format {
        Format::Text => format!("{report}\n"),
        Format::Json => to_json(&report),
    })
}

fn rules(format: Format, dump: bool) -> String {
    let records: Vec<RuleRecord> = rule_registry().iter().map(|r| r.record()).collect();
    if dump || format == Format::Json {
        return to_json(&records);
    }
    let width = rule_registry().iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rule_registry() {
        out.push_str(&format!("{:width$}  {}  =>  {}\n", r.name, r.lhs, r.rhs));
    }
    out
}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli) -> Outcome {
    let f = cli.format;
    let result = match &cli.command {
        Command::Run {
            file,
            input,
            value,
            reverse,
            trace,
        } => run(f, file, input, value, *reverse, *trace),
        Command::Invert { file } => load_comb(file).map(|c| {
            let inv = adjoint(&c);
            match f {
                Format::Text => format!("{inv}\n"),
                Format::Json => to_json(&json!({ "combinator": inv.to_string() })),
            }
        }),
        Command::Perm { file, input } => perm(f, file, input.as_deref()),
        Command::Equiv { file1, file2, input } => equiv(f, file1, file2, input),
        Command::Normalize { ty } => normalize(f, ty),
        Command::Prove { file } => prove(f, file),
        Command::Rules { dump } => Ok(rules(f, *dump)),
    };
    match result {
        Ok(output) => Outcome::ok(output),
        Err(e) => Outcome {
            status: e.status,
            output: format!("ERROR {}: {}\n", e.kind, e.message.replace('\n', " ")),
        },
    }
}

/// Parses `args` (program name first) and dispatches. Bad arguments give
/// status 2; `--help` and `--version` give status 0.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let output = if status == 2 {
                let text = e.to_string();
                let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
                format!("ERROR Usage: {first}\n{text}")
            } else {
                e.to_string()
            };
            Outcome { status, output }
        }
    }
}
