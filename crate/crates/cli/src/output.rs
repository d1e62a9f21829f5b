use std::fs;
use std::io::{self, Write};
use std::path::Path;

use pivotal::dist::KwiseWitness;
use pivotal::json::{builtin_from_spec, dist_from_str, function_from_str};
use pivotal::rational::{self, Rational};
use pivotal::{Distribution, Error, PlayerFunction};
use serde_json::{json, Value};

/// A message for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // malformed input is a usage error; anything the mathematics
        // rejects counts as a failed run
        let code = match e {
            Error::Parse(_)
            | Error::Alphabet(_)
            | Error::Arity { .. }
            | Error::Symbol { .. }
            | Error::Player { .. }
            | Error::WeightSum(_)
            | Error::Weight { .. }
            | Error::DuplicateOutcome(_)
            | Error::Range(_)
            | Error::Parameter(_) => 2,
            _ => 1,
        };
        Failure { message: e.to_string(), code }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { message: e.to_string(), code: 2 }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { message: e.to_string(), code: 2 }
    }
}

pub type Run<T = bool> = Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn load_dist(path: &Path) -> Run<Distribution> {
    dist_from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// A function file, or a builtin spec when no such file exists.
pub fn load_function(arg: &str) -> Run<PlayerFunction> {
    let path = Path::new(arg);
    if path.is_file() {
        return function_from_str(&read(path)?).map_err(|e| Failure::usage(format!("{arg}: {e}")));
    }
    builtin_from_spec(arg)
        .map(Into::into)
        .map_err(|e| Failure::usage(format!("{arg} is neither a readable file nor a builtin: {e}")))
}

pub fn parse_rational(name: &str, s: &str) -> Run<Rational> {
    rational::parse(s).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

pub fn required(name: &str, v: &Option<String>) -> Run<Rational> {
    let s = v.as_deref().ok_or_else(|| Failure::usage(format!("--{name} is required here")))?;
    parse_rational(name, s)
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Run<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))?,
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

pub fn print_json(v: &impl serde::Serialize) -> Run<()> {
    emit(None, &serde_json::to_string_pretty(v).expect("report serializes"))
}

pub fn csv_writer() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

pub fn witness_json(w: &KwiseWitness) -> Value {
    json!({
        "players": w.players,
        "assignment": w.assignment,
        "joint": pivotal::report::value(&w.joint),
        "product": pivotal::report::value(&w.product),
    })
}
