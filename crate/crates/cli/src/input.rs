//! Reading polynomial and rational-expression arguments.

use std::fs;
use std::path::Path;

use serde_json::Value;
use slicereg::{Error, QuatFn, Quaternion, RationalExpr, RegPoly};

/// Failures of the front end itself, before any mathematics runs.
#[derive(Debug)]
pub enum InputError {
    Read {
        path: String,
        source: std::io::Error,
    },
    Parse(String),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Read { path, source } => write!(f, "cannot read {path}: {source}"),
            InputError::Parse(msg) => write!(f, "{msg}"),
        }
    }
}

/// The text behind a `--poly`-style argument: `@path`, inline JSON, or a
/// path to an existing file.
fn source_text(arg: &str) -> Result<String, InputError> {
    let read = |path: &str| {
        fs::read_to_string(path).map_err(|source| InputError::Read {
            path: path.to_string(),
            source,
        })
    };
    if let Some(path) = arg.strip_prefix('@') {
        return read(path);
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if Path::new(arg).is_file() {
        return read(arg);
    }
    Err(InputError::Parse(format!(
        "`{arg}` is neither inline JSON nor a readable file"
    )))
}

fn json(arg: &str) -> Result<Value, InputError> {
    let text = source_text(arg)?;
    serde_json::from_str(&text).map_err(|e| InputError::Parse(format!("invalid JSON: {e}")))
}

fn parse_error(e: Error) -> InputError {
    match e {
        Error::Parse(msg) => InputError::Parse(msg),
        other => InputError::Parse(other.to_string()),
    }
}

pub fn poly(arg: &str) -> Result<RegPoly, InputError> {
    let v = json(arg)?;
    serde_json::from_value(v).map_err(|e| InputError::Parse(format!("invalid polynomial: {e}")))
}

/// A polynomial, or a rational expression when the JSON carries an `"op"` key.
pub enum Function {
    Poly(RegPoly),
    Rational(RationalExpr),
}

impl Function {
    pub fn as_fn(&self) -> &dyn QuatFn {
        match self {
            Function::Poly(p) => p,
            Function::Rational(r) => r,
        }
    }
}

pub fn function(arg: &str) -> Result<Function, InputError> {
    let v = json(arg)?;
    if v.get("op").is_some() {
        RationalExpr::from_json(&v)
            .map(Function::Rational)
            .map_err(parse_error)
    } else {
        serde_json::from_value(v)
            .map(Function::Poly)
            .map_err(|e| InputError::Parse(format!("invalid polynomial: {e}")))
    }
}

pub fn quaternion(literal: &str) -> Result<Quaternion, InputError> {
    literal.parse().map_err(parse_error)
}
