use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::Value;
use slotchain_core::algebra::Algebra;
use slotchain_core::forms::QuadraticForm;
use slotchain_core::linalg::Vector;
use slotchain_core::quaternion::{QuaternionSymbol, TensorPresentation};

/// Outcome classes, one per exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Yes = 0,
    No = 1,
    Unknown = 2,
    Input = 3,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Yes => "true",
            Status::No => "false",
            Status::Unknown => "unknown",
            Status::Input => "input-error",
        }
    }
}

/// A failure that ends the command with a diagnostic on stderr.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
    /// Optional JSON written to the output despite the failure.
    pub body: Option<Value>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { status: Status::Input, message: message.into(), body: None }
    }

    pub fn no(message: impl Into<String>) -> Self {
        Failure { status: Status::No, message: message.into(), body: None }
    }

    pub fn unknown(message: impl Into<String>) -> Self {
        Failure { status: Status::Unknown, message: message.into(), body: None }
    }

    pub fn with_body(mut self, body: Value) -> Self {
        self.body = Some(body);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Reads `arg` as inline JSON when it looks like JSON, else as a file path.
pub fn load(arg: &str, what: &str) -> Result<Value, Failure> {
    let trimmed = arg.trim_start();
    let (text, source) = if trimmed.starts_with(['{', '[', '"']) {
        (arg.to_string(), "inline".to_string())
    } else {
        let text = fs::read_to_string(Path::new(arg)).map_err(|e| Failure::input(format!("--{what}: cannot read {arg}: {e}")))?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("--{what} ({source}): line {}, column {}: {e}", e.line(), e.column())))
}

fn context<E: fmt::Display>(what: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::input(format!("--{what}: {e}"))
}

pub fn form(arg: &str, what: &'static str) -> Result<QuadraticForm, Failure> {
    QuadraticForm::from_json(&load(arg, what)?, None).map_err(context(what))
}

pub fn symbol(arg: &str, what: &'static str) -> Result<QuaternionSymbol, Failure> {
    QuaternionSymbol::from_json(&load(arg, what)?, None).map_err(context(what))
}

fn is_presentation(v: &Value) -> bool {
    v.get("symbols").is_some() || v.get("factors").is_some()
}

/// Either a bare symbol or a tensor presentation.
pub enum Quaternionic {
    Symbol(QuaternionSymbol),
    Tensor(TensorPresentation),
}

pub fn quaternionic(arg: &str, what: &'static str) -> Result<Quaternionic, Failure> {
    let v = load(arg, what)?;
    if is_presentation(&v) {
        TensorPresentation::from_json(&v, None).map(Quaternionic::Tensor).map_err(context(what))
    } else {
        QuaternionSymbol::from_json(&v, None).map(Quaternionic::Symbol).map_err(context(what))
    }
}

/// An algebra given by its table, or by a tensor presentation whose
/// factors are then available as a known decomposition.
pub fn algebra(arg: &str, what: &'static str) -> Result<(Algebra, Option<TensorPresentation>), Failure> {
    let v = load(arg, what)?;
    if is_presentation(&v) {
        let p = TensorPresentation::from_json(&v, None).map_err(context(what))?;
        Ok((p.algebra().clone(), Some(p)))
    } else {
        Ok((Algebra::from_json(&v, None).map_err(context(what))?, None))
    }
}

pub fn presentation(arg: &str, what: &'static str, default: &Algebra) -> Result<TensorPresentation, Failure> {
    TensorPresentation::from_json(&load(arg, what)?, Some(default.field())).map_err(context(what))
}

pub fn element(a: &Algebra, arg: &str, what: &'static str) -> Result<Vector, Failure> {
    a.element_from_json(&load(arg, what)?).map_err(context(what))
}

pub fn elements(a: &Algebra, arg: &str, what: &'static str) -> Result<Vec<Vector>, Failure> {
    let v = load(arg, what)?;
    let arr = v.as_array().ok_or_else(|| Failure::input(format!("--{what}: expected an array of coordinate arrays")))?;
    arr.iter()
        .enumerate()
        .map(|(i, e)| a.element_from_json(e).map_err(|err| Failure::input(format!("--{what}[{i}]: {err}"))))
        .collect()
}
