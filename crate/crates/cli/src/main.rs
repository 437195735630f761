mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slotchain_core::config::{Bounds, DEFAULT_SEED};

use input::{Failure, Status};

#[derive(Parser)]
#[command(name = "slotchain", version, about = "Exact quadratic forms, Clifford and quaternion algebras, certified chains")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Seed for randomized searches and suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest rational height tried by searches over Q.
    #[arg(long, global = true)]
    pub max_height: Option<u32>,
    /// Largest polynomial degree tried by searches over function fields.
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Search nodes visited before giving up.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
}

impl Global {
    pub fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_height: self.max_height.unwrap_or(d.max_height),
            max_degree: self.max_degree.unwrap_or(d.max_degree),
            max_nodes: self.max_nodes.unwrap_or(d.max_nodes),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Clifford algebras.
    #[command(subcommand)]
    Clifford(CliffordCmd),
    /// Quaternion symbols.
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Structure-constant algebras and element chains.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Acceptance suites and certificate checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
pub struct FormArg {
    /// Form JSON, inline or a path: {"diag":["1","-1"]} or {"char2":true,"pairs":[["1","1"]]}.
    #[arg(long, visible_alias = "json")]
    pub form: String,
}

#[derive(Subcommand)]
pub enum FormCmd {
    /// Dimension and discriminant (Arf invariant in characteristic 2).
    Invariants(FormArg),
    /// Decide isotropy, with a witness when one is found.
    Isotropic(FormArg),
    /// Witt decomposition with its change of basis.
    Witt(FormArg),
    /// Modify one entry so the discriminant becomes trivial.
    Trivialize(FormArg),
}

#[derive(Subcommand)]
pub enum CliffordCmd {
    /// Structure constants of C(f) plus a relation check.
    Build(FormArg),
    /// E(f) for a form of trivial discriminant.
    ExtractE(FormArg),
}

#[derive(Args)]
pub struct SymbolArg {
    /// Symbol JSON: {"char2":false,"a":"-1","b":"-1"}.
    #[arg(long, visible_alias = "json")]
    pub symbol: String,
}

#[derive(Args)]
pub struct PairArg {
    /// Symbol or tensor presentation ({"symbols":[…]}).
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
}

#[derive(Args)]
pub struct IsoArg {
    #[command(flatten)]
    pub pair: PairArg,
    /// Also search for an explicit isomorphism of the realized algebras.
    #[arg(long)]
    pub map: bool,
}

#[derive(Args)]
pub struct ChainPairArg {
    #[command(flatten)]
    pub pair: PairArg,
    /// For tensor presentations: take the isomorphism as given instead of
    /// searching for one.
    #[arg(long)]
    pub assume_isomorphic: bool,
}

#[derive(Subcommand)]
pub enum QuatCmd {
    /// Structure constants of the symbol with its generators.
    Realize(SymbolArg),
    /// Decide whether the symbol is a division algebra.
    Division(SymbolArg),
    /// Decide isomorphism of two symbols.
    Iso(IsoArg),
    /// Common-slot chain between two isomorphic symbols or presentations.
    Chain(ChainPairArg),
}

#[derive(Args)]
pub struct CentralizerArg {
    /// Algebra JSON or tensor presentation.
    #[arg(long, visible_alias = "json")]
    pub algebra: String,
    /// JSON array of coordinate arrays.
    #[arg(long)]
    pub elements: String,
}

#[derive(Args)]
pub struct TensorArg {
    /// Algebra JSON or tensor presentation.
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
}

#[derive(Args)]
pub struct ChainArg {
    /// Algebra JSON or tensor presentation; a presentation doubles as the
    /// decomposition used beyond degree 4.
    #[arg(long, visible_alias = "json")]
    pub presentation: String,
    /// Coordinates of the first endpoint.
    #[arg(long)]
    pub x: String,
    /// Coordinates of the second endpoint.
    #[arg(long)]
    pub xprime: String,
    /// Known tensor decomposition of the algebra.
    #[arg(long)]
    pub oracle: Option<String>,
}

#[derive(Args)]
pub struct DecomposeArg {
    #[arg(long, visible_alias = "json")]
    pub presentation: String,
    /// Square-central or Artin-Schreier element.
    #[arg(long)]
    pub x: String,
    /// Split this element as t₀ + t₁ relative to x.
    #[arg(long, conflicts_with = "xprime", required_unless_present = "xprime")]
    pub t: Option<String>,
    /// Second marked element: find a decomposition with x and x' in distinct factors.
    #[arg(long)]
    pub xprime: Option<String>,
    #[arg(long)]
    pub oracle: Option<String>,
}

#[derive(Subcommand)]
pub enum AlgebraCmd {
    /// Basis of the centralizer of a set of elements.
    Centralizer(CentralizerArg),
    /// Tensor product of two algebras.
    Tensor(TensorArg),
    /// Certified chain between two square-central or Artin-Schreier elements.
    Chain(ChainArg),
    /// Decomposition relative to marked elements.
    Decompose(DecomposeArg),
}

#[derive(Subcommand)]
pub enum VerifyCmd {
    /// Run an acceptance suite by name or number, or "all".
    Suite { name: String },
    /// Re-validate a certificate with the independent checker.
    Chain {
        /// Certificate JSON, inline or a path.
        #[arg(long, visible_alias = "json")]
        cert: String,
    },
}

/// Text or JSON produced by a successful (or verified-false) command.
pub enum Report {
    Json(serde_json::Value),
    Text(String),
}

fn dispatch(cli: &Cli) -> Result<(Status, Report), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Form(c) => commands::form(c, g),
        Command::Clifford(c) => commands::clifford(c, g),
        Command::Quat(c) => commands::quat(c, g),
        Command::Algebra(c) => commands::algebra(c, g),
        Command::Verify(c) => commands::verify(c, g),
    }
}

fn emit(report: &Report, g: &Global) -> Result<(), Failure> {
    let text = match report {
        Report::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialise") + "\n",
        Report::Text(t) => t.clone(),
    };
    match &g.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("--out {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::Input as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (status, report) = match dispatch(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error ({}): {}", f.status.name(), f.message);
            if let Some(body) = f.body {
                if let Err(e) = emit(&Report::Json(body), &cli.global) {
                    eprintln!("error: {e}");
                }
            }
            return ExitCode::from(f.status as u8);
        }
    };
    if let Err(e) = emit(&report, &cli.global) {
        eprintln!("error: {e}");
        return ExitCode::from(Status::Input as u8);
    }
    ExitCode::from(status as u8)
}
