//! `jacobi`: batch front end for the weight-system pipeline.
//!
//! Every run prints (or writes to `--out`) one JSON report. Exit status is 0
//! when the identities asserted by the subcommand hold, 1 when one fails and
//! 2 on invalid input.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jacobi::lie::AlgebraSpec;
use jacobi::Skeleton;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "jacobi", version, about = "Jacobi diagrams, directed weight systems and the sigma observable")]
pub struct Cli {
    /// Algebra spec JSON: {"family": "gl"|"sl2", "n": k, "rep": "defining"|"adjoint"}.
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rewrite each directed m-wheel to zero and evaluate its orientation sum.
    WheelVanish {
        /// Wheel sizes, e.g. `2..4` or `2,4`.
        #[arg(long, default_value = "2..4")]
        m: String,
    },
    /// Sigma of the m-wheel over a range of gl(n) and its interpolating polynomial.
    Sigma {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "1..4")]
        n: String,
        /// Also compare with the generic path and the weight of the symmetrised wheel.
        #[arg(long)]
        cross_check: bool,
    },
    /// Weight of a diagram (builtin name, canonical key or JSON file).
    Weight {
        diagram: String,
        #[arg(long, default_value = "circle")]
        skeleton: Skeleton,
        /// Evaluate on the double in the block representation and compare with the orientation sum.
        #[arg(long)]
        double: bool,
    },
    /// Legal orientations of a diagram and their leg-bound reports.
    Orientations {
        diagram: String,
        #[arg(long, default_value = "circle")]
        skeleton: Skeleton,
    },
    /// Enumerate diagram classes up to a degree.
    Corpus {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value = "circle")]
        skeleton: Skeleton,
        /// Write the classes as JSON lines to this file.
        #[arg(long)]
        lines: Option<PathBuf>,
        /// Run the primitive audit for every degree (circle only).
        #[arg(long)]
        audit: bool,
    },
    /// Writhe of a polygonal curve (JSON or CSV).
    Writhe {
        curve: PathBuf,
        #[arg(long)]
        closed: bool,
        /// Relative clearance between non-adjacent segments.
        #[arg(long, default_value_t = jacobi::geom::DEFAULT_CLEARANCE)]
        clearance: f64,
        /// Cross-check with this many Monte Carlo samples.
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Gauss linking number of two closed curves.
    Link {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = jacobi::geom::DEFAULT_CLEARANCE)]
        clearance: f64,
        /// Allowed distance from the nearest integer.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Dump the structure constants and metric of the algebra.
    Algebra {
        /// Dump the double instead.
        #[arg(long)]
        double: bool,
    },
}

/// Result of a subcommand: its body and whether the asserted identities hold.
pub struct Report {
    pub pass: bool,
    pub body: Value,
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    match e.downcast_ref::<jacobi::Error>() {
        Some(jacobi::Error::InvalidArgument(_)) => "invalid-argument",
        Some(jacobi::Error::InvalidInput(_)) => "invalid-input",
        Some(jacobi::Error::NotApplicable(_)) => "not-applicable",
        Some(jacobi::Error::NumericalDegeneracy(_)) => "numerical-degeneracy",
        Some(jacobi::Error::Parse(_)) => "parse",
        None => "io",
    }
}

fn algebra_spec(cli: &Cli) -> anyhow::Result<AlgebraSpec> {
    match &cli.algebra {
        None => Ok(AlgebraSpec::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| jacobi::Error::InvalidInput(format!("{}: {e}", p.display())))?;
            Ok(serde_json::from_str(&text).map_err(|e| jacobi::Error::Parse(format!("{}: {e}", p.display())))?)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let spec = algebra_spec(cli)?;
    match &cli.command {
        Command::WheelVanish { m } => commands::wheel_vanish(&spec, m),
        Command::Sigma { m, n, cross_check } => commands::sigma(&spec, *m, n, *cross_check),
        Command::Weight { diagram, skeleton, double } => commands::weight(&spec, diagram, *skeleton, *double),
        Command::Orientations { diagram, skeleton } => commands::orientations(diagram, *skeleton),
        Command::Corpus { max_degree, skeleton, lines, audit } => {
            commands::corpus(*max_degree, *skeleton, lines.as_deref(), *audit)
        }
        Command::Writhe { curve, closed, clearance, mc_samples } => {
            commands::writhe(curve, *closed, *clearance, *mc_samples, cli.seed)
        }
        Command::Link { first, second, clearance, tolerance } => commands::link(first, second, *clearance, *tolerance),
        Command::Algebra { double } => commands::algebra(&spec, *double),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::WheelVanish { .. } => "wheel-vanish",
        Command::Sigma { .. } => "sigma",
        Command::Weight { .. } => "weight",
        Command::Orientations { .. } => "orientations",
        Command::Corpus { .. } => "corpus",
        Command::Writhe { .. } => "writhe",
        Command::Link { .. } => "link",
        Command::Algebra { .. } => "algebra",
    }
}

fn emit(cli: &Cli, report: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("jacobi: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    let (report, code) = match run(&cli) {
        Ok(r) => {
            let status = if r.pass { "pass" } else { "fail" };
            (json!({"command": name, "status": status, "report": r.body}), u8::from(!r.pass))
        }
        Err(e) => {
            eprintln!("jacobi {name}: {e}");
            (json!({"command": name, "status": "error", "error": {"kind": error_kind(&e), "message": e.to_string()}}), 2)
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("jacobi: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
