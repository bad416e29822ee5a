//! The `tangleforge` command-line tool.
//!
//! Exit status is 0 when every internal check passes, 2 for bad input and 3
//! when a numerical audit fails (the report is still written).

mod commands;
mod format;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use commands::{
    cmd_bound, cmd_char_curves, cmd_ems, cmd_measures, cmd_polyhedron, cmd_roof, cmd_sigma_curve, CHAR_CURVE_TOLERANCE, DISCREPANCY_TOLERANCE,
    MEMBERSHIP_TOLERANCE, MONOGAMY_TOLERANCE,
};
pub use format::{format_number, round, to_csv, to_json, SIGNIFICANT_DIGITS};
pub use input::{parse_number, resolve, Input};

use crate::qstate::DensityMatrix;
use crate::roof::{RoofMeasure, RoofProblem};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "tangleforge", version, about = "Three-qubit entanglement measures and convex-roof audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    x_max: f64,
    /// Grid points, endpoints included.
    #[arg(long, global = true, default_value_t = 101)]
    steps: usize,
    /// Phase lattice points per axis for the characteristic curves.
    #[arg(long, global = true, default_value_t = 24)]
    phi_grid: usize,
    /// Decomposition size for roof searches; defaults to max(8, 2·rank).
    #[arg(long, global = true)]
    ensemble_size: Option<usize>,
    #[arg(long, global = true, default_value_t = RoofProblem::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = RoofProblem::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, default_value_t = RoofProblem::DEFAULT_TOLERANCE)]
    tol: f64,
    /// Defaults to csv for curve sweeps and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Three-tangle, concurrences, negativity and π-tangle of a three-qubit state.
    Measures { state: String },
    /// Closed-form tangles of σ(x) with the monogamy check.
    SigmaCurve {
        /// Add a column of numerically minimized roof values.
        #[arg(long)]
        roof: bool,
    },
    /// Phase-minimized X-family curves, their convex envelope and the closed form.
    CharCurves,
    /// Convex-roof search for a state.
    Roof {
        state: String,
        /// tau3 or one_tangle_A.
        #[arg(long, default_value = "tau3")]
        measure: String,
    },
    /// Membership in the zero-tangle simplex of the GHZ+ subspace.
    Polyhedron { state: String },
    /// Purification-based multipartite measure of a pure state.
    Ems { state: String },
    /// Upper bound on the three-tangle of the rank-8 GHZ mixture.
    Bound {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
}

/// Validated sweep, roof and output settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub steps: usize,
    pub phi_grid: usize,
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            x_min: 0.0,
            x_max: 1.0,
            steps: 101,
            phi_grid: 24,
            ensemble_size: None,
            restarts: RoofProblem::DEFAULT_RESTARTS,
            seed: RoofProblem::DEFAULT_SEED,
            tol: RoofProblem::DEFAULT_TOLERANCE,
            format: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.x_min) || !unit(self.x_max) || self.x_min >= self.x_max {
            return Err(Error::param(format!("x range [{}, {}] must be increasing inside [0, 1]", self.x_min, self.x_max)));
        }
        if self.steps < 2 {
            return Err(Error::param("steps must be at least 2"));
        }
        if self.phi_grid < 4 {
            return Err(Error::param("phi grid must be at least 4"));
        }
        if self.restarts == 0 {
            return Err(Error::param("restarts must be positive"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::param("tolerance must be positive"));
        }
        Ok(())
    }

    pub fn x_grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| if i == n { self.x_max } else { self.x_min + (self.x_max - self.x_min) * i as f64 / n as f64 })
            .collect()
    }

    pub fn roof_problem(&self, target: DensityMatrix, measure: RoofMeasure) -> RoofProblem {
        let p = RoofProblem::new(target, measure).restarts(self.restarts).seed(self.seed).tolerance(self.tol);
        match self.ensemble_size {
            Some(m) => p.ensemble_size(m),
            None => p,
        }
    }

    fn roof_settings(&self) -> Value {
        json!({
            "restarts": self.restarts,
            "seed": self.seed,
            "tolerance": self.tol,
            "ensemble_size": self.ensemble_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

impl Table {
    fn new(columns: &[&str], rows: Vec<Vec<Value>>, summary: Vec<(String, Value)>) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows, summary }
    }
}

/// Output of one command: a JSON document, optionally backed by a table for
/// CSV output, and the audit checks that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub document: Value,
    pub table: Option<Table>,
    pub failures: Vec<String>,
}

impl Report {
    fn document(command: &'static str, document: Value) -> Self {
        Report { command, document, table: None, failures: Vec::new() }
    }

    fn table(command: &'static str, table: Table, extra: Vec<(String, Value)>, failures: Vec<String>) -> Self {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(command));
        for (k, v) in extra {
            doc.insert(k, v);
        }
        doc.insert("columns".into(), json!(table.columns));
        let rows: Vec<Value> =
            table.rows.iter().map(|r| Value::Object(table.columns.iter().cloned().zip(r.iter().cloned()).collect())).collect();
        doc.insert("rows".into(), Value::Array(rows));
        for (k, v) in &table.summary {
            doc.insert(k.clone(), v.clone());
        }
        doc.insert("audit_passed".into(), json!(failures.is_empty()));
        Report { command, document: Value::Object(doc), table: Some(table), failures }
    }

    /// Process exit status: success, or audit failure when any check failed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_AUDIT
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn default_format(&self) -> Format {
        if self.table.is_some() {
            Format::Csv
        } else {
            Format::Json
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (format, &self.table) {
            (Format::Json, _) => to_json(self.document.clone()),
            (Format::Csv, Some(t)) => to_csv(&t.columns, &t.rows, &t.summary),
            (Format::Csv, None) => {
                let fields = self.document.as_object().expect("reports are objects");
                let rows: Vec<Vec<Value>> = fields.iter().map(|(k, v)| vec![json!(k), v.clone()]).collect();
                to_csv(&["field".into(), "value".into()], &rows, &[])
            }
        }
    }
}

fn config_of(cli: &Cli) -> RunConfig {
    RunConfig {
        x_min: cli.x_min,
        x_max: cli.x_max,
        steps: cli.steps,
        phi_grid: cli.phi_grid,
        ensemble_size: cli.ensemble_size,
        restarts: cli.restarts,
        seed: cli.seed,
        tol: cli.tol,
        format: cli.format,
        out: cli.out.clone(),
    }
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match command {
        Command::Measures { state } => cmd_measures(&resolve(state)?, cfg),
        Command::SigmaCurve { roof } => cmd_sigma_curve(cfg, *roof),
        Command::CharCurves => cmd_char_curves(cfg),
        Command::Roof { state, measure } => cmd_roof(&resolve(state)?, measure.parse()?, cfg),
        Command::Polyhedron { state } => cmd_polyhedron(&resolve(state)?),
        Command::Ems { state } => cmd_ems(&resolve(state)?),
        Command::Bound { xi, x, y } => cmd_bound(*xi, *x, *y),
    }
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let cfg = config_of(&cli);
    let report = match execute(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = report.render(cfg.format.unwrap_or_else(|| report.default_format()));
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    for f in &report.failures {
        eprintln!("audit failed: {f}");
    }
    report.exit_code()
}
