//! Command-line front end: `verify`, `derive`, `table`, `eval`.
//!
//! Exit codes: 0 clean, 1 mathematical failure (violations, inconsistent or
//! incomplete derivation), 2 usage error.

mod expr;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::checker::{Checker, Exec, ViolationReport};
use crate::deriver::{self, DeriveError, Derivation};
use crate::exactfield::{GaussianRational, RatFun, Scalar};
use crate::structures::{read_header, Mode, Sector, StructureError, StructureSystem, Window};

pub use expr::{parse_expr, Expr, ExprError};

#[derive(Debug, Parser)]
#[command(name = "virasoro-lsa", version, about = "Exact left-symmetric superalgebra structures on the super-Virasoro algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every defining identity over the window.
    Verify {
        #[command(flatten)]
        opts: Options,
        /// Verify a table written by `table` instead of the closed form.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Re-derive the unique solution by propagation.
    Derive {
        #[command(flatten)]
        opts: Options,
        /// Write the derivation trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Emit the multiplication table of the window.
    Table {
        #[command(flatten)]
        opts: Options,
    },
    /// Evaluate a product expression such as "[L(2), L(-2)]".
    Eval {
        #[command(flatten)]
        opts: Options,
        expr: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Odd-index offset: 0 (Ramond) or 1/2 (Neveu-Schwarz).
    #[arg(long, default_value = "1/2")]
    pub theta: String,
    #[arg(long, default_value_t = 8)]
    pub window: u32,
    /// "symbolic" or an exact Gaussian rational such as 3/5 or 2/3*i.
    #[arg(long, default_value = "symbolic")]
    pub epsilon: String,
    /// Drop the central extension.
    #[arg(long)]
    pub centerless: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Math(_) => 1,
        }
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Parse(_)
            | StructureError::SectorParity { .. }
            | StructureError::InadmissibleEpsilon(_)
            | StructureError::Field(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

enum Epsilon {
    Symbolic,
    Numeric(GaussianRational),
}

impl Options {
    fn sector(&self) -> Result<Sector, Failure> {
        Ok(Sector::parse_theta(&self.theta)?)
    }

    fn window(&self) -> Result<Window, Failure> {
        Ok(Window::new(self.window, self.sector()?))
    }

    fn mode(&self) -> Mode {
        if self.centerless {
            Mode::CenterlessClosedForm
        } else {
            Mode::CentralClosedForm
        }
    }

    fn epsilon(&self) -> Result<Epsilon, Failure> {
        if self.epsilon.trim() == "symbolic" {
            return Ok(Epsilon::Symbolic);
        }
        let eps = GaussianRational::parse_exact(&self.epsilon)
            .map_err(|e| Failure::Usage(format!("--epsilon: {e}")))?;
        Ok(Epsilon::Numeric(eps))
    }

    /// Write `text` to `--out`, or to `stdout` when none is given.
    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("stdout: {e}"))),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Run one parsed command; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Verify { opts, table } => cmd_verify(&opts, table.as_deref(), stdout),
        Command::Derive { opts, trace } => cmd_derive(&opts, trace.as_deref(), stdout),
        Command::Table { opts } => cmd_table(&opts, stdout),
        Command::Eval { opts, expr } => cmd_eval(&opts, &expr, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Math(msg)) = &f;
            let _ = writeln!(stderr, "error: {msg}");
            f.code()
        }
    }
}

fn check_all<S: Scalar>(sys: &StructureSystem<S>, window: &Window) -> Vec<(&'static str, ViolationReport<S>)> {
    Checker::new(Exec::default()).all(sys, window)
}

fn verify_report<S: Scalar>(sys: &StructureSystem<S>, window: &Window, opts: &Options, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let reports = check_all(sys, window);
    let clean = reports.iter().all(|(_, r)| r.is_clean());
    let summary: Vec<Value> = reports
        .iter()
        .map(|(name, r)| {
            json!({
                "check": name,
                "checked": r.checked,
                "violations": r.entries.len(),
                "unchecked": r.unchecked.len(),
            })
        })
        .collect();
    let header = json!({
        "theta": sys.sector().theta_str(),
        "window": window.n,
        "epsilon": sys.epsilon_label(),
        "mode": format!("{:?}", sys.mode()),
    });
    let short = json!({"system": header, "clean": clean, "checks": summary});
    if let Some(path) = &opts.out {
        let full: serde_json::Map<String, Value> = reports.iter().map(|(n, r)| (n.to_string(), r.to_json())).collect();
        let doc = json!({"system": header, "clean": clean, "reports": full});
        fs::write(path, pretty(&doc)).map_err(|e| io_failure(path, e))?;
    }
    stdout
        .write_all(pretty(&short).as_bytes())
        .map_err(|e| Failure::Usage(format!("stdout: {e}")))?;
    Ok(if clean { 0 } else { 1 })
}

fn cmd_verify(opts: &Options, table: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(path) = table {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let header = read_header(&text)?;
        let sector = header.sector()?;
        if header.is_symbolic() {
            let sys = StructureSystem::<RatFun>::from_table_json(&text)?;
            let w = Window::new(sys.table().map_or(0, |t| t.window_bound(sector)), sector);
            return verify_report(&sys, &w, opts, stdout);
        }
        let sys = StructureSystem::<GaussianRational>::from_table_json(&text)?;
        let w = Window::new(sys.table().map_or(0, |t| t.window_bound(sector)), sector);
        return verify_report(&sys, &w, opts, stdout);
    }
    let window = opts.window()?;
    match opts.epsilon()? {
        Epsilon::Symbolic => verify_report(&StructureSystem::symbolic(window.sector, opts.mode()), &window, opts, stdout),
        Epsilon::Numeric(eps) => {
            let sys = StructureSystem::numeric(window.sector, opts.mode(), eps)?;
            verify_report(&sys, &window, opts, stdout)
        }
    }
}

fn rows<K: Copy, F: Fn(K) -> Value>(map: &std::collections::BTreeMap<K, RatFun>, key: F) -> Vec<Value> {
    map.iter()
        .map(|(k, v)| {
            let mut row = key(*k);
            row["value"] = json!(v.to_string());
            row
        })
        .collect()
}

fn derivation_json<T>(d: &Derivation<T>, tables: Value, cross: &ViolationReport<RatFun>, window: &Window) -> Value {
    json!({
        "theta": window.sector.theta_str(),
        "window": window.n,
        "tables": tables,
        "unassigned": d.unassigned.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
        "verified": d.verified,
        "steps": d.trace.entries.len(),
        "cross_check": cross.to_json(),
    })
}

fn cmd_derive(opts: &Options, trace_path: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let window = opts.window()?;
    if !matches!(opts.epsilon()?, Epsilon::Symbolic) {
        return Err(Failure::Usage("derive keeps epsilon symbolic; drop --epsilon".into()));
    }
    let derive_failure = |e: DeriveError| Failure::Math(e.to_string());
    let (doc, trace, clean) = if opts.centerless {
        let d = deriver::derive_centerless(window.sector, window).map_err(derive_failure)?;
        let sys = StructureSystem::symbolic(window.sector, Mode::CenterlessClosedForm);
        let cross = deriver::cross_check(&d.tables, &sys);
        let t = &d.tables;
        let tables = json!({
            "G": rows(&t.g, |(m, r)| json!({"m": m, "r": r.to_string()})),
            "H": rows(&t.h, |(r, m)| json!({"r": r.to_string(), "m": m})),
            "D": rows(&t.d, |(r, s)| json!({"r": r.to_string(), "s": s.to_string()})),
        });
        (derivation_json(&d, tables, &cross, &window), d.trace.to_jsonl(), cross.is_clean())
    } else {
        let d = deriver::derive_central(window.sector, window).map_err(derive_failure)?;
        let sys = StructureSystem::symbolic(window.sector, Mode::CentralClosedForm);
        let cross = deriver::cross_check_central(&d.tables, &sys);
        let t = &d.tables;
        let tables = json!({
            "sigma": rows(&t.sigma, |(r, s)| json!({"r": r.to_string(), "s": s.to_string()})),
            "psi": rows(&t.psi, |(m, r)| json!({"m": m, "r": r.to_string()})),
            "rho": rows(&t.rho, |(r, m)| json!({"r": r.to_string(), "m": m})),
        });
        (derivation_json(&d, tables, &cross, &window), d.trace.to_jsonl(), cross.is_clean())
    };
    if let Some(path) = trace_path {
        fs::write(path, trace).map_err(|e| io_failure(path, e))?;
    }
    opts.emit(&pretty(&doc), stdout)?;
    Ok(if clean { 0 } else { 1 })
}

fn cmd_table(opts: &Options, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let window = opts.window()?;
    let text = match opts.epsilon()? {
        Epsilon::Symbolic => StructureSystem::symbolic(window.sector, opts.mode()).table_json(&window)?,
        Epsilon::Numeric(eps) => StructureSystem::numeric(window.sector, opts.mode(), eps)?.table_json(&window)?,
    };
    opts.emit(&text, stdout)?;
    Ok(0)
}

fn cmd_eval(opts: &Options, src: &str, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let e = parse_expr(src).map_err(|e| Failure::Usage(format!("parse error {e}")))?;
    let sector = opts.sector()?;
    e.check_sector(sector)?;
    let text = match opts.epsilon()? {
        Epsilon::Symbolic => e.eval(&StructureSystem::symbolic(sector, opts.mode()))?.to_string(),
        Epsilon::Numeric(eps) => e.eval(&StructureSystem::numeric(sector, opts.mode(), eps)?)?.to_string(),
    };
    opts.emit(&format!("{text}\n"), stdout)?;
    Ok(0)
}
