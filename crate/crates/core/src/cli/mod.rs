//! Command-line driver: `derive`, `verify` and `limits` over parameter grids.
//!
//! Exit codes: 0 when every check passes, 1 when any fails, 2 for bad
//! arguments, configuration or I/O.

pub mod checks;
pub mod config;
pub mod num;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{BranchSel, Check, Model, SweepConfig};
use report::{Record, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "loopbound",
    version,
    about = "Boundary weights and reflection checks for dilute loop models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the linear systems and compare with the closed forms.
    Derive(Common),
    /// Residual sweep of the DH systems and the reflection equation.
    Verify(Common),
    /// k → 0 and k → ∞ limits of the generalized boundary weights.
    Limits(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Sweep configuration (JSON); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; overrides the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    #[arg(long, value_enum)]
    branch: Option<BranchSel>,
    /// Overrides residual_tol (limit_tol for `limits`).
    #[arg(long)]
    tol: Option<f64>,
    /// Accepted for compatibility; nothing here is random.
    #[arg(long = "seed-free")]
    seed_free: bool,
}

impl Common {
    fn resolve(&self, command: &str) -> Result<SweepConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => SweepConfig::load(p)?,
            None => SweepConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = Some(m);
        }
        if let Some(b) = self.branch {
            cfg.branch = b;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.display().to_string());
        }
        if command == "limits" {
            match cfg.model {
                None => cfg.model = Some(Model::GenOn),
                Some(Model::GenOn) => {}
                Some(_) => return Err(CliError::Config("limits require model gen-on".into())),
            }
        }
        if let Some(t) = self.tol {
            if command == "limits" {
                cfg.tolerances.limit_tol = t;
            } else {
                cfg.tolerances.residual_tol = t;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_checks(command: &str, model: Model) -> Vec<Check> {
    match (command, model) {
        ("derive", _) => vec![Check::Solve],
        ("limits", _) => vec![Check::Limits],
        (_, Model::GenOn) => vec![Check::Reflection],
        _ => vec![Check::DhBulk, Check::DhBoundary, Check::Reflection],
    }
}

fn write_report(report: &Report, out: Option<&str>) -> Result<(), CliError> {
    let text = report.to_json() + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Plain-text table of solved weights with their deviation.
pub fn weight_table(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records.iter().filter(|r| r.weights.is_some()) {
        let point: Vec<String> = r.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let branch = r
            .branch
            .as_deref()
            .map(|b| format!(" [{b}]"))
            .unwrap_or_default();
        s.push_str(&format!("{} {}{}\n", r.item, point.join(" "), branch));
        for (sym, v) in r.weights.iter().flatten() {
            s.push_str(&format!("  {sym:<6} {}\n", num::format_real(*v)));
        }
        if let Some(v) = r.value {
            s.push_str(&format!("  deviation {v:.3e} ({:?})\n", r.verdict));
        }
    }
    s
}

fn run(command: &str, common: &Common) -> Result<i32, CliError> {
    let cfg = common.resolve(command)?;
    let checks = cfg
        .checks
        .clone()
        .unwrap_or_else(|| default_checks(command, cfg.model()));
    let records = checks::run(&cfg, &checks)?;
    let out = cfg.out.clone();
    let report = Report::new(command, cfg, records);
    if command == "derive" {
        print!("{}", weight_table(&report.records));
        if out.is_some() {
            write_report(&report, out.as_deref())?;
        }
    } else {
        write_report(&report, out.as_deref())?;
    }
    let s = &report.summary;
    eprintln!(
        "{command}: {} pass, {} fail, {} skipped",
        s.pass, s.fail, s.skipped
    );
    Ok(if s.all_pass { EXIT_PASS } else { EXIT_FAIL })
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let (name, common) = match &cli.command {
        Command::Derive(c) => ("derive", c),
        Command::Verify(c) => ("verify", c),
        Command::Limits(c) => ("limits", c),
    };
    match run(name, common) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("loopbound: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_free_rejects_a_value() {
        assert_eq!(
            main_from(["loopbound", "verify", "--seed-free=1"]),
            EXIT_USAGE
        );
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(main_from(["loopbound", "plot"]), EXIT_USAGE);
    }

    #[test]
    fn limits_rejects_other_models() {
        let c = Common {
            config: None,
            out: None,
            model: Some(Model::On),
            branch: None,
            tol: None,
            seed_free: false,
        };
        assert!(matches!(c.resolve("limits"), Err(CliError::Config(_))));
    }

    #[test]
    fn defaults_per_command() {
        assert_eq!(default_checks("verify", Model::On).len(), 3);
        assert_eq!(
            default_checks("verify", Model::GenOn),
            vec![Check::Reflection]
        );
        assert_eq!(default_checks("derive", Model::C2), vec![Check::Solve]);
    }
}
