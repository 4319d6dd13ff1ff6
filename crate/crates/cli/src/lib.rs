//! Command-line front end for the `rigan-core` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rigan_core::analytic::OrbitFamily;

use crate::commands::{Outcome, WitnessArgs};
use crate::config::RunConfig;
use crate::error::{exit, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rigan", version, about = "Locally analytic vectors and trianguline parameters over Q_p")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a trianguline parameter (delta1, delta2, L).
    Classify { file: PathBuf },
    /// Apply an Iwahori element to a series or piecewise function.
    Act {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Character file; weight 2 when omitted.
        #[arg(long)]
        character: Option<PathBuf>,
        /// Write the result here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Smallest m for which the function is analytic on p^m Z_p.
    AnalyticLevel {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
    },
    /// Check the orbit-map estimates coefficient by coefficient.
    VerifyBounds {
        file: PathBuf,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, hide = true, value_parser = commands::parse_fault)]
        inject_fault: Option<(OrbitFamily, usize)>,
    },
    /// Decide equality of two cokernel classes.
    CokernelEq { first: PathBuf, second: PathBuf },
    /// Build an explicit nonzero cokernel class.
    Witness {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Defaults to n + 1.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, requires = "beta")]
        alpha: Option<String>,
        #[arg(long, requires = "alpha")]
        beta: Option<String>,
        /// Use z instead of the constant 1 on the identity cell.
        #[arg(long)]
        linear: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the seeded property suites.
    Selftest {
        /// Cases per suite; each suite has its own default.
        #[arg(long)]
        count: Option<usize>,
        /// Run only these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

fn dispatch(cfg: &RunConfig, command: &Command) -> CliResult<(Outcome, Option<PathBuf>)> {
    Ok(match command {
        Command::Classify { file } => (commands::classify(cfg, file)?, None),
        Command::Act { matrix, function, character, output } => {
            (commands::act_cmd(cfg, matrix, function, character.as_deref())?, output.clone())
        }
        Command::AnalyticLevel { file, max_level } => (commands::analytic_level(cfg, file, *max_level)?, None),
        Command::VerifyBounds { file, level, inject_fault } => {
            (commands::verify_bounds_cmd(cfg, file, *level, *inject_fault)?, None)
        }
        Command::CokernelEq { first, second } => (commands::cokernel_eq(cfg, first, second)?, None),
        Command::Witness { k, n, m, alpha, beta, linear, output } => {
            let args = WitnessArgs { k: *k, n: *n, m: *m, alpha: alpha.clone(), beta: beta.clone(), linear: *linear };
            (commands::witness(cfg, &args)?, output.clone())
        }
        Command::Selftest { count, suite, list } => {
            if *list {
                let mut report = report::Report::new().columns(&["suite", "default_count"]);
                for s in selftest::suites() {
                    report.push_row(vec![s.name.into(), s.default_count.into()]);
                }
                (Outcome { report, payload: None, code: exit::OK }, None)
            } else {
                let (report, ok) = selftest::run(cfg, suite, *count)?;
                (Outcome { report, payload: None, code: if ok { exit::OK } else { exit::VERIFICATION } }, None)
            }
        }
    })
}

/// Parses `args`, runs the command and returns the exit code.
///
/// A JSON payload goes to `--output` when given (the report then goes to
/// `out`), otherwise to `out` with the report on `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { exit::OK } else { exit::USAGE };
        }
    };
    match dispatch(&cli.config, &cli.command).and_then(|(outcome, path)| emit(&cli.config, outcome, path, out, err)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(
    cfg: &RunConfig,
    outcome: Outcome,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let report = outcome.report.render(cfg.format);
    let stdout = |e| CliError::Write { path: "<stdout>".into(), source: e };
    match (outcome.payload, path) {
        (Some(payload), Some(path)) => {
            std::fs::write(&path, payload).map_err(|source| CliError::Write { path, source })?;
            out.write_all(report.as_bytes()).map_err(stdout)?;
        }
        (Some(payload), None) => {
            out.write_all(payload.as_bytes()).map_err(stdout)?;
            let _ = err.write_all(report.as_bytes());
        }
        (None, _) => out.write_all(report.as_bytes()).map_err(stdout)?,
    }
    Ok(outcome.code)
}
