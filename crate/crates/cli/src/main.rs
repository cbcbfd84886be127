//! `hardy`: verification suites, boundedness tables and operator dumps for
//! composition-type operators on weighted Hardy spaces of entire functions.

mod commands;
mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BoundedRequest, DumpKind, DumpRequest};
use config::{load_weights, parse_affine, parse_complex_list, CliError, CliResult, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Numerical checks for composition operators on H_E(ξ)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// `fock`, `fock:N`, or a JSON weight file {"kind", "n_max", "values"}.
    #[arg(long, default_value = "fock")]
    weights: String,
    /// Truncation degree of the operator matrices.
    #[arg(long, default_value_t = 48)]
    n_work: usize,
    /// Size minus one of the leading block on which defects are measured.
    #[arg(long, default_value_t = 16)]
    n_eval: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> CliResult<SuiteConfig> {
        Ok(SuiteConfig {
            weights: load_weights(&self.weights)?,
            n_work: self.n_work,
            n_eval: self.n_eval,
            tolerance: self.tol,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites (all of them when no --suite is given).
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name; repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// List the suite registry and exit.
        #[arg(long)]
        list: bool,
    },
    /// Ratio table r_n of the boundedness criterion for D^p_{Φ,Υ}.
    Bounded {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Φ(z) = a z + b given as `a,b`.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        phi: String,
        /// Coefficients of Υ, constant term first.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        upsilon: String,
        #[arg(long, default_value_t = 1)]
        n_from: usize,
        #[arg(long, default_value_t = 60)]
        n_to: usize,
        /// Write the (n, r_n) table to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Serialize an operator matrix.
    Dump {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: DumpKind,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        upsilon: String,
        /// Matrix degree; defaults to --n-work.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Verify { common, suites, list } => {
            if list {
                for suite in suites::REGISTRY {
                    println!("{:<36} {}", suite.name, suite.header);
                }
                return Ok(true);
            }
            let config = common.config()?;
            let report = commands::verify(&config, &suites)?;
            commands::emit(&report, common.out.as_deref())?;
            for suite in &report.suites {
                eprintln!(
                    "{} {} ({}/{})",
                    if suite.passed { "PASS" } else { "FAIL" },
                    suite.name,
                    suite.checks_passed,
                    suite.checks_total
                );
            }
            Ok(report.passed)
        }
        Command::Bounded { common, p, phi, upsilon, n_from, n_to, csv } => {
            let config = common.config()?;
            let request = BoundedRequest { p, phi: parse_affine(&phi)?, upsilon: parse_complex_list(&upsilon)?, n_from, n_to };
            let document = commands::bounded(&config, &request)?;
            if let Some(path) = csv.as_deref() {
                commands::write_ratio_csv(path, &document.report.ratios)?;
            }
            commands::emit(&document, common.out.as_deref())?;
            Ok(true)
        }
        Command::Dump { common, kind, p, phi, upsilon, n } => {
            let config = common.config()?;
            let request = DumpRequest {
                kind,
                p,
                phi: parse_affine(&phi)?,
                upsilon: parse_complex_list(&upsilon)?,
                degree: n.unwrap_or(config.n_work),
            };
            let op = commands::dump(&config, &request)?;
            commands::emit(&op.dump(), common.out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            if let CliError::Core(inner) = &err {
                eprintln!("(precondition failed: {inner:?})");
            }
            ExitCode::from(2)
        }
    }
}
