use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use t2fde::ivp::{Backend, FormSelection};
use t2fde::suites::Suite;
use t2fde_cli::{plot, spec_file, CliError, SolveOptions};

/// Second-order fuzzy initial value problems with type-2 fuzzy data.
#[derive(Debug, Parser)]
#[command(name = "t2fde", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and write <out>.csv and <out>.json.
    Solve {
        spec: PathBuf,
        /// Artifact base path [default: the spec file's stem]
        #[arg(long)]
        out: Option<PathBuf>,
        /// auto, 11, 12, 21 or 22; overrides the file
        #[arg(long, value_parser = spec_file::parse_form)]
        form: Option<FormSelection>,
        /// rk4 or closed; overrides the file
        #[arg(long, value_parser = spec_file::parse_backend)]
        backend: Option<Backend>,
    },
    /// Run a seeded property suite: t1, t2, calculus or ivp.
    Check {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Plot the four endpoint curves and the crisp curve from a solve CSV.
    Plot {
        csv: PathBuf,
        /// Level such as 0.5 or 1/3
        #[arg(long, value_parser = plot::parse_level)]
        alpha: f64,
        #[arg(long, value_parser = plot::parse_level)]
        beta: f64,
        #[arg(long)]
        out: PathBuf,
        /// Form to plot [default: the first valid one]
        #[arg(long)]
        form: Option<String>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: t2fde::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Solve {
            spec,
            out,
            form,
            backend,
        } => {
            let opts = SolveOptions { out, form, backend };
            t2fde_cli::cmd_solve(&spec, &opts, &mut stdout).map(|_| ())
        }
        Command::Check { suite, seed, count } => {
            t2fde_cli::cmd_check(suite, seed, count, &mut stdout).map(|_| ())
        }
        Command::Plot {
            csv,
            alpha,
            beta,
            out,
            form,
        } => t2fde_cli::cmd_plot(&csv, alpha, beta, form.as_deref(), &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Usage errors share exit code 1 with other input errors.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
