use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::Error;
use crate::experiments::Experiment;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "besov-witness", version, about = "Numerical experiments on the witness data of the gCHN solution map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output_dir` from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write one SVG plot per experiment.
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Littlewood-Paley partition and block exactness.
    Lp,
    /// Upper and lower bounds on the witness data.
    Witness,
    /// Slopes of the short-time expansion.
    Expansion,
    /// Norm defect along t_n = epsilon 2^-n.
    Illposed,
    /// H1 conservation and its dt-convergence.
    Conserve,
    /// Every experiment in turn.
    All,
}

impl Command {
    fn experiments(self) -> Vec<Experiment> {
        match self {
            Command::Lp => vec![Experiment::Lp],
            Command::Witness => vec![Experiment::Witness],
            Command::Expansion => vec![Experiment::Expansion],
            Command::Illposed => vec![Experiment::Illposed],
            Command::Conserve => vec![Experiment::Conserve],
            Command::All => Experiment::ALL.to_vec(),
        }
    }
}

/// Runs the harness on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let mut cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_CONFIG;
            }
        },
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.output_dir) {
        eprintln!("error: cannot create {}: {e}", cfg.output_dir.display());
        return EXIT_FAIL;
    }
    if let Err(e) = std::fs::write(cfg.output_dir.join("run_config.json"), cfg.to_json()) {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }

    let mut code = EXIT_PASS;
    for exp in cli.command.experiments() {
        let report = match exp.run(&cfg) {
            Ok(report) => report,
            Err(Error::Config(msg)) => {
                eprintln!("error: {msg}");
                return EXIT_CONFIG;
            }
            Err(e) => {
                eprintln!("[{}] error: {e}", exp.id());
                code = EXIT_FAIL;
                continue;
            }
        };
        print!("{}", report.summary());
        let written = report.write_csv(&cfg.output_dir).and_then(|_| match (&report.plot, cli.svg) {
            (Some(plot), true) => plot.write(&cfg.output_dir, report.id).map(|_| ()),
            _ => Ok(()),
        });
        if let Err(e) = written {
            eprintln!("[{}] error: {e}", exp.id());
            code = EXIT_FAIL;
        }
        if !report.passed() {
            code = EXIT_FAIL;
        }
    }
    code
}
