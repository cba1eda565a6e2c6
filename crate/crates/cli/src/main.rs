use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cosserat_cli::{parse_config, run_scenario_with_grids, verify_all, Report, RunError, ScenarioConfig};

/// Differential-forms Cosserat elasticity on periodic grids.
#[derive(Parser)]
#[command(name = "cosserat-forms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a key = value config file.
    Run { config: PathBuf },
    /// Run every scenario with default parameters.
    VerifyAll {
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Convergence study of the registered residuals.
    Convergence {
        config: PathBuf,
        /// Comma separated grid sizes, e.g. 16,32,64.
        #[arg(long, value_delimiter = ',')]
        grids: Option<Vec<usize>>,
    },
}

/// `COSSERAT_OUTPUT_DIR` overrides the configured output directory.
fn output_dir(configured: &Path) -> PathBuf {
    std::env::var_os("COSSERAT_OUTPUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| configured.to_path_buf())
}

fn load(path: &Path) -> Result<ScenarioConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    parse_config(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn finish(reports: Result<Vec<Report>, RunError>) -> ExitCode {
    match reports {
        Ok(reports) => {
            let mut ok = true;
            for r in &reports {
                for line in r.lines() {
                    println!("{line}");
                }
                ok &= r.passed();
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let out = output_dir(&cfg.output);
            finish(run_scenario_with_grids(&cfg, &out, None).map(|r| vec![r]))
        }
        Command::VerifyAll { n } => {
            if n < 4 {
                eprintln!("error: --n must be at least 4");
                return ExitCode::from(1);
            }
            finish(verify_all(n, &output_dir(Path::new("output"))))
        }
        Command::Convergence { config, grids } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            cfg.scenario = cosserat_cli::Scenario::Convergence;
            let out = output_dir(&cfg.output);
            finish(run_scenario_with_grids(&cfg, &out, grids.as_deref()).map(|r| vec![r]))
        }
    }
}
