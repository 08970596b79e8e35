use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use involute::config::ConfigError;
use involute::experiment::{self, ExperimentError, EXIT_CONFIG};
use involute_core::Formulation;

#[derive(Parser)]
#[command(name = "involute", version, about = "Curl-constrained hyperbolic solver experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write series.csv plus snapshots.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one configuration per formulation and merge the curl_L2 columns.
    Compare {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        formulations: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<(), ExperimentError> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = experiment::load_config(&config)?;
            let res = experiment::run_experiment(&cfg, out.as_deref())?;
            let last = res.records.last().map_or(0.0, |r| r.t);
            eprintln!("{}: {} steps to t = {last}", cfg.formulation, res.steps);
        }
        Command::Compare {
            config,
            formulations,
            out,
        } => {
            let cfg = experiment::load_config(&config)?;
            let forms = formulations
                .iter()
                .map(|s| s.parse::<Formulation>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ConfigError::Invalid {
                    key: "formulations",
                    message: e.to_string(),
                })?;
            let path = experiment::compare(&cfg, &forms, out.as_deref())?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
