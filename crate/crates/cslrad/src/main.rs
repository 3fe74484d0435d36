use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cslrad::bound::{compute_bound, LimitsFile};
use cslrad::config::RunConfig;
use cslrad::spectrum::{compute_spectrum, threads_from_env, write_outputs};
use cslrad::sweep::{run_sweep, Axis};
use cslrad::verify::run_verify;
use cslrad::{CliError, Result};
use cslrad_core::units::Constants;

/// Noise-induced photon emission spectra and CSL λ bounds.
#[derive(Debug, Parser)]
#[command(name = "cslrad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute dGamma/dp over the configured energy grid.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        /// Also write an SVG plot next to the data file.
        #[arg(long)]
        plot: bool,
    },
    /// Invert a named experimental limit into an upper bound on λ.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        limit: String,
        /// Limits file to use instead of the bundled one.
        #[arg(long)]
        limits: Option<PathBuf>,
    },
    /// Run every oracle comparison; exit status 3 if any fails.
    Verify {
        /// Write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate rates (or bounds) on a grid of λ, r_c and E values.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// name=start:stop:n:lin|log with name in {lambda, r_c, E}; at most two.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// Photon energy in keV when E is not swept.
        #[arg(long, default_value_t = 11.0)]
        energy: f64,
        /// Sweep the bound against this limit instead of the rate.
        #[arg(long)]
        limit: Option<String>,
        #[arg(long, default_value = "sweep.csv")]
        output: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    let threads = threads_from_env()?;
    match cli.command {
        Command::Spectrum { config, plot } => {
            let cfg = RunConfig::load(&config)?;
            let spec = compute_spectrum(&cfg, threads)?;
            for w in &spec.warnings {
                eprintln!("warning: {w}");
            }
            for p in write_outputs(&spec, &cfg, plot)? {
                println!("wrote {}", p.display());
            }
        }
        Command::Bound { config, limit, limits } => {
            let cfg = RunConfig::load(&config)?;
            let file = match limits {
                Some(p) => LimitsFile::load(&p)?,
                None => LimitsFile::bundled(),
            };
            print!("{}", compute_bound(&cfg, &file, &limit)?.to_text());
        }
        Command::Verify { json } => {
            let report = run_verify(&Constants::CODATA_2018);
            print!("{}", report.to_text());
            if let Some(path) = json {
                let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
                std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
            }
            if !report.passed {
                return Err(CliError::Verify { failed: report.failed() });
            }
        }
        Command::Sweep { config, axes, energy, limit, output } => {
            let cfg = RunConfig::load(&config)?;
            let axes: Vec<Axis> = axes.iter().map(|a| a.parse()).collect::<Result<_>>()?;
            let file = LimitsFile::bundled();
            let table = run_sweep(&cfg, &axes, energy, limit.as_deref().map(|n| (&file, n)), threads)?;
            std::fs::write(&output, table.to_csv()).map_err(|e| CliError::io(&output, e))?;
            println!("wrote {} ({} rows)", output.display(), table.rows.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors; help and version are not errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
