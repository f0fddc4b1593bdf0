//! `divcomb`: reliability of SC and SSC receive diversity under a latency
//! budget, from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod settings;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult};
use crate::settings::{parse_count, ParamArgs, Settings};
use crate::sweep::{parse_curves, parse_values, Axis, Preset, SweepSpec};

#[derive(Parser, Debug)]
#[command(
    name = "divcomb",
    version,
    about = "Finite-blocklength error of SC/SSC antenna selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one configuration and print the per-branch breakdown
    Eval(ParamArgs),
    /// Sweep one parameter and write CSV
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Find the SSC threshold with the lowest error
    OptimizeThreshold(ParamArgs),
    /// Find the antenna count with the lowest error
    OptimizeAntennas {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest antenna count tried [default: 10]
        #[arg(long)]
        max_antennas: Option<u32>,
    },
    /// Compare the analytical error against Monte Carlo
    Validate {
        #[command(flatten)]
        params: ParamArgs,
        /// Scales the analytical value before comparing (negative control)
        #[arg(long, hide = true)]
        corrupt_analytic: Option<f64>,
    },
    /// Run one of the built-in sweeps (fig1, fig2, fig3)
    Preset {
        #[arg(value_enum)]
        name: Preset,
        /// Output CSV path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add Monte Carlo columns with this many samples per point
        #[arg(long, value_parser = parse_count)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace the preset's axis values
        #[arg(long)]
        values: Option<String>,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// mean_snr_db, antennas or latency_u
    #[arg(long)]
    axis: Option<String>,
    /// start:stop:step (inclusive) or a comma list
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Comma-separated curve ids [default: sc,ssc-opt]
    #[arg(long)]
    curves: Option<String>,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage<T>(r: Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Usage)
}

fn run(cli: Cli) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Eval(p) => commands::eval(&Settings::from_args(&p)?, &mut stdout),
        Command::OptimizeThreshold(p) => {
            commands::optimize_threshold(&Settings::from_args(&p)?, &mut stdout)
        }
        Command::OptimizeAntennas {
            params,
            max_antennas,
        } => {
            let mut s = Settings::from_args(&params)?;
            s.max_antennas = max_antennas.or(s.max_antennas);
            commands::optimize_antennas(&s, &mut stdout)
        }
        Command::Validate {
            params,
            corrupt_analytic,
        } => commands::validate(
            &Settings::from_args(&params)?,
            corrupt_analytic,
            &mut stdout,
        ),
        Command::Sweep { params, sweep } => {
            drop(stdout);
            let flags = Settings {
                axis: sweep
                    .axis
                    .as_deref()
                    .map(Axis::parse)
                    .transpose()
                    .map_err(CliError::Usage)?,
                values: usage(sweep.values.as_deref().map(parse_values).transpose())?,
                curves: usage(sweep.curves.as_deref().map(parse_curves).transpose())?,
                out: sweep.out,
                ..Settings::default()
            };
            let s = flags.over(Settings::from_args(&params)?);
            let spec = SweepSpec::from_settings(&s)?;
            commands::sweep(&spec, s.out.as_deref())
        }
        Command::Preset {
            name,
            out,
            mc_samples,
            seed,
            values,
        } => {
            drop(stdout);
            let mut spec = name.spec(mc_samples, seed);
            if let Some(v) = values {
                spec.values = usage(parse_values(&v))?;
            }
            commands::sweep(&spec, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
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
