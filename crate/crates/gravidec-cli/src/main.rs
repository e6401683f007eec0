//! gravidec: gravitational-wave decoherence rates and Monte Carlo checks.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 statistical
//! acceptance thresholds violated (simulate).

mod commands;
mod config;
mod render;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};

use commands::{SimulateOptions, SpectrumOptions};
use config::{ConfigFile, SweepAxis};
use render::Format;
use scenario::{load_catalog, Overrides};

#[derive(Parser)]
#[command(
    name = "gravidec",
    version,
    about = "Decoherence of circular orbits by the gravitational-wave background"
)]
struct Cli {
    /// Config file with one [command] section per subcommand; command-line
    /// flags win over config values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Scenario preset name (see `gravidec catalog`).
    #[arg(long)]
    scenario: Option<String>,

    /// Parameter override key=value; repeatable. Keys: m_a, m_b, rho, r,
    /// t_em, chh, a, density.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output file (stdout when omitted; simulate defaults to
    /// ensemble_stats.csv).
    #[arg(long)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form decoherence report for one scenario.
    Rates {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo ensemble run with statistics CSV and summary line.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Root seed of the ensemble.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of realizations.
        #[arg(long)]
        ensemble: Option<usize>,
        /// Samples per realization (power of two).
        #[arg(long)]
        samples: Option<usize>,
        /// Trajectory separation in simulation units (default: automatic).
        #[arg(long)]
        delta_x: Option<f64>,
        /// Dump the first noise realization as CSV to this path.
        #[arg(long, value_name = "PATH")]
        dump_noise: Option<PathBuf>,
    },
    /// Report table over one swept parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Axis spec param:min:max:count:log|lin. Params: m_a, m_b, rho, r,
        /// t_em, chh, m_total (touching-spheres geometry).
        #[arg(long, value_name = "SPEC")]
        sweep: Option<String>,
    },
    /// Spectrum-level conversions (C_hh, T_gr, n_gr) at given frequencies.
    Spectrum {
        /// Flat spectrum level [1/Hz].
        #[arg(long)]
        chh: Option<f64>,
        /// Tabulated spectrum file (omega, chh per line).
        #[arg(long, value_name = "PATH")]
        spectrum_file: Option<PathBuf>,
        /// Evaluation frequency [rad/s]; repeatable.
        #[arg(long)]
        omega: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// List the scenario presets.
    Catalog {
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
    },
}

/// Flag value, else config-file value, else none.
fn merged<T, F>(
    flag: Option<T>,
    cfg: &ConfigFile,
    command: &str,
    key: &str,
    parse: F,
) -> Result<Option<T>>
where
    F: FnOnce(&str) -> Result<T>,
{
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    match cfg.scalar(command, key) {
        Some(raw) => Ok(Some(parse(raw)?)),
        None => Ok(None),
    }
}

fn merged_overrides(flag_sets: &[String], cfg: &ConfigFile, command: &str) -> Result<Overrides> {
    // Config-file sets first, command-line sets after: the later entry wins.
    let mut pairs = cfg.repeated(command, "set");
    pairs.extend(flag_sets.iter().cloned());
    Overrides::parse(&pairs)
}

fn parse_format(s: &str) -> Result<Format> {
    s.parse().map_err(|e: String| anyhow!(e))
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let catalog = load_catalog()?;

    match cli.command {
        Command::Rates { common } => {
            let scenario = merged(common.scenario, &cfg, "rates", "scenario", |s| {
                Ok(s.to_string())
            })?
            .unwrap_or_else(|| "moon".to_string());
            let overrides = merged_overrides(&common.set, &cfg, "rates")?;
            let output = merged(common.output, &cfg, "rates", "output", |s| {
                Ok(PathBuf::from(s))
            })?;
            let format = merged(common.format, &cfg, "rates", "format", parse_format)?
                .unwrap_or(Format::Table);
            commands::cmd_rates(&catalog, &scenario, &overrides, output.as_deref(), format)
        }
        Command::Simulate {
            common,
            seed,
            ensemble,
            samples,
            delta_x,
            dump_noise,
        } => {
            let opts = SimulateOptions {
                scenario: merged(common.scenario, &cfg, "simulate", "scenario", |s| {
                    Ok(s.to_string())
                })?
                .unwrap_or_else(|| "moon".to_string()),
                overrides: merged_overrides(&common.set, &cfg, "simulate")?,
                output: merged(common.output, &cfg, "simulate", "output", |s| {
                    Ok(PathBuf::from(s))
                })?
                .unwrap_or_else(|| PathBuf::from("ensemble_stats.csv")),
                seed: merged(seed, &cfg, "simulate", "seed", |s| {
                    commands::parse_u64("seed", s)
                })?
                .unwrap_or(0),
                ensemble: merged(ensemble, &cfg, "simulate", "ensemble", |s| {
                    commands::parse_usize("ensemble", s)
                })?
                .unwrap_or(1000),
                samples: merged(samples, &cfg, "simulate", "samples", |s| {
                    commands::parse_usize("samples", s)
                })?
                .unwrap_or(4096),
                delta_x: merged(delta_x, &cfg, "simulate", "delta_x", |s| {
                    commands::parse_f64("delta_x", s)
                })?,
                dump_noise,
            };
            commands::cmd_simulate(&catalog, &opts)
        }
        Command::Sweep { common, sweep } => {
            let spec = merged(sweep, &cfg, "sweep", "sweep", |s| Ok(s.to_string()))?
                .ok_or_else(|| anyhow!("sweep requires --sweep param:min:max:count:log|lin"))?;
            let axis = SweepAxis::parse(&spec)?;
            let scenario = merged(common.scenario, &cfg, "sweep", "scenario", |s| {
                Ok(s.to_string())
            })?
            .unwrap_or_else(|| "moon".to_string());
            let overrides = merged_overrides(&common.set, &cfg, "sweep")?;
            let output = merged(common.output, &cfg, "sweep", "output", |s| {
                Ok(PathBuf::from(s))
            })?;
            let format = merged(common.format, &cfg, "sweep", "format", parse_format)?
                .unwrap_or(Format::Csv);
            commands::cmd_sweep(
                &catalog,
                &axis,
                &scenario,
                &overrides,
                output.as_deref(),
                format,
            )
        }
        Command::Spectrum {
            chh,
            spectrum_file,
            omega,
            output,
            format,
        } => {
            let opts = SpectrumOptions {
                chh: merged(chh, &cfg, "spectrum", "chh", |s| {
                    commands::parse_f64("chh", s)
                })?,
                spectrum_file: merged(spectrum_file, &cfg, "spectrum", "spectrum_file", |s| {
                    Ok(PathBuf::from(s))
                })?,
                omegas: if omega.is_empty() {
                    cfg.repeated("spectrum", "omega")
                        .iter()
                        .map(|s| commands::parse_f64("omega", s))
                        .collect::<Result<Vec<_>>>()?
                } else {
                    omega
                },
                output: merged(output, &cfg, "spectrum", "output", |s| Ok(PathBuf::from(s)))?,
                format: merged(format, &cfg, "spectrum", "format", parse_format)?
                    .unwrap_or(Format::Table),
            };
            commands::cmd_spectrum(&opts)
        }
        Command::Catalog { output, format } => {
            let output = merged(output, &cfg, "catalog", "output", |s| Ok(PathBuf::from(s)))?;
            let format =
                merged(format, &cfg, "catalog", "format", parse_format)?.unwrap_or(Format::Table);
            commands::cmd_catalog(&catalog, output.as_deref(), format)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
