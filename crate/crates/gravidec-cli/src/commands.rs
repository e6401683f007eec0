//! The five subcommands. Each returns the process exit code: 0 success,
//! 3 when simulate's statistical thresholds are violated; usage and config
//! errors surface as `Err` and exit with code 2.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use gravidec::background::{chh_to_temperature, graviton_number, GwSpectrum};
use gravidec::catalog::touching_spheres;
use gravidec::noise::{synthesize, RealizationSeed, SamplingGrid};
use gravidec::rates::ScenarioInputs;
use gravidec::sim::{run_ensemble, SimConfig};
use gravidec::{Catalog, DecoherenceReport, PhysicalConstants};

use crate::config::SweepAxis;
use crate::render::{
    render_catalog, render_report, render_spectrum, render_sweep, CatalogRow, Format, ReportRow,
    SpectrumRow, SweepRow,
};
use crate::scenario::{resolve_inputs, Overrides};

const SI: PhysicalConstants = PhysicalConstants::si();

/// Default density for total-mass sweeps over touching spheres [kg/m^3].
const DEFAULT_DENSITY: f64 = 8000.0;

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write output {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn cmd_rates(
    catalog: &Catalog,
    scenario: &str,
    overrides: &Overrides,
    output: Option<&Path>,
    format: Format,
) -> Result<i32> {
    let inputs = resolve_inputs(catalog, scenario, overrides, &SI)?;
    let report = DecoherenceReport::from_inputs(&inputs, &SI)?;
    emit(output, &render_report(&report, format))?;
    Ok(0)
}

pub struct SimulateOptions {
    pub scenario: String,
    pub overrides: Overrides,
    pub output: PathBuf,
    pub seed: u64,
    pub ensemble: usize,
    pub samples: usize,
    pub delta_x: Option<f64>,
    pub dump_noise: Option<PathBuf>,
}

/// Thresholds gating simulate's exit code: the fitted diffusion must lie in
/// [0.9, 1.1] of the analytic value and the data-level Gaussian identity
/// must hold within 3 standard errors at every checkpoint. The pointwise
/// dephasing deviation is reported, not gated: at N = 1000 its estimator
/// noise floor near prediction 0.1 exceeds any few-percent tolerance.
const DIFFUSION_BAND: (f64, f64) = (0.9, 1.1);

pub fn cmd_simulate(catalog: &Catalog, opts: &SimulateOptions) -> Result<i32> {
    let inputs = resolve_inputs(catalog, &opts.scenario, &opts.overrides, &SI)?;
    let grid = SamplingGrid::new(opts.samples, std::f64::consts::FRAC_PI_8)?;
    let mut config = SimConfig::from_scenario(&inputs, &SI, grid, opts.ensemble, opts.seed)?;
    if let Some(dx) = opts.delta_x {
        if dx <= 0.0 || dx.is_nan() {
            bail!("delta_x must be strictly positive, got {dx:e}");
        }
        config.delta_x = dx;
    }
    if let Some(path) = &opts.dump_noise {
        let realization = synthesize(
            &config.spectrum,
            config.grid,
            RealizationSeed::derive(config.seed, 0),
        )?;
        let mut buf = Vec::new();
        realization.write_csv(&mut buf)?;
        fs::write(path, buf)
            .with_context(|| format!("cannot write noise dump {}", path.display()))?;
    }
    let stats = run_ensemble(&config)?;

    let mut buf = Vec::new();
    stats.write_csv(&mut buf)?;
    fs::write(&opts.output, buf)
        .with_context(|| format!("cannot write statistics {}", opts.output.display()))?;

    let gauss_ok = stats.gauss_identity_within(3.0);
    let mut violated = !gauss_ok;
    let ratio_text = match stats.diffusion_ratio() {
        Some(ratio) => {
            if !(DIFFUSION_BAND.0..=DIFFUSION_BAND.1).contains(&ratio) {
                violated = true;
            }
            format!("{ratio:.4}")
        }
        None => "n/a (zero-noise run)".to_string(),
    };
    let deviation_text = match stats.max_dephasing_deviation() {
        Some(dev) => format!("{dev:.4}"),
        None => "n/a".to_string(),
    };
    println!(
        "simulate: D_fit/D_analytic = {ratio_text} (threshold [{}, {}]); \
         max dephasing deviation (prediction in [0.1, 0.9]) = {deviation_text}; \
         gauss identity within 3 sigma: {gauss_ok}; N = {}, stats -> {}",
        DIFFUSION_BAND.0,
        DIFFUSION_BAND.1,
        stats.ensemble_size,
        opts.output.display()
    );
    Ok(if violated { 3 } else { 0 })
}

pub fn cmd_sweep(
    catalog: &Catalog,
    axis: &SweepAxis,
    scenario: &str,
    overrides: &Overrides,
    output: Option<&Path>,
    format: Format,
) -> Result<i32> {
    let base = resolve_inputs(catalog, scenario, overrides, &SI)?;
    let sweep_keys = ["m_a", "m_b", "rho", "r", "t_em", "chh", "m_total"];
    if !sweep_keys.contains(&axis.param.as_str()) {
        bail!(
            "unknown sweep parameter '{}' (expected one of {})",
            axis.param,
            sweep_keys.join(", ")
        );
    }
    let mut rows = Vec::with_capacity(axis.count);
    for value in axis.points() {
        let inputs = if axis.param == "m_total" {
            let density = overrides.get("density").unwrap_or(DEFAULT_DENSITY);
            let preset = touching_spheres(
                format!("{}@{value:e}", base.name),
                value,
                density,
                base.t_em,
                base.chh_at_2omega,
            )?;
            ScenarioInputs::from_preset(&preset, &SI)?
        } else {
            let mut pairs = vec![format!("{}={value:e}", axis.param)];
            // Re-apply the user's overrides on top of the axis value so that
            // explicit --set still wins for the other parameters.
            for key in crate::scenario::SET_KEYS {
                if key != axis.param {
                    if let Some(v) = overrides.get(key) {
                        pairs.push(format!("{key}={v:e}"));
                    }
                }
            }
            let merged = Overrides::parse(&pairs)?;
            resolve_inputs(catalog, scenario, &merged, &SI)?
        };
        let report = DecoherenceReport::from_inputs(&inputs, &SI)?;
        rows.push(SweepRow {
            axis_param: axis.param.clone(),
            axis_value: value,
            report: ReportRow::from_report(&report),
        });
    }
    emit(output, &render_sweep(&rows, format))?;
    Ok(0)
}

pub struct SpectrumOptions {
    pub chh: Option<f64>,
    pub spectrum_file: Option<PathBuf>,
    pub omegas: Vec<f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

pub fn cmd_spectrum(opts: &SpectrumOptions) -> Result<i32> {
    if opts.omegas.is_empty() {
        bail!("spectrum requires at least one --omega");
    }
    let table = match &opts.spectrum_file {
        Some(path) => Some(GwSpectrum::load_tabulated(path)?),
        None => None,
    };
    if table.is_none() && opts.chh.is_none() {
        bail!("spectrum requires either --chh <level> or --spectrum-file <path>");
    }
    let mut omegas = opts.omegas.clone();
    omegas.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(omegas.len());
    for omega in omegas {
        if omega <= 0.0 || omega.is_nan() {
            bail!("omega must be strictly positive, got {omega:e}");
        }
        let chh = match &table {
            Some(spectrum) => spectrum.evaluate(omega)?,
            None => opts.chh.expect("checked above"),
        };
        rows.push(SpectrumRow {
            omega,
            chh,
            t_gr: chh_to_temperature(chh, &SI)?,
            n_gr: graviton_number(chh, omega, &SI)?,
        });
    }
    emit(opts.output.as_deref(), &render_spectrum(&rows, opts.format))?;
    Ok(0)
}

pub fn cmd_catalog(catalog: &Catalog, output: Option<&Path>, format: Format) -> Result<i32> {
    let rows: Vec<CatalogRow> = catalog.iter().map(CatalogRow::from).collect();
    emit(output, &render_catalog(&rows, format))?;
    Ok(0)
}

pub fn parse_u64(name: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| anyhow!("{name} '{value}' is not a non-negative integer"))
}

pub fn parse_usize(name: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| anyhow!("{name} '{value}' is not a non-negative integer"))
}

pub fn parse_f64(name: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| anyhow!("{name} '{value}' is not a number"))
}
