//! Time-domain Monte Carlo engine: drive an orbit pair with synthesized
//! metric perturbations, accumulate momentum and action differences, and
//! compare the ensemble statistics against the analytic white-noise limit.
//!
//! The engine works in nondimensional units with the reduced mass, the
//! separation and the orbital frequency scaled to one; [`UnitScale`] records
//! the mapping back to SI and Planck's constant is rescaled exactly into
//! those units. For astronomical scenarios the scaled hbar is a very small
//! number, so the trajectory separation defaults to the value that brings
//! the dephasing exponent to order one inside the simulated window, where
//! the decay is actually measurable.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::background::GwSpectrum;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::noise::{
    second_derivative, synthesize, NoiseRealization, RealizationSeed, SamplingGrid,
};
use crate::orbit::TwoBodyOrbit;
use crate::rates::ScenarioInputs;

/// SI units per simulation unit, one factor per base dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    /// kg per simulation mass unit.
    pub mass: f64,
    /// m per simulation length unit.
    pub length: f64,
    /// s per simulation time unit.
    pub time: f64,
}

impl UnitScale {
    pub fn identity() -> Self {
        UnitScale {
            mass: 1.0,
            length: 1.0,
            time: 1.0,
        }
    }

    /// kg m/s per simulation momentum unit.
    pub fn momentum(&self) -> f64 {
        self.mass * self.length / self.time
    }

    /// kg^2 m^2 s^-3 per simulation diffusion unit.
    pub fn diffusion(&self) -> f64 {
        let p = self.momentum();
        p * p / self.time
    }
}

/// Number of log-spaced checkpoints the statistics are reported at.
pub const CHECKPOINT_COUNT: usize = 64;

/// Default half-width of the synthesized band around 2 Omega, in grid
/// frequency bins. 32 bins put 64 correlation times into the window,
/// comfortably above the 50 the white-noise asymptotics require.
pub const DEFAULT_BAND_BINS: usize = 32;

/// Default grid for scenario runs: 4096 samples of pi/8 time units, i.e.
/// 16 samples per force oscillation at 2 Omega and about 256 orbits.
pub fn default_grid() -> SamplingGrid {
    SamplingGrid::new(4096, std::f64::consts::FRAC_PI_8).expect("default grid")
}

/// Target of Lambda dx^2 T at the end of the window when the trajectory
/// separation is chosen automatically: deep enough that the decay crosses
/// the whole measurable range.
const DEPHASING_EXPONENT_TARGET: f64 = 3.0;

/// Fully specified Monte Carlo run, in simulation units.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Orbit in simulation units: unit reduced mass, separation and
    /// frequency. Only (m, rho, Omega, theta) enter the force law.
    pub orbit: TwoBodyOrbit,
    /// Spectrum in simulation units, band-limited around 2 Omega.
    pub spectrum: GwSpectrum,
    pub grid: SamplingGrid,
    pub ensemble_size: usize,
    /// Trajectory separation [sim length units].
    pub delta_x: f64,
    pub seed: u64,
    /// Mapping from simulation units back to SI.
    pub unit_scale: UnitScale,
    /// Planck's constant in simulation units.
    pub hbar: f64,
    /// Half-width of the synthesized band [sim rad/s].
    pub band_halfwidth: f64,
    /// Force the driving to zero (inertial motion, a = 0).
    pub inertial: bool,
}

/// The canonical simulation orbit: equal masses with the scaled Kepler
/// constant chosen so that reduced mass, separation and frequency are all
/// exactly one.
fn unit_orbit() -> TwoBodyOrbit {
    let constants = PhysicalConstants {
        g: 0.25,
        c: 1.0,
        hbar: 1.0,
        k_b: 1.0,
    };
    TwoBodyOrbit::from_masses_separation(2.0, 2.0, 1.0, 0.0, &constants).expect("unit orbit")
}

impl SimConfig {
    /// Nondimensionalize a physical scenario. The spectrum is reduced to a
    /// flat band of the scenario's level around 2 Omega (the only spectral
    /// value the zero-frequency force noise depends on), hbar is rescaled
    /// exactly, and delta_x defaults to the measurable-dephasing value.
    pub fn from_scenario(
        inputs: &ScenarioInputs,
        constants: &PhysicalConstants,
        grid: SamplingGrid,
        ensemble_size: usize,
        seed: u64,
    ) -> Result<Self> {
        let scale = UnitScale {
            mass: inputs.m,
            length: inputs.rho,
            time: 1.0 / inputs.omega,
        };
        let hbar = constants.hbar * scale.time / (scale.mass * scale.length * scale.length);
        let chh_sim = inputs.chh_at_2omega / scale.time;
        Self::assemble(
            chh_sim,
            grid,
            ensemble_size,
            seed,
            scale,
            hbar,
            inputs.a == 0.0,
        )
    }

    /// Simulation setup directly in nondimensional units with hbar = 1:
    /// a surrogate system with the same dimensionless structure as the
    /// physical ones, convenient for validation runs.
    pub fn validation(
        chh_level: f64,
        grid: SamplingGrid,
        ensemble_size: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::assemble(
            chh_level,
            grid,
            ensemble_size,
            seed,
            UnitScale::identity(),
            1.0,
            false,
        )
    }

    fn assemble(
        chh_sim: f64,
        grid: SamplingGrid,
        ensemble_size: usize,
        seed: u64,
        unit_scale: UnitScale,
        hbar: f64,
        inertial: bool,
    ) -> Result<Self> {
        let orbit = unit_orbit();
        let two_omega = 2.0 * orbit.omega();
        let band_halfwidth = DEFAULT_BAND_BINS as f64 * grid.delta_omega();
        if band_halfwidth >= two_omega {
            return Err(Error::invalid(
                "band_halfwidth",
                "below 2 Omega (duration too short for the band)",
                band_halfwidth,
            ));
        }
        let spectrum = GwSpectrum::flat_band(
            chh_sim,
            two_omega - band_halfwidth,
            two_omega + band_halfwidth,
        )?;
        let mut config = SimConfig {
            orbit,
            spectrum,
            grid,
            ensemble_size,
            delta_x: 1.0,
            seed,
            unit_scale,
            hbar,
            band_halfwidth,
            inertial,
        };
        config.delta_x = config.default_delta_x();
        Ok(config)
    }

    /// Separation giving a dephasing exponent of order one at the end of the
    /// window; one sim length unit when the noise level vanishes.
    pub fn default_delta_x(&self) -> f64 {
        let lambda = self.lambda_analytic();
        if lambda > 0.0 {
            (DEPHASING_EXPONENT_TARGET / (lambda * self.grid.duration())).sqrt()
        } else {
            1.0
        }
    }

    /// Analytic diffusion coefficient in simulation units.
    pub fn d_analytic(&self) -> f64 {
        if self.inertial {
            return 0.0;
        }
        cff_zero_analytic(&self.orbit, &self.spectrum)
            .map(|c| c / 2.0)
            .unwrap_or(0.0)
    }

    /// Analytic decoherence rate D / hbar^2 in simulation units.
    pub fn lambda_analytic(&self) -> f64 {
        self.d_analytic() / (self.hbar * self.hbar)
    }

    /// Correlation time of the synthesized band, 2 pi over its full width.
    pub fn correlation_time(&self) -> f64 {
        std::f64::consts::PI / self.band_halfwidth
    }

    fn validate(&self) -> Result<()> {
        if self.ensemble_size < 2 {
            return Err(Error::invalid(
                "ensemble_size",
                "at least 2",
                self.ensemble_size as f64,
            ));
        }
        if self.grid.n() < 4 * CHECKPOINT_COUNT {
            return Err(Error::invalid(
                "grid.n",
                "at least 4 checkpoints worth of samples (256)",
                self.grid.n() as f64,
            ));
        }
        // At least 4 samples per force oscillation at 2 Omega.
        let two_omega = 2.0 * self.orbit.omega();
        if self.grid.dt() * two_omega >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::GridTooCoarse {
                nyquist: self.grid.nyquist(),
                required: 4.0 * self.orbit.omega(),
            });
        }
        let t_corr = self.correlation_time();
        if self.grid.duration() < 50.0 * t_corr {
            return Err(Error::DurationTooShort {
                duration: self.grid.duration(),
                correlation_time: t_corr,
            });
        }
        if self.delta_x <= 0.0 || self.delta_x.is_nan() {
            return Err(Error::invalid("delta_x", "strictly positive", self.delta_x));
        }
        Ok(())
    }
}

/// Projection of the differential tidal force along the mean motion:
/// F(t) = (m rho / sqrt(2)) Re[h''(t) e^{i(2 Omega t + 2 theta)}].
///
/// The second derivative is taken spectrally from the realization; the grid
/// argument is the caller's expectation and must match the realization's.
pub fn force_series(
    orbit: &TwoBodyOrbit,
    h: &NoiseRealization,
    grid: SamplingGrid,
) -> Result<Vec<f64>> {
    if h.grid() != grid {
        return Err(Error::GridMismatch {
            expected_n: grid.n(),
            expected_dt: grid.dt(),
            got_n: h.grid().n(),
            got_dt: h.grid().dt(),
        });
    }
    let amplitude = orbit.reduced_mass() * orbit.rho() / std::f64::consts::SQRT_2;
    let two_omega = 2.0 * orbit.omega();
    let two_theta = 2.0 * orbit.theta();
    let hdd = second_derivative(h);
    Ok(grid
        .times()
        .zip(hdd.samples())
        .map(|(t, z)| {
            let phase = Complex64::from_polar(1.0, two_omega * t + two_theta);
            amplitude * (z * phase).re
        })
        .collect())
}

/// Cumulative trapezoidal integral of the force: p(t_j), with p(0) = 0.
pub fn integrate_momentum(force: &[f64], grid: SamplingGrid) -> Vec<f64> {
    let dt = grid.dt();
    let mut p = Vec::with_capacity(force.len());
    let mut acc = 0.0;
    p.push(0.0);
    for w in force.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        p.push(acc);
    }
    p
}

/// Zero-frequency force noise spectrum C_FF[0] = 4 m^2 a^2 C_hh[2 Omega],
/// the oracle the Monte Carlo momentum-variance slope is compared to (2 D).
pub fn cff_zero_analytic(orbit: &TwoBodyOrbit, spectrum: &GwSpectrum) -> Result<f64> {
    let m = orbit.reduced_mass();
    let a = orbit.accel();
    let chh = spectrum.evaluate(2.0 * orbit.omega())?;
    Ok(4.0 * m * m * a * a * chh)
}

/// Ensemble estimates at the checkpoints, plus the fitted diffusion
/// coefficient. All dynamical quantities are in simulation units; the
/// carried [`UnitScale`] maps them back to SI (see [`EnsembleStatistics::write_csv`]).
#[derive(Debug, Clone)]
pub struct EnsembleStatistics {
    /// Checkpoint times [sim units].
    pub times: Vec<f64>,
    /// <p_t^2> at the checkpoints.
    pub p_var: Vec<f64>,
    /// Standard error of p_var.
    pub p_var_se: Vec<f64>,
    /// Complex <exp(i dS/hbar)> at the checkpoints.
    pub dephasing: Vec<Complex64>,
    /// Jackknife standard error of |dephasing|.
    pub dephasing_se: Vec<f64>,
    /// |<exp(i dS/hbar)>| minus exp(-<dS^2>/2 hbar^2), per checkpoint.
    pub gauss_gap: Vec<f64>,
    /// Jackknife standard error of the gap.
    pub gauss_gap_se: Vec<f64>,
    /// Fitted diffusion coefficient: half the momentum-variance slope over
    /// the final half of the checkpoints.
    pub d_fit: f64,
    /// Standard error of d_fit over realizations.
    pub d_fit_se: f64,
    /// Coefficient of determination of the variance fit.
    pub fit_r_squared: f64,
    /// Analytic diffusion coefficient for the same configuration.
    pub d_analytic: f64,
    /// Analytic decoherence rate for the same configuration.
    pub lambda_analytic: f64,
    /// Trajectory separation used [sim units].
    pub delta_x: f64,
    pub ensemble_size: usize,
    pub unit_scale: UnitScale,
}

impl EnsembleStatistics {
    /// Analytic momentum variance 2 D t [sim units].
    pub fn analytic_p_var(&self, t: f64) -> f64 {
        2.0 * self.d_analytic * t
    }

    /// Analytic dephasing factor exp(-Lambda dx^2 t).
    pub fn analytic_dephasing(&self, t: f64) -> f64 {
        (-self.lambda_analytic * self.delta_x * self.delta_x * t).exp()
    }

    /// d_fit / d_analytic when the analytic value is non-zero.
    pub fn diffusion_ratio(&self) -> Option<f64> {
        (self.d_analytic > 0.0).then(|| self.d_fit / self.d_analytic)
    }

    /// Largest relative deviation of |dephasing| from the analytic factor
    /// over checkpoints where the prediction lies in [0.1, 0.9].
    pub fn max_dephasing_deviation(&self) -> Option<f64> {
        let mut max: Option<f64> = None;
        for (t, d) in self.times.iter().zip(&self.dephasing) {
            let predicted = self.analytic_dephasing(*t);
            if (0.1..=0.9).contains(&predicted) {
                let dev = (d.norm() - predicted).abs() / predicted;
                max = Some(max.map_or(dev, |m: f64| m.max(dev)));
            }
        }
        max
    }

    /// Whether the data-level Gaussian identity holds within `k_sigma`
    /// standard errors at every checkpoint.
    pub fn gauss_identity_within(&self, k_sigma: f64) -> bool {
        self.gauss_gap
            .iter()
            .zip(&self.gauss_gap_se)
            .all(|(gap, se)| gap.abs() <= k_sigma * se.max(1e-300))
    }

    /// Statistics CSV in SI units, 17 significant digits, LF line endings.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "t,p_var,p_var_stderr,dephasing_re,dephasing_im,dephasing_stderr,analytic_2Dt,analytic_dephasing"
        )?;
        let t0 = self.unit_scale.time;
        let p2 = self.unit_scale.momentum() * self.unit_scale.momentum();
        for (k, t) in self.times.iter().enumerate() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t * t0,
                self.p_var[k] * p2,
                self.p_var_se[k] * p2,
                self.dephasing[k].re,
                self.dephasing[k].im,
                self.dephasing_se[k],
                self.analytic_p_var(*t) * p2,
                self.analytic_dephasing(*t),
            )?;
        }
        Ok(())
    }
}

/// Strictly increasing sample indices, log-spaced from a few samples up to
/// the end of the window.
fn checkpoint_indices(n: usize) -> Vec<usize> {
    let count = CHECKPOINT_COUNT;
    let first = 4.0f64;
    let last = (n - 1) as f64;
    let ratio = (last / first).powf(1.0 / (count - 1) as f64);
    let mut indices = Vec::with_capacity(count);
    let mut prev = 0usize;
    let mut target = first;
    for _ in 0..count {
        let idx = (target.round() as usize).max(prev + 1).min(n - 1);
        indices.push(idx);
        prev = idx;
        target *= ratio;
    }
    indices
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn jackknife_se(leave_one_out: &[f64]) -> f64 {
    let n = leave_one_out.len() as f64;
    let mean = leave_one_out.iter().sum::<f64>() / n;
    let spread = leave_one_out
        .iter()
        .map(|v| (v - mean).powi(2))
        .sum::<f64>();
    ((n - 1.0) / n * spread).sqrt()
}

/// Run the ensemble: for each derived-seed realization, synthesize h, build
/// the force, integrate the momentum, and reduce the per-realization
/// checkpoint values into ensemble statistics. Realizations execute in
/// parallel; the reduction is by realization index, so results are
/// bit-identical regardless of thread count.
pub fn run_ensemble(config: &SimConfig) -> Result<EnsembleStatistics> {
    config.validate()?;
    let n = config.grid.n();
    let checkpoints = checkpoint_indices(n);
    let k_count = checkpoints.len();
    let n_real = config.ensemble_size;

    let zero_noise =
        config.inertial || config.spectrum.evaluate(2.0 * config.orbit.omega())? == 0.0;
    let per_real: Vec<Vec<f64>> = if zero_noise {
        vec![vec![0.0; k_count]; n_real]
    } else {
        (0..n_real)
            .into_par_iter()
            .map(|i| -> Result<Vec<f64>> {
                let seed = RealizationSeed::derive(config.seed, i as u64);
                let h = synthesize(&config.spectrum, config.grid, seed)?;
                let force = force_series(&config.orbit, &h, config.grid)?;
                let p = integrate_momentum(&force, config.grid);
                Ok(checkpoints.iter().map(|&idx| p[idx]).collect())
            })
            .collect::<Result<Vec<_>>>()?
    };

    let times: Vec<f64> = checkpoints
        .iter()
        .map(|&i| i as f64 * config.grid.dt())
        .collect();
    let inv_hbar_dx = config.delta_x / config.hbar;

    let mut p_var = Vec::with_capacity(k_count);
    let mut p_var_se = Vec::with_capacity(k_count);
    let mut dephasing = Vec::with_capacity(k_count);
    let mut dephasing_se = Vec::with_capacity(k_count);
    let mut gauss_gap = Vec::with_capacity(k_count);
    let mut gauss_gap_se = Vec::with_capacity(k_count);

    let nf = n_real as f64;
    for k in 0..k_count {
        let p2: Vec<f64> = per_real.iter().map(|row| row[k] * row[k]).collect();
        let (mean_p2, se_p2) = mean_and_se(&p2);
        p_var.push(mean_p2);
        p_var_se.push(se_p2);

        let phases: Vec<f64> = per_real.iter().map(|row| row[k] * inv_hbar_dx).collect();
        let sum: Complex64 = phases
            .iter()
            .map(|&phi| Complex64::from_polar(1.0, phi))
            .sum();
        let q_sum: f64 = phases.iter().map(|&phi| phi * phi).sum();
        let mean = sum / nf;
        dephasing.push(mean);

        // Leave-one-out values of |<e^{i phi}>| and of the Gaussian-identity
        // gap; the jackknife absorbs the correlation between the two sides.
        let mut loo_abs = Vec::with_capacity(n_real);
        let mut loo_gap = Vec::with_capacity(n_real);
        for &phi in &phases {
            let abs_i = (sum - Complex64::from_polar(1.0, phi)).norm() / (nf - 1.0);
            let gauss_i = (-(q_sum - phi * phi) / (2.0 * (nf - 1.0))).exp();
            loo_abs.push(abs_i);
            loo_gap.push(abs_i - gauss_i);
        }
        dephasing_se.push(jackknife_se(&loo_abs));
        gauss_gap.push(mean.norm() - (-q_sum / (2.0 * nf)).exp());
        gauss_gap_se.push(jackknife_se(&loo_gap));
    }

    // Least-squares slope (with intercept) of <p^2> against t over the final
    // half of the checkpoints; the slope is linear in the per-realization
    // p^2 values, so its standard error comes from the realization spread.
    let fit_from = k_count / 2;
    let fit_times = &times[fit_from..];
    let t_mean = fit_times.iter().sum::<f64>() / fit_times.len() as f64;
    let t_ss: f64 = fit_times.iter().map(|t| (t - t_mean).powi(2)).sum();
    let weights: Vec<f64> = fit_times.iter().map(|t| (t - t_mean) / t_ss).collect();
    let slopes: Vec<f64> = per_real
        .iter()
        .map(|row| {
            row[fit_from..]
                .iter()
                .zip(&weights)
                .map(|(p, w)| w * p * p)
                .sum::<f64>()
        })
        .collect();
    let (slope_mean, slope_se) = mean_and_se(&slopes);
    let d_fit = slope_mean / 2.0;
    let d_fit_se = slope_se / 2.0;

    let fit_values = &p_var[fit_from..];
    let y_mean = fit_values.iter().sum::<f64>() / fit_values.len() as f64;
    let intercept = y_mean - slope_mean * t_mean;
    let ss_res: f64 = fit_times
        .iter()
        .zip(fit_values)
        .map(|(t, y)| (y - (intercept + slope_mean * t)).powi(2))
        .sum();
    let ss_tot: f64 = fit_values.iter().map(|y| (y - y_mean).powi(2)).sum();
    let fit_r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };

    Ok(EnsembleStatistics {
        times,
        p_var,
        p_var_se,
        dephasing,
        dephasing_se,
        gauss_gap,
        gauss_gap_se,
        d_fit,
        d_fit_se,
        fit_r_squared,
        d_analytic: config.d_analytic(),
        lambda_analytic: config.lambda_analytic(),
        delta_x: config.delta_x,
        ensemble_size: n_real,
        unit_scale: config.unit_scale,
    })
}
