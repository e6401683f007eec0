//! Closed-form damping rates, momentum diffusion coefficients, decoherence
//! rates, channel ratios and the crossover-mass solver.
//!
//! Conventions: `m` is the reduced mass of the orbit in both the
//! gravitational and electromagnetic channels (the channel ratio divides the
//! two rates, which is only meaningful with a common mass), and the
//! decoherence time is the time at which the dephasing exponent reaches one.

use crate::background::{chh_to_temperature, GwSpectrum};
use crate::catalog::{touching_spheres, ScenarioPreset};
use crate::constants::PhysicalConstants;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::orbit::TwoBodyOrbit;

/// Gravitational damping rate 32 G m a^2 / (5 c^5) [s^-1].
pub fn grav_damping_rate(m: f64, a: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_positive("m", m)?;
    ensure_non_negative("a", a)?;
    Ok(32.0 * constants.g * m * a * a / (5.0 * constants.c.powi(5)))
}

/// Gravitational momentum diffusion coefficient 2 m^2 a^2 C_hh[2 Omega]
/// [kg^2 m^2 s^-3].
pub fn grav_diffusion(m: f64, a: f64, chh_at_2omega: f64) -> Result<f64> {
    ensure_positive("m", m)?;
    ensure_non_negative("a", a)?;
    ensure_non_negative("chh_at_2omega", chh_at_2omega)?;
    Ok(2.0 * m * m * a * a * chh_at_2omega)
}

/// Electromagnetic damping rate of a perfectly scattering sphere of radius
/// `r` in a photon bath at `t_em`: 4 pi^3 hbar r^2 / (45 m) (k_B T / hbar c)^4.
///
/// Valid for `r` large compared to the thermal wavelength; see
/// [`em_radius_regime_ok`].
pub fn em_damping_rate(m: f64, r: f64, t_em: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_positive("m", m)?;
    ensure_positive("r", r)?;
    ensure_positive("t_em", t_em)?;
    let photon = constants.k_b * t_em / (constants.hbar * constants.c);
    Ok(4.0 * std::f64::consts::PI.powi(3) * constants.hbar * r * r / (45.0 * m) * photon.powi(4))
}

/// Thermal photon wavelength scale hbar c / (k_B T) [m].
pub fn thermal_wavelength(t_em: f64, constants: &PhysicalConstants) -> f64 {
    constants.hbar * constants.c / (constants.k_b * t_em)
}

/// Whether the sphere radius safely exceeds the photon wavelength (factor 10),
/// the regime in which the damping-rate formula applies.
pub fn em_radius_regime_ok(r: f64, t_em: f64, constants: &PhysicalConstants) -> bool {
    r >= 10.0 * thermal_wavelength(t_em, constants)
}

/// Decoherence rate Lambda = D / hbar^2 [s^-1 m^-2].
pub fn decoherence_rate(d: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_non_negative("D", d)?;
    Ok(d / (constants.hbar * constants.hbar))
}

/// Time for the dephasing exponent Lambda dx^2 t to reach one [s].
pub fn decoherence_time(lambda: f64, delta_x: f64) -> Result<f64> {
    ensure_positive("lambda", lambda)?;
    ensure_positive("delta_x", delta_x)?;
    Ok(1.0 / (lambda * delta_x * delta_x))
}

/// Gravitational channel: damping, diffusion, decoherence rate, effective
/// temperature. All zero for inertial motion (a = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravChannel {
    /// Damping rate [s^-1].
    pub gamma_gr: f64,
    /// Momentum diffusion coefficient [kg^2 m^2 s^-3].
    pub d_gr: f64,
    /// Decoherence rate [s^-1 m^-2].
    pub lambda_gr: f64,
    /// Effective background temperature [K].
    pub t_gr: f64,
}

impl GravChannel {
    pub fn from_physics(
        m: f64,
        a: f64,
        chh_at_2omega: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let gamma_gr = grav_damping_rate(m, a, constants)?;
        let d_gr = grav_diffusion(m, a, chh_at_2omega)?;
        let lambda_gr = decoherence_rate(d_gr, constants)?;
        let t_gr = chh_to_temperature(chh_at_2omega, constants)?;
        Ok(GravChannel {
            gamma_gr,
            d_gr,
            lambda_gr,
            t_gr,
        })
    }
}

/// Electromagnetic channel for a scattering sphere in a thermal photon bath.
/// The diffusion coefficient is defined through the Einstein relation
/// D_em = m Gamma_em k_B T_em.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmChannel {
    /// Damping rate [s^-1].
    pub gamma_em: f64,
    /// Momentum diffusion coefficient [kg^2 m^2 s^-3].
    pub d_em: f64,
    /// Decoherence rate [s^-1 m^-2].
    pub lambda_em: f64,
    /// Photon bath temperature [K].
    pub t_em: f64,
    /// Sphere radius [m].
    pub r: f64,
}

impl EmChannel {
    pub fn from_physics(m: f64, r: f64, t_em: f64, constants: &PhysicalConstants) -> Result<Self> {
        let gamma_em = em_damping_rate(m, r, t_em, constants)?;
        let d_em = m * gamma_em * constants.k_b * t_em;
        let lambda_em = decoherence_rate(d_em, constants)?;
        Ok(EmChannel {
            gamma_em,
            d_em,
            lambda_em,
            t_em,
            r,
        })
    }
}

/// Channel ratio via temperatures and dampings:
/// (Gamma_gr/Gamma_em)(T_gr/T_em). Equals D_gr/D_em and
/// Lambda_gr/Lambda_em identically.
pub fn ratio_direct(grav: &GravChannel, em: &EmChannel) -> Result<f64> {
    if em.gamma_em == 0.0 || em.t_em == 0.0 {
        return Err(Error::invalid(
            "em channel",
            "non-zero damping and temperature",
            em.gamma_em,
        ));
    }
    Ok((grav.gamma_gr / em.gamma_em) * (grav.t_gr / em.t_em))
}

/// Channel ratio as the product of dimensionless factors:
/// (72/pi^3)(m/m_P)^2 (rho/r)^2 (hbar Omega / k_B T_em)^4 (T_gr/T_em).
pub fn ratio_dimensionless(
    m: f64,
    rho: f64,
    r: f64,
    omega: f64,
    t_em: f64,
    t_gr: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("m", m)?;
    ensure_positive("rho", rho)?;
    ensure_positive("r", r)?;
    ensure_positive("omega", omega)?;
    ensure_positive("t_em", t_em)?;
    ensure_positive("t_gr", t_gr)?;
    let m_p = constants.planck_mass();
    let mass_factor = (m / m_p) * (m / m_p);
    let geometry_factor = (rho / r) * (rho / r);
    let photon_factor = (constants.hbar * omega / (constants.k_b * t_em)).powi(4);
    Ok(72.0 / std::f64::consts::PI.powi(3)
        * mass_factor
        * geometry_factor
        * photon_factor
        * (t_gr / t_em))
}

/// Separations the decoherence time is reported at: Planck length (computed
/// from the constants), one femtometre, one angstrom.
pub const DELTA_X_FEMTOMETRE: f64 = 1e-15;
pub const DELTA_X_ANGSTROM: f64 = 1e-10;

/// One decoherence time entry of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceTime {
    pub label: &'static str,
    /// Trajectory separation [m].
    pub delta_x: f64,
    /// Time for the gravitational dephasing exponent to reach one [s].
    pub t_dec: f64,
}

/// Everything the closed-form layer says about one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceReport {
    pub scenario: String,
    /// Reduced mass [kg].
    pub m: f64,
    /// Centripetal acceleration [m/s^2].
    pub a: f64,
    /// Separation [m].
    pub rho: f64,
    /// Orbital angular frequency [rad/s].
    pub omega: f64,
    /// Spectrum level at 2 Omega [Hz^-1].
    pub chh_at_2omega: f64,
    /// Gravitons per mode at 2 Omega.
    pub n_gr: f64,
    pub grav: GravChannel,
    pub em: EmChannel,
    /// Lambda_gr / Lambda_em via temperatures and dampings.
    pub ratio_direct: f64,
    /// The same ratio as a product of dimensionless factors.
    pub ratio_dimensionless: f64,
    /// Gravitational decoherence times at reference separations.
    pub times: Vec<DecoherenceTime>,
    /// True when the sphere radius is large enough for the electromagnetic
    /// damping formula (r >= 10 thermal wavelengths).
    pub em_regime_ok: bool,
}

/// Scenario inputs after orbit derivation, the quantities the closed forms
/// consume. `a` may be overridden (e.g. to zero for the inertial null).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioInputs {
    pub name: String,
    pub m: f64,
    pub a: f64,
    pub rho: f64,
    pub omega: f64,
    pub r: f64,
    pub t_em: f64,
    pub chh_at_2omega: f64,
}

impl ScenarioInputs {
    /// Derive the closed-form inputs from a preset.
    pub fn from_preset(preset: &ScenarioPreset, constants: &PhysicalConstants) -> Result<Self> {
        let orbit = TwoBodyOrbit::from_masses_separation(
            preset.m_a, preset.m_b, preset.rho, 0.0, constants,
        )?;
        Ok(ScenarioInputs {
            name: preset.name.clone(),
            m: orbit.reduced_mass(),
            a: orbit.accel(),
            rho: orbit.rho(),
            omega: orbit.omega(),
            r: preset.r,
            t_em: preset.t_em,
            chh_at_2omega: preset.chh_at_2omega,
        })
    }
}

impl DecoherenceReport {
    pub fn from_inputs(inputs: &ScenarioInputs, constants: &PhysicalConstants) -> Result<Self> {
        let grav = GravChannel::from_physics(inputs.m, inputs.a, inputs.chh_at_2omega, constants)?;
        let em = EmChannel::from_physics(inputs.m, inputs.r, inputs.t_em, constants)?;
        let n_gr = crate::background::graviton_number(
            inputs.chh_at_2omega,
            2.0 * inputs.omega,
            constants,
        )?;
        let ratio = ratio_direct(&grav, &em)?;
        // The dimensionless form assumes a = rho Omega^2; an acceleration
        // override propagates through the frequency it implies.
        let omega_eff = (inputs.a / inputs.rho).sqrt();
        let ratio_dim = if omega_eff > 0.0 {
            ratio_dimensionless(
                inputs.m,
                inputs.rho,
                inputs.r,
                omega_eff,
                inputs.t_em,
                grav.t_gr,
                constants,
            )?
        } else {
            0.0
        };
        let times = if grav.lambda_gr > 0.0 {
            vec![
                DecoherenceTime {
                    label: "planck_length",
                    delta_x: constants.planck_length(),
                    t_dec: decoherence_time(grav.lambda_gr, constants.planck_length())?,
                },
                DecoherenceTime {
                    label: "femtometre",
                    delta_x: DELTA_X_FEMTOMETRE,
                    t_dec: decoherence_time(grav.lambda_gr, DELTA_X_FEMTOMETRE)?,
                },
                DecoherenceTime {
                    label: "angstrom",
                    delta_x: DELTA_X_ANGSTROM,
                    t_dec: decoherence_time(grav.lambda_gr, DELTA_X_ANGSTROM)?,
                },
            ]
        } else {
            Vec::new()
        };
        Ok(DecoherenceReport {
            scenario: inputs.name.clone(),
            m: inputs.m,
            a: inputs.a,
            rho: inputs.rho,
            omega: inputs.omega,
            chh_at_2omega: inputs.chh_at_2omega,
            n_gr,
            grav,
            em,
            ratio_direct: ratio,
            ratio_dimensionless: ratio_dim,
            times,
            em_regime_ok: em_radius_regime_ok(inputs.r, inputs.t_em, constants),
        })
    }

    pub fn from_preset(preset: &ScenarioPreset, constants: &PhysicalConstants) -> Result<Self> {
        Self::from_inputs(&ScenarioInputs::from_preset(preset, constants)?, constants)
    }
}

/// Channel ratio for a touching-equal-spheres system of total mass `m_total`
/// and the given density: the geometry fixes r from the density, rho = 2 r,
/// Omega from the Kepler law on the total mass, and the reduced mass
/// m_total/4 enters both channels.
pub fn touching_spheres_ratio(
    m_total: f64,
    density: f64,
    t_em: f64,
    spectrum: &GwSpectrum,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let preset = touching_spheres("crossover", m_total, density, t_em, 1.0)?;
    let orbit =
        TwoBodyOrbit::from_masses_separation(preset.m_a, preset.m_b, preset.rho, 0.0, constants)?;
    let chh = spectrum.evaluate(2.0 * orbit.omega())?;
    let t_gr = chh_to_temperature(chh, constants)?;
    ratio_dimensionless(
        orbit.reduced_mass(),
        orbit.rho(),
        preset.r,
        orbit.omega(),
        t_em,
        t_gr,
        constants,
    )
}

const CROSSOVER_BRACKET: (f64, f64) = (1e-3, 1e9);

/// Total mass [kg] at which the gravitational and electromagnetic
/// decoherence rates coincide for touching equal spheres of the given
/// density, found by bisection on log-mass after verifying the ratio is
/// monotone across the bracket.
pub fn crossover_mass(
    density: f64,
    t_em: f64,
    spectrum: &GwSpectrum,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("density", density)?;
    let ratio = |m_total: f64| touching_spheres_ratio(m_total, density, t_em, spectrum, constants);

    let (lo, hi) = CROSSOVER_BRACKET;
    let (log_lo, log_hi) = (lo.log10(), hi.log10());

    // Monotonicity scan before bisection.
    let scan_points = 25;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..scan_points {
        let log_m = log_lo + (log_hi - log_lo) * i as f64 / (scan_points - 1) as f64;
        let value = ratio(10f64.powf(log_m))?;
        if value <= prev {
            return Err(Error::invalid(
                "ratio",
                "strictly monotone in mass across the bracket",
                value,
            ));
        }
        prev = value;
    }

    let f_lo = ratio(lo)? - 1.0;
    let f_hi = ratio(hi)? - 1.0;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: f_lo + 1.0,
            f_hi: f_hi + 1.0,
        });
    }

    let (mut a, mut b) = (log_lo, log_hi);
    let mut f_a = f_lo;
    // Relative tolerance 1e-8 on the mass itself.
    let tol_log = (1.0f64 + 1e-8).log10();
    while b - a > tol_log {
        let mid = 0.5 * (a + b);
        let f_mid = ratio(10f64.powf(mid))? - 1.0;
        if f_mid == 0.0 {
            return Ok(10f64.powf(mid));
        }
        if f_mid.signum() == f_a.signum() {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
    }
    Ok(10f64.powf(0.5 * (a + b)))
}
