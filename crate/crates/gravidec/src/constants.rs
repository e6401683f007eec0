//! Physical constants and the derived Planck/Compton scales.
//!
//! Values are CODATA-2018, hard-coded so that every derived number in the
//! crate is reproducible bit-for-bit across runs. All quantities are SI.

use crate::error::{ensure_positive, Result};

/// The four unit-bearing constants everything else is derived from.
///
/// Custom values are allowed (e.g. natural units for tests, or coherently
/// rescaled unit systems); use [`PhysicalConstants::si`] for real scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant [m^3 kg^-1 s^-2].
    pub g: f64,
    /// Speed of light [m/s].
    pub c: f64,
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Boltzmann constant [J/K].
    pub k_b: f64,
}

/// CODATA-2018 gravitational constant [m^3 kg^-1 s^-2].
pub const G_SI: f64 = 6.674_30e-11;
/// Speed of light [m/s], exact.
pub const C_SI: f64 = 299_792_458.0;
/// Reduced Planck constant [J s], from the exact h = 6.62607015e-34 J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K], exact.
pub const K_B_SI: f64 = 1.380_649e-23;

impl PhysicalConstants {
    /// CODATA-2018 SI values.
    pub const fn si() -> Self {
        PhysicalConstants {
            g: G_SI,
            c: C_SI,
            hbar: HBAR_SI,
            k_b: K_B_SI,
        }
    }

    /// Natural units G = c = hbar = k_B = 1.
    pub const fn natural() -> Self {
        PhysicalConstants {
            g: 1.0,
            c: 1.0,
            hbar: 1.0,
            k_b: 1.0,
        }
    }

    /// Construct with explicit values, rejecting non-positive entries.
    pub fn new(g: f64, c: f64, hbar: f64, k_b: f64) -> Result<Self> {
        ensure_positive("G", g)?;
        ensure_positive("c", c)?;
        ensure_positive("hbar", hbar)?;
        ensure_positive("k_B", k_b)?;
        Ok(PhysicalConstants { g, c, hbar, k_b })
    }

    /// Planck mass sqrt(hbar c / G) [kg].
    pub fn planck_mass(&self) -> f64 {
        (self.hbar * self.c / self.g).sqrt()
    }

    /// Planck length sqrt(hbar G / c^3) [m].
    pub fn planck_length(&self) -> f64 {
        (self.hbar * self.g / self.c.powi(3)).sqrt()
    }

    /// Compton length hbar / (m c) [m] for a mass m [kg].
    pub fn compton_length(&self, mass: f64) -> Result<f64> {
        ensure_positive("mass", mass)?;
        Ok(self.hbar / (mass * self.c))
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}
