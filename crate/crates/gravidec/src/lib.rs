//! Gravitational-wave-induced decoherence of circular two-body orbits.
//!
//! The library has two layers:
//!
//! * an analytic layer ([`constants`], [`orbit`], [`background`], [`rates`])
//!   that evaluates damping rates, momentum diffusion coefficients,
//!   decoherence rates and gravitational-vs-electromagnetic ratios in closed
//!   form from a scenario (masses, separation, photon bath temperature,
//!   background spectrum level);
//! * a stochastic layer ([`noise`], [`sim`]) that synthesizes stationary
//!   Gaussian metric-perturbation series with a prescribed spectrum, drives
//!   an orbit pair with them, and checks the white-noise predictions
//!   (momentum variance growth and Gaussian dephasing) by ensemble averaging.
//!
//! All analytic quantities are carried in SI units; the simulator works in
//! nondimensional units recorded in a [`sim::UnitScale`].

pub mod background;
pub mod catalog;
pub mod constants;
pub mod error;
pub mod noise;
pub mod orbit;
pub mod rates;
pub mod sim;

pub use background::{BackgroundThermodynamics, GwSpectrum};
pub use catalog::{Catalog, ScenarioPreset};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use noise::{NoiseRealization, RealizationSeed, SamplingGrid, TabulatedPsd};
pub use orbit::{QuadrupoleState, TwoBodyOrbit};
pub use rates::{DecoherenceReport, EmChannel, GravChannel};
pub use sim::{EnsembleStatistics, SimConfig, UnitScale};
