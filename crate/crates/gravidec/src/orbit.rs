//! Circular Kepler two-body orbit kinematics.
//!
//! The orbit is closed-form (never numerically propagated): the relative
//! coordinate moves on a circle of radius `rho` in the x1-x2 plane with
//! x3 = 0, at the angular frequency fixed by the Kepler law
//! rho^3 Omega^2 = G M.

use crate::constants::PhysicalConstants;
use crate::error::{ensure_positive, Result};

/// A circular two-body orbit with all derived quantities populated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyOrbit {
    m_a: f64,
    m_b: f64,
    reduced_mass: f64,
    total_mass: f64,
    rho: f64,
    omega: f64,
    theta: f64,
    accel: f64,
}

impl TwoBodyOrbit {
    /// Build from component masses and separation; `theta` is the phase
    /// offset at t = 0.
    pub fn from_masses_separation(
        m_a: f64,
        m_b: f64,
        rho: f64,
        theta: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        ensure_positive("m_a", m_a)?;
        ensure_positive("m_b", m_b)?;
        ensure_positive("rho", rho)?;
        let total_mass = m_a + m_b;
        let omega = (constants.g * total_mass / rho.powi(3)).sqrt();
        Ok(TwoBodyOrbit {
            m_a,
            m_b,
            reduced_mass: m_a * m_b / total_mass,
            total_mass,
            rho,
            omega,
            theta,
            accel: rho * omega * omega,
        })
    }

    /// Build from component masses and orbital angular frequency, deriving
    /// the separation from the Kepler law.
    pub fn from_masses_frequency(
        m_a: f64,
        m_b: f64,
        omega: f64,
        theta: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        ensure_positive("m_a", m_a)?;
        ensure_positive("m_b", m_b)?;
        ensure_positive("omega", omega)?;
        let rho = (constants.g * (m_a + m_b) / (omega * omega)).cbrt();
        Self::from_masses_separation(m_a, m_b, rho, theta, constants)
    }

    pub fn m_a(&self) -> f64 {
        self.m_a
    }

    pub fn m_b(&self) -> f64 {
        self.m_b
    }

    /// Reduced mass m_a m_b / (m_a + m_b) [kg].
    pub fn reduced_mass(&self) -> f64 {
        self.reduced_mass
    }

    /// Total mass m_a + m_b [kg].
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Separation [m].
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Orbital angular frequency [rad/s].
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Phase offset at t = 0 [rad].
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Centripetal acceleration rho Omega^2 [m/s^2].
    pub fn accel(&self) -> f64 {
        self.accel
    }

    /// Relative position (x1, x2) at time t; x3 is identically zero.
    pub fn position(&self, t: f64) -> (f64, f64) {
        let phase = self.omega * t + self.theta;
        (self.rho * phase.cos(), self.rho * phase.sin())
    }

    /// Traceless quadrupole moment at time t.
    pub fn quadrupole(&self, t: f64) -> QuadrupoleState {
        let (x1, x2) = self.position(t);
        let x = [x1, x2, 0.0];
        let r2 = x1 * x1 + x2 * x2;
        let m = self.reduced_mass;
        let mut q = [[0.0; 3]; 3];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                *entry = m * (x[i] * x[j] - delta * r2 / 3.0);
            }
        }
        QuadrupoleState { q, t }
    }

    /// Arc distance rho * delta_theta between two trajectories on the same
    /// circular orbit, constant in time.
    pub fn separation_distance(&self, delta_theta: f64) -> f64 {
        self.rho * delta_theta
    }
}

/// Symmetric traceless quadrupole tensor [kg m^2] at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupoleState {
    /// Tensor components Q[i][j].
    pub q: [[f64; 3]; 3],
    /// Time [s].
    pub t: f64,
}

impl QuadrupoleState {
    pub fn trace(&self) -> f64 {
        self.q[0][0] + self.q[1][1] + self.q[2][2]
    }

    /// Frobenius norm, for relative-trace checks.
    pub fn norm(&self) -> f64 {
        self.q.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Contraction (1/4) h''_ij Q_ij with a constant tensor h''.
    pub fn tidal_coupling(&self, hdd: &[[f64; 3]; 3]) -> f64 {
        let s: f64 = hdd
            .iter()
            .flatten()
            .zip(self.q.iter().flatten())
            .map(|(h, q)| h * q)
            .sum();
        0.25 * s
    }
}
