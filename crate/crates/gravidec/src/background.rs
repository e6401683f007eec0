//! Gravitational-wave background spectrum models and the conversion between
//! spectrum level, effective temperature and graviton occupation number.
//!
//! Spectra are two-sided and even in omega (symmetric-ordering convention),
//! so every model is evaluated at |omega|. Point evaluation outside a
//! model's declared domain is an error: background levels in the microhertz
//! band are model-dependent and silent extrapolation would fabricate
//! physics.

use std::path::Path;

use crate::constants::PhysicalConstants;
use crate::error::{ensure_non_negative, Error, Result};

/// Two-sided spectrum C_hh of the circularly polarized metric perturbation.
#[derive(Debug, Clone, PartialEq)]
pub enum GwSpectrum {
    /// Constant level [Hz^-1] on |omega| in [omega_min, omega_max], zero
    /// outside.
    FlatBand {
        level: f64,
        omega_min: f64,
        omega_max: f64,
    },
    /// level_at_ref * (|omega|/omega_ref)^exponent, defined for all
    /// omega != 0 (and at 0 when the exponent is non-negative).
    PowerLaw {
        level_at_ref: f64,
        omega_ref: f64,
        exponent: f64,
    },
    /// Piecewise log-log-linear interpolation through sorted knots
    /// (omega [rad/s], chh [Hz^-1]); zero-valued knots fall back to linear
    /// interpolation on the affected segment.
    Tabulated { points: Vec<(f64, f64)> },
}

impl GwSpectrum {
    pub fn flat_band(level: f64, omega_min: f64, omega_max: f64) -> Result<Self> {
        ensure_non_negative("level", level)?;
        ensure_non_negative("omega_min", omega_min)?;
        crate::error::ensure_positive("omega_max", omega_max)?;
        if omega_max <= omega_min {
            return Err(Error::invalid(
                "omega_max",
                "greater than omega_min",
                omega_max,
            ));
        }
        Ok(GwSpectrum::FlatBand {
            level,
            omega_min,
            omega_max,
        })
    }

    pub fn power_law(level_at_ref: f64, omega_ref: f64, exponent: f64) -> Result<Self> {
        ensure_non_negative("level_at_ref", level_at_ref)?;
        crate::error::ensure_positive("omega_ref", omega_ref)?;
        Ok(GwSpectrum::PowerLaw {
            level_at_ref,
            omega_ref,
            exponent,
        })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("points", "non-empty", 0.0));
        }
        for (i, &(omega, chh)) in points.iter().enumerate() {
            if omega <= 0.0 || !omega.is_finite() {
                return Err(Error::Parse {
                    path: "tabulated spectrum".into(),
                    line: i + 1,
                    message: format!("abscissa {omega:e} must be strictly positive"),
                });
            }
            if chh < 0.0 || !chh.is_finite() {
                return Err(Error::Parse {
                    path: "tabulated spectrum".into(),
                    line: i + 1,
                    message: format!("ordinate {chh:e} must be non-negative"),
                });
            }
            if i > 0 && points[i - 1].0 >= omega {
                return Err(Error::Parse {
                    path: "tabulated spectrum".into(),
                    line: i + 1,
                    message: format!(
                        "abscissae must be strictly increasing ({:e} then {omega:e})",
                        points[i - 1].0
                    ),
                });
            }
        }
        Ok(GwSpectrum::Tabulated { points })
    }

    /// Point evaluation C_hh[|omega|]; errors outside the model's domain.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        let w = omega.abs();
        match self {
            GwSpectrum::FlatBand {
                level,
                omega_min,
                omega_max,
            } => {
                if w < *omega_min || w > *omega_max {
                    Err(Error::OutOfDomain {
                        omega,
                        min: *omega_min,
                        max: *omega_max,
                    })
                } else {
                    Ok(*level)
                }
            }
            GwSpectrum::PowerLaw {
                level_at_ref,
                omega_ref,
                exponent,
            } => {
                if w == 0.0 && *exponent < 0.0 {
                    return Err(Error::OutOfDomain {
                        omega,
                        min: 0.0,
                        max: f64::INFINITY,
                    });
                }
                Ok(level_at_ref * (w / omega_ref).powf(*exponent))
            }
            GwSpectrum::Tabulated { points } => {
                let first = points[0].0;
                let last = points[points.len() - 1].0;
                if w < first || w > last {
                    return Err(Error::OutOfDomain {
                        omega,
                        min: first,
                        max: last,
                    });
                }
                Ok(interpolate(points, w))
            }
        }
    }

    /// Per-bin synthesis target: the point value inside the model's support,
    /// zero outside it. Compact-support models (flat band, table) define a
    /// band of noise; outside the band the process carries no power.
    pub(crate) fn synthesis_level(&self, omega: f64) -> Result<f64> {
        let w = omega.abs();
        match self {
            GwSpectrum::FlatBand {
                level,
                omega_min,
                omega_max,
            } => Ok(if w < *omega_min || w > *omega_max {
                0.0
            } else {
                *level
            }),
            GwSpectrum::PowerLaw { exponent, .. } => {
                if w == 0.0 {
                    if *exponent > 0.0 {
                        Ok(0.0)
                    } else if *exponent == 0.0 {
                        self.evaluate(omega)
                    } else {
                        Err(Error::OutOfDomain {
                            omega,
                            min: 0.0,
                            max: f64::INFINITY,
                        })
                    }
                } else {
                    self.evaluate(omega)
                }
            }
            GwSpectrum::Tabulated { points } => {
                if w < points[0].0 || w > points[points.len() - 1].0 {
                    Ok(0.0)
                } else {
                    Ok(interpolate(points, w))
                }
            }
        }
    }

    /// Highest |omega| carrying power, used to check grid resolvability.
    /// `None` for unbounded models.
    pub fn support_max(&self) -> Option<f64> {
        match self {
            GwSpectrum::FlatBand { omega_max, .. } => Some(*omega_max),
            GwSpectrum::PowerLaw { .. } => None,
            GwSpectrum::Tabulated { points } => Some(points[points.len() - 1].0),
        }
    }

    /// Read a tabulated spectrum from a text file: one `omega, chh` record
    /// per line (optionally parenthesized), `#` comments ignored.
    pub fn load_tabulated(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_tabulated(&path.display().to_string(), &text)
    }

    /// Parse the tabulated-spectrum format from an in-memory string.
    pub fn parse_tabulated(path: &str, text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line = line.trim_start_matches('(').trim_end_matches(')').trim();
            let (a, b) = line.split_once(',').ok_or_else(|| Error::Parse {
                path: path.to_string(),
                line: lineno,
                message: format!("expected 'omega, chh', got '{line}'"),
            })?;
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    path: path.to_string(),
                    line: lineno,
                    message: format!("cannot parse '{}' as a number", s.trim()),
                })
            };
            let omega = parse(a)?;
            let chh = parse(b)?;
            if let Some(&(prev, _)) = points.last() {
                if prev >= omega {
                    return Err(Error::Parse {
                        path: path.to_string(),
                        line: lineno,
                        message: format!(
                            "abscissae must be strictly increasing ({prev:e} then {omega:e})"
                        ),
                    });
                }
            }
            if omega <= 0.0 || omega.is_nan() {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: lineno,
                    message: format!("abscissa {omega:e} must be strictly positive"),
                });
            }
            if chh < 0.0 {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: lineno,
                    message: format!("ordinate {chh:e} must be non-negative"),
                });
            }
            points.push((omega, chh));
        }
        if points.is_empty() {
            return Err(Error::Parse {
                path: path.to_string(),
                line: 0,
                message: "no records in spectrum file".into(),
            });
        }
        Self::tabulated(points)
    }
}

fn interpolate(points: &[(f64, f64)], w: f64) -> f64 {
    let idx = match points.binary_search_by(|(omega, _)| omega.total_cmp(&w)) {
        Ok(i) => return points[i].1,
        Err(i) => i,
    };
    let (w0, y0) = points[idx - 1];
    let (w1, y1) = points[idx];
    if y0 > 0.0 && y1 > 0.0 {
        let t = (w.ln() - w0.ln()) / (w1.ln() - w0.ln());
        (y0.ln() + t * (y1.ln() - y0.ln())).exp()
    } else {
        let t = (w - w0) / (w1 - w0);
        y0 + t * (y1 - y0)
    }
}

/// The prefactor 16 G / (5 c^5) converting k_B T (or hbar omega occupation)
/// to a spectrum level.
fn spectrum_prefactor(constants: &PhysicalConstants) -> f64 {
    16.0 * constants.g / (5.0 * constants.c.powi(5))
}

/// Effective temperature T_gr [K] of a background with spectrum level `chh`.
pub fn chh_to_temperature(chh: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_non_negative("chh", chh)?;
    Ok(chh / (spectrum_prefactor(constants) * constants.k_b))
}

/// Spectrum level [Hz^-1] of a background at effective temperature `t_gr`.
pub fn temperature_to_chh(t_gr: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_non_negative("t_gr", t_gr)?;
    Ok(spectrum_prefactor(constants) * constants.k_b * t_gr)
}

/// Vacuum spectrum level at `omega`: the occupation-1/2 contribution.
pub fn chh_vacuum(omega: f64, constants: &PhysicalConstants) -> f64 {
    spectrum_prefactor(constants) * constants.hbar * omega.abs() / 2.0
}

/// Graviton number per mode at `omega` for spectrum level `chh`.
///
/// Errors when `chh` lies below the vacuum level (sub-vacuum spectra are
/// outside the model).
pub fn graviton_number(chh: f64, omega: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_non_negative("chh", chh)?;
    crate::error::ensure_positive("omega", omega)?;
    let vacuum = chh_vacuum(omega, constants);
    if chh < vacuum * (1.0 - 1e-12) {
        return Err(Error::SubVacuum { chh, vacuum, omega });
    }
    let n = chh / (spectrum_prefactor(constants) * constants.hbar * omega) - 0.5;
    Ok(n.max(0.0))
}

/// Effective temperature and graviton number at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundThermodynamics {
    /// Effective temperature [K].
    pub t_gr: f64,
    /// Gravitons per mode.
    pub n_gr: f64,
    /// Evaluation frequency [rad/s].
    pub omega: f64,
}

impl BackgroundThermodynamics {
    /// Derive both quantities from a spectrum level at one frequency.
    pub fn from_chh(chh: f64, omega: f64, constants: &PhysicalConstants) -> Result<Self> {
        Ok(BackgroundThermodynamics {
            t_gr: chh_to_temperature(chh, constants)?,
            n_gr: graviton_number(chh, omega, constants)?,
            omega,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SI: PhysicalConstants = PhysicalConstants::si();
    /// 2*Omega of the Earth-Moon orbit [rad/s].
    const TWO_OMEGA_MOON: f64 = 5.33e-6;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn flat_band_level_at_moon_frequency() {
        let s = GwSpectrum::flat_band(1e-34, 1e-7, 1e-4).unwrap();
        assert_eq!(s.evaluate(TWO_OMEGA_MOON).unwrap(), 1e-34);
    }

    #[test]
    fn evaluation_is_even_in_omega() {
        let s = GwSpectrum::flat_band(3e-34, 1e-7, 1e-4).unwrap();
        assert_eq!(
            s.evaluate(-TWO_OMEGA_MOON).unwrap(),
            s.evaluate(TWO_OMEGA_MOON).unwrap()
        );
        let p = GwSpectrum::power_law(1.0, 1.0, 2.0).unwrap();
        assert_eq!(p.evaluate(-3.0).unwrap(), p.evaluate(3.0).unwrap());
    }

    #[test]
    fn power_law_definition() {
        let p = GwSpectrum::power_law(1.0, 1.0, 2.0).unwrap();
        assert!(rel(p.evaluate(3.0).unwrap(), 9.0) < 1e-14);
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let s = GwSpectrum::flat_band(1e-34, 1e-7, 1e-4).unwrap();
        assert!(matches!(s.evaluate(1e-3), Err(Error::OutOfDomain { .. })));
        let t = GwSpectrum::tabulated(vec![(1.0, 1e-34), (2.0, 1e-35)]).unwrap();
        assert!(t.evaluate(0.5).is_err());
        assert!(t.evaluate(2.5).is_err());
    }

    #[test]
    fn tabulated_exact_at_knots_and_bounded_between() {
        let t = GwSpectrum::tabulated(vec![(1.0, 1e-34), (10.0, 1e-36)]).unwrap();
        assert_eq!(t.evaluate(1.0).unwrap(), 1e-34);
        assert_eq!(t.evaluate(10.0).unwrap(), 1e-36);
        // log-log midpoint: sqrt(10) in omega -> geometric mean of ordinates
        let mid = t.evaluate(10.0_f64.sqrt()).unwrap();
        assert!(rel(mid, 1e-35) < 1e-12, "mid = {mid:e}");
        for i in 1..100 {
            let w = 1.0 + 9.0 * i as f64 / 100.0;
            let v = t.evaluate(w).unwrap();
            assert!((1e-36..=1e-34).contains(&v));
        }
    }

    #[test]
    fn tabulated_rejects_unsorted_and_negative() {
        let err = GwSpectrum::tabulated(vec![(2.0, 1e-34), (1.0, 1e-35)]).unwrap_err();
        assert!(err.to_string().contains("increasing"), "{err}");
        assert!(GwSpectrum::tabulated(vec![(1.0, -1e-35)]).is_err());
        assert!(GwSpectrum::tabulated(vec![]).is_err());
    }

    #[test]
    fn parse_tabulated_file_format() {
        let s = GwSpectrum::parse_tabulated("mem", "# comment\n(6.3e-6, 1e-34)\n(6.3e-5, 1e-35)\n")
            .unwrap();
        assert_eq!(s.evaluate(6.3e-6).unwrap(), 1e-34);
        let bare = GwSpectrum::parse_tabulated("mem", "6.3e-6, 1e-34\n6.3e-5, 1e-35\n").unwrap();
        assert_eq!(s, bare);
    }

    #[test]
    fn parse_tabulated_errors_carry_line_numbers() {
        let err = GwSpectrum::parse_tabulated("mem", "").unwrap_err();
        assert!(err.to_string().contains("no records"), "{err}");
        let err = GwSpectrum::parse_tabulated("mem", "(2e-6, 1e-34)\n(1e-6, 1e-35)\n").unwrap_err();
        assert!(err.to_string().contains("mem:2"), "{err}");
        let err = GwSpectrum::parse_tabulated("mem", "(1e-6; 1e-34)\n").unwrap_err();
        assert!(err.to_string().contains("mem:1"), "{err}");
    }

    #[test]
    fn temperature_of_conservative_estimate() {
        // 1e-34 Hz^-1 maps to ~8.2e40 K, i.e. the quoted 1e41 K scale.
        let t = chh_to_temperature(1e-34, &SI).unwrap();
        assert!(rel(t, 8.212e40) < 1e-3, "T_gr = {t:e}");
        assert_eq!(chh_to_temperature(0.0, &SI).unwrap(), 0.0);
    }

    #[test]
    fn temperature_chh_round_trip() {
        let chh = 1e-34;
        let back = temperature_to_chh(chh_to_temperature(chh, &SI).unwrap(), &SI).unwrap();
        assert!(rel(back, chh) < 1e-12);
        // inverse example: 8.2e40 K -> 1e-34 within 1%
        let c = temperature_to_chh(8.2e40, &SI).unwrap();
        assert!(rel(c, 1e-34) < 0.01, "chh = {c:e}");
        assert_eq!(temperature_to_chh(0.0, &SI).unwrap(), 0.0);
        let doubled = temperature_to_chh(2.0 * 8.2e40, &SI).unwrap();
        assert!(rel(doubled, 2.0 * c) < 1e-14);
    }

    #[test]
    fn graviton_number_moon() {
        let n = graviton_number(1e-34, TWO_OMEGA_MOON, &SI).unwrap();
        assert!(rel(n, 2.0e57) < 0.05, "n_gr = {n:e}");
    }

    #[test]
    fn graviton_number_vacuum_is_zero() {
        let vac = chh_vacuum(TWO_OMEGA_MOON, &SI);
        let n = graviton_number(vac, TWO_OMEGA_MOON, &SI).unwrap();
        assert!(n.abs() < 1e-9);
        assert!(matches!(
            graviton_number(vac * 0.5, TWO_OMEGA_MOON, &SI),
            Err(Error::SubVacuum { .. })
        ));
    }

    #[test]
    fn occupation_identity() {
        // k_B T_gr / (hbar omega) - n_gr = 1/2; checked at order-one
        // occupation where f64 resolves the half (at n ~ 1e57 the half is
        // far below one ulp).
        let omega = TWO_OMEGA_MOON;
        let chh = 3.0 * chh_vacuum(omega, &SI);
        let t = chh_to_temperature(chh, &SI).unwrap();
        let n = graviton_number(chh, omega, &SI).unwrap();
        let lhs = SI.k_b * t / (SI.hbar * omega) - n;
        assert!((lhs - 0.5).abs() < 1e-12, "lhs = {lhs}");
        assert!((n - 1.0).abs() < 1e-12, "n = {n}");
    }

    #[test]
    fn moon_background_is_high_temperature() {
        // k_B T_gr far above hbar omega for the conservative estimate.
        let t = chh_to_temperature(1e-34, &SI).unwrap();
        assert!(SI.k_b * t / (SI.hbar * TWO_OMEGA_MOON) > 1e50);
    }

    #[test]
    fn thermodynamics_invariant() {
        let b = BackgroundThermodynamics::from_chh(1e-34, TWO_OMEGA_MOON, &SI).unwrap();
        let lhs = SI.k_b * b.t_gr;
        let rhs = (0.5 + b.n_gr) * SI.hbar * b.omega;
        assert!(rel(lhs, rhs) < 1e-12);
        assert!(b.n_gr >= 0.0);
    }
}
