//! Scenario presets: the celestial/lab systems a report can be run on.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{ensure_positive, Error, Result};

/// Inputs for one decoherence scenario.
///
/// `m_a`, `m_b` are the component masses, `rho` their separation, `r` the
/// radius of the photon-scattering sphere, `t_em` the photon bath
/// temperature and `chh_at_2omega` the gravitational background spectrum
/// level at twice the orbital frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPreset {
    pub name: String,
    /// Primary mass [kg].
    pub m_a: f64,
    /// Secondary (orbiter) mass [kg].
    pub m_b: f64,
    /// Orbital separation [m].
    pub rho: f64,
    /// Orbiter radius [m].
    pub r: f64,
    /// Photon bath temperature [K].
    pub t_em: f64,
    /// Background spectrum level at 2*Omega [Hz^-1].
    pub chh_at_2omega: f64,
}

impl ScenarioPreset {
    pub fn new(
        name: impl Into<String>,
        m_a: f64,
        m_b: f64,
        rho: f64,
        r: f64,
        t_em: f64,
        chh_at_2omega: f64,
    ) -> Result<Self> {
        ensure_positive("m_a", m_a)?;
        ensure_positive("m_b", m_b)?;
        ensure_positive("rho", rho)?;
        ensure_positive("r", r)?;
        ensure_positive("t_em", t_em)?;
        // Zero is allowed so overrides can null the background; catalog
        // entries carry positive levels.
        crate::error::ensure_non_negative("chh_at_2omega", chh_at_2omega)?;
        Ok(ScenarioPreset {
            name: name.into(),
            m_a,
            m_b,
            rho,
            r,
            t_em,
            chh_at_2omega,
        })
    }
}

/// Named collection of presets. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Catalog {
    presets: BTreeMap<String, ScenarioPreset>,
}

impl Catalog {
    /// The built-in presets.
    ///
    /// * `moon`: Earth-Moon system. Masses, separation and lunar radius are
    ///   IAU nominal values (the source text quotes only derived outputs, so
    ///   exact inputs are our choice, pinned here for reproducibility);
    ///   `t_em` is the cosmic microwave background temperature and
    ///   `chh_at_2omega` the conservative binary-confusion estimate
    ///   1e-34 Hz^-1 near a microhertz.
    /// * `spheres`: two touching 500 kg spheres of density 8000 kg/m^3, the
    ///   man-made compact system used for the crossover discussion, under
    ///   the same photon bath and background level.
    pub fn builtin() -> Self {
        let mut presets = BTreeMap::new();
        for p in [
            ScenarioPreset::new("moon", 5.972e24, 7.346e22, 3.844e8, 1.737e6, 2.7, 1e-34)
                .expect("builtin moon preset"),
            touching_spheres("spheres", 1.0e3, 8000.0, 2.7, 1e-34).expect("builtin spheres preset"),
        ] {
            presets.insert(p.name.clone(), p);
        }
        Catalog { presets }
    }

    /// Built-in presets plus any defined in `path` (see [`Catalog::merge_file`]).
    pub fn with_file(path: &Path) -> Result<Self> {
        let mut cat = Self::builtin();
        cat.merge_file(path)?;
        Ok(cat)
    }

    /// Look up a preset by name.
    pub fn get(&self, name: &str) -> Result<&ScenarioPreset> {
        self.presets.get(name).ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    /// Preset names in sorted order.
    pub fn names(&self) -> Vec<String> {
        self.presets.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScenarioPreset> {
        self.presets.values()
    }

    /// Merge presets from a scenario file.
    ///
    /// Format: `[name]` section headers followed by `key = value` lines with
    /// keys `m_a, m_b, rho, r, t_em, chh` (all required). `#` starts a
    /// comment. Names colliding with existing presets are rejected.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let parsed = parse_scenario_file(&path.display().to_string(), &text)?;
        for preset in parsed {
            if self.presets.contains_key(&preset.name) {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: 0,
                    message: format!("scenario '{}' already defined in catalog", preset.name),
                });
            }
            self.presets.insert(preset.name.clone(), preset);
        }
        Ok(())
    }
}

const SCENARIO_KEYS: [&str; 6] = ["m_a", "m_b", "rho", "r", "t_em", "chh"];

fn parse_scenario_file(path: &str, text: &str) -> Result<Vec<ScenarioPreset>> {
    let mut out = Vec::new();
    let mut current: Option<(String, BTreeMap<&'static str, f64>, usize)> = None;

    let finish = |cur: Option<(String, BTreeMap<&'static str, f64>, usize)>,
                  out: &mut Vec<ScenarioPreset>|
     -> Result<()> {
        if let Some((name, fields, line)) = cur {
            for key in SCENARIO_KEYS {
                if !fields.contains_key(key) {
                    return Err(Error::Parse {
                        path: path.to_string(),
                        line,
                        message: format!("scenario '{name}' missing key '{key}'"),
                    });
                }
            }
            out.push(ScenarioPreset::new(
                name,
                fields["m_a"],
                fields["m_b"],
                fields["rho"],
                fields["r"],
                fields["t_em"],
                fields["chh"],
            )?);
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: lineno,
                    message: "empty scenario name".into(),
                });
            }
            finish(current.take(), &mut out)?;
            current = Some((name.to_string(), BTreeMap::new(), lineno));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: path.to_string(),
            line: lineno,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let known = SCENARIO_KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| Error::Parse {
                path: path.to_string(),
                line: lineno,
                message: format!(
                    "unknown key '{key}' (expected one of {})",
                    SCENARIO_KEYS.join(", ")
                ),
            })?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            line: lineno,
            message: format!("cannot parse '{}' as a number", value.trim()),
        })?;
        match current.as_mut() {
            Some((_, fields, _)) => {
                fields.insert(known, value);
            }
            None => {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: lineno,
                    message: "key outside of a [scenario] section".into(),
                })
            }
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

/// Build a preset for two equal touching spheres of the given total mass and
/// density: each sphere has mass `m_total/2`, radius from the density, and
/// the separation is one diameter.
pub fn touching_spheres(
    name: impl Into<String>,
    m_total: f64,
    density: f64,
    t_em: f64,
    chh_at_2omega: f64,
) -> Result<ScenarioPreset> {
    ensure_positive("m_total", m_total)?;
    ensure_positive("density", density)?;
    let m_sphere = m_total / 2.0;
    let r = (3.0 * m_sphere / (4.0 * std::f64::consts::PI * density)).cbrt();
    ScenarioPreset::new(name, m_sphere, m_sphere, 2.0 * r, r, t_em, chh_at_2omega)
}
