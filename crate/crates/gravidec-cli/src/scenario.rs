//! Scenario resolution: built-in catalog, optional GRAVIDEC_CATALOG file,
//! and `--set key=value` overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use gravidec::rates::ScenarioInputs;
use gravidec::{Catalog, PhysicalConstants, ScenarioPreset};

/// Parameters a `--set` override may touch. `a` overrides the derived
/// acceleration after the orbit is built; `density` feeds the
/// touching-spheres geometry of total-mass sweeps.
pub const SET_KEYS: [&str; 8] = ["m_a", "m_b", "rho", "r", "t_em", "chh", "a", "density"];

/// Environment variable naming an extra scenario file merged into the
/// catalog.
pub const CATALOG_ENV: &str = "GRAVIDEC_CATALOG";

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    values: BTreeMap<String, f64>,
}

impl Overrides {
    /// Parse repeatable `key=value` override strings, rejecting unknown keys.
    pub fn parse(pairs: &[String]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| anyhow!("override '{pair}' must be key=value"))?;
            let key = key.trim();
            if !SET_KEYS.contains(&key) {
                bail!(
                    "unknown override '{key}' (expected one of {})",
                    SET_KEYS.join(", ")
                );
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| anyhow!("override '{pair}': value is not a number"))?;
            values.insert(key.to_string(), value);
        }
        Ok(Overrides { values })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

/// Load the catalog, honoring GRAVIDEC_CATALOG when set.
pub fn load_catalog() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => Ok(Catalog::with_file(&PathBuf::from(path))?),
        None => Ok(Catalog::builtin()),
    }
}

/// Resolve a preset plus overrides into the closed-form inputs. Preset
/// fields are overridden before the orbit is derived; an `a` override is
/// applied afterwards.
pub fn resolve_inputs(
    catalog: &Catalog,
    scenario: &str,
    overrides: &Overrides,
    constants: &PhysicalConstants,
) -> Result<ScenarioInputs> {
    let base = catalog.get(scenario)?;
    let preset = ScenarioPreset::new(
        base.name.clone(),
        overrides.get("m_a").unwrap_or(base.m_a),
        overrides.get("m_b").unwrap_or(base.m_b),
        overrides.get("rho").unwrap_or(base.rho),
        overrides.get("r").unwrap_or(base.r),
        overrides.get("t_em").unwrap_or(base.t_em),
        overrides.get("chh").unwrap_or(base.chh_at_2omega),
    )?;
    let mut inputs = ScenarioInputs::from_preset(&preset, constants)?;
    if let Some(a) = overrides.get("a") {
        if a < 0.0 {
            bail!("override a must be non-negative, got {a:e}");
        }
        inputs.a = a;
    }
    Ok(inputs)
}
