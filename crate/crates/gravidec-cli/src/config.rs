//! Run-manifest config files: flat `key = value` lines grouped in one
//! section per command, overridable by command-line flags (flags win).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Result};

pub const COMMANDS: [&str; 5] = ["rates", "simulate", "sweep", "spectrum", "catalog"];

const KEYS: [&str; 12] = [
    "scenario",
    "format",
    "output",
    "seed",
    "sweep",
    "set",
    "ensemble",
    "samples",
    "delta_x",
    "chh",
    "spectrum_file",
    "omega",
];

/// Parsed config file: per command, a list of (key, value) pairs in file
/// order (keys may repeat, e.g. `set` and `omega`).
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    sections: BTreeMap<String, Vec<(String, String)>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(path: &str, text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !COMMANDS.contains(&name) {
                    bail!(
                        "{path}:{lineno}: unknown section '[{name}]' (expected one of {})",
                        COMMANDS.join(", ")
                    );
                }
                sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{path}:{lineno}: expected 'key = value', got '{line}'"))?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                bail!(
                    "{path}:{lineno}: unknown key '{key}' (expected one of {})",
                    KEYS.join(", ")
                );
            }
            match &current {
                Some(section) => sections
                    .get_mut(section)
                    .expect("section exists")
                    .push((key.to_string(), value.to_string())),
                None => bail!("{path}:{lineno}: key '{key}' outside of a [command] section"),
            }
        }
        Ok(ConfigFile { sections })
    }

    /// Last value of a scalar key in the command's section.
    pub fn scalar(&self, command: &str, key: &str) -> Option<&str> {
        self.sections.get(command).and_then(|pairs| {
            pairs
                .iter()
                .rev()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        })
    }

    /// All values of a repeatable key in the command's section, file order.
    pub fn repeated(&self, command: &str, key: &str) -> Vec<String> {
        self.sections
            .get(command)
            .map(|pairs| {
                pairs
                    .iter()
                    .filter(|(k, _)| k == key)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A `param:min:max:count:log|lin` sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl SweepAxis {
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 5 {
            bail!("sweep spec '{spec}' must be param:min:max:count:log|lin");
        }
        let param = parts[0].to_string();
        let min: f64 = parts[1]
            .parse()
            .map_err(|_| anyhow!("sweep min '{}' is not a number", parts[1]))?;
        let max: f64 = parts[2]
            .parse()
            .map_err(|_| anyhow!("sweep max '{}' is not a number", parts[2]))?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| anyhow!("sweep count '{}' is not an integer", parts[3]))?;
        let log = match parts[4] {
            "log" => true,
            "lin" => false,
            other => bail!("sweep scale '{other}' must be 'log' or 'lin'"),
        };
        if count == 0 {
            bail!("sweep count must be at least 1");
        }
        if min == max && count > 1 {
            bail!("degenerate sweep range: min = max = {min:e} with count {count}");
        }
        if min > max {
            bail!("sweep range must be ascending (min {min:e} > max {max:e})");
        }
        if log && min <= 0.0 {
            bail!("log sweep requires positive min, got {min:e}");
        }
        Ok(SweepAxis {
            param,
            min,
            max,
            count,
            log,
        })
    }

    /// Axis points, ascending.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| {
                let f = i as f64 / (self.count - 1) as f64;
                if self.log {
                    (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + f * (self.max - self.min)
                }
            })
            .collect()
    }
}
