//! Flat `key = value` configuration files with `#` comments.
//!
//! ```text
//! # velocity-built system
//! gamma = 1
//! beta = 0.95
//! omega0 = 500
//! d = 1
//! v = 1
//! v_L = 0.98
//! v_R = 0.78
//! theta = pi/4
//! ```
//!
//! A phase-built system uses `T_L`, `T_R`, `phi_L`, `phi_R` instead of the
//! velocity keys. `theta`, `phi_A1` and `phi_A2` set the initial state.

use std::collections::BTreeMap;

use crate::numbers::parse_number;
use crate::CliError;

pub const SYSTEM_KEYS: [&str; 11] = [
    "gamma", "beta", "omega0", "d", "v", "v_L", "v_R", "T_L", "T_R", "phi_L", "phi_R",
];
pub const STATE_KEYS: [&str; 3] = ["theta", "phi_A1", "phi_A2"];

/// Parsed values keyed by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub values: BTreeMap<String, f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| CliError::Usage(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            if !SYSTEM_KEYS.contains(&key) && !STATE_KEYS.contains(&key) {
                return Err(at(format!("unknown key `{key}`")));
            }
            let value = parse_number(value).map_err(at)?;
            if values.insert(key.to_string(), value).is_some() {
                return Err(at(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}
