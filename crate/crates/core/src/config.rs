//! Parameter files: TOML with optional keys `hbar`, `mass`, `omega`, `mu`, `nu`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// A partially specified parameter set; missing keys fall back to
/// ħ = m = ω = 1, μ = ν = 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
}

impl ParamOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid parameter file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Values in `other` win over values in `self`.
    pub fn merged(self, other: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            hbar: other.hbar.or(self.hbar),
            mass: other.mass.or(self.mass),
            omega: other.omega.or(self.omega),
            mu: other.mu.or(self.mu),
            nu: other.nu.or(self.nu),
        }
    }

    pub fn resolve(self) -> Result<ModelParams> {
        let d = ModelParams::default();
        ModelParams::new(
            self.hbar.unwrap_or(d.hbar),
            self.mass.unwrap_or(d.mass),
            self.omega.unwrap_or(d.omega),
            self.mu.unwrap_or(d.mu),
            self.nu.unwrap_or(d.nu),
        )
    }
}
