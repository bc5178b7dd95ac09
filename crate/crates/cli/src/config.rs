use std::path::Path;

use serde::{Deserialize, Serialize};
use zeroconv::classes::ClassOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Settings read from a `key = value` file; command-line flags take precedence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub circle_tol: f64,
    pub coeff_tol: f64,
    pub margin_tol: f64,
    pub zeta_count: usize,
    pub x_grid: usize,
    pub boundary_samples: usize,
    pub rng_seed: u64,
    pub output_format: OutputFormat,
    /// Trials per grid cell for `verify`.
    pub trials: usize,
    /// Largest indeterminate fraction `verify` tolerates.
    pub max_indeterminate: f64,
}

impl Default for Config {
    fn default() -> Self {
        let o = ClassOptions::default();
        Config {
            circle_tol: o.roots.circle_tol,
            coeff_tol: o.coeff_tol,
            margin_tol: o.margin_tol,
            zeta_count: o.zeta_count,
            x_grid: o.x_grid,
            boundary_samples: o.boundary_samples,
            rng_seed: 20240917,
            output_format: OutputFormat::Json,
            trials: 20,
            max_indeterminate: 0.05,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("circle_tol", self.circle_tol),
            ("coeff_tol", self.coeff_tol),
            ("margin_tol", self.margin_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [
            ("zeta_count", self.zeta_count),
            ("x_grid", self.x_grid),
            ("boundary_samples", self.boundary_samples),
        ] {
            if v < 8 {
                return Err(format!("{name} must be at least 8, got {v}"));
            }
        }
        if self.trials == 0 {
            return Err("trials must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.max_indeterminate) {
            return Err(format!("max_indeterminate must lie in [0, 1], got {}", self.max_indeterminate));
        }
        Ok(())
    }

    pub fn class_options(&self) -> ClassOptions {
        let mut o = ClassOptions::default();
        o.roots.circle_tol = self.circle_tol;
        o.coeff_tol = self.coeff_tol;
        o.margin_tol = self.margin_tol;
        o.zeta_count = self.zeta_count;
        o.x_grid = self.x_grid;
        o.boundary_samples = self.boundary_samples;
        o
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
