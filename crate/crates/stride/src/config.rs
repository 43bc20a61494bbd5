//! Layered settings: built-in defaults, then a JSON config file, then
//! command-line flags.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stride_core::{DetectorConfig, FilterParams, StepWeighting, DEFAULT_FIXED_STEP_LENGTH_M, DEFAULT_MATCH_WINDOW_S};

use crate::error::{Error, Result};

/// Everything the pipeline, both estimators and the scorer need.
///
/// A config file may set any subset of keys:
///
/// ```json
/// { "detector": { "step_threshold": 1.2 }, "fixed_step_length_m": 0.75 }
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub filter: FilterParams,
    pub detector: DetectorConfig,
    pub weighting: StepWeighting,
    pub fixed_step_length_m: f64,
    pub match_window_s: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            filter: FilterParams::default(),
            detector: DetectorConfig::default(),
            weighting: StepWeighting::default(),
            fixed_step_length_m: DEFAULT_FIXED_STEP_LENGTH_M,
            match_window_s: DEFAULT_MATCH_WINDOW_S,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layer alone.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub step_threshold: Option<f64>,
    pub base_step_length_m: Option<f64>,
    pub fixed_step_length_m: Option<f64>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::ConfigRead { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| Error::ConfigFile { path: path.to_path_buf(), source })
    }

    /// Defaults, overlaid by the file at `path` if given, overlaid by
    /// `overrides`; the result is validated.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut settings = match path {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        if let Some(v) = overrides.step_threshold {
            settings.detector.step_threshold = v;
        }
        if let Some(v) = overrides.base_step_length_m {
            settings.weighting.base_step_length_m = v;
        }
        if let Some(v) = overrides.fixed_step_length_m {
            settings.fixed_step_length_m = v;
        }
        settings.validate()?;
        Ok(settings)
    }

    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        self.weighting.validate()?;
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.fixed_step_length_m) {
            return Err(Error::Config("fixed_step_length_m must be positive".into()));
        }
        if !positive(self.match_window_s) {
            return Err(Error::Config("match_window_s must be positive".into()));
        }
        if !positive(self.filter.kalman_process_var) || !positive(self.filter.kalman_measurement_var) {
            return Err(Error::Config("Kalman variances must be positive".into()));
        }
        if !positive(self.filter.highpass_cutoff_hz) {
            return Err(Error::Config("highpass_cutoff_hz must be positive".into()));
        }
        if self.filter.outlier_clamp_sigma.is_some_and(|k| !positive(k)) {
            return Err(Error::Config("outlier_clamp_sigma must be positive or null".into()));
        }
        Ok(())
    }
}
