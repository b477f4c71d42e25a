//! Plant and stochastic-model parameters.
//!
//! Config files are TOML documents whose keys mirror [`EnvConfig`] field
//! names. Absent keys take the defaults below; unknown keys are rejected.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of sortable materials (A, B, C, D).
pub const N_MATERIALS: usize = 4;
/// Containers A–D plus the residual container E.
pub const N_CONTAINERS: usize = 5;
/// Index of the residual container E.
pub const RESIDUAL: usize = 4;
pub const N_PRESSES: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    pub n_materials: usize,
    pub episode_len: usize,
    pub purity_thresholds: [f64; N_MATERIALS],
    pub penalty_factor: f64,
    pub baseline_accuracy: f64,
    /// Gap between a boosted station's pre-degradation accuracy and 1.
    pub boost_noise: f64,
    /// Weight of the squared-load accuracy loss.
    pub degradation_coeff: f64,
    /// Half-width of the uniform per-station accuracy jitter.
    pub accuracy_jitter: f64,
    /// Share of a station's miss rate that lands foreign material in its container.
    pub contamination_coeff: f64,
    pub batch_min: f64,
    pub batch_max: f64,
    pub seasonal_amplitude: f64,
    pub seasonal_period: f64,
    /// Steps between a batch's generation and its sorting.
    pub belt_delay: usize,
    pub pressing_threshold: f64,
    pub container_capacity: f64,
    pub n_presses: usize,
    pub press_duration: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            n_materials: N_MATERIALS,
            episode_len: 100,
            purity_thresholds: [0.85, 0.80, 0.75, 0.70],
            penalty_factor: 5.0,
            baseline_accuracy: 0.80,
            boost_noise: 0.02,
            degradation_coeff: 0.30,
            accuracy_jitter: 0.02,
            contamination_coeff: 0.25,
            batch_min: 20.0,
            batch_max: 100.0,
            seasonal_amplitude: 0.5,
            seasonal_period: 50.0,
            belt_delay: 2,
            pressing_threshold: 200.0,
            container_capacity: 300.0,
            n_presses: N_PRESSES,
            press_duration: 3,
        }
    }
}

impl EnvConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: EnvConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("EnvConfig always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_materials != N_MATERIALS {
            return fail(format!(
                "n_materials must be {N_MATERIALS}, got {}",
                self.n_materials
            ));
        }
        if self.n_presses != N_PRESSES {
            return fail(format!(
                "n_presses must be {N_PRESSES}, got {}",
                self.n_presses
            ));
        }
        if self.episode_len == 0 {
            return fail("episode_len must be at least 1".into());
        }
        for (m, &thr) in self.purity_thresholds.iter().enumerate() {
            if !(thr > 0.0 && thr < 1.0) {
                return fail(format!("purity_thresholds[{m}] = {thr} is outside (0, 1)"));
            }
        }
        if !(self.penalty_factor > 0.0 && self.penalty_factor.is_finite()) {
            return fail(format!(
                "penalty_factor must be positive, got {}",
                self.penalty_factor
            ));
        }
        if !(0.0..=1.0).contains(&self.boost_noise) {
            return fail(format!(
                "boost_noise must lie in [0, 1], got {}",
                self.boost_noise
            ));
        }
        if !(self.baseline_accuracy > 0.0 && self.baseline_accuracy <= 1.0 - self.boost_noise) {
            return fail(format!(
                "baseline_accuracy must lie in (0, 1 - boost_noise], got {}",
                self.baseline_accuracy
            ));
        }
        for (name, v) in [
            ("degradation_coeff", self.degradation_coeff),
            ("contamination_coeff", self.contamination_coeff),
            ("accuracy_jitter", self.accuracy_jitter),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(self.batch_min >= 0.0 && self.batch_min <= self.batch_max && self.batch_max > 0.0)
            || !self.batch_max.is_finite()
        {
            return fail(format!(
                "need 0 <= batch_min <= batch_max and batch_max > 0, got {} and {}",
                self.batch_min, self.batch_max
            ));
        }
        if !(self.seasonal_amplitude >= 0.0 && self.seasonal_amplitude.is_finite()) {
            return fail(format!(
                "seasonal_amplitude must be non-negative, got {}",
                self.seasonal_amplitude
            ));
        }
        if !(self.seasonal_period > 0.0 && self.seasonal_period.is_finite()) {
            return fail(format!(
                "seasonal_period must be positive, got {}",
                self.seasonal_period
            ));
        }
        if !(self.pressing_threshold > 0.0 && self.pressing_threshold <= self.container_capacity)
            || !self.container_capacity.is_finite()
        {
            return fail(format!(
                "need 0 < pressing_threshold <= container_capacity, got {} and {}",
                self.pressing_threshold, self.container_capacity
            ));
        }
        if self.press_duration == 0 {
            return fail("press_duration must be at least 1".into());
        }
        Ok(())
    }

    /// Human-readable table of every parameter and its default.
    pub fn defaults_table() -> String {
        let d = EnvConfig::default();
        let rows: [(&str, String, &str); 18] = [
            (
                "n_materials",
                d.n_materials.to_string(),
                "materials A-D (fixed)",
            ),
            (
                "episode_len",
                d.episode_len.to_string(),
                "steps per episode",
            ),
            (
                "purity_thresholds",
                format!("{:?}", d.purity_thresholds),
                "target purity for A, B, C, D",
            ),
            (
                "penalty_factor",
                d.penalty_factor.to_string(),
                "weight on negative purity deviations",
            ),
            (
                "baseline_accuracy",
                d.baseline_accuracy.to_string(),
                "unboosted station accuracy",
            ),
            (
                "boost_noise",
                d.boost_noise.to_string(),
                "boosted accuracy = 1 - boost_noise",
            ),
            (
                "degradation_coeff",
                d.degradation_coeff.to_string(),
                "accuracy factor 1 - coeff * load^2",
            ),
            (
                "accuracy_jitter",
                d.accuracy_jitter.to_string(),
                "half-width of uniform accuracy jitter",
            ),
            (
                "contamination_coeff",
                d.contamination_coeff.to_string(),
                "foreign capture = (1 - acc) * coeff",
            ),
            (
                "batch_min",
                d.batch_min.to_string(),
                "smallest batch total (units)",
            ),
            (
                "batch_max",
                d.batch_max.to_string(),
                "largest batch total (units)",
            ),
            (
                "seasonal_amplitude",
                d.seasonal_amplitude.to_string(),
                "amplitude of seasonal mix swing",
            ),
            (
                "seasonal_period",
                d.seasonal_period.to_string(),
                "seasonal period (steps)",
            ),
            (
                "belt_delay",
                d.belt_delay.to_string(),
                "steps from generation to sorting",
            ),
            (
                "pressing_threshold",
                d.pressing_threshold.to_string(),
                "container fill that triggers pressing",
            ),
            (
                "container_capacity",
                d.container_capacity.to_string(),
                "container capacity, excess goes to E",
            ),
            (
                "n_presses",
                d.n_presses.to_string(),
                "number of presses (fixed)",
            ),
            (
                "press_duration",
                d.press_duration.to_string(),
                "steps a press stays busy",
            ),
        ];
        let mut out = String::new();
        let _ = writeln!(out, "{:<22}{:<28}meaning", "key", "default");
        for (k, v, m) in rows {
            let _ = writeln!(out, "{k:<22}{v:<28}{m}");
        }
        out
    }
}
