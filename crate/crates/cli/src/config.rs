//! Experiment configuration schema.

use serde::{Deserialize, Serialize};
use shiftlab::measures::MarginalMeasure;
use shiftlab::weights::WeightSpec;

/// Region parameters for the Monte Carlo pullback witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessConfig {
    /// First coordinate of the ball center (the rest are zero).
    #[serde(default = "default_center")]
    pub center0: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Largest shift power examined.
    #[serde(default = "default_witness_horizon")]
    pub horizon: usize,
}

fn default_center() -> f64 {
    1.0
}
fn default_radius() -> f64 {
    0.5
}
fn default_witness_horizon() -> usize {
    64
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            center0: default_center(),
            radius: default_radius(),
            horizon: default_witness_horizon(),
        }
    }
}

/// One experiment: a weight pair (or single spec), the ambient exponent,
/// horizons, marginals, module toggles and seeds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Single spec for `classify` (defaults to the first of `pair`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<WeightSpec>,
    /// Weight pair for `compare` and the pair-based curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(WeightSpec, WeightSpec)>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    /// Longest extra window length for the windowed orthogonality rule.
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Marginal attached to the first spec (default standard Gaussian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal: Option<MarginalMeasure<f64>>,
    /// Marginal attached to the second spec (defaults to `marginal`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal_v: Option<MarginalMeasure<f64>>,
    /// Module toggles for `compare`; empty means all.
    /// Known names: similarity, window, bounded, periodic, gaussian,
    /// kakutani, witness.
    #[serde(default)]
    pub modules: Vec<String>,
    /// Curve toggles for `curves`: acf, theta, hellinger.
    #[serde(default)]
    pub curves: Vec<String>,
    /// Profile for the acf/theta curves (uniform on the unit interval by
    /// default).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<MarginalMeasure<f64>>,
    /// Evaluation grids for the curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    /// Sampling truncation (`sample`); derived from the tail target if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Number of sampled vectors (`sample`).
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub witness: WitnessConfig,
}

fn default_p() -> f64 {
    2.0
}
fn default_horizon() -> usize {
    100_000
}
fn default_window() -> usize {
    4
}
fn default_seed() -> u64 {
    1
}
fn default_mc_samples() -> usize {
    10_000
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_count() -> usize {
    100
}

impl ExperimentConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.horizon == 0 {
            anyhow::bail!("horizon must be >= 1");
        }
        if self.p < 1.0 {
            anyhow::bail!("p must be >= 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            anyhow::bail!("epsilon must lie in (0, 1)");
        }
        if self.witness.horizon == 0 {
            anyhow::bail!("witness horizon must be >= 1");
        }
        if let Some(spec) = &self.spec {
            spec.validate()?;
        }
        if let Some((u, v)) = &self.pair {
            u.validate()?;
            v.validate()?;
        }
        if let Some(m) = &self.marginal {
            m.validate()?;
        }
        if let Some(m) = &self.marginal_v {
            m.validate()?;
        }
        Ok(())
    }

    /// The spec used by `classify`.
    pub fn classify_spec(&self) -> anyhow::Result<&WeightSpec> {
        self.spec
            .as_ref()
            .or_else(|| self.pair.as_ref().map(|(u, _)| u))
            .ok_or_else(|| anyhow::anyhow!("config needs `spec` or `pair`"))
    }

    /// The pair used by `compare`.
    pub fn compare_pair(&self) -> anyhow::Result<&(WeightSpec, WeightSpec)> {
        self.pair
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("config needs `pair` for compare"))
    }

    pub fn module_enabled(&self, name: &str) -> bool {
        self.modules.is_empty() || self.modules.iter().any(|m| m == name)
    }

    pub fn marginal_u(&self) -> MarginalMeasure<f64> {
        self.marginal
            .clone()
            .unwrap_or_else(|| MarginalMeasure::gaussian(1.0, shiftlab::Field::Real))
    }

    pub fn marginal_v(&self) -> MarginalMeasure<f64> {
        self.marginal_v.clone().unwrap_or_else(|| self.marginal_u())
    }
}
