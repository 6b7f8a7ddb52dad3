//! Experiment configuration: JSON-loadable, validated against the regime
//! invariants (global ⇒ L_N = 1, meso ⇒ 1 < L_N < N, micro ⇒ L_N = N).

use anyhow::{bail, Context, Result};
use cbe_core::{FunctionSpec, Regime};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// How the scale L_N is produced from N in the mesoscopic regime.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LnRule {
    Fixed { value: f64 },
    Power { exponent: f64 },
    Log,
}

impl LnRule {
    pub fn resolve(&self, n: usize) -> f64 {
        match self {
            LnRule::Fixed { value } => *value,
            LnRule::Power { exponent } => (n as f64).powf(*exponent),
            LnRule::Log => (n as f64).ln(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub regime: Regime,
    pub n: usize,
    pub beta: f64,
    /// Scale rule; only consulted in the mesoscopic regime (global and
    /// micro pin L_N themselves, but an explicit consistent rule is fine).
    #[serde(default)]
    pub l_n: Option<LnRule>,
    pub function: FunctionSpec,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    /// Resolve and validate the scale for this configuration.
    pub fn resolve_l_n(&self) -> Result<f64> {
        let n = self.n as f64;
        let resolved = match self.regime {
            Regime::Global => {
                if let Some(rule) = &self.l_n {
                    let v = rule.resolve(self.n);
                    if (v - 1.0).abs() > 1e-12 {
                        bail!("global regime requires l_n = 1, rule gives {v}");
                    }
                }
                1.0
            }
            Regime::Micro => {
                if let Some(rule) = &self.l_n {
                    let v = rule.resolve(self.n);
                    if (v - n).abs() > 1e-9 * n {
                        bail!("micro regime requires l_n = n = {n}, rule gives {v}");
                    }
                }
                n
            }
            Regime::Meso => {
                let rule = self
                    .l_n
                    .as_ref()
                    .ok_or_else(|| anyhow::anyhow!("meso regime needs an l_n rule"))?;
                let v = rule.resolve(self.n);
                if !(v > 1.0 && v < n) {
                    bail!("meso regime requires 1 < l_n < n, got l_n = {v} at n = {n}");
                }
                v
            }
        };
        Ok(resolved)
    }

    pub fn validate(&self) -> Result<f64> {
        if self.n == 0 {
            bail!("n must be at least 1");
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            bail!("beta must be positive");
        }
        if self.trials < 2 {
            bail!("at least 2 trials are needed for a standard error");
        }
        if self.function.is_circle_kind() && self.regime != Regime::Global {
            bail!(
                "{} lives on the circle; scaled regimes need a real-line function",
                self.function.kind_name()
            );
        }
        if self.regime == Regime::Micro && (self.beta - 2.0).abs() > 1e-12 {
            bail!("the microscopic reference variance is only available at beta = 2");
        }
        self.resolve_l_n()
    }
}
