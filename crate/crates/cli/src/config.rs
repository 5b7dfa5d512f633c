use std::path::Path;

use serde::{Deserialize, Serialize};

use cqpointer::analytic::default_grid;
use cqpointer::dynamics::{Scheme, SchemeConfig};
use cqpointer::phase_space::MixtureSpec;
use cqpointer::{validate_params, AlphaProfile, Grid1D, Grid2D, PhysicalParams};

use crate::error::CliError;

/// The configuration shipped with the binary.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.json");

/// Grid axes; either axis may be omitted and is then sized from the
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_points")]
    pub nx: usize,
    #[serde(default = "default_points")]
    pub nq: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Grid1D>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Grid1D>,
}

fn default_points() -> usize {
    401
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nx: default_points(),
            nq: default_points(),
            x: None,
            q: None,
        }
    }
}

impl GridConfig {
    pub fn build(&self, p: &PhysicalParams, k: f64) -> Result<Grid2D, CliError> {
        let auto = default_grid(p, k, self.nx, self.nq)?;
        Ok(Grid2D::new(self.x.unwrap_or(auto.x), self.q.unwrap_or(auto.q)))
    }
}

/// Kinds of file a schedule can export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportTarget {
    /// The grid density `P(x, q)`.
    Joint,
    /// Pointer marginal: from the grid before any drift, closed form after.
    PointerDensity,
    /// Prior before a measurement, posterior after.
    QuantumDensity,
    /// Integrator diagnostics of every evolve action so far.
    Diagnostics,
    /// Latest posterior as JSON.
    Posterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Action {
    /// Integrate the grid ensemble up to `t`.
    Evolve { t: f64 },
    /// Read the pointer at `t`; `sigma_m = 0` is an ideal readout.
    Measure {
        t: f64,
        #[serde(default)]
        sigma_m: f64,
    },
    Export { target: ExportTarget },
}

impl Action {
    fn time(&self) -> Option<f64> {
        match self {
            Self::Evolve { t } | Self::Measure { t, .. } => Some(*t),
            Self::Export { .. } => None,
        }
    }
}

/// Acceptance gate of `compare`: the final L1 distance must lie below
/// `threshold` and below `relative` times the L1 size of the shift itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    pub threshold: f64,
    pub relative: f64,
}

impl Default for GateConfig {
    fn default() -> Self {
        Self {
            threshold: 5e-3,
            relative: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub n: usize,
    pub t: f64,
    pub bins: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            n: 100_000,
            t: 2.0,
            bins: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: PhysicalParams,
    /// Coupling schedule; defaults to `λ` on `(0, ε]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaProfile>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Integrator settings; defaults to full-hybrid with `dt = ε/100`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeConfig>,
    #[serde(default)]
    pub schedule: Vec<Action>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gate: GateConfig,
    #[serde(default)]
    pub sample: SampleConfig,
    /// Specs for `mixture-equiv`; the bundled set is used when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mixtures: Vec<EquivalenceCase>,
}

/// A principal spec, optionally paired with the separated spec it should
/// equal; the pair defaults to the swapped spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceCase {
    pub principal: MixtureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separated: Option<MixtureSpec>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_CONFIG).expect("shipped config parses")
    }
}

impl ScenarioConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?,
            None => DEFAULT_CONFIG.to_string(),
        };
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn alpha(&self) -> AlphaProfile {
        self.alpha
            .clone()
            .unwrap_or_else(|| AlphaProfile::from_params(&self.params))
    }

    pub fn scheme(&self) -> SchemeConfig {
        self.scheme
            .unwrap_or_else(|| SchemeConfig::new(self.params.epsilon / 100.0, Scheme::FullHybrid))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        validate_params(self.params).map_err(|e| CliError::Input(e.to_string()))?;
        self.scheme().validate()?;
        let mut last = f64::NEG_INFINITY;
        for a in &self.schedule {
            if let Some(t) = a.time() {
                if !(t > last) {
                    return Err(CliError::Input(format!(
                        "schedule times must increase strictly: {t} follows {last}"
                    )));
                }
                last = t;
            }
            if let Action::Measure { t, sigma_m } = a {
                if *t <= self.params.epsilon {
                    return Err(CliError::Input(format!(
                        "measurement at t = {t} precedes the interaction end {}",
                        self.params.epsilon
                    )));
                }
                if !(*sigma_m >= 0.0) {
                    return Err(CliError::Input(format!("sigma_m = {sigma_m} must be >= 0")));
                }
            }
        }
        if !(self.gate.threshold > 0.0 && self.gate.relative > 0.0) {
            return Err(CliError::Input("gate thresholds must be > 0".into()));
        }
        if self.sample.bins == 0 {
            return Err(CliError::Input("sample.bins must be >= 1".into()));
        }
        Ok(())
    }
}
