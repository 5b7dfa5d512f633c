use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Coupling term only: rigid advection along `x` with speed `α q`.
    InteractionAdvection,
    /// Every kinetic, quantum and coupling term.
    FullHybrid,
}

/// Discretisation of the `α q ∂ₓ` coupling derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flux {
    /// Second-order upwind differences.
    Upwind,
    /// Second-order central differences.
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub flux: Flux,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Strength of the fourth-difference filter applied after each
    /// full-hybrid step when `ħ > 0`. Zero disables it.
    #[serde(default = "default_filter")]
    pub filter: f64,
    /// Diagnostics are recorded every `stride` steps.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_cfl() -> f64 {
    0.4
}

fn default_filter() -> f64 {
    0.05
}

fn default_stride() -> usize {
    10
}

impl SchemeConfig {
    /// Default flux is upwind for pure advection and central for the full system.
    pub fn new(dt: f64, scheme: Scheme) -> Self {
        let flux = match scheme {
            Scheme::InteractionAdvection => Flux::Upwind,
            Scheme::FullHybrid => Flux::Central,
        };
        Self {
            dt,
            scheme,
            flux,
            cfl: default_cfl(),
            filter: default_filter(),
            stride: default_stride(),
        }
    }

    pub fn with_flux(self, flux: Flux) -> Self {
        Self { flux, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "CFL factor {} must lie in (0, 1]",
                self.cfl
            )));
        }
        if !(0.0..=1.0).contains(&self.filter) {
            return Err(Error::InvalidConfig(format!(
                "filter strength {} must lie in [0, 1]",
                self.filter
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("diagnostic stride must be >= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SchemeConfig::new(1e-4, Scheme::InteractionAdvection);
        assert_eq!(c.flux, Flux::Upwind);
        assert_eq!(c.cfl, 0.4);
        assert!(c.validate().is_ok());
        assert_eq!(SchemeConfig::new(1e-4, Scheme::FullHybrid).flux, Flux::Central);
    }

    #[test]
    fn rejects_bad_values() {
        let c = SchemeConfig::new(0.0, Scheme::FullHybrid);
        assert!(c.validate().is_err());
        let c = SchemeConfig {
            cfl: 1.5,
            ..SchemeConfig::new(1e-4, Scheme::FullHybrid)
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_tags() {
        let c = SchemeConfig::new(1e-4, Scheme::FullHybrid);
        let v = serde_json::to_value(c).unwrap();
        assert_eq!(v["scheme"], "full-hybrid");
        assert_eq!(v["flux"], "central");
        let back: SchemeConfig =
            serde_json::from_str(r#"{"dt":1e-5,"scheme":"interaction-advection","flux":"upwind"}"#)
                .unwrap();
        assert_eq!(back.cfl, 0.4);
    }
}
