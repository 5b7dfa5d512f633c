//! Physical parameters of the pointer/particle model.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Masses, coupling and widths of the measurement model.
///
/// Serialises to a JSON object with exactly the eight keys
/// `M, m, hbar, lambda, epsilon, sigma_C, sigma_Q, q0`; unknown keys are
/// rejected on parse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Pointer mass.
    #[serde(rename = "M")]
    pub pointer_mass: f64,
    /// Mass of the quantum particle.
    #[serde(rename = "m")]
    pub quantum_mass: f64,
    pub hbar: f64,
    /// Coupling rate while the interaction is on.
    pub lambda: f64,
    /// Interaction duration.
    pub epsilon: f64,
    /// Initial pointer width.
    #[serde(rename = "sigma_C")]
    pub sigma_c: f64,
    /// Width of each quantum packet.
    #[serde(rename = "sigma_Q")]
    pub sigma_q: f64,
    /// Half-separation of the two quantum packets (they sit at `±q0`).
    pub q0: f64,
}

impl PhysicalParams {
    /// Desk-scale parameter set shipped as the default scenario.
    ///
    /// These numbers are artifact choices, not measured values. The
    /// interaction time is kept short compared to the free-packet time scale
    /// `2 m sigma_Q^2 / hbar` so that the quantum system is effectively frozen
    /// while the pointer is coupled.
    pub const DESK: PhysicalParams = PhysicalParams {
        pointer_mass: 1.0,
        quantum_mass: 1.0,
        hbar: 1.0,
        lambda: 1.0,
        epsilon: 0.001,
        sigma_c: 0.05,
        sigma_q: 0.1,
        q0: 1.0,
    };

    /// True when the two quantum peaks are resolved by the pointer (`sigma_C < q0`).
    pub fn well_separated(&self) -> bool {
        self.sigma_c < self.q0
    }

    /// Integrated interaction strength at the end of the interaction, `lambda * epsilon`.
    pub fn k_end(&self) -> f64 {
        self.lambda * self.epsilon
    }

    /// Free-spreading time scale of a quantum packet, `2 m sigma_Q^2 / hbar`.
    /// Infinite in the classical limit.
    pub fn quantum_time_scale(&self) -> f64 {
        2.0 * self.quantum_mass * self.sigma_q * self.sigma_q / self.hbar
    }

    pub fn validate(self) -> Result<PhysicalParams, ParamError> {
        validate_params(self)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::DESK
    }
}

/// One violated parameter invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    NonPositiveMass { name: &'static str, value: f64 },
    NonPositiveWidth { name: &'static str, value: f64 },
    ZeroCoupling,
    NonPositiveDuration(f64),
    NegativeHbar(f64),
    NegativeSeparation(f64),
    NonFinite(&'static str),
}

impl ParamViolation {
    /// Short machine-readable tag, e.g. `NonPositiveWidth`.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NonPositiveMass { .. } => "NonPositiveMass",
            Self::NonPositiveWidth { .. } => "NonPositiveWidth",
            Self::ZeroCoupling => "ZeroCoupling",
            Self::NonPositiveDuration(_) => "NonPositiveDuration",
            Self::NegativeHbar(_) => "NegativeHbar",
            Self::NegativeSeparation(_) => "NegativeSeparation",
            Self::NonFinite(_) => "NonFinite",
        }
    }
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveMass { name, value } => {
                write!(f, "NonPositiveMass: {name} = {value} must be > 0")
            }
            Self::NonPositiveWidth { name, value } => {
                write!(f, "NonPositiveWidth: {name} = {value} must be > 0")
            }
            Self::ZeroCoupling => write!(f, "ZeroCoupling: lambda must be non-zero"),
            Self::NonPositiveDuration(v) => {
                write!(f, "NonPositiveDuration: epsilon = {v} must be > 0")
            }
            Self::NegativeHbar(v) => write!(f, "NegativeHbar: hbar = {v} must be >= 0"),
            Self::NegativeSeparation(v) => write!(f, "NegativeSeparation: q0 = {v} must be >= 0"),
            Self::NonFinite(name) => write!(f, "NonFinite: {name} is not finite"),
        }
    }
}

/// Every violated invariant of a parameter record.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameters: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ParamError {
    pub violations: Vec<ParamViolation>,
}

impl ParamError {
    pub fn contains(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

/// Checks every invariant and returns the record unchanged, or the complete
/// list of violations.
pub fn validate_params(p: PhysicalParams) -> Result<PhysicalParams, ParamError> {
    let mut violations = Vec::new();
    let fields = [
        ("M", p.pointer_mass),
        ("m", p.quantum_mass),
        ("hbar", p.hbar),
        ("lambda", p.lambda),
        ("epsilon", p.epsilon),
        ("sigma_C", p.sigma_c),
        ("sigma_Q", p.sigma_q),
        ("q0", p.q0),
    ];
    for (name, value) in fields {
        if !value.is_finite() {
            violations.push(ParamViolation::NonFinite(name));
        }
    }
    for (name, value) in [("M", p.pointer_mass), ("m", p.quantum_mass)] {
        if value <= 0.0 {
            violations.push(ParamViolation::NonPositiveMass { name, value });
        }
    }
    if p.hbar < 0.0 {
        violations.push(ParamViolation::NegativeHbar(p.hbar));
    }
    if p.lambda == 0.0 {
        violations.push(ParamViolation::ZeroCoupling);
    }
    if p.epsilon <= 0.0 {
        violations.push(ParamViolation::NonPositiveDuration(p.epsilon));
    }
    for (name, value) in [("sigma_C", p.sigma_c), ("sigma_Q", p.sigma_q)] {
        if value <= 0.0 {
            violations.push(ParamViolation::NonPositiveWidth { name, value });
        }
    }
    if p.q0 < 0.0 {
        violations.push(ParamViolation::NegativeSeparation(p.q0));
    }

    if violations.is_empty() {
        Ok(p)
    } else {
        Err(ParamError { violations })
    }
}
