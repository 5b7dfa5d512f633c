//! Piecewise-constant coupling rate α(t).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Rate `rate` on the half-open interval `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSegment {
    pub start: f64,
    pub end: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<AlphaSegment>", into = "Vec<AlphaSegment>")]
pub struct AlphaProfile {
    segments: Vec<AlphaSegment>,
}

impl TryFrom<Vec<AlphaSegment>> for AlphaProfile {
    type Error = Error;
    fn try_from(s: Vec<AlphaSegment>) -> Result<Self> {
        Self::new(s)
    }
}

impl From<AlphaProfile> for Vec<AlphaSegment> {
    fn from(p: AlphaProfile) -> Self {
        p.segments
    }
}

impl AlphaProfile {
    pub fn new(segments: Vec<AlphaSegment>) -> Result<Self> {
        for s in &segments {
            if !(s.start.is_finite() && s.end.is_finite() && s.rate.is_finite()) {
                return Err(Error::InvalidProfile(format!("non-finite segment {s:?}")));
            }
            if s.start >= s.end {
                return Err(Error::InvalidProfile(format!(
                    "segment start {} not before end {}",
                    s.start, s.end
                )));
            }
        }
        for w in segments.windows(2) {
            if w[1].start < w[0].end {
                return Err(Error::InvalidProfile(format!(
                    "segments overlap or are unordered at t = {}",
                    w[1].start
                )));
            }
        }
        Ok(Self { segments })
    }

    /// Rate `λ` switched on over `(0, ε]`.
    pub fn from_params(p: &PhysicalParams) -> Self {
        Self::constant(p.lambda, 0.0, p.epsilon)
    }

    pub fn constant(rate: f64, start: f64, end: f64) -> Self {
        Self::new(vec![AlphaSegment { start, end, rate }]).expect("valid single segment")
    }

    /// Coupling permanently off.
    pub fn off() -> Self {
        Self {
            segments: Vec::new(),
        }
    }

    pub fn segments(&self) -> &[AlphaSegment] {
        &self.segments
    }

    /// α(t), taking each segment as `(start, end]`.
    pub fn rate_at(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .find(|s| t > s.start && t <= s.end)
            .map_or(0.0, |s| s.rate)
    }

    fn integral_to(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let overlap = (t.min(s.end) - s.start.max(0.0)).max(0.0);
                s.rate * overlap
            })
            .sum()
    }

    /// Integrated strength `k(t) = ∫₀ᵗ α`, exact for piecewise-constant segments.
    pub fn integrated_strength(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.integral_to(t))
    }

    /// Average rate over `[t0, t1]`.
    pub fn mean_rate(&self, t0: f64, t1: f64) -> f64 {
        if t1 <= t0 {
            return self.rate_at(t1);
        }
        (self.integral_to(t1) - self.integral_to(t0)) / (t1 - t0)
    }

    /// End of the last segment with non-zero rate, or 0.
    pub fn end(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.rate != 0.0)
            .map(|s| s.end)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_gives_zero() {
        let a = AlphaProfile::constant(1.0, 0.0, 0.01);
        assert_eq!(a.integrated_strength(0.0).unwrap(), 0.0);
    }

    #[test]
    fn partial_rectangle() {
        let a = AlphaProfile::constant(1.0, 0.0, 0.01);
        assert_eq!(a.integrated_strength(0.005).unwrap(), 0.005);
        assert_eq!(a.integrated_strength(5.0).unwrap(), 0.01);
    }

    #[test]
    fn step_function() {
        let a = AlphaProfile::new(vec![
            AlphaSegment {
                start: 0.0,
                end: 0.5,
                rate: 2.0,
            },
            AlphaSegment {
                start: 0.5,
                end: 1.0,
                rate: 0.0,
            },
        ])
        .unwrap();
        assert_eq!(a.integrated_strength(2.0).unwrap(), 1.0);
        assert_eq!(a.end(), 0.5);
    }

    #[test]
    fn negative_time_rejected() {
        let a = AlphaProfile::constant(1.0, 0.0, 1.0);
        assert!(matches!(a.integrated_strength(-1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn overlapping_segments_rejected() {
        let s = |start, end| AlphaSegment {
            start,
            end,
            rate: 1.0,
        };
        assert!(AlphaProfile::new(vec![s(0.0, 1.0), s(0.5, 2.0)]).is_err());
        assert!(AlphaProfile::new(vec![s(1.0, 2.0), s(0.0, 0.5)]).is_err());
        assert!(AlphaProfile::new(vec![s(0.0, 0.0)]).is_err());
    }

    #[test]
    fn half_open_segments() {
        let a = AlphaProfile::constant(3.0, 0.0, 1.0);
        assert_eq!(a.rate_at(0.0), 0.0);
        assert_eq!(a.rate_at(1.0), 3.0);
        assert_eq!(a.rate_at(1.5), 0.0);
        assert_eq!(a.mean_rate(0.5, 1.5), 1.5);
    }
}
