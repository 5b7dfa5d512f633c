use serde::Serialize;

use crate::analytic::initial_quantum_density;
use crate::params::PhysicalParams;

/// Points on the `q` grid used for the quantum-potential maximum.
const Q_POINTS: usize = 2001;

/// Magnitudes of the coupling term kept during a strong interaction and of
/// the terms dropped next to it, for a pointer moving with speed `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `|M v λ q|`.
    pub kept: f64,
    /// `M v² / 2`.
    pub classical_kinetic: f64,
    /// `M² v² λ² t / 2m`.
    pub induced_kinetic: f64,
    /// `max_q |Q(q)|` for the initial two-packet quantum density.
    pub quantum_potential: f64,
    /// Neglected over kept, in the order above. `None` when the kept term vanishes.
    pub ratios: Option<[f64; 3]>,
}

pub fn residual_report(p: &PhysicalParams, v: f64, t: f64, q_probe: f64) -> ResidualReport {
    let (mm, m) = (p.pointer_mass, p.quantum_mass);
    let kept = (mm * v * p.lambda * q_probe).abs();
    let classical_kinetic = 0.5 * mm * v * v;
    let induced_kinetic = (mm * mm * v * v * p.lambda * p.lambda * t / (2.0 * m)).abs();
    let quantum_potential = if p.hbar == 0.0 {
        0.0
    } else {
        let rho = initial_quantum_density(p);
        let (lo, hi) = rho.support(8.0);
        let c = p.hbar * p.hbar / (2.0 * m);
        (0..Q_POINTS)
            .map(|i| {
                let q = lo + (hi - lo) * i as f64 / (Q_POINTS - 1) as f64;
                let (d1, d2) = rho.log_derivatives(q);
                (c * (0.25 * d1 * d1 + 0.5 * d2)).abs()
            })
            .fold(0.0, f64::max)
    };
    let ratios = (kept > 0.0).then(|| {
        [
            classical_kinetic / kept,
            induced_kinetic / kept,
            quantum_potential / kept,
        ]
    });
    ResidualReport {
        kept,
        classical_kinetic,
        induced_kinetic,
        quantum_potential,
        ratios,
    }
}
