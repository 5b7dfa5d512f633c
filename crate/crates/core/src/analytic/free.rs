use std::f64::consts::PI;

use crate::params::PhysicalParams;

/// `σ(t) = σ_Q √(1 + (ħt / 2mσ_Q²)²)`.
pub fn free_width(p: &PhysicalParams, t: f64) -> f64 {
    let tau = p.hbar * t / (2.0 * p.quantum_mass * p.sigma_q * p.sigma_q);
    p.sigma_q * (1.0 + tau * tau).sqrt()
}

/// The two freely spreading packets started at rest at `±q0`.
///
/// The `+` packet is centred at `−q0` and the `−` packet at `+q0`; the
/// total wavefunction is `(ψ₊ + iψ₋)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumFreeState {
    pub t: f64,
    pub sigma_t: f64,
    hbar: f64,
    mass: f64,
    sigma_q: f64,
    q0: f64,
}

pub fn free_quantum_state(p: &PhysicalParams, t: f64) -> QuantumFreeState {
    QuantumFreeState {
        t,
        sigma_t: free_width(p, t),
        hbar: p.hbar,
        mass: p.quantum_mass,
        sigma_q: p.sigma_q,
        q0: p.q0,
    }
}

impl QuantumFreeState {
    fn centre(&self, plus: bool) -> f64 {
        if plus {
            -self.q0
        } else {
            self.q0
        }
    }

    /// Density of one packet.
    pub fn packet_density(&self, plus: bool, q: f64) -> f64 {
        let z = (q - self.centre(plus)) / self.sigma_t;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.sigma_t)
    }

    /// Phase of one packet.
    pub fn packet_phase(&self, plus: bool, q: f64) -> f64 {
        if self.hbar == 0.0 {
            return 0.0;
        }
        let s2 = self.sigma_q * self.sigma_q;
        let d = q - self.centre(plus);
        -0.5 * self.hbar * (self.hbar * self.t / (2.0 * self.mass * s2)).atan()
            + d * d * self.hbar * self.hbar * self.t
                / (8.0 * self.mass * s2 * self.sigma_t * self.sigma_t)
    }

    /// `|ψ|²` including the interference term.
    pub fn density(&self, q: f64) -> f64 {
        let a = self.packet_density(true, q);
        let b = self.packet_density(false, q);
        let cross = if self.hbar == 0.0 {
            0.0
        } else {
            let dphi = (self.packet_phase(true, q) - self.packet_phase(false, q)) / self.hbar;
            2.0 * (a * b).sqrt() * dphi.sin()
        };
        0.5 * (a + b + cross)
    }

    /// `½(P₊ + P₋)`, the density without interference.
    pub fn incoherent_density(&self, q: f64) -> f64 {
        0.5 * (self.packet_density(true, q) + self.packet_density(false, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::initial_quantum_density;
    use crate::grid::Grid1D;
    use crate::quadrature::integrate_1d;

    #[test]
    fn initial_state_matches_prepared_density() {
        let p = PhysicalParams::DESK;
        let s = free_quantum_state(&p, 0.0);
        assert_eq!(s.sigma_t, p.sigma_q);
        let init = initial_quantum_density(&p);
        for q in [-1.1, -0.5, 0.0, 0.97, 1.3] {
            assert_eq!(s.packet_phase(true, q), 0.0);
            assert!((s.density(q) - init.pdf(q)).abs() < 1e-13);
        }
    }

    #[test]
    fn classical_limit_does_not_spread() {
        let p = PhysicalParams {
            hbar: 0.0,
            ..PhysicalParams::DESK
        };
        for t in [0.0, 1.0, 100.0] {
            assert_eq!(free_width(&p, t), p.sigma_q);
        }
    }

    #[test]
    fn width_at_unit_time() {
        let w = free_width(&PhysicalParams::DESK, 1.0);
        assert!((w - 0.1 * 2501f64.sqrt()).abs() < 1e-12);
        assert!((w - 5.001).abs() < 1e-3);
    }

    #[test]
    fn exact_density_is_normalised() {
        let p = PhysicalParams::DESK;
        for t in [0.01, 0.05, 0.3] {
            let s = free_quantum_state(&p, t);
            let half = p.q0 + 12.0 * s.sigma_t;
            let g = Grid1D::centered(0.0, half, 20001).unwrap();
            let v = integrate_1d(&g.sample(|q| s.density(q)), &g).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "t={t}: {v}");
        }
    }

    #[test]
    fn phase_solves_free_hamilton_jacobi_with_quantum_potential() {
        // Each packet alone is a Madelung solution: check
        // ∂S/∂t + (∂S/∂q)²/2m − (ħ²/2m) ∂²√P/√P = 0 by finite differences.
        let p = PhysicalParams::DESK;
        let (t, q, h, dt) = (0.013, -0.87, 1e-4, 1e-6);
        let s = |t: f64, q: f64| free_quantum_state(&p, t).packet_phase(true, q);
        let r = |q: f64| free_quantum_state(&p, t).packet_density(true, q).sqrt();
        let st = (s(t + dt, q) - s(t - dt, q)) / (2.0 * dt);
        let sq = (s(t, q + h) - s(t, q - h)) / (2.0 * h);
        let lap = (r(q + h) - 2.0 * r(q) + r(q - h)) / (h * h) / r(q);
        let res = st + sq * sq / 2.0 - 0.5 * lap;
        assert!(res.abs() < 1e-4 * (st.abs() + 1.0), "{res}");
    }

    proptest::proptest! {
        #[test]
        fn width_monotone_in_time_and_hbar(t in 0.0..5.0f64, dt in 0.0..1.0f64, h in 0.0..2.0f64, dh in 0.0..1.0f64) {
            let p = PhysicalParams { hbar: h, ..PhysicalParams::DESK };
            let p2 = PhysicalParams { hbar: h + dh, ..PhysicalParams::DESK };
            proptest::prop_assert!(free_width(&p, t + dt) >= free_width(&p, t));
            proptest::prop_assert!(free_width(&p2, t) >= free_width(&p, t));
            proptest::prop_assert!(free_width(&p, t) >= p.sigma_q);
        }
    }
}
