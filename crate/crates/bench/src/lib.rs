//! Shared fixtures for the kernel benchmarks.

use cqpointer::analytic::{default_grid, initial_joint};
use cqpointer::{HybridState, PhysicalParams};

/// Initial product state of the default parameters on an `n × n` grid.
pub fn initial_state(n: usize) -> HybridState {
    let p = PhysicalParams::default();
    let grid = default_grid(&p, p.k_end(), n, n).expect("valid grid");
    initial_joint(&p).to_state(grid, 0.0).expect("finite state")
}
