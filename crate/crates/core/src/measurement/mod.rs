//! Pointer readout: the pointer ensemble as a mixture of deterministic
//! trajectories labelled by `q`, selection of one element, and the
//! resulting posterior of the quantum system.

mod mixture;
mod sampling;
mod update;

pub use mixture::{collapse_pointer, decompose_pointer_mixture, sample_measurement, PointerMixture, PointerState};
pub use sampling::{ks_statistic, monte_carlo_pointer};
pub use update::{update_quantum, update_quantum_noisy, MeasurementRecord, PointerPosterior, Posterior};
