//! Two quantum dots with Förster coupling inside a lossy single-mode
//! microcavity, driven by an incoherent cavity pump and a Gaussian exciton
//! pulse.
//!
//! * [`hilbert`]: truncated `QD ⊗ QD ⊗ Fock` space and its operators.
//! * [`model`]: parameters, rotating-frame Hamiltonian, excitation manifolds.
//! * [`dynamics`]: Lindblad master equation and its time integration.
//! * [`correlations`]: concurrence, entanglement of formation, mutual
//!   information, classical correlation and discord of the two dots.
//! * [`scenarios`]: presets, sweeps and file output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod ode;
pub mod optimize;
pub mod scenarios;

pub use correlations::{CorrelationRecord, Correlations, TwoQubitState};
pub use dynamics::{DensityMatrix, InitialState, IntegrateOptions, Trajectory};
pub use error::{Error, Result};
pub use hilbert::{HilbertSpace, OperatorMatrix};
pub use model::{PulseParams, SystemParams};
pub use scenarios::{preset, ScenarioConfig};
