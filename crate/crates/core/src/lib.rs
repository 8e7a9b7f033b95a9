//! Monte Carlo simulation and resource planning for topological error
//! correction on a 3D cluster lattice built from hybrid qubits.
//!
//! The pipeline is: [`noise`] turns physical parameters into error rates,
//! [`sampler`] draws losses and phase flips on a [`lattice::Lattice`],
//! [`decoder`] matches defects and checks for logical failure, [`threshold`]
//! aggregates trials into curves and fits their crossing, and [`resources`]
//! converts a target logical rate into a hybrid-qubit count.

pub mod cli;
pub mod decoder;
pub mod error;
pub mod lattice;
pub mod noise;
pub mod resources;
pub mod sampler;
pub mod threshold;

pub use error::{Error, Result};
pub use lattice::{CellId, Lattice, LatticeKind, QubitId};
pub use noise::{ChannelDecomposition, HybridParams, NoiseRates};
pub use sampler::{ErrorSample, LossModel, SampleParams};
pub use threshold::{CurvePoint, ThresholdEstimate};
