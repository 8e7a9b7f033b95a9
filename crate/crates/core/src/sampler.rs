//! Monte Carlo draws of lattice-qubit losses and Z flips.
//!
//! Each trial gets its own ChaCha stream keyed by a SHA-256 digest of
//! `(seed, trial_index)`, so results never depend on scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_range, Error, Result};
use crate::lattice::{Lattice, QubitId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum LossModel {
    /// Each face qubit is lost independently.
    Direct { p_loss: f64 },
    /// Each cluster bond fails independently and removes a random endpoint.
    Edge { p_edge: f64 },
}

impl Default for LossModel {
    fn default() -> Self {
        LossModel::Direct { p_loss: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    /// Rate of each single-qubit dephasing event.
    pub p_z: f64,
    /// Multiplier for the entangling-link events.
    pub n_avg: f64,
    pub loss: LossModel,
}

impl SampleParams {
    pub fn new(p_z: f64, n_avg: f64, loss: LossModel) -> Result<Self> {
        check_range("p_z", p_z, 0.0, 1.0)?;
        if !(n_avg.is_finite() && n_avg >= 0.0) {
            return Err(Error::Domain {
                name: "n_avg",
                value: n_avg,
                expected: ">= 0",
            });
        }
        check_range("n_avg*p_z", n_avg * p_z, 0.0, 0.5)?;
        match loss {
            LossModel::Direct { p_loss } => check_range("p_loss", p_loss, 0.0, 1.0)?,
            LossModel::Edge { p_edge } => check_range("p_edge", p_edge, 0.0, 1.0)?,
        };
        Ok(Self { p_z, n_avg, loss })
    }

    pub fn noiseless() -> Self {
        Self {
            p_z: 0.0,
            n_avg: 1.0,
            loss: LossModel::default(),
        }
    }
}

/// One sampled error configuration. Both lists are sorted and disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorSample {
    pub lost: Vec<QubitId>,
    pub flips: Vec<QubitId>,
}

impl ErrorSample {
    pub fn is_empty(&self) -> bool {
        self.lost.is_empty() && self.flips.is_empty()
    }

    pub fn lost_mask(&self, num_qubits: usize) -> Vec<bool> {
        mask(&self.lost, num_qubits)
    }

    pub fn flip_mask(&self, num_qubits: usize) -> Vec<bool> {
        mask(&self.flips, num_qubits)
    }
}

fn mask(ids: &[QubitId], n: usize) -> Vec<bool> {
    let mut m = vec![false; n];
    for q in ids {
        m[q.index()] = true;
    }
    m
}

/// Generator for trial `trial_index` of the run keyed by `seed`.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"raussim-trial");
    h.update(seed.to_le_bytes());
    h.update(trial_index.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

pub fn sample_losses<R: Rng + ?Sized>(
    lattice: &Lattice,
    params: &SampleParams,
    rng: &mut R,
) -> Vec<QubitId> {
    match params.loss {
        LossModel::Direct { p_loss } => lattice
            .qubits()
            .filter(|_| rng.random_bool(p_loss))
            .collect(),
        LossModel::Edge { p_edge } => {
            // Every bond joins one simulated face to one face of the other
            // sublattice, so walking faces × 4 bonds visits each bond once.
            let mut lost = Vec::new();
            for q in lattice.qubits() {
                let mut gone = false;
                for _ in 0..4 {
                    if rng.random_bool(p_edge) && rng.random_bool(0.5) {
                        gone = true;
                    }
                }
                if gone {
                    lost.push(q);
                }
            }
            lost
        }
    }
}

/// Flips each surviving qubit by the parity of its eight dephasing events.
pub fn sample_z_errors<R: Rng + ?Sized>(
    lattice: &Lattice,
    params: &SampleParams,
    lost: &[QubitId],
    rng: &mut R,
) -> Vec<QubitId> {
    let lost = mask(lost, lattice.num_qubits());
    let link = (params.n_avg * params.p_z).min(1.0);
    lattice
        .qubits()
        .filter(|q| {
            if lost[q.index()] {
                return false;
            }
            let mut odd = false;
            // initialization, waiting, measurement, leakage
            for _ in 0..4 {
                odd ^= rng.random_bool(params.p_z);
            }
            for _ in 0..4 {
                odd ^= rng.random_bool(link);
            }
            odd
        })
        .collect()
}

pub fn sample_trial<R: Rng + ?Sized>(
    lattice: &Lattice,
    params: &SampleParams,
    rng: &mut R,
) -> ErrorSample {
    let lost = sample_losses(lattice, params, rng);
    let flips = sample_z_errors(lattice, params, &lost, rng);
    ErrorSample { lost, flips }
}

/// Draws trial `trial_index` of the run keyed by `seed`.
pub fn sample_keyed(
    lattice: &Lattice,
    params: &SampleParams,
    seed: u64,
    trial_index: u64,
) -> ErrorSample {
    sample_trial(lattice, params, &mut trial_rng(seed, trial_index))
}
