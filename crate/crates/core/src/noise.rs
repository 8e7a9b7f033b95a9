//! Closed-form photon-loss noise for hybrid qubits.
//!
//! A hybrid qubit pairs a coherent-state mode `|±α⟩` with a single-photon
//! polarization mode. Photon loss at rate `η` attenuates the amplitude to
//! `α' = √(1−η)·α`, dephases the qubit, and degrades the hybrid Bell
//! measurements used to fuse star clusters into the lattice. Everything here
//! is a pure function of its arguments.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, check_range, Error, Result};

/// Bracket for α in [`alpha_for_loss_budget`].
pub const ALPHA_BRACKET: (f64, f64) = (0.0, 10.0);

/// Physical knobs of one scheme instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    pub alpha: f64,
    pub eta: f64,
    /// Hybrid Bell measurements attempted per lattice edge.
    pub n_bsm: u32,
}

impl HybridParams {
    pub fn new(alpha: f64, eta: f64, n_bsm: u32) -> Result<Self> {
        check_alpha_eta(alpha, eta)?;
        if n_bsm == 0 {
            return Err(Error::Invalid("n_bsm must be at least 1".into()));
        }
        Ok(Self { alpha, eta, n_bsm })
    }

    /// Evaluates every derived rate for these parameters.
    pub fn rates(&self) -> Result<NoiseRates> {
        NoiseRates::evaluate(self.alpha, self.eta, self.n_bsm)
    }
}

/// Probabilities derived from [`HybridParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRates {
    pub p_z: f64,
    pub p_f: f64,
    pub n_avg: f64,
    pub p_loss: f64,
    pub alpha_prime: f64,
}

impl NoiseRates {
    pub fn evaluate(alpha: f64, eta: f64, n_bsm: u32) -> Result<Self> {
        let p_f = hbsm_failure_rate(alpha, eta)?;
        Ok(Self {
            p_z: dephasing_rate(alpha, eta)?,
            p_f,
            n_avg: avg_bsm_attempts(p_f)?,
            p_loss: edge_loss_to_qubit_loss(p_f, n_bsm)?,
            alpha_prime: alpha_prime(alpha, eta)?,
        })
    }
}

/// Weights of the four output states after the loss channel acts on
/// `(|α,H⟩ + |−α,V⟩)/√2`.
///
/// `Ψ±` are normalized; the `Φ±` weights multiply the unnormalized
/// projectors `|0⟩⊗(|α'⟩ ± |−α'⟩)/√2`, so the four weights sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelDecomposition {
    pub w_psi_plus: f64,
    pub w_psi_minus: f64,
    pub w_phi_plus: f64,
    pub w_phi_minus: f64,
    pub alpha_prime: f64,
}

impl ChannelDecomposition {
    pub fn total(&self) -> f64 {
        self.w_psi_plus + self.w_psi_minus + self.w_phi_plus + self.w_phi_minus
    }

    /// Probability that the qubit ends up phase flipped.
    pub fn phase_flip_weight(&self) -> f64 {
        self.w_psi_minus + self.w_phi_plus
    }
}

fn check_alpha_eta(alpha: f64, eta: f64) -> Result<()> {
    check_nonneg("alpha", alpha)?;
    check_range("eta", eta, 0.0, 1.0)?;
    Ok(())
}

pub fn alpha_prime(alpha: f64, eta: f64) -> Result<f64> {
    check_alpha_eta(alpha, eta)?;
    Ok((1.0 - eta).sqrt() * alpha)
}

/// Photon-loss induced dephasing rate `½[1 − (1−η)·e^{−2ηα²}]`.
pub fn dephasing_rate(alpha: f64, eta: f64) -> Result<f64> {
    check_alpha_eta(alpha, eta)?;
    Ok(0.5 * (1.0 - (1.0 - eta) * (-2.0 * eta * alpha * alpha).exp()))
}

/// Heralded failure rate of one hybrid Bell measurement, `½(1+η)·e^{−2α'²}`.
pub fn hbsm_failure_rate(alpha: f64, eta: f64) -> Result<f64> {
    let ap = alpha_prime(alpha, eta)?;
    Ok(0.5 * (1.0 + eta) * (-2.0 * ap * ap).exp())
}

/// Probability that photon loss empties both modes, `η·e^{−α'²}`.
pub fn qubit_loss_rate(alpha: f64, eta: f64) -> Result<f64> {
    let ap = alpha_prime(alpha, eta)?;
    Ok(eta * (-ap * ap).exp())
}

/// Lattice-qubit loss from missing edges: each of four edges is missing with
/// `p_f^n` and a missing edge removes either endpoint with equal odds.
pub fn edge_loss_to_qubit_loss(p_f: f64, n: u32) -> Result<f64> {
    check_range("p_f", p_f, 0.0, 1.0)?;
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let missing = p_f.powi(n as i32);
    Ok(1.0 - (1.0 - 0.5 * missing).powi(4))
}

/// Smallest coherent amplitude whose edge-induced loss equals `p_loss`.
///
/// The composite loss is strictly decreasing in α, so bisection over
/// [`ALPHA_BRACKET`] converges to within 1e-12 in α.
pub fn alpha_for_loss_budget(p_loss: f64, n: u32, eta: f64) -> Result<f64> {
    if !(p_loss > 0.0 && p_loss < 0.9375) {
        return Err(Error::Domain {
            name: "p_loss",
            value: p_loss,
            expected: "(0, 0.9375)",
        });
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Domain {
            name: "eta",
            value: eta,
            expected: "[0, 1)",
        });
    }
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let loss_at = |alpha: f64| -> f64 {
        let p_f = hbsm_failure_rate(alpha, eta).expect("alpha in bracket");
        edge_loss_to_qubit_loss(p_f.min(1.0), n).expect("p_f clamped") - p_loss
    };
    let (mut lo, mut hi) = ALPHA_BRACKET;
    if loss_at(lo) < 0.0 {
        return Err(Error::NoSolution(format!(
            "p_loss {p_loss} is above the maximum reachable loss at eta {eta}"
        )));
    }
    if loss_at(hi) > 0.0 {
        return Err(Error::NoSolution(format!(
            "p_loss {p_loss} needs alpha beyond {hi}"
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if loss_at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Mean number of hybrid Bell measurements per edge, `1/(1−p_f)`.
pub fn avg_bsm_attempts(p_f: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p_f) {
        return Err(Error::Domain {
            name: "p_f",
            value: p_f,
            expected: "[0, 1)",
        });
    }
    Ok(1.0 / (1.0 - p_f))
}

/// Inverts [`dephasing_rate`] in η for fixed α by bisection on `[0, 1]`.
pub fn eta_from_dephasing(p_z: f64, alpha: f64) -> Result<f64> {
    check_range("p_z", p_z, 0.0, 0.5)?;
    check_nonneg("alpha", alpha)?;
    if p_z == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if dephasing_rate(alpha, mid)? < p_z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn channel_decomposition(alpha: f64, eta: f64) -> Result<ChannelDecomposition> {
    let ap = alpha_prime(alpha, eta)?;
    let coherence = (-2.0 * eta * alpha * alpha).exp();
    Ok(ChannelDecomposition {
        w_psi_plus: (1.0 - eta) * (1.0 + coherence) / 2.0,
        w_psi_minus: (1.0 - eta) * (1.0 - coherence) / 2.0,
        w_phi_plus: eta / 2.0,
        w_phi_minus: eta / 2.0,
        alpha_prime: ap,
    })
}

/// Per-qubit flip probability from eight independent Z events: four at `p_z`
/// (initialization, waiting, measurement, leakage) and four entangling links
/// at `n_avg·p_z`. A qubit is flipped iff an odd number fire.
pub fn effective_flip_rate(p_z: f64, n_avg: f64) -> Result<f64> {
    check_range("p_z", p_z, 0.0, 0.5)?;
    if !(n_avg.is_finite() && n_avg >= 1.0) {
        return Err(Error::Domain {
            name: "n_avg",
            value: n_avg,
            expected: ">= 1",
        });
    }
    let link = n_avg * p_z;
    check_range("n_avg*p_z", link, 0.0, 0.5)?;
    Ok(odd_parity_probability(
        [p_z, p_z, p_z, p_z, link, link, link, link].iter().copied(),
    ))
}

/// Probability that an odd number of independent events fire.
pub fn odd_parity_probability(probs: impl IntoIterator<Item = f64>) -> f64 {
    0.5 * (1.0 - probs.into_iter().map(|p| 1.0 - 2.0 * p).product::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn alpha_prime_examples() {
        assert_eq!(alpha_prime(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(alpha_prime(0.84, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(alpha_prime(0.84, 0.005).unwrap(), 0.837_897_368_4, epsilon = 1e-9);
    }

    #[test]
    fn dephasing_examples() {
        assert_eq!(dephasing_rate(0.7, 0.0).unwrap(), 0.0);
        assert_eq!(dephasing_rate(0.7, 1.0).unwrap(), 0.5);
        assert_abs_diff_eq!(dephasing_rate(0.84, 0.005).unwrap(), 0.0060, epsilon = 1e-4);
        assert_abs_diff_eq!(dephasing_rate(0.6, 0.0057).unwrap(), 0.0049, epsilon = 1e-4);
    }

    #[test]
    fn failure_rate_examples() {
        assert_eq!(hbsm_failure_rate(0.0, 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(hbsm_failure_rate(0.84, 0.0).unwrap(), 0.121_925_243, epsilon = 1e-8);
        assert_abs_diff_eq!(hbsm_failure_rate(0.6, 0.0).unwrap(), 0.243_376_128, epsilon = 1e-8);
    }

    #[test]
    fn qubit_loss_examples() {
        assert_eq!(qubit_loss_rate(0.9, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(qubit_loss_rate(0.84, 0.005).unwrap(), 0.002_477_787, epsilon = 1e-8);
        assert_eq!(qubit_loss_rate(0.0, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn edge_loss_examples() {
        assert_eq!(edge_loss_to_qubit_loss(0.0, 3).unwrap(), 0.0);
        assert_eq!(edge_loss_to_qubit_loss(1.0, 1).unwrap(), 0.9375);
        assert_abs_diff_eq!(edge_loss_to_qubit_loss(0.1231, 2).unwrap(), 0.0300, epsilon = 5e-4);
        assert!(edge_loss_to_qubit_loss(1.2, 2).is_err());
        assert!(edge_loss_to_qubit_loss(0.2, 0).is_err());
    }

    #[test]
    fn alpha_inversion() {
        assert_abs_diff_eq!(alpha_for_loss_budget(0.03, 2, 0.0).unwrap(), 0.84, epsilon = 0.01);
        assert_abs_diff_eq!(alpha_for_loss_budget(0.03, 3, 0.0).unwrap(), 0.60, epsilon = 0.01);
        for (p, n, eta) in [(0.03, 2, 0.0), (0.01, 1, 0.002), (0.1, 4, 0.1)] {
            let a = alpha_for_loss_budget(p, n, eta).unwrap();
            let back = edge_loss_to_qubit_loss(hbsm_failure_rate(a, eta).unwrap(), n).unwrap();
            assert_abs_diff_eq!(back, p, epsilon = 1e-8);
        }
    }

    #[test]
    fn alpha_inversion_unreachable() {
        // At eta = 0.9 the failure rate never exceeds 0.95, so n = 1 caps the loss.
        let cap = edge_loss_to_qubit_loss(0.95, 1).unwrap();
        assert!(matches!(
            alpha_for_loss_budget(cap + 0.01, 1, 0.9),
            Err(Error::NoSolution(_))
        ));
        assert!(alpha_for_loss_budget(0.0, 2, 0.0).is_err());
        assert!(alpha_for_loss_budget(0.95, 2, 0.0).is_err());
    }

    #[test]
    fn avg_attempts_examples() {
        assert_eq!(avg_bsm_attempts(0.0).unwrap(), 1.0);
        assert_eq!(avg_bsm_attempts(0.5).unwrap(), 2.0);
        assert_abs_diff_eq!(avg_bsm_attempts(0.12194).unwrap(), 1.138_874, epsilon = 1e-5);
        assert!(avg_bsm_attempts(1.0).is_err());
    }

    #[test]
    fn eta_inversion() {
        let e = eta_from_dephasing(0.006, 0.84).unwrap();
        assert!((e - 5.0e-3).abs() <= 0.02 * 5.0e-3, "{e}");
        let e = eta_from_dephasing(0.0049, 0.6).unwrap();
        assert!((e - 5.7e-3).abs() <= 0.02 * 5.7e-3, "{e}");
        assert_eq!(eta_from_dephasing(0.0, 0.3).unwrap(), 0.0);
        assert!(eta_from_dephasing(0.6, 0.3).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let c = channel_decomposition(0.8, 0.0).unwrap();
        assert_eq!(
            (c.w_psi_plus, c.w_psi_minus, c.w_phi_plus, c.w_phi_minus),
            (1.0, 0.0, 0.0, 0.0)
        );
        let c = channel_decomposition(0.84, 0.05).unwrap();
        assert_abs_diff_eq!(c.total(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            c.phase_flip_weight(),
            dephasing_rate(0.84, 0.05).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn flip_rate_examples() {
        assert_eq!(effective_flip_rate(0.0, 1.7).unwrap(), 0.0);
        assert_abs_diff_eq!(effective_flip_rate(0.006, 1.139).unwrap(), 0.049_09, epsilon = 1e-4);
        assert!(effective_flip_rate(0.3, 2.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(dephasing_rate(-0.1, 0.1).is_err());
        assert!(dephasing_rate(0.1, 1.1).is_err());
        assert!(hbsm_failure_rate(0.1, f64::NAN).is_err());
        assert!(channel_decomposition(0.1, -0.01).is_err());
        assert!(HybridParams::new(0.8, 0.1, 0).is_err());
    }

    #[test]
    fn rates_bundle() {
        let r = HybridParams::new(0.84, 0.005, 2).unwrap().rates().unwrap();
        assert_abs_diff_eq!(r.n_avg, 1.0 / (1.0 - r.p_f), epsilon = 1e-15);
        assert!(r.p_f <= 0.5 * 1.005);
    }
}
