mod common;

use approx::assert_abs_diff_eq;
use common::fock_oracle::channel_oracle;
use proptest::prelude::*;
use raussim::noise::*;

fn grid(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
}

#[test]
fn rates_bounded_and_weights_normalized_on_grid() {
    for alpha in grid(0.0, 3.0, 50) {
        for eta in grid(0.0, 1.0, 50) {
            let p_z = dephasing_rate(alpha, eta).unwrap();
            let p_f = hbsm_failure_rate(alpha, eta).unwrap();
            let loss = qubit_loss_rate(alpha, eta).unwrap();
            for p in [p_z, p_f, loss] {
                assert!((0.0..=1.0).contains(&p));
            }
            assert!(p_z <= 0.5);
            let ch = channel_decomposition(alpha, eta).unwrap();
            assert_abs_diff_eq!(ch.total(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ch.w_psi_minus + ch.w_phi_plus, p_z, epsilon = 1e-12);
        }
    }
}

#[test]
fn monotonicity_on_grid() {
    let alphas: Vec<f64> = grid(0.05, 3.0, 50).collect();
    let etas: Vec<f64> = grid(0.0, 1.0, 50).collect();
    for &a in &alphas {
        for w in etas.windows(2) {
            assert!(dephasing_rate(a, w[1]).unwrap() > dephasing_rate(a, w[0]).unwrap());
        }
    }
    for &e in etas.iter().filter(|&&e| e > 0.0 && e < 1.0) {
        for w in alphas.windows(2) {
            assert!(dephasing_rate(w[1], e).unwrap() > dephasing_rate(w[0], e).unwrap());
            assert!(hbsm_failure_rate(w[1], e).unwrap() < hbsm_failure_rate(w[0], e).unwrap());
        }
    }
}

#[test]
fn fock_oracle_tail_is_negligible() {
    for alpha in [0.3, 0.6, 0.84, 1.2] {
        assert!(channel_oracle(alpha, 0.0, 25).tail < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eta_roundtrip(alpha in 0.1f64..3.0, eta in 0.0f64..0.99) {
        let p = dephasing_rate(alpha, eta).unwrap();
        prop_assert!((eta_from_dephasing(p, alpha).unwrap() - eta).abs() < 1e-8);
    }

    #[test]
    fn alpha_roundtrip(alpha in 0.2f64..2.0, n in 1u32..5, eta in 0.0f64..0.05) {
        let p_loss = edge_loss_to_qubit_loss(hbsm_failure_rate(alpha, eta).unwrap(), n).unwrap();
        prop_assume!(p_loss > 1e-9);
        let back = alpha_for_loss_budget(p_loss, n, eta).unwrap();
        let again = edge_loss_to_qubit_loss(hbsm_failure_rate(back, eta).unwrap(), n).unwrap();
        prop_assert!((again / p_loss - 1.0).abs() < 1e-6, "{} vs {}", again, p_loss);
        // p_loss flattens out at large alpha, so only compare alpha where it is well conditioned.
        if p_loss > 1e-4 {
            prop_assert!((back - alpha).abs() < 1e-8, "{} vs {}", back, alpha);
        }
    }

    #[test]
    fn channel_matches_fock_model(alpha in 0.0f64..1.2, eta in 0.0f64..0.2) {
        let ch = channel_decomposition(alpha, eta).unwrap();
        let o = channel_oracle(alpha, eta, 25);
        prop_assert!((ch.w_psi_plus - o.psi_plus).abs() < 1e-6);
        prop_assert!((ch.w_psi_minus - o.psi_minus).abs() < 1e-6);
        if eta > 1e-9 && alpha > 0.05 {
            prop_assert!((ch.w_phi_plus - o.phi_plus).abs() < 1e-6);
            prop_assert!((ch.w_phi_minus - o.phi_minus).abs() < 1e-6);
        }
    }

    #[test]
    fn flip_rate_matches_parity_formula(p_z in 0.0f64..0.1, n_avg in 1.0f64..4.0) {
        prop_assume!(n_avg * p_z <= 0.5);
        let direct = 0.5 * (1.0 - (1.0 - 2.0 * p_z).powi(4) * (1.0 - 2.0 * n_avg * p_z).powi(4));
        prop_assert!((effective_flip_rate(p_z, n_avg).unwrap() - direct).abs() < 1e-14);
    }
}
