//! Compares sampled qubit loss from failed cluster bonds with the closed form.

use raussim::noise::{edge_loss_to_qubit_loss, hbsm_failure_rate};
use raussim::sampler::{sample_keyed, LossModel, SampleParams};
use raussim::Lattice;

fn main() -> raussim::Result<()> {
    let lat = Lattice::new(7)?;
    for (alpha, n) in [(0.84, 2), (0.6, 3), (0.5, 1)] {
        let p_f = hbsm_failure_rate(alpha, 0.0)?;
        let params = SampleParams::new(0.0, 1.0, LossModel::Edge { p_edge: p_f.powi(n as i32) })?;
        let trials = 500;
        let lost: usize = (0..trials).map(|t| sample_keyed(&lat, &params, 5, t).lost.len()).sum();
        let draws = trials as f64 * lat.num_qubits() as f64;
        let empirical = lost as f64 / draws;
        let exact = edge_loss_to_qubit_loss(p_f, n)?;
        let se = (exact * (1.0 - exact) / draws).sqrt();
        println!(
            "alpha={alpha} n={n}: sampled {empirical:.5}, formula {exact:.5} ({:+.2} se)",
            (empirical - exact) / se
        );
    }
    Ok(())
}
