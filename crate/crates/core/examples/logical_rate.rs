//! Logical error rate against p_z for a few distances at 3% loss.

use raussim::noise::{avg_bsm_attempts, eta_from_dephasing, hbsm_failure_rate};
use raussim::sampler::{LossModel, SampleParams};
use raussim::threshold::estimate_logical_rate;
use raussim::Lattice;

fn main() -> raussim::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let alpha = 0.84;
    println!("{:>8} {:>3} {:>8} {:>8}", "p_z", "d", "p_L", "stderr");
    for p_z in [0.0015, 0.0025, 0.0035] {
        let n_avg = avg_bsm_attempts(hbsm_failure_rate(alpha, eta_from_dephasing(p_z, alpha)?)?)?;
        let params = SampleParams::new(p_z, n_avg, LossModel::Direct { p_loss: 0.03 })?;
        for d in [5, 7, 9] {
            let p = estimate_logical_rate(&Lattice::new(d)?, &params, trials, 1)?;
            println!("{p_z:>8} {d:>3} {:>8.5} {:>8.5}", p.p_l, p.stderr);
        }
    }
    Ok(())
}
