//! Full crossing estimate: sweep a p_z grid over d = 5, 7, 9, fit, and
//! convert the crossing to a photon-loss threshold. Prints CSV then the fit.

use raussim::noise::{alpha_for_loss_budget, avg_bsm_attempts, eta_from_dephasing, hbsm_failure_rate};
use raussim::sampler::{LossModel, SampleParams};
use raussim::threshold::{find_crossing, geometric_grid, sweep, write_csv, FitOptions, ThresholdEstimate};

fn main() -> raussim::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let (n, p_loss) = (2, 0.03);
    let alpha = alpha_for_loss_budget(p_loss, n, 0.0)?;
    let grid = geometric_grid(0.002, 0.005, 7)?;
    let points = sweep(&[5, 7, 9], &grid, trials, 1, |p_z| {
        let n_avg = avg_bsm_attempts(hbsm_failure_rate(alpha, eta_from_dephasing(p_z, alpha)?)?)?;
        SampleParams::new(p_z, n_avg, LossModel::Direct { p_loss })
    })?;
    write_csv(std::io::stdout().lock(), &points).expect("stdout");

    let crossing = find_crossing(&points, &FitOptions::default())?;
    let est = ThresholdEstimate::new(&crossing, alpha, p_loss, n)?;
    println!(
        "p_z_th = {:.5} (95% CI {:.5}..{:.5}), nu = {:.2}, eta_th = {:.5} at alpha = {:.4}",
        est.p_z_th, est.ci.0, est.ci.1, est.nu, est.eta_th, alpha
    );
    Ok(())
}
