//! Error rates for a few operating points, and the amplitudes that meet a
//! 3% lattice-qubit loss budget.

use raussim::noise::{alpha_for_loss_budget, channel_decomposition, effective_flip_rate, HybridParams};

fn main() -> raussim::Result<()> {
    println!("{:>5} {:>7} {:>2} {:>9} {:>9} {:>7} {:>9} {:>9}", "alpha", "eta", "n", "p_z", "p_f", "n_avg", "p_loss", "flip");
    for &(alpha, eta, n) in &[(0.84, 0.005, 2), (0.6, 0.0057, 3), (1.0, 0.01, 1), (0.84, 0.0, 2)] {
        let r = HybridParams::new(alpha, eta, n)?.rates()?;
        let flip = effective_flip_rate(r.p_z, r.n_avg)?;
        println!(
            "{alpha:>5} {eta:>7} {n:>2} {:>9.6} {:>9.6} {:>7.4} {:>9.6} {flip:>9.6}",
            r.p_z, r.p_f, r.n_avg, r.p_loss
        );
    }

    for n in 1..=4 {
        println!("n={n}: alpha for p_loss=0.03 is {:.4}", alpha_for_loss_budget(0.03, n, 0.0)?);
    }

    let ch = channel_decomposition(0.84, 0.05)?;
    println!(
        "channel at alpha=0.84, eta=0.05: Psi+ {:.5}, Psi- {:.5}, Phi+ {:.5}, Phi- {:.5}",
        ch.w_psi_plus, ch.w_psi_minus, ch.w_phi_plus, ch.w_phi_minus
    );
    Ok(())
}
