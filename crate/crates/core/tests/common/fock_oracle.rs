//! Truncated Fock-space model of photon loss on `(|α,H⟩ + |−α,V⟩)/√2`.
//!
//! Each optical mode meets its own beam splitter of transmissivity `1 − η`
//! with a vacuum environment mode; the environment is then traced out.

/// Output-state weights, in the same layout as the library's decomposition.
#[derive(Debug, Clone, Copy)]
pub struct OracleWeights {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
    /// Coherent population beyond the cutoff.
    pub tail: f64,
}

const VAC: usize = 0;
const H: usize = 1;
const V: usize = 2;

fn coherent(alpha: f64, cutoff: usize) -> Vec<f64> {
    let mut c = vec![0.0; cutoff + 1];
    c[0] = (-alpha * alpha / 2.0).exp();
    for n in 1..=cutoff {
        c[n] = c[n - 1] * alpha / (n as f64).sqrt();
    }
    c
}

fn binom_sqrt(n: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v *= (n - i) as f64 / (i + 1) as f64;
    }
    v.sqrt()
}

pub fn channel_oracle(alpha: f64, eta: f64, cutoff: usize) -> OracleWeights {
    let dim = cutoff + 1;
    let t = (1.0 - eta).sqrt();
    let r = eta.sqrt();
    // psi[(n_sys, pol_sys)][(n_env, pol_env)]
    let idx = |n: usize, p: usize| n * 3 + p;
    let mut psi = vec![vec![0.0; dim * 3]; dim * 3];
    let plus = coherent(alpha, cutoff);
    let branches = [(1.0, H), (-1.0, V)];
    for &(sign, pol) in &branches {
        for n in 0..dim {
            let parity = if sign < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            let amp = parity * plus[n] / 2f64.sqrt();
            for k in 0..=n {
                let bs = binom_sqrt(n, k) * t.powi((n - k) as i32) * r.powi(k as i32);
                psi[idx(n - k, pol)][idx(k, VAC)] += amp * bs * t;
                psi[idx(n - k, VAC)][idx(k, pol)] += amp * bs * r;
            }
        }
    }
    let project = |v: &[f64]| -> f64 {
        (0..dim * 3)
            .map(|e| {
                let s: f64 = (0..dim * 3).map(|s| v[s] * psi[s][e]).sum();
                s * s
            })
            .sum()
    };
    let ap = alpha * t;
    let cp = coherent(ap, cutoff);
    let state = |h_sign: f64, pol_a: usize, pol_b: usize, norm: f64| {
        let mut v = vec![0.0; dim * 3];
        for n in 0..dim {
            let minus = if n % 2 == 1 { -1.0 } else { 1.0 };
            v[idx(n, pol_a)] += cp[n] * norm;
            v[idx(n, pol_b)] += h_sign * minus * cp[n] * norm;
        }
        v
    };
    let s = 1.0 / 2f64.sqrt();
    let overlap = (-2.0 * ap * ap).exp();
    let tail = 1.0 - plus.iter().map(|c| c * c).sum::<f64>();
    OracleWeights {
        psi_plus: project(&state(1.0, H, V, s)),
        psi_minus: project(&state(-1.0, H, V, s)),
        phi_plus: project(&state(1.0, VAC, VAC, s)) / (1.0 + overlap).powi(2),
        phi_minus: project(&state(-1.0, VAC, VAC, s)) / (1.0 - overlap).powi(2),
        tail,
    }
}
