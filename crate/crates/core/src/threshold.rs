//! Logical error rates, threshold crossings and distance extrapolation.

use std::collections::BTreeMap;
use std::io::{self, Write};

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::decode;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::noise::eta_from_dephasing;
use crate::sampler::{sample_keyed, SampleParams};

/// Monte Carlo estimate of the logical error rate at one `(d, p_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub d: usize,
    pub p_z: f64,
    pub trials: u64,
    pub failures: u64,
    /// Trials that could not be decoded; already included in `failures`.
    pub aborts: u64,
    pub p_l: f64,
    pub stderr: f64,
}

impl CurvePoint {
    pub fn from_counts(d: usize, p_z: f64, trials: u64, failures: u64, aborts: u64) -> Self {
        let p_l = failures as f64 / trials as f64;
        Self {
            d,
            p_z,
            trials,
            failures,
            aborts,
            p_l,
            stderr: (p_l * (1.0 - p_l) / trials as f64).sqrt(),
        }
    }

    /// Normal-approximation 95% interval.
    pub fn ci95(&self) -> (f64, f64) {
        (self.p_l - 1.96 * self.stderr, self.p_l + 1.96 * self.stderr)
    }
}

/// Runs `trials` keyed trials and counts failures (any axis, or abort).
pub fn estimate_logical_rate(
    lattice: &Lattice,
    params: &SampleParams,
    trials: u64,
    seed: u64,
) -> Result<CurvePoint> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    let (failures, aborts) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let outcome = decode(lattice, &sample_keyed(lattice, params, seed, t));
            (u64::from(outcome.is_failure()), u64::from(outcome.is_abort()))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(CurvePoint::from_counts(
        lattice.distance(),
        params.p_z,
        trials,
        failures,
        aborts,
    ))
}

/// `count` points spaced geometrically over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && count >= 1) {
        return Err(Error::Invalid(format!("bad grid {lo}:{hi}:{count}")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (ratio * i as f64).exp() })
        .collect())
}

/// Evaluates every `(d, p_z)` combination, distances outermost.
pub fn sweep(
    distances: &[usize],
    grid: &[f64],
    trials: u64,
    seed: u64,
    mut params_at: impl FnMut(f64) -> Result<SampleParams>,
) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::with_capacity(distances.len() * grid.len());
    for &d in distances {
        let lattice = Lattice::new(d)?;
        for &p_z in grid {
            out.push(estimate_logical_rate(&lattice, &params_at(p_z)?, trials, seed)?);
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "d,p_z,trials,failures,p_L,stderr";

pub fn write_csv<W: Write>(mut w: W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            p.d, p.p_z, p.trials, p.failures, p.p_l, p.stderr
        )?;
    }
    Ok(())
}

/// Result of the finite-size-scaling fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub p_c: f64,
    pub nu: f64,
    /// Percentile bootstrap 95% interval, widened to contain `p_c`.
    pub ci: (f64, f64),
    /// `ln p_L ≈ c0 + c1·x + c2·x²` with `x = (p − p_c)/p_c · d^{1/ν}`.
    pub coefficients: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub p_z_th: f64,
    pub ci: (f64, f64),
    pub eta_th: f64,
    pub alpha: f64,
    pub p_loss: f64,
    pub n: u32,
    pub nu: f64,
}

impl ThresholdEstimate {
    pub fn new(crossing: &Crossing, alpha: f64, p_loss: f64, n: u32) -> Result<Self> {
        Ok(Self {
            p_z_th: crossing.p_c,
            ci: crossing.ci,
            eta_th: eta_from_dephasing(crossing.p_c, alpha)?,
            alpha,
            p_loss,
            n,
            nu: crossing.nu,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub bootstrap: usize,
    pub seed: u64,
    pub nu_range: (f64, f64),
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            bootstrap: 200,
            seed: 0x5eed,
            nu_range: (0.3, 3.0),
        }
    }
}

/// Locates the threshold where the `p_L(p_z)` curves of different distances
/// intersect.
///
/// Pairwise curve intersections give a first estimate `p0`. The scaling fit
/// then uses only points within a geometric window around `p0`, widened until
/// every distance keeps four points, since far from threshold the curves
/// saturate and no longer follow the scaling form. Each bootstrap resample
/// repeats the whole procedure.
pub fn find_crossing(points: &[CurvePoint], opts: &FitOptions) -> Result<Crossing> {
    let mut pts: Vec<CurvePoint> = points.to_vec();
    pts.sort_by(|a, b| (a.d, a.p_z).partial_cmp(&(b.d, b.p_z)).expect("finite p_z"));
    let curves = group_by_distance(&pts)?;
    let (p_c, nu, coefficients) = locate(&curves, opts.nu_range).ok_or_else(|| {
        Error::NoCrossing("every pair of curves keeps the same order across the grid".into())
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut boot = Vec::with_capacity(opts.bootstrap);
    for _ in 0..opts.bootstrap {
        let resampled: Vec<Vec<CurvePoint>> = curves
            .iter()
            .map(|curve| {
                curve
                    .iter()
                    .map(|p| {
                        let f = Binomial::new(p.trials, p.p_l.clamp(0.0, 1.0))
                            .expect("valid binomial")
                            .sample(&mut rng);
                        CurvePoint::from_counts(p.d, p.p_z, p.trials, f, 0)
                    })
                    .collect()
            })
            .collect();
        if let Some((b, _, _)) = locate(&resampled, opts.nu_range) {
            boot.push(b);
        }
    }
    let ci = if boot.is_empty() {
        (p_c, p_c)
    } else {
        boot.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let at = |q: f64| boot[((boot.len() - 1) as f64 * q).round() as usize];
        (at(0.025).min(p_c), at(0.975).max(p_c))
    };
    Ok(Crossing {
        p_c,
        nu,
        ci,
        coefficients,
    })
}

/// Splits sorted points into per-distance curves, checking the minimum shape.
fn group_by_distance(pts: &[CurvePoint]) -> Result<Vec<Vec<CurvePoint>>> {
    let mut by_d: BTreeMap<usize, Vec<CurvePoint>> = BTreeMap::new();
    for p in pts {
        by_d.entry(p.d).or_default().push(*p);
    }
    if by_d.len() < 2 || by_d.values().any(|v| v.len() < 4) {
        return Err(Error::Invalid(
            "crossing fit needs two or more distances with at least four points each".into(),
        ));
    }
    Ok(by_d.into_values().collect())
}

/// Intersections of every pair of curves, interpolated in `(ln p, p_L)`
/// between consecutive shared grid points where their order flips.
pub fn pairwise_intersections(curves: &[Vec<CurvePoint>]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let shared: Vec<(f64, f64)> = curves[i]
                .iter()
                .filter_map(|a| {
                    curves[j]
                        .iter()
                        .find(|b| b.p_z == a.p_z)
                        .map(|b| (a.p_z, b.p_l - a.p_l))
                })
                .collect();
            for w in shared.windows(2) {
                let ((p0, g0), (p1, g1)) = (w[0], w[1]);
                if (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0) {
                    let t = g0 / (g0 - g1);
                    out.push((p0.ln() + t * (p1.ln() - p0.ln())).exp());
                }
            }
        }
    }
    out
}

fn locate(curves: &[Vec<CurvePoint>], nu_range: (f64, f64)) -> Option<(f64, f64, [f64; 3])> {
    let mut cross = pairwise_intersections(curves);
    if cross.is_empty() {
        return None;
    }
    cross.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let p0 = cross[cross.len() / 2];

    let (lo, hi) = curves
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.p_z), h.max(p.p_z)));
    let mut factor: f64 = 1.25;
    let window = loop {
        let inside = |p: &CurvePoint| p.p_z >= p0 / factor && p.p_z <= p0 * factor;
        let enough = curves.iter().all(|c| c.iter().filter(|p| inside(p)).count() >= 4);
        if enough || (p0 / factor <= lo && p0 * factor >= hi) {
            break factor;
        }
        factor *= 1.25;
    };
    let obs: Vec<Obs> = curves
        .iter()
        .flatten()
        .filter(|p| p.p_z >= p0 / window && p.p_z <= p0 * window)
        .map(|p| Obs::new(p.d, p.p_z, p.failures, p.trials))
        .collect();
    let range = ((p0 / window).max(lo), (p0 * window).min(hi));
    Some(fit_scaling(&obs, range, nu_range))
}

struct Obs {
    d: f64,
    p: f64,
    y: f64,
    w: f64,
}

impl Obs {
    fn new(d: usize, p: f64, failures: u64, trials: u64) -> Self {
        // continuity-corrected rate keeps the log finite at zero failures
        let rate = (failures as f64 + 0.5) / (trials as f64 + 1.0);
        let var = (1.0 - rate) / (trials as f64 * rate);
        Obs {
            d: d as f64,
            p,
            y: rate.ln(),
            w: 1.0 / var,
        }
    }
}

/// Weighted residual and coefficients for fixed `(p_c, ν)`.
fn chi2(obs: &[Obs], p_c: f64, nu: f64) -> (f64, [f64; 3]) {
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    let xs: Vec<f64> = obs
        .iter()
        .map(|o| (o.p - p_c) / p_c * o.d.powf(1.0 / nu))
        .collect();
    for (o, &x) in obs.iter().zip(&xs) {
        let row = Vector3::new(1.0, x, x * x);
        ata += o.w * row * row.transpose();
        atb += o.w * o.y * row;
    }
    let coef = match ata.try_inverse() {
        Some(inv) => inv * atb,
        None => return (f64::INFINITY, [0.0; 3]),
    };
    let chi = obs
        .iter()
        .zip(&xs)
        .map(|(o, &x)| {
            let r = o.y - (coef[0] + coef[1] * x + coef[2] * x * x);
            o.w * r * r
        })
        .sum();
    (chi, [coef[0], coef[1], coef[2]])
}

/// Grid search over `(p_c, ν)` with three rounds of zooming.
fn fit_scaling(obs: &[Obs], p_range: (f64, f64), nu_range: (f64, f64)) -> (f64, f64, [f64; 3]) {
    let (mut p_lo, mut p_hi) = p_range;
    let (mut n_lo, mut n_hi) = nu_range;
    let mut best = (f64::INFINITY, 0.5 * (p_lo + p_hi), 1.0, [0.0; 3]);
    let steps = 40;
    for _round in 0..4 {
        let dp = (p_hi - p_lo) / steps as f64;
        let dn = (n_hi - n_lo) / steps as f64;
        for i in 0..=steps {
            let p_c = p_lo + dp * i as f64;
            for j in 0..=steps {
                let nu = n_lo + dn * j as f64;
                let (c, coef) = chi2(obs, p_c, nu);
                if c < best.0 {
                    best = (c, p_c, nu, coef);
                }
            }
        }
        p_lo = (best.1 - 2.0 * dp).max(p_range.0);
        p_hi = (best.1 + 2.0 * dp).min(p_range.1);
        n_lo = (best.2 - 2.0 * dn).max(nu_range.0);
        n_hi = (best.2 + 2.0 * dn).min(nu_range.1);
    }
    (best.1, best.2, best.3)
}

/// How to round the extrapolated distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceRule {
    /// Smallest odd distance meeting the target.
    Odd,
    /// Smallest integer distance meeting the target.
    AnyParity,
}

/// Continuous distance at which `b / (a/b)^{(d − d_b)/2}` reaches `target`.
pub fn required_distance_real(a: f64, b: f64, d_b: usize, target: f64) -> Result<f64> {
    if !(0.0 < b && b < a && a < 1.0) {
        return Err(Error::Invalid(format!("need 0 < b < a < 1, got a={a}, b={b}")));
    }
    if !(target > 0.0 && target < b) {
        return Err(Error::Domain {
            name: "target_pL",
            value: target,
            expected: "(0, b)",
        });
    }
    Ok(d_b as f64 + 2.0 * (b / target).ln() / (a / b).ln())
}

/// Logical rate predicted at distance `d` from the two largest simulated
/// distances' rates `a` (at `d_b − 2`) and `b` (at `d_b`).
pub fn extrapolated_rate(a: f64, b: f64, d_b: usize, d: usize) -> f64 {
    b / (a / b).powf((d as f64 - d_b as f64) / 2.0)
}

pub fn extrapolate_distance(a: f64, b: f64, d_b: usize, target: f64) -> Result<usize> {
    extrapolate_distance_with(a, b, d_b, target, DistanceRule::Odd)
}

pub fn extrapolate_distance_with(
    a: f64,
    b: f64,
    d_b: usize,
    target: f64,
    rule: DistanceRule,
) -> Result<usize> {
    let real = required_distance_real(a, b, d_b, target)?;
    // absorb floating noise when the solution is an exact integer
    let mut d = ((real - 1e-9).ceil() as usize).max(d_b);
    if rule == DistanceRule::Odd && d % 2 == 0 {
        d += 1;
    }
    Ok(d)
}
