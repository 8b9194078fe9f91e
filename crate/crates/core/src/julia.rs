//! Local volume-growth indicators: Monte-Carlo estimates of the mass of
//! the iterate graph above a small chordal ball, the normalized indicator
//! that separates bounded from divergent local growth, and grid scans.
//!
//! The mass of the n-th graph over a ball B is estimated as the sum of its
//! two projection masses, exact for curves:
//!
//! ```text
//! volume(r, n) = area(B) * d0^n * (1 + E[D^2])
//! ```
//!
//! where `D` is the product of spherical branch derivatives along a
//! uniformly sampled n-branch from an area-uniform point of B, and
//! `area(B) = pi r^2` (total sphere area normalized to pi). The first
//! summand is the first-projection mass of the `d0^n` sheets, the second
//! the derivative-energy integral of the second projection. Uniform branch
//! sampling makes `d0^n * E[D^2]` an unbiased estimator of the branch sum.
//!
//! Rates are area-normalized growth exponents, `ln(volume/area)/n`: the
//! `ln(area)/n` offset carries no growth information and would push every
//! finite-n rate below the structural `ln d0` floor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corresp::Correspondence;
use crate::error::{CoreError, Result};
use crate::orbits::{forward_images, point, ProjPoint, RootFinder};

const JITTER_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct PhiRow {
    pub r: f64,
    pub n: u32,
    pub volume_est: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiEstimate {
    pub x: String,
    pub rows: Vec<PhiRow>,
    /// min over r of the rate at the largest n; no extrapolation.
    pub phi_headline: f64,
    /// Bootstrap standard error of the headline rate over branch resamples.
    pub stderr: f64,
    pub d0: f64,
    pub effective_samples: usize,
    pub dropped_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiRow {
    pub r: f64,
    pub n: u32,
    /// `volume / (r^2 d0^n)`
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiEstimate {
    pub x: String,
    pub rows: Vec<PsiRow>,
    /// value at the smallest radius and largest n
    pub headline: f64,
    /// set when the sequence in n at the smallest radius grows
    /// monotonically by more than 10x over the grid
    pub divergent: bool,
    pub d0: f64,
    pub effective_samples: usize,
    pub dropped_samples: usize,
    pub seed: u64,
}

/// Log of branch-derivative products, one inner vector per requested n.
struct BranchSamples {
    /// `log_d[k][s]` = ln D for sample s stopped at depth `ns[k]`
    log_d: Vec<Vec<f64>>,
    kept: usize,
    dropped: usize,
}

/// Walks `mc_points * mc_branches` random branches from area-uniform
/// points of the chordal ball `B(x, r)`, recording the log derivative
/// product at each depth in `ns` (sorted ascending). Branches through a
/// critical fiber are retried once from a jittered sample point, then
/// dropped.
fn branch_samples(
    f: &Correspondence,
    x: &ProjPoint,
    r: f64,
    ns: &[u32],
    mc_points: usize,
    mc_branches: usize,
    rng: &mut ChaCha8Rng,
    finder: &dyn RootFinder,
) -> BranchSamples {
    let n_max = *ns.last().expect("non-empty n grid");
    let mut log_d: Vec<Vec<f64>> = vec![Vec::with_capacity(mc_points * mc_branches); ns.len()];
    let mut kept = 0usize;
    let mut dropped = 0usize;

    let walk = |z0: &ProjPoint, choices: &[usize], finder: &dyn RootFinder| -> Option<Vec<f64>> {
        let mut acc = 0.0f64;
        let mut out = Vec::with_capacity(ns.len());
        let mut x = *z0;
        let mut slot = 0usize;
        for (step, &pick) in choices.iter().enumerate() {
            let fiber = forward_images(f, &x, finder).ok()?;
            let entry = &fiber[pick % fiber.len()];
            // only a critical fiber (multiple root, infinite derivative)
            // invalidates the walk; a contracting z-critical step is
            // honest zero-derivative mass
            if !entry.simple_in_w || !entry.deriv_sph.is_finite() {
                return None;
            }
            acc += entry.deriv_sph.max(f64::MIN_POSITIVE).ln();
            x = entry.point;
            if ns[slot] == step as u32 + 1 {
                out.push(acc);
                slot += 1;
                if slot == ns.len() {
                    break;
                }
            }
        }
        Some(out)
    };

    let (l0, _) = f.lambda();
    for _ in 0..mc_points {
        let z0 = point::uniform_cap(x, r, rng);
        for _ in 0..mc_branches {
            let choices: Vec<usize> = (0..n_max)
                .map(|_| rng.gen_range(0..l0 as usize))
                .collect();
            let res = walk(&z0, &choices, finder).or_else(|| {
                let moved = z0.jitter(JITTER_EPS, rng);
                walk(&moved, &choices, finder)
            });
            match res {
                Some(values) => {
                    kept += 1;
                    for (k, v) in values.into_iter().enumerate() {
                        log_d[k].push(v);
                    }
                }
                None => dropped += 1,
            }
        }
    }
    BranchSamples {
        log_d,
        kept,
        dropped,
    }
}

/// Stable `ln(mean(exp(v)))` over possibly `-inf` entries.
fn log_mean_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - m).exp()).sum();
    m + (sum / values.len() as f64).ln()
}

/// `ln(1 + e^x)` without overflow.
fn ln_1p_exp(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x > 50.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

fn area(r: f64) -> f64 {
    std::f64::consts::PI * r * r
}

fn validate_grids(r_list: &[f64], n_list: &[u32]) -> Result<(Vec<f64>, Vec<u32>)> {
    if r_list.is_empty() || n_list.is_empty() {
        return Err(CoreError::Invalid("empty (r, n) grid".into()));
    }
    if r_list.iter().any(|&r| !(r > 0.0 && r <= 0.5)) {
        return Err(CoreError::Invalid("radii must lie in (0, 0.5]".into()));
    }
    let mut rs = r_list.to_vec();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    Ok((rs, ns))
}

/// Rate and raw volume for one grid cell from its log-derivative samples.
fn cell(r: f64, n: u32, d0: f64, log_d: &[f64]) -> (f64, f64) {
    let ln_e = log_mean_exp(&log_d.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
    let ln_growth = n as f64 * d0.ln() + ln_1p_exp(ln_e);
    let rate = ln_growth / n as f64;
    let volume = (area(r).ln() + ln_growth).exp().min(1e300);
    (rate, volume)
}

/// Monte-Carlo estimate of the local volume-growth indicator at `x`.
pub fn phi_estimate(
    f: &Correspondence,
    x: &ProjPoint,
    r_list: &[f64],
    n_list: &[u32],
    mc_points: usize,
    mc_branches: usize,
    seed: u64,
    finder: &dyn RootFinder,
) -> Result<PhiEstimate> {
    let (rs, ns) = validate_grids(r_list, n_list)?;
    let (l0, _) = f.lambda();
    let d0 = l0 as f64;
    let n_max = *ns.last().unwrap();

    let mut rows = Vec::new();
    let mut kept = 0usize;
    let mut dropped = 0usize;
    let mut headline = f64::INFINITY;
    let mut headline_samples: Vec<f64> = Vec::new();
    for (ri, &r) in rs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ri as u64 + 1);
        let samples = branch_samples(f, x, r, &ns, mc_points, mc_branches, &mut rng, finder);
        kept += samples.kept;
        dropped += samples.dropped;
        for (k, &n) in ns.iter().enumerate() {
            if samples.log_d[k].is_empty() {
                return Err(CoreError::FiberSolve(
                    "all branch samples were dropped".into(),
                ));
            }
            let (rate, volume) = cell(r, n, d0, &samples.log_d[k]);
            if n == n_max && rate < headline {
                headline = rate;
                headline_samples = samples.log_d[k].clone();
            }
            rows.push(PhiRow {
                r,
                n,
                volume_est: volume,
                rate,
            });
        }
    }

    // bootstrap the headline rate over branch resamples
    let mut boot_rng = ChaCha8Rng::seed_from_u64(seed);
    boot_rng.set_stream(u64::MAX);
    let mut rates = Vec::with_capacity(200);
    for _ in 0..200 {
        let resample: Vec<f64> = (0..headline_samples.len())
            .map(|_| headline_samples[boot_rng.gen_range(0..headline_samples.len())])
            .collect();
        let (rate, _) = cell(rs[0], n_max, d0, &resample);
        rates.push(rate);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let var = rates.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / rates.len() as f64;

    Ok(PhiEstimate {
        x: x.to_string(),
        rows,
        phi_headline: headline,
        stderr: var.sqrt(),
        d0,
        effective_samples: kept,
        dropped_samples: dropped,
        seed,
    })
}

/// The normalized indicator `volume / (r^2 d0^n)`: bounded on Fatou-type
/// points, divergent in `n` on Julia-type points.
pub fn psi_estimate(
    f: &Correspondence,
    x: &ProjPoint,
    r_list: &[f64],
    n_list: &[u32],
    mc_points: usize,
    mc_branches: usize,
    seed: u64,
    finder: &dyn RootFinder,
) -> Result<PsiEstimate> {
    let (rs, ns) = validate_grids(r_list, n_list)?;
    let (l0, _) = f.lambda();
    let d0 = l0 as f64;

    let mut rows = Vec::new();
    let mut kept = 0usize;
    let mut dropped = 0usize;
    let mut smallest_r_values: Vec<f64> = Vec::new();
    for (ri, &r) in rs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ri as u64 + 1);
        let samples = branch_samples(f, x, r, &ns, mc_points, mc_branches, &mut rng, finder);
        kept += samples.kept;
        dropped += samples.dropped;
        for (k, &n) in ns.iter().enumerate() {
            if samples.log_d[k].is_empty() {
                return Err(CoreError::FiberSolve(
                    "all branch samples were dropped".into(),
                ));
            }
            let ln_e = log_mean_exp(
                &samples.log_d[k]
                    .iter()
                    .map(|v| 2.0 * v)
                    .collect::<Vec<_>>(),
            );
            // volume/(r^2 d0^n) = pi (1 + E[D^2])
            let value = (std::f64::consts::PI.ln() + ln_1p_exp(ln_e)).exp().min(1e300);
            if ri == 0 {
                smallest_r_values.push(value);
            }
            rows.push(PsiRow { r, n, value });
        }
    }
    let headline = *smallest_r_values.last().unwrap();
    let monotone = smallest_r_values.windows(2).all(|w| w[1] >= w[0]);
    let divergent = monotone
        && smallest_r_values.len() >= 2
        && headline > 10.0 * smallest_r_values[0];
    Ok(PsiEstimate {
        x: x.to_string(),
        rows,
        headline,
        divergent,
        d0,
        effective_samples: kept,
        dropped_samples: dropped,
        seed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanGrid {
    pub window: (f64, f64, f64, f64),
    pub resolution: usize,
    pub r: f64,
    pub n: u32,
    pub seed: u64,
    /// (re, im, phi value); NaN records a per-pixel failure.
    pub rows: Vec<(f64, f64, f64)>,
}

impl ScanGrid {
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "re,im,value")?;
        for (re, im, v) in &self.rows {
            writeln!(out, "{re},{im},{v}")?;
        }
        Ok(())
    }

    /// Companion gnuplot script for the CSV.
    pub fn plot_script(&self, csv_name: &str) -> String {
        format!(
            "set datafile separator ','\n\
             set view map\n\
             set size ratio -1\n\
             set palette defined (0 'white', 1 'dark-blue')\n\
             splot '{csv_name}' using 1:2:3 every ::1 with points pt 5 ps 0.5 palette notitle\n"
        )
    }
}

/// Per-pixel local growth rates over a complex window (reduced budgets,
/// pixel-parallel, per-pixel RNG streams split from the master seed).
#[allow(clippy::too_many_arguments)]
pub fn scan(
    f: &Correspondence,
    window: (f64, f64, f64, f64),
    resolution: usize,
    r: f64,
    n: u32,
    mc_points: usize,
    mc_branches: usize,
    seed: u64,
    finder: &dyn RootFinder,
) -> Result<ScanGrid> {
    if resolution == 0 || resolution > 2048 {
        return Err(CoreError::Invalid(
            "resolution must lie in 1..=2048".into(),
        ));
    }
    let (re_lo, re_hi, im_lo, im_hi) = window;
    if !(re_hi > re_lo && im_hi > im_lo) {
        return Err(CoreError::Invalid("empty scan window".into()));
    }
    let (l0, _) = f.lambda();
    let d0 = l0 as f64;
    let dx = (re_hi - re_lo) / resolution as f64;
    let dy = (im_hi - im_lo) / resolution as f64;
    let ns = [n];

    let rows: Vec<(f64, f64, f64)> = (0..resolution * resolution)
        .into_par_iter()
        .map(|pix| {
            let ix = pix % resolution;
            let iy = pix / resolution;
            let re = re_lo + dx * (ix as f64 + 0.5);
            let im = im_lo + dy * (iy as f64 + 0.5);
            let x = ProjPoint::from_affine(num_complex::Complex64::new(re, im));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(pix as u64 + 1);
            let samples = branch_samples(f, &x, r, &ns, mc_points, mc_branches, &mut rng, finder);
            let value = if samples.log_d[0].is_empty() {
                f64::NAN
            } else {
                cell(r, n, d0, &samples.log_d[0]).0
            };
            (re, im, value)
        })
        .collect();

    Ok(ScanGrid {
        window,
        resolution,
        r,
        n,
        seed,
        rows,
    })
}
