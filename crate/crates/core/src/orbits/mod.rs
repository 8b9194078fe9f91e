//! Numerical orbit machinery on the sphere: fiber solving in dual charts,
//! spherical branch derivatives, regularity checks and seeded orbit
//! sampling.
//!
//! Sampling is parallel over start points with one counter-based RNG
//! stream per start, so output is a pure function of `(inputs, seed)`
//! regardless of thread schedule.

pub mod point;
pub mod roots;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::bipoly::{BiPoly, Var};
use crate::algebra::unipoly::{specialize, UniPolyC};
use crate::corresp::Correspondence;
use crate::error::{CoreError, Result};
pub use point::{Chart, ProjPoint};
pub use roots::{default_finder, RootFinder};

/// Residual bound (relative to coefficient scale) for accepted fiber roots.
const ROOT_RESIDUAL_REL: f64 = 1e-10;
/// Chordal radius for clustering multiple roots.
const CLUSTER_TOL: f64 = 1e-8;
/// Relative derivative threshold below which a root counts as multiple.
/// Sits just above float noise so the 1e-9 jitter can clear a critical
/// fiber; genuinely multiple roots are also caught by value clustering.
const SIMPLE_TOL: f64 = 1e-12;
/// Chordal jitter applied once to orbits that hit a critical fiber.
const JITTER_EPS: f64 = 1e-9;

/// Which sheet of the chain a step took: component position and copy
/// number (1-based, at most the component multiplicity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchIndex {
    pub component: u32,
    pub copy: u32,
}

/// One point of a fiber `f(x)` with local analytic data.
#[derive(Debug, Clone)]
pub struct BranchImage {
    pub point: ProjPoint,
    pub index: BranchIndex,
    /// Spherical derivative `|dw/dz| (1+|z|^2)/(1+|w|^2)` of the branch;
    /// infinite exactly when the root is not simple in `w`.
    pub deriv_sph: f64,
    pub simple_in_w: bool,
    pub simple_in_z: bool,
}

/// An n-orbit: points interleaved (implicitly) with branch indices.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub start_id: u32,
    pub points: Vec<ProjPoint>,
    pub indices: Vec<BranchIndex>,
    pub derivs: Vec<f64>,
    pub regular: bool,
    /// Inverse sampling probability (1 for enumerated orbits).
    pub weight: f64,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Bookkeeping from a sampling run.
#[derive(Debug, Clone, Default)]
pub struct SampleDiagnostics {
    pub produced: usize,
    /// Orbits dropped because a critical fiber persisted after one jitter.
    pub dropped_singular: usize,
    /// Orbits dropped because a fiber solve failed outright.
    pub solve_failures: usize,
    /// Orbits that needed the one-shot jitter and are flagged non-regular.
    pub jittered: usize,
    /// Starts whose orbit tree was enumerated exhaustively.
    pub enumerated_starts: usize,
}

struct ChartPolys {
    /// p with the source chart applied (z-flip when the source point lives
    /// in the back chart)
    front: BiPoly,
    /// additionally w-flipped, for roots in the back target chart
    back: BiPoly,
}

fn chart_polys(p: &BiPoly, src: Chart) -> ChartPolys {
    let front = match src {
        Chart::Front => p.clone(),
        Chart::Back => p.flip_z(),
    };
    let back = front.flip_w();
    ChartPolys { front, back }
}

fn newton_polish(u: &UniPolyC, mut x: Complex64) -> Complex64 {
    let du = u.derivative();
    for _ in 0..8 {
        let fx = u.eval(x);
        let dfx = du.eval(x);
        if dfx.norm() == 0.0 {
            break;
        }
        let step = fx / dfx;
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

/// Solves one component's fiber over `x`, returning `deg_w` roots counted
/// with multiplicity (including points at infinity from degree drop).
fn component_fiber(
    p: &BiPoly,
    x: &ProjPoint,
    finder: &dyn RootFinder,
) -> Result<Vec<(ProjPoint, f64, bool, bool)>> {
    let (src, x_val) = x.chart_value();
    let polys = chart_polys(p, src);
    let dw = p.deg(Var::W).expect("component is nonzero");

    let u_front = specialize(&polys.front, Var::Z, x_val);
    let u_back = specialize(&polys.back, Var::Z, x_val);
    if u_front.is_zero() {
        return Err(CoreError::FiberSolve(format!(
            "specialization of {p} vanished at {x}"
        )));
    }
    let finite_deg = u_front.degree().unwrap_or(0);
    let n_inf = dw - finite_deg;

    let mut raw: Vec<(Chart, Complex64)> = Vec::with_capacity(dw);
    if finite_deg >= 1 {
        for w0 in finder.roots(u_front.coeffs())? {
            if w0.norm() <= 1.0 {
                raw.push((Chart::Front, newton_polish(&u_front, w0)));
            } else {
                let v0 = newton_polish(&u_back, w0.inv());
                raw.push((Chart::Back, v0));
            }
        }
    }
    for _ in 0..n_inf {
        raw.push((Chart::Back, Complex64::new(0.0, 0.0)));
    }

    // residual contract, in the chart of evaluation
    for (chart, v) in &raw {
        let (u, scale) = match chart {
            Chart::Front => (&u_front, u_front.scale()),
            Chart::Back => (&u_back, u_back.scale()),
        };
        let resid = u.eval(*v).norm();
        if resid > ROOT_RESIDUAL_REL * scale * (u.coeffs().len() as f64) {
            return Err(CoreError::FiberSolve(format!(
                "residual {:.3e} above bound for {p} at {x}",
                resid / scale.max(f64::MIN_POSITIVE)
            )));
        }
    }

    // derivative data per root, in its own chart pair
    let du_front_z = specialize(&polys.front.derivative(Var::Z), Var::Z, x_val);
    let du_front_w = specialize(&polys.front.derivative(Var::W), Var::Z, x_val);
    let du_back_z = specialize(&polys.back.derivative(Var::Z), Var::Z, x_val);
    let du_back_w = specialize(&polys.back.derivative(Var::W), Var::Z, x_val);

    let mut out: Vec<(ProjPoint, f64, bool, bool)> = Vec::with_capacity(dw);
    for (chart, v) in &raw {
        let (pz, pw, uscale) = match chart {
            Chart::Front => (du_front_z.eval(*v), du_front_w.eval(*v), u_front.scale()),
            Chart::Back => (du_back_z.eval(*v), du_back_w.eval(*v), u_back.scale()),
        };
        let simple_w = pw.norm() > SIMPLE_TOL * uscale;
        let simple_z = pz.norm() > SIMPLE_TOL * uscale;
        let deriv = if simple_w {
            let dwdz = (pz / pw).norm();
            dwdz * (1.0 + x_val.norm_sqr()) / (1.0 + v.norm_sqr())
        } else {
            f64::INFINITY
        };
        out.push((ProjPoint::from_chart(*chart, *v), deriv, simple_w, simple_z));
    }

    // deterministic ordering, then multiple-root clustering
    out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    for i in 0..out.len() {
        for j in (i + 1)..out.len() {
            if out[i].0.chordal(&out[j].0) <= CLUSTER_TOL {
                out[i].2 = false;
                out[j].2 = false;
            }
        }
    }
    Ok(out)
}

/// All forward images of `x` under the chain: `lambda0` entries counting
/// component multiplicities and root multiplicities. A multiple root is
/// flagged (`simple_in_w` false), not an error.
pub fn forward_images(
    f: &Correspondence,
    x: &ProjPoint,
    finder: &dyn RootFinder,
) -> Result<Vec<BranchImage>> {
    let mut out = Vec::new();
    for (ci, (p, mult)) in f.components().iter().enumerate() {
        let fiber = component_fiber(p, x, finder)?;
        for (point, deriv_sph, simple_w, simple_z) in fiber {
            for copy in 1..=*mult {
                out.push(BranchImage {
                    point,
                    index: BranchIndex {
                        component: ci as u32,
                        copy: copy as u32,
                    },
                    deriv_sph,
                    simple_in_w: simple_w,
                    simple_in_z: simple_z,
                });
            }
        }
    }
    Ok(out)
}

enum WalkOutcome {
    Clean(Orbit),
    /// Completed but passed through at least one critical fiber.
    Singular,
    Failed,
}

fn walk_path(
    f: &Correspondence,
    finder: &dyn RootFinder,
    start_id: u32,
    start: &ProjPoint,
    choices: &[usize],
    weight: f64,
) -> WalkOutcome {
    let n = choices.len();
    let mut points = Vec::with_capacity(n + 1);
    let mut indices = Vec::with_capacity(n);
    let mut derivs = Vec::with_capacity(n);
    points.push(*start);
    // a multiple fiber root (w-critical) voids the sheet indexing and
    // triggers the jitter policy; a z-critical step only costs regularity
    let mut critical = false;
    let mut regular = true;
    let mut x = *start;
    for &pick in choices {
        let fiber = match forward_images(f, &x, finder) {
            Ok(fb) => fb,
            Err(_) => return WalkOutcome::Failed,
        };
        let entry = &fiber[pick % fiber.len()];
        if !entry.simple_in_w {
            critical = true;
        }
        if !(entry.simple_in_w && entry.simple_in_z) {
            regular = false;
        }
        points.push(entry.point);
        indices.push(entry.index);
        derivs.push(entry.deriv_sph);
        x = entry.point;
    }
    if critical {
        return WalkOutcome::Singular;
    }
    WalkOutcome::Clean(Orbit {
        start_id,
        points,
        indices,
        derivs,
        regular,
        weight,
    })
}

/// Walks one path with the critical-fiber policy: orbits through a
/// non-simple root are retried once from a jittered start (flagged
/// non-regular) and dropped if still singular.
fn walk_with_retry(
    f: &Correspondence,
    finder: &dyn RootFinder,
    start_id: u32,
    start: &ProjPoint,
    choices: &[usize],
    weight: f64,
    rng: &mut ChaCha8Rng,
    diag: &mut SampleDiagnostics,
) -> Option<Orbit> {
    match walk_path(f, finder, start_id, start, choices, weight) {
        WalkOutcome::Clean(o) => Some(o),
        WalkOutcome::Failed => {
            diag.solve_failures += 1;
            None
        }
        WalkOutcome::Singular => {
            let moved = start.jitter(JITTER_EPS, rng);
            match walk_path(f, finder, start_id, &moved, choices, weight) {
                WalkOutcome::Clean(mut o) => {
                    o.regular = false;
                    diag.jittered += 1;
                    Some(o)
                }
                _ => {
                    diag.dropped_singular += 1;
                    None
                }
            }
        }
    }
}

/// Reproducible orbit sampling: full enumeration per start when the tree
/// fits the per-start budget (`lambda0^n` paths), uniform random branch
/// walks otherwise (branch probability proportional to copy count).
/// Weights record inverse sampling probability.
pub fn sample_orbits(
    f: &Correspondence,
    starts: &[ProjPoint],
    n: u32,
    budget: usize,
    seed: u64,
    finder: &dyn RootFinder,
) -> Result<(Vec<Orbit>, SampleDiagnostics)> {
    if n < 1 {
        return Err(CoreError::Invalid("orbit depth must be at least 1".into()));
    }
    if budget < 1 || starts.is_empty() {
        return Err(CoreError::Invalid(
            "need a positive budget and at least one start".into(),
        ));
    }
    let per_start = (budget / starts.len()).max(1);
    let (l0, _) = f.lambda();
    let tree: Option<u128> = (l0 as u128).checked_pow(n);
    let enumerate = tree.map_or(false, |t| t <= per_start as u128);

    let results: Vec<(Vec<Orbit>, SampleDiagnostics)> = starts
        .par_iter()
        .enumerate()
        .map(|(sid, start)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(sid as u64 + 1);
            let mut diag = SampleDiagnostics::default();
            let mut orbits = Vec::new();
            if enumerate {
                diag.enumerated_starts = 1;
                let total = tree.unwrap() as usize;
                let mut choices = vec![0usize; n as usize];
                for path in 0..total {
                    let mut v = path;
                    for slot in choices.iter_mut() {
                        *slot = v % l0 as usize;
                        v /= l0 as usize;
                    }
                    if let Some(o) = walk_with_retry(
                        f, finder, sid as u32, start, &choices, 1.0, &mut rng, &mut diag,
                    ) {
                        orbits.push(o);
                    }
                }
            } else {
                let weight = (l0 as f64).powi(n as i32);
                for _ in 0..per_start {
                    let choices: Vec<usize> =
                        (0..n).map(|_| rng.gen_range(0..l0 as usize)).collect();
                    if let Some(o) = walk_with_retry(
                        f, finder, sid as u32, start, &choices, weight, &mut rng, &mut diag,
                    ) {
                        orbits.push(o);
                    }
                }
            }
            diag.produced = orbits.len();
            (orbits, diag)
        })
        .collect();

    let mut orbits = Vec::new();
    let mut diag = SampleDiagnostics::default();
    for (os, d) in results {
        orbits.extend(os);
        diag.produced += d.produced;
        diag.dropped_singular += d.dropped_singular;
        diag.solve_failures += d.solve_failures;
        diag.jittered += d.jittered;
        diag.enumerated_starts += d.enumerated_starts;
    }
    Ok((orbits, diag))
}

/// Orbit dump rows: start_id, orbit_id, step, re, im, chart, component,
/// copy, deriv_sph, regular.
pub fn write_orbits_csv(orbits: &[Orbit], out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(
        out,
        "start_id,orbit_id,step,re,im,chart,component,copy,deriv_sph,regular"
    )?;
    for (oid, orbit) in orbits.iter().enumerate() {
        for (step, pt) in orbit.points.iter().enumerate() {
            let (chart, v) = pt.chart_value();
            let chart_id = match chart {
                Chart::Front => 0,
                Chart::Back => 1,
            };
            if step == 0 {
                writeln!(
                    out,
                    "{},{},0,{},{},{},,,,{}",
                    orbit.start_id, oid, v.re, v.im, chart_id, orbit.regular
                )?;
            } else {
                let idx = orbit.indices[step - 1];
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    orbit.start_id,
                    oid,
                    step,
                    v.re,
                    v.im,
                    chart_id,
                    idx.component,
                    idx.copy,
                    orbit.derivs[step - 1],
                    orbit.regular
                )?;
            }
        }
    }
    Ok(())
}
