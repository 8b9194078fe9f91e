//! The acceptance checks as callable criteria, shared by the `acceptance`
//! integration suite (full budgets) and the CLI `selftest` command
//! (reduced budgets). Each criterion reports pass/fail with details and
//! elapsed time; thresholds are pinned here, not configurable.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::bipoly::BiPoly;
use crate::algebra::gcd::divides;
use crate::corresp::{
    compose, fixed_point_poly, iterate, parse_correspondence, random_correspondence,
    Correspondence, DEFAULT_DEGREE_CAP,
};
use crate::entropy::{estimate_entropy, lov_report, StartDesign};
use crate::error::Result;
use crate::julia::{phi_estimate, psi_estimate};
use crate::orbits::{default_finder, forward_images, point, ProjPoint};

pub const CRITERIA_COUNT: u32 = 10;
const SEED: u64 = 7;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub seconds: f64,
}

/// Budget profile: `full` runs the stated acceptance budgets, otherwise a
/// reduced profile that exercises the same checks faster.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub full: bool,
}

fn corr(text: &str) -> Correspondence {
    parse_correspondence(text).expect("valid correspondence").0
}

fn finish(
    id: u32,
    name: &'static str,
    started: Instant,
    limit_s: f64,
    outcome: Result<(bool, String)>,
) -> CriterionResult {
    let seconds = started.elapsed().as_secs_f64();
    let (mut passed, mut details) = match outcome {
        Ok((p, d)) => (p, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds >= limit_s {
        passed = false;
        details = format!("{details}; runtime {seconds:.1}s exceeded {limit_s:.0}s");
    }
    CriterionResult {
        id,
        name,
        passed,
        details,
        seconds,
    }
}

fn c1_quadric_degrees(_b: Budget) -> Result<(bool, String)> {
    let f = corr("w^2 - z^2 - 1");
    let out = iterate(&f, 5, DEFAULT_DEGREE_CAP)?;
    let mut ok = out.cap_hit.is_none() && out.orders.len() == 5;
    let mut got = Vec::new();
    for (k, (chain, _)) in out.orders.iter().enumerate() {
        let want = 2u64.pow(k as u32 + 1);
        let (l0, l1) = chain.lambda();
        got.push(format!("n={} lambda=({l0},{l1})", k + 1));
        ok &= l0 == want && l1 == want;
    }
    Ok((ok, got.join(", ")))
}

fn theorem_suite(b: Budget) -> Vec<Correspondence> {
    let mut suite = vec![corr("w^2 - z^2 - 1"), corr("w - z^2")];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let extra = if b.full { 8 } else { 4 };
    for _ in 0..extra {
        suite.push(random_correspondence(&mut rng, (2, 2)));
    }
    suite
}

fn c2_theorem_inequality(b: Budget) -> Result<(bool, String)> {
    let finder = default_finder();
    let (starts, per_start, n_list): (usize, usize, Vec<u32>) = if b.full {
        (16, 256, vec![24, 48, 96])
    } else {
        (8, 64, vec![16, 48])
    };
    let design = StartDesign::UniformSphere { count: starts };
    let eps = [0.1, 0.3];
    let mut ok = true;
    let mut lines = Vec::new();
    for (i, f) in theorem_suite(b).iter().enumerate() {
        let lov = lov_report(f, 4, DEFAULT_DEGREE_CAP)?;
        let table = estimate_entropy(
            f,
            &design,
            &n_list,
            &eps,
            starts * per_start,
            SEED,
            finder,
        )?;
        let pass = table.headline_rate <= lov.lov_value + 0.05;
        ok &= pass;
        lines.push(format!(
            "[{i}] {f}: headline {:.4} vs lov {:.4} {}",
            table.headline_rate,
            lov.lov_value,
            if pass { "ok" } else { "VIOLATED" }
        ));
    }
    Ok((ok, lines.join("; ")))
}

fn c3_entropy_vanishing(b: Budget) -> Result<(bool, String)> {
    let f = corr("w^2 - z^2 - 1");
    let (starts, n) = if b.full { (20, 12) } else { (6, 9) };
    let design = StartDesign::UniformSphere { count: starts };
    // budget large enough for full enumeration: lambda0^n orbits per start
    let budget = starts * 2usize.pow(n);
    let table = estimate_entropy(
        &f,
        &design,
        &[n],
        &[0.1],
        budget,
        SEED,
        default_finder(),
    )?;
    let ok = table.headline_rate <= 0.15;
    Ok((
        ok,
        format!(
            "headline rate {:.4} (target <= 0.15, true entropy 0); count {} at n={n}, eps=0.1",
            table.headline_rate,
            table.rows.last().map(|r| r.separated_count).unwrap_or(0)
        ),
    ))
}

fn c4_holomorphic_equality(b: Budget) -> Result<(bool, String)> {
    let f = corr("w - z^2");
    let starts = if b.full { 20_000 } else { 4_000 };
    let design = StartDesign::CircleBand {
        count: starts,
        width: 0.1,
    };
    let table = estimate_entropy(
        &f,
        &design,
        &[10],
        &[0.05],
        starts,
        SEED,
        default_finder(),
    )?;
    let lo = std::f64::consts::LN_2 - 0.2;
    let hi = std::f64::consts::LN_2 + 0.05;
    let ok = table.headline_rate >= lo && table.headline_rate <= hi;
    Ok((
        ok,
        format!(
            "headline rate {:.4}, window [{lo:.4}, {hi:.4}], count {}",
            table.headline_rate,
            table.rows.last().map(|r| r.separated_count).unwrap_or(0)
        ),
    ))
}

/// Multiset match of fiber points at chordal tolerance.
fn multiset_match(a: &[ProjPoint], b: &[ProjPoint], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for p in a {
        for (i, q) in b.iter().enumerate() {
            if !used[i] && p.chordal(q) <= tol {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn c5_composition_oracle(b: Budget) -> Result<(bool, String)> {
    let finder = default_finder();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pairs = if b.full { 20 } else { 6 };
    let points = if b.full { 10 } else { 4 };
    let mut checked = 0usize;
    for _ in 0..pairs {
        let f = random_correspondence(&mut rng, (2, 2));
        let g = random_correspondence(&mut rng, (2, 2));
        let (fg, _) = compose(&f, &g)?;
        let mut tested = 0;
        let mut tries = 0;
        while tested < points && tries < 200 {
            tries += 1;
            let x = point::uniform_sphere(&mut rng);
            let Ok(two_step) = two_step_images(&f, &g, &x) else {
                continue;
            };
            let Some(two_step) = two_step else {
                continue; // critical fiber on route, resample
            };
            let direct = forward_images(&fg, &x, finder)?;
            if direct.iter().any(|e| !e.simple_in_w) {
                continue;
            }
            let direct_pts: Vec<ProjPoint> = direct.iter().map(|e| e.point).collect();
            if !multiset_match(&direct_pts, &two_step, 1e-8) {
                return Ok((
                    false,
                    format!("fiber mismatch for f={f}, g={g} at x={x}"),
                ));
            }
            tested += 1;
            checked += 1;
        }
    }
    Ok((true, format!("{checked} regular fibers matched to 1e-8")))
}

fn two_step_images(
    f: &Correspondence,
    g: &Correspondence,
    x: &ProjPoint,
) -> Result<Option<Vec<ProjPoint>>> {
    let finder = default_finder();
    let mid = forward_images(g, x, finder)?;
    if mid.iter().any(|e| !e.simple_in_w) {
        return Ok(None);
    }
    let mut out = Vec::new();
    for m in &mid {
        let next = forward_images(f, &m.point, finder)?;
        if next.iter().any(|e| !e.simple_in_w) {
            return Ok(None);
        }
        out.extend(next.iter().map(|e| e.point));
    }
    Ok(Some(out))
}

fn c6_diagonal_law(b: Budget) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let count = if b.full { 20 } else { 8 };
    let diag = BiPoly::from_rows(vec![
        vec![num_bigint::BigInt::from(0), num_bigint::BigInt::from(1)],
        vec![num_bigint::BigInt::from(-1), num_bigint::BigInt::from(0)],
    ]);
    for i in 0..count {
        let f = random_correspondence(&mut rng, (2, 2));
        let (c, _) = compose(&f, &f.adjoint())?;
        if !divides(&diag, &c.chain_poly())? {
            return Ok((false, format!("diagonal missing for sample {i}: f={f}")));
        }
    }
    Ok((true, format!("{count} random chains contain the diagonal")))
}

fn c7_submultiplicativity(b: Budget) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let count = if b.full { 50 } else { 15 };
    for i in 0..count {
        let f = random_correspondence(&mut rng, (2, 2));
        let g = random_correspondence(&mut rng, (2, 2));
        let (fg, _) = compose(&f, &g)?;
        let (a0, a1) = f.lambda();
        let (b0, b1) = g.lambda();
        let (c0, c1) = fg.lambda();
        if c0 > a0 * b0 || c1 > a1 * b1 {
            return Ok((
                false,
                format!("sample {i}: lambda({fg}) = ({c0},{c1}) exceeds ({},{})", a0 * b0, a1 * b1),
            ));
        }
    }
    Ok((true, format!("{count} random pairs satisfy the product bound")))
}

fn c8_lefschetz(_b: Budget) -> Result<(bool, String)> {
    let f = corr("w - z^2");
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 1..=3u32 {
        let rep = fixed_point_poly(&f, n, DEFAULT_DEGREE_CAP)?;
        let want = 1 + 2u64.pow(n);
        let total = rep.affine_count + rep.infinity_count;
        ok &= !rep.diagonal_component && total == want && rep.lefschetz == want;
        lines.push(format!(
            "n={n}: affine {} + inf {} = {} (want {want})",
            rep.affine_count, rep.infinity_count, total
        ));
    }
    Ok((ok, lines.join("; ")))
}

fn c9_phi_pinch(b: Budget) -> Result<(bool, String)> {
    let finder = default_finder();
    let points = if b.full { 10 } else { 4 };
    let (mc_pts, mc_br, n_list) = if b.full {
        (24, 24, vec![8, 16])
    } else {
        (12, 12, vec![6, 12])
    };
    let r_list = [0.3, 0.4];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);

    let pinch = corr("w^2 - z^2 - 1");
    let ln2 = std::f64::consts::LN_2;
    let mut worst_pinch: f64 = 0.0;
    for _ in 0..points {
        let x = point::uniform_sphere(&mut rng);
        let est = phi_estimate(&pinch, &x, &r_list, &n_list, mc_pts, mc_br, SEED, finder)?;
        worst_pinch = worst_pinch.max((est.phi_headline - ln2).abs());
        if (est.phi_headline - ln2).abs() > 0.35 {
            return Ok((
                false,
                format!("pinch failed at {x}: headline {:.4}", est.phi_headline),
            ));
        }
    }

    let flat = corr("w - 2*z");
    let mut worst_flat: f64 = 0.0;
    for _ in 0..points {
        let x = point::uniform_sphere(&mut rng);
        let est = phi_estimate(&flat, &x, &r_list, &n_list, 4 * mc_pts, 1, SEED, finder)?;
        worst_flat = worst_flat.max(est.phi_headline.abs());
        if est.phi_headline.abs() > 0.1 {
            return Ok((
                false,
                format!("flat map failed at {x}: headline {:.4}", est.phi_headline),
            ));
        }
    }
    Ok((
        true,
        format!(
            "pinch |phi - ln 2| <= {worst_pinch:.4} (tol 0.35); linear map |phi| <= {worst_flat:.4} (tol 0.1)"
        ),
    ))
}

/// Independent escape-time classification for the squaring map: a point is
/// Fatou-type when its orbit reaches the superattracting basin of 0 or
/// infinity within the iteration budget.
fn escape_time_is_julia(x: Complex64, iters: u32) -> bool {
    let mut z = x;
    for _ in 0..iters {
        z = z * z;
        let m = z.norm();
        if !(0.5..=2.0).contains(&m) {
            return false;
        }
    }
    true
}

fn c10_psi_dichotomy(b: Budget) -> Result<(bool, String)> {
    let finder = default_finder();
    let f = corr("w - z^2");
    // the contributing annulus around a Julia point is thin, so point
    // sampling has to be dense for the divergence flag to be stable
    let (mc_pts, n_list) = if b.full {
        (512, vec![4, 8, 12])
    } else {
        (256, vec![4, 8])
    };
    let r_list = [0.05, 0.1];

    let at_zero = psi_estimate(
        &f,
        &ProjPoint::zero(),
        &r_list,
        &n_list,
        mc_pts,
        1,
        SEED,
        finder,
    )?;
    let one = ProjPoint::from_affine(Complex64::new(1.0, 0.0));
    let at_one = psi_estimate(&f, &one, &r_list, &n_list, mc_pts, 1, SEED, finder)?;

    let oracle_zero_julia = escape_time_is_julia(Complex64::new(0.0, 0.0), 40);
    let oracle_one_julia = escape_time_is_julia(Complex64::new(1.0, 0.0), 40);

    let ok = !at_zero.divergent
        && at_one.divergent
        && !oracle_zero_julia
        && oracle_one_julia;
    Ok((
        ok,
        format!(
            "psi(0) headline {:.3} divergent={}; psi(1) headline {:.3e} divergent={}; \
             escape-time oracle: 0 -> {}, 1 -> {}",
            at_zero.headline,
            at_zero.divergent,
            at_one.headline,
            at_one.divergent,
            if oracle_zero_julia { "julia" } else { "fatou" },
            if oracle_one_julia { "julia" } else { "fatou" },
        ),
    ))
}

pub fn run_criterion(id: u32, budget: Budget) -> CriterionResult {
    let start = Instant::now();
    match id {
        1 => finish(
            1,
            "quadric example degrees are exactly 2^n",
            start,
            5.0,
            c1_quadric_degrees(budget),
        ),
        2 => finish(
            2,
            "entropy headline <= degree-growth bound on the suite",
            start,
            300.0,
            c2_theorem_inequality(budget),
        ),
        3 => finish(
            3,
            "entropy vanishing for w^2 = z^2 + 1",
            start,
            120.0,
            c3_entropy_vanishing(budget),
        ),
        4 => finish(
            4,
            "holomorphic equality case near the circle",
            start,
            180.0,
            c4_holomorphic_equality(budget),
        ),
        5 => finish(
            5,
            "composition fiber oracle",
            start,
            60.0,
            c5_composition_oracle(budget),
        ),
        6 => finish(6, "diagonal law", start, 60.0, c6_diagonal_law(budget)),
        7 => finish(
            7,
            "degree submultiplicativity",
            start,
            60.0,
            c7_submultiplicativity(budget),
        ),
        8 => finish(8, "Lefschetz fixed-point count", start, 10.0, c8_lefschetz(budget)),
        9 => finish(9, "phi pinch bounds", start, 240.0, c9_phi_pinch(budget)),
        10 => finish(
            10,
            "psi dichotomy with escape-time oracle",
            start,
            120.0,
            c10_psi_dichotomy(budget),
        ),
        other => CriterionResult {
            id: other,
            name: "unknown criterion",
            passed: false,
            details: "no such criterion".into(),
            seconds: 0.0,
        },
    }
}

pub fn run_all(budget: Budget) -> Vec<CriterionResult> {
    (1..=CRITERIA_COUNT)
        .map(|id| run_criterion(id, budget))
        .collect()
}
