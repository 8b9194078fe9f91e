//! Oracle checks for the elimination engine: the exact resultant is
//! compared against the product-over-roots formula evaluated numerically
//! with an independent univariate solver, and against two-step root
//! multisets.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use corr1::algebra::bipoly::{BiPoly, Var};
use corr1::algebra::parse::parse_bipoly;
use corr1::algebra::resultant::resultant_middle;
use corr1::algebra::specialize;
use corr1::orbits::roots::default_finder;
use corr1::orbits::ProjPoint;

fn bi(s: &str) -> BiPoly {
    parse_bipoly(s).unwrap().0
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eval2(p: &BiPoly, z: Complex64, w: Complex64) -> Complex64 {
    specialize(p, Var::Z, z).eval(w)
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))
}

/// Product formula: Res_y(p, q)(x0, z0) = lc_p(x0)^deg_y(q) * prod q(y_i, z0)
/// over the y-roots of p(x0, .), up to one global sign fixed per polynomial
/// pair.
fn product_over_roots(p: &BiPoly, q: &BiPoly, x0: Complex64, z0: Complex64) -> Complex64 {
    let finder = default_finder();
    let py = specialize(p, Var::Z, x0); // polynomial in y
    let deg_q_y = q.deg(Var::Z).unwrap() as i32;
    let lc = *py.coeffs().last().unwrap();
    let mut acc = lc.powi(deg_q_y);
    for y in finder.roots(py.coeffs()).unwrap() {
        acc *= eval2(q, y, z0);
    }
    acc
}

fn check_resultant_against_roots(p: &BiPoly, q: &BiPoly, seed: u64) {
    let res = resultant_middle(p, q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sign: Option<f64> = None;
    let mut tested = 0;
    while tested < 20 {
        let x0 = rand_c(&mut rng);
        let z0 = rand_c(&mut rng);
        let lhs = eval2(&res, x0, z0);
        let rhs = product_over_roots(p, q, x0, z0);
        if rhs.norm() < 1e-6 || lhs.norm() < 1e-6 {
            continue; // avoid ratio instability near the zero set
        }
        let ratio = lhs / rhs;
        let s = sign.get_or_insert(ratio.re.signum());
        let expect = Complex64::new(*s, 0.0);
        assert!(
            (ratio - expect).norm() < 1e-8 * (1.0 + ratio.norm()),
            "ratio {ratio} for x0={x0} z0={z0}"
        );
        tested += 1;
    }
}

#[test]
fn resultant_matches_product_formula_on_quadric() {
    check_resultant_against_roots(&bi("w^2 - z^2 - 1"), &bi("w^2 - z^2 - 1"), 1);
}

#[test]
fn resultant_matches_product_formula_on_double_cover() {
    check_resultant_against_roots(&bi("w^2 - z"), &bi("w - z^2"), 2);
}

#[test]
fn resultant_matches_product_formula_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..10 {
        let p = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        check_resultant_against_roots(&p, &q, 100 + trial);
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> BiPoly {
    loop {
        let dz = rng.gen_range(1..=2);
        let dw = rng.gen_range(1..=2);
        let rows: Vec<Vec<BigInt>> = (0..=dz)
            .map(|_| {
                (0..=dw)
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect()
            })
            .collect();
        let p = BiPoly::from_rows(rows);
        // needs the middle variable on both sides and no degenerate slices
        if p.deg(Var::W) >= Some(1) && p.deg(Var::Z) >= Some(1) {
            return p;
        }
    }
}

/// Roots (with multiplicity) of Res_y(p, q)(x0, .) match the composed
/// two-step root multiset of p, q at x0 to 1e-8 chordal tolerance.
#[test]
fn specialize_and_resultant_commute() {
    let finder = default_finder();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tested = 0;
    while tested < 8 {
        let p = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        let Ok(res) = resultant_middle(&p, &q) else {
            continue;
        };
        if res.deg(Var::W).map_or(true, |d| d == 0) {
            continue;
        }
        let x0 = rand_c(&mut rng);

        // two-step multiset
        let py = specialize(&p, Var::Z, x0);
        if py.degree().map_or(true, |d| d == 0) {
            continue;
        }
        let mut two_step: Vec<ProjPoint> = Vec::new();
        let mut skip = false;
        for y in finder.roots(py.coeffs()).unwrap() {
            let qz = specialize(&q, Var::Z, y);
            let deg_drop = q.deg(Var::W).unwrap() - qz.degree().unwrap_or(0);
            for _ in 0..deg_drop {
                two_step.push(ProjPoint::infinity());
            }
            match qz.degree() {
                Some(d) if d >= 1 => {
                    for z in finder.roots(qz.coeffs()).unwrap() {
                        two_step.push(ProjPoint::from_affine(z));
                    }
                }
                _ => {}
            }
            if qz.is_zero() {
                skip = true;
            }
        }
        if skip {
            continue;
        }

        let rz = specialize(&res, Var::Z, x0);
        let mut res_roots: Vec<ProjPoint> = Vec::new();
        let drop = res.deg(Var::W).unwrap() - rz.degree().unwrap_or(0);
        for _ in 0..drop {
            res_roots.push(ProjPoint::infinity());
        }
        if rz.degree().map_or(false, |d| d >= 1) {
            for z in finder.roots(rz.coeffs()).unwrap() {
                res_roots.push(ProjPoint::from_affine(z));
            }
        }

        if res_roots.len() != two_step.len() {
            continue; // a root escaped both charts' tolerance; resample
        }
        let mut used = vec![false; two_step.len()];
        let mut matched = true;
        'outer: for a in &res_roots {
            for (i, b) in two_step.iter().enumerate() {
                if !used[i] && a.chordal(b) <= 1e-6 {
                    used[i] = true;
                    continue 'outer;
                }
            }
            matched = false;
            break;
        }
        assert!(matched, "multiset mismatch: p={p} q={q} x0={x0}");
        tested += 1;
    }
}

#[test]
fn resultant_multiplicativity_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let p1 = random_poly(&mut rng);
        let p2 = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        let lhs = resultant_middle(&(&p1 * &p2), &q).unwrap();
        let rhs = &resultant_middle(&p1, &q).unwrap() * &resultant_middle(&p2, &q).unwrap();
        assert!(
            lhs == rhs || lhs == -&rhs,
            "multiplicativity failed: p1={p1} p2={p2} q={q}"
        );
    }
}

#[test]
fn resultant_degree_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..25 {
        let p = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        let res = resultant_middle(&p, &q).unwrap();
        if res.is_zero() {
            continue; // shared factor
        }
        let (rx, rz) = res.degrees().unwrap();
        assert!(rx <= p.deg(Var::Z).unwrap() * q.deg(Var::Z).unwrap());
        assert!(rz <= q.deg(Var::W).unwrap() * p.deg(Var::W).unwrap());
    }
}
