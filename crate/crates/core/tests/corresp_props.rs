//! Structural properties of the chain calculus: associativity, adjoint
//! symmetries, degree multiplicativity on stable examples, and the
//! diagonal law.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use corr1::algebra::gcd::divides;
use corr1::algebra::parse_bipoly;
use corr1::corresp::{
    compose, iterate, parse_correspondence, random_correspondence, Correspondence,
    DEFAULT_DEGREE_CAP,
};
use corr1::entropy::lov_report;

fn corr(s: &str) -> Correspondence {
    parse_correspondence(s).unwrap().0
}

#[test]
fn compose_associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let f = random_correspondence(&mut rng, (2, 2));
        let g = random_correspondence(&mut rng, (2, 2));
        let h = random_correspondence(&mut rng, (2, 2));
        let left = compose(&compose(&f, &g).unwrap().0, &h).unwrap().0;
        let right = compose(&f, &compose(&g, &h).unwrap().0).unwrap().0;
        assert_eq!(
            left.components(),
            right.components(),
            "associativity failed for f={f} g={g} h={h}"
        );
    }
}

#[test]
fn adjoint_swaps_degrees_and_is_involutive() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let f = random_correspondence(&mut rng, (3, 3));
        let (l0, l1) = f.lambda();
        let adj = f.adjoint();
        assert_eq!(adj.lambda(), (l1, l0));
        assert_eq!(adj.adjoint().components(), f.components());
    }
}

#[test]
fn degree_multiplicativity_on_stable_examples() {
    for (text, l0_base, l1_base) in [
        ("w^2 - z^2 - 1", 2u64, 2u64),
        ("w - z^3", 1, 3),
        ("w - z^2", 1, 2),
    ] {
        let f = corr(text);
        let out = iterate(&f, 5, DEFAULT_DEGREE_CAP).unwrap();
        for (k, (chain, _)) in out.orders.iter().enumerate() {
            let e = k as u32 + 1;
            assert_eq!(
                chain.lambda(),
                (l0_base.pow(e), l1_base.pow(e)),
                "{text} at order {e}"
            );
        }
    }
}

#[test]
fn diagonal_law_on_random_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let diag = parse_bipoly("w - z").unwrap().0;
    for _ in 0..8 {
        let f = random_correspondence(&mut rng, (2, 2));
        let (c, _) = compose(&f, &f.adjoint()).unwrap();
        assert!(
            divides(&diag, &c.chain_poly()).unwrap(),
            "diagonal law failed for {f}"
        );
    }
}

#[test]
fn composition_never_drops_factors_on_the_sphere() {
    // strict degree drops would show up as dropped factors; on the sphere
    // with both projections surjective they should not occur, and the
    // report machinery records them if they ever do
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..12 {
        let f = random_correspondence(&mut rng, (2, 2));
        let g = random_correspondence(&mut rng, (2, 2));
        let (fg, rep) = compose(&f, &g).unwrap();
        assert!(rep.dropped.is_empty(), "dropped factors for f={f} g={g}");
        let (a0, a1) = f.lambda();
        let (b0, b1) = g.lambda();
        assert_eq!(fg.lambda(), (a0 * b0, a1 * b1));
    }
}

#[test]
fn lov_power_identity_and_adjoint_invariance() {
    let f = corr("w^2 - z^2 - 1");
    let base = lov_report(&f, 3, DEFAULT_DEGREE_CAP).unwrap();
    let (f2, _) = compose(&f, &f).unwrap();
    let doubled = lov_report(&f2, 3, DEFAULT_DEGREE_CAP).unwrap();
    assert!((doubled.lov_value - 2.0 * base.lov_value).abs() < 1e-12);

    let adj = lov_report(&f.adjoint(), 3, DEFAULT_DEGREE_CAP).unwrap();
    assert!((adj.lov_value - base.lov_value).abs() < 1e-12);

    // degree shadow of the inverse: lambda swaps
    let g = corr("w - z^2");
    let (g0, g1) = g.lambda();
    assert_eq!(g.adjoint().lambda(), (g1, g0));
}

#[test]
fn lov_examples() {
    let f = corr("w^2 - z^2 - 1");
    let rep = lov_report(&f, 5, DEFAULT_DEGREE_CAP).unwrap();
    assert!((rep.lov_value - std::f64::consts::LN_2).abs() < 1e-12);
    for row in &rep.rows {
        let m = row.lambda0.max(row.lambda1);
        assert_eq!((row.mass_lower, row.mass_upper), (m, 2 * m));
        assert_eq!(m, 2u64.pow(row.n));
    }

    let d3 = corr("w - z^3");
    let rep = lov_report(&d3, 4, DEFAULT_DEGREE_CAP).unwrap();
    assert!((rep.lov_value - 3.0f64.ln()).abs() < 1e-12);

    let lin = corr("w - 2*z");
    let rep = lov_report(&lin, 4, DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(rep.lov_value, 0.0);
}

#[test]
fn degree_cap_reports_partial_results() {
    let f = corr("w - z^2");
    let out = iterate(&f, 12, 64).unwrap();
    let hit = out.cap_hit.expect("cap must trigger");
    assert!(out.orders.len() < 12);
    assert!(hit.got > 64);
    // cap too small for even the first order: error propagates
    let err = lov_report(&f, 12, 2).map(|_| ()).unwrap_err();
    assert!(matches!(err, corr1::CoreError::DegreeCapExceeded { .. }));
    // cap that fits some orders: partial report flagged as capped
    let partial = lov_report(&f, 12, 64).unwrap();
    assert!(partial.capped);
    assert!(partial.n_max < 12);
}
