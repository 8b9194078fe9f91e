//! Polynomial correspondences on the Riemann sphere: chains of squarefree
//! components with multiplicities, adjoint, composition by elimination of
//! the middle variable, graph degrees, iterates and fixed-point counts.
//!
//! Composition convention: `compose(f, g)` is `f ∘ g`, with `g` acting
//! first. Both conventions exist in the wild; everything here sticks to
//! this one.
//!
//! On the sphere both indeterminacy sets of a correspondence are empty:
//! every fiber of either projection is finite, which is why condition (ii)
//! below (each component must genuinely involve both variables) is the only
//! validity requirement.

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::bipoly::BiPoly;
use crate::algebra::factor::{merge_coprime, normalize};
use crate::algebra::gcd::divides;
use crate::algebra::parse::parse_bipoly;
use crate::algebra::resultant::resultant_middle;
use crate::algebra::zpoly;
use crate::error::{CoreError, Result};

/// Default bound on `lambda0 + lambda1` during iteration.
pub const DEFAULT_DEGREE_CAP: u64 = 512;

/// A holomorphic chain on the sphere: pairwise-coprime squarefree
/// components with positive multiplicities, each surjecting onto both
/// factors (`deg_z >= 1` and `deg_w >= 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    components: Vec<(BiPoly, u64)>,
    label: Option<String>,
}

/// Degrees and bookkeeping for one composition or iterate order.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub n: u32,
    pub lambda0: u64,
    pub lambda1: u64,
    pub d0_est: f64,
    pub d1_est: f64,
    /// Factors removed because they failed to involve one variable, with
    /// the variable they miss. Scientific output, not noise.
    pub dropped: Vec<String>,
}

/// Result of iterating with a degree cap.
#[derive(Debug, Clone)]
pub struct IterateOutcome {
    pub orders: Vec<(Correspondence, DegreeReport)>,
    /// Set when the cap stopped iteration early; `orders` holds the part
    /// that fit.
    pub cap_hit: Option<CapHit>,
}

/// Where and how badly the degree cap was exceeded.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CapHit {
    pub cap: u64,
    pub order: u32,
    pub got: u64,
}

impl CapHit {
    pub fn into_error(self) -> CoreError {
        CoreError::DegreeCapExceeded {
            cap: self.cap,
            order: self.order,
            got: self.got,
        }
    }
}

/// Projective fixed-point count of an iterate.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub n: u32,
    /// The diagonal restriction of the multiplicity-expanded chain
    /// equation, as text (empty when the diagonal is a component).
    pub poly: String,
    pub affine_count: u64,
    pub infinity_count: u64,
    pub lefschetz: u64,
    pub diagonal_component: bool,
}

impl Correspondence {
    /// Builds the chain of a (nonzero) defining polynomial: squarefree
    /// factorization plus validation that each factor involves both
    /// variables.
    pub fn from_chain_poly(p: &BiPoly, label: Option<String>) -> Result<Self> {
        let factors = normalize(p)?;
        Self::from_components(factors, label)
    }

    pub fn from_components(components: Vec<(BiPoly, u64)>, label: Option<String>) -> Result<Self> {
        if components.is_empty() {
            return Err(CoreError::ZeroPolynomial);
        }
        for (f, m) in &components {
            if *m == 0 {
                return Err(CoreError::Invalid("zero multiplicity".into()));
            }
            check_condition_ii(f)?;
        }
        let mut components = components;
        components.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
        Ok(Correspondence { components, label })
    }

    pub fn components(&self) -> &[(BiPoly, u64)] {
        &self.components
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `(lambda0, lambda1)`: multiplicity-weighted `w`- and `z`-degrees of
    /// the chain, i.e. the topological degrees of the two projections.
    pub fn lambda(&self) -> (u64, u64) {
        let mut l0 = 0u64;
        let mut l1 = 0u64;
        for (f, m) in &self.components {
            let (dz, dw) = f.degrees().expect("components are nonzero");
            l0 += m * dw as u64;
            l1 += m * dz as u64;
        }
        (l0, l1)
    }

    /// Reflection of the chain across the diagonal: exchanges the
    /// variables of every component, keeping multiplicities. Swaps the two
    /// graph degrees.
    pub fn adjoint(&self) -> Self {
        let components = self
            .components
            .iter()
            .map(|(f, m)| (f.swap_vars().canonicalize().0, *m))
            .collect();
        Self::from_components(components, self.label.as_ref().map(|l| format!("{l}^-1")))
            .expect("adjoint preserves validity")
    }

    /// Defining equation of the full chain with multiplicities expanded.
    pub fn chain_poly(&self) -> BiPoly {
        let mut acc = BiPoly::one();
        for (f, m) in &self.components {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

fn check_condition_ii(f: &BiPoly) -> Result<()> {
    let Some((dz, dw)) = f.degrees() else {
        return Err(CoreError::ZeroPolynomial);
    };
    if dz == 0 {
        return Err(CoreError::DegenerateComponent {
            factor: f.to_string(),
            var: 'z',
        });
    }
    if dw == 0 {
        return Err(CoreError::DegenerateComponent {
            factor: f.to_string(),
            var: 'w',
        });
    }
    Ok(())
}

impl std::fmt::Display for Correspondence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(p, m)| {
                if *m == 1 {
                    format!("({p})")
                } else {
                    format!("{m}\u{b7}({p})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses correspondence text, returning the chain and the denominator
/// scale cleared by the polynomial parser (1 for integer input).
pub fn parse_correspondence(text: &str) -> Result<(Correspondence, BigInt)> {
    let (p, scale) = parse_bipoly(text)?;
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    Ok((Correspondence::from_chain_poly(&p, None)?, scale))
}

fn report_for(chain: &Correspondence, n: u32, dropped: Vec<String>) -> DegreeReport {
    let (l0, l1) = chain.lambda();
    DegreeReport {
        n,
        lambda0: l0,
        lambda1: l1,
        d0_est: (l0 as f64).powf(1.0 / n as f64),
        d1_est: (l1 as f64).powf(1.0 / n as f64),
        dropped,
    }
}

/// `f ∘ g` (`g` acts first): eliminates the middle variable for every
/// component pair, multiplies multiplicities, normalizes the resulting
/// chain and removes factors that fail to involve one of the surviving
/// variables (recording them in the report).
pub fn compose(f: &Correspondence, g: &Correspondence) -> Result<(Correspondence, DegreeReport)> {
    // g's equation lives on (x, y), f's on (y, z); the resultant in y of
    // the pair produces the composed equation on (x, z).
    let pairs: Vec<(&BiPoly, &BiPoly, u64)> = g
        .components
        .iter()
        .flat_map(|(cg, mg)| {
            f.components
                .iter()
                .map(move |(cf, mf)| (cg, cf, mg * mf))
        })
        .collect();
    let factored: Vec<Vec<(BiPoly, u64)>> = pairs
        .par_iter()
        .map(|(cg, cf, mult)| -> Result<Vec<(BiPoly, u64)>> {
            let res = resultant_middle(cg, cf)?;
            let factors = normalize(&res)?;
            Ok(factors
                .into_iter()
                .map(|(p, m)| (p, m * mult))
                .collect())
        })
        .collect::<Result<_>>()?;

    let merged = merge_coprime(factored.into_iter().flatten().collect());
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (p, m) in merged {
        let (dz, dw) = p.degrees().expect("factors are nonzero");
        if dz >= 1 && dw >= 1 {
            kept.push((p, m));
        } else {
            let missing = if dz == 0 { 'z' } else { 'w' };
            dropped.push(format!("{p} (missing {missing})"));
        }
    }
    if kept.is_empty() {
        return Err(CoreError::TotallyDegenerateComposition);
    }
    let chain = Correspondence::from_components(kept, None)?;
    let report = report_for(&chain, 1, dropped);
    Ok((chain, report))
}

/// Successive compositions `f^1 .. f^n` with per-order degree reports;
/// stops early (keeping partial results) once `lambda0 + lambda1` of the
/// next order would exceed `cap`.
pub fn iterate(f: &Correspondence, n: u32, cap: u64) -> Result<IterateOutcome> {
    if n < 1 {
        return Err(CoreError::Invalid("iterate needs n >= 1".into()));
    }
    let mut orders: Vec<(Correspondence, DegreeReport)> = Vec::with_capacity(n as usize);
    let mut current = f.clone();
    let mut dropped_so_far = Vec::new();
    for k in 1..=n {
        if k > 1 {
            let (next, rep) = compose(f, &current)?;
            dropped_so_far.extend(rep.dropped);
            current = next;
        }
        let (l0, l1) = current.lambda();
        if l0 + l1 > cap {
            return Ok(IterateOutcome {
                orders,
                cap_hit: Some(CapHit {
                    cap,
                    order: k,
                    got: l0 + l1,
                }),
            });
        }
        let mut rep = report_for(&current, k, Vec::new());
        rep.dropped = dropped_so_far.clone();
        orders.push((current.clone(), rep));
    }
    Ok(IterateOutcome {
        orders,
        cap_hit: None,
    })
}

/// Projective fixed points of `f^n`, counted with multiplicity via the
/// diagonal restriction of the bihomogenized chain equation. The affine
/// root count plus the contribution at infinity equals the Lefschetz
/// number `lambda0 + lambda1` whenever the diagonal is not a component.
pub fn fixed_point_poly(f: &Correspondence, n: u32, cap: u64) -> Result<FixedPointReport> {
    let outcome = iterate(f, n, cap)?;
    if let Some(hit) = outcome.cap_hit {
        if outcome.orders.len() < n as usize {
            return Err(hit.into_error());
        }
    }
    let (fn_chain, _) = &outcome.orders[n as usize - 1];
    let (l0, l1) = fn_chain.lambda();
    let lefschetz = l0 + l1;

    let diag_line = BiPoly::from_rows(vec![
        vec![BigInt::from(0), BigInt::from(1)],
        vec![BigInt::from(-1), BigInt::from(0)],
    ]); // w - z
    for (p, _) in fn_chain.components() {
        if divides(&diag_line, p)? {
            return Ok(FixedPointReport {
                n,
                poly: String::new(),
                affine_count: 0,
                infinity_count: 0,
                lefschetz,
                diagonal_component: true,
            });
        }
    }

    // restrict each component to w := z and multiply with multiplicities
    let mut diag: Vec<BigInt> = vec![BigInt::from(1)];
    for (p, m) in fn_chain.components() {
        let d = p.diagonal();
        debug_assert!(!d.is_empty(), "diagonal checked above");
        for _ in 0..*m {
            diag = zpoly::mul(&diag, &d);
        }
    }
    let affine = zpoly::deg(&diag).expect("nonzero") as u64;
    Ok(FixedPointReport {
        n,
        poly: BiPoly::from_z_coeffs(&diag).to_string(),
        affine_count: affine,
        infinity_count: lefschetz - affine,
        lefschetz,
        diagonal_component: false,
    })
}

/// Random valid chain with component bidegrees at most `max_bidegree` and
/// small coefficients; used by the property suites and the selftest.
pub fn random_correspondence(rng: &mut impl Rng, max_bidegree: (usize, usize)) -> Correspondence {
    loop {
        let dz = rng.gen_range(1..=max_bidegree.0);
        let dw = rng.gen_range(1..=max_bidegree.1);
        let rows: Vec<Vec<BigInt>> = (0..=dz)
            .map(|_| {
                (0..=dw)
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect()
            })
            .collect();
        let p = BiPoly::from_rows(rows);
        if p.is_zero() {
            continue;
        }
        if let Ok(c) = Correspondence::from_chain_poly(&p, None) {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr(s: &str) -> Correspondence {
        parse_correspondence(s).unwrap().0
    }

    fn bi(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap().0
    }

    #[test]
    fn parse_quadric_example() {
        let c = corr("w^2 - z^2 - 1");
        assert_eq!(c.components().len(), 1);
        assert_eq!(c.components()[0].1, 1);
        assert_eq!(c.components()[0].0.degrees(), Some((2, 2)));
        assert_eq!(c.lambda(), (2, 2));
    }

    #[test]
    fn parse_squared_component() {
        let c = corr("(w - z^2)^2");
        assert_eq!(c.components(), &[(bi("w - z^2"), 2)]);
    }

    #[test]
    fn parse_rejects_degenerate() {
        let err = parse_correspondence("w - 3").unwrap_err();
        match err {
            CoreError::DegenerateComponent { var, .. } => assert_eq!(var, 'z'),
            other => panic!("unexpected error {other}"),
        }
        // a degenerate factor inside a valid-looking product is also caught
        assert!(parse_correspondence("(w - 3)(w - z)").is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(corr("w - z^2").adjoint(), corr("w^2 - z"));
        assert_eq!(corr("w^2 - z^2 - 1").adjoint(), corr("w^2 - z^2 + 1"));
        let f = corr("(w^2 - z)(w - z^3)");
        assert_eq!(f.adjoint().adjoint(), f);
        let (l0, l1) = f.lambda();
        assert_eq!(f.adjoint().lambda(), (l1, l0));
    }

    #[test]
    fn compose_quadric_example() {
        let f = corr("w^2 - z^2 - 1");
        let (ff, rep) = compose(&f, &f).unwrap();
        assert_eq!(ff.components(), &[(bi("w^2 - z^2 - 2"), 2)]);
        assert_eq!(rep.lambda0, 4);
        assert_eq!(rep.lambda1, 4);
        assert!(rep.dropped.is_empty());
        assert_eq!(ff.to_string(), "2\u{b7}(w^2 - z^2 - 2)");
    }

    #[test]
    fn compose_map_is_substitution() {
        let f = corr("w - z^2");
        let (ff, _) = compose(&f, &f).unwrap();
        assert_eq!(ff, corr("w - z^4"));
    }

    #[test]
    fn compose_with_adjoint_contains_diagonal() {
        let f = corr("w - z^2");
        let (c, _) = compose(&f, &f.adjoint()).unwrap();
        assert_eq!(c.components(), &[(bi("w - z"), 2)]);
    }

    #[test]
    fn compose_symmetric_gives_diagonal_component() {
        let f = corr("w^2 + z^2 - 1");
        let (c, _) = compose(&f, &f).unwrap();
        // (z^2 - x^2)^2 normalizes to (w - z)(w + z) with multiplicity 2
        let total: BiPoly = c.chain_poly();
        assert!(divides(&bi("w - z"), &total).unwrap());
        assert!(divides(&bi("w + z"), &total).unwrap());
        assert_eq!(c.lambda(), (4, 4));
    }

    #[test]
    fn iterate_monomial_map() {
        let f = corr("w - z^2");
        let out = iterate(&f, 3, DEFAULT_DEGREE_CAP).unwrap();
        assert!(out.cap_hit.is_none());
        let (l0, l1) = out.orders[2].0.lambda();
        assert_eq!((l0, l1), (1, 8));
        assert_eq!(out.orders[0].0, f);
    }

    #[test]
    fn iterate_quadric_powers() {
        let f = corr("w^2 - z^2 - 1");
        let out = iterate(&f, 3, DEFAULT_DEGREE_CAP).unwrap();
        for (k, (chain, rep)) in out.orders.iter().enumerate() {
            let want = 2u64.pow(k as u32 + 1);
            assert_eq!(chain.lambda(), (want, want));
            assert_eq!(rep.lambda0, want);
        }
    }

    #[test]
    fn iterate_respects_cap() {
        let f = corr("w - z^2");
        let out = iterate(&f, 10, 16).unwrap();
        assert!(out.cap_hit.is_some());
        assert!(out.orders.len() < 10);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(corr("w^2 - z^2 - 1").lambda(), (2, 2));
        assert_eq!(corr("w - z^2").lambda(), (1, 2));
        let double = corr("(w^2 - z^2 - 2)^2");
        assert_eq!(double.lambda(), (4, 4));
    }

    #[test]
    fn fixed_points_of_squaring_map() {
        let f = corr("w - z^2");
        let rep = fixed_point_poly(&f, 1, DEFAULT_DEGREE_CAP).unwrap();
        assert!(!rep.diagonal_component);
        assert_eq!(rep.affine_count, 2); // roots 0 and 1
        assert_eq!(rep.infinity_count, 1); // the fixed point at infinity
        assert_eq!(rep.lefschetz, 3);
    }

    #[test]
    fn fixed_points_flag_diagonal() {
        let f = corr("w^2 + z^2 - 1");
        let rep = fixed_point_poly(&f, 2, DEFAULT_DEGREE_CAP).unwrap();
        assert!(rep.diagonal_component);
    }

    #[test]
    fn fixed_points_all_at_infinity() {
        let f = corr("w^2 - z^2 - 1");
        let rep = fixed_point_poly(&f, 1, DEFAULT_DEGREE_CAP).unwrap();
        assert!(!rep.diagonal_component);
        assert_eq!(rep.affine_count, 0); // diagonal restriction is -1
        assert_eq!(rep.infinity_count, 4);
        assert_eq!(rep.lefschetz, 4);
    }
}
