//! Squarefree factorization of bivariate integer polynomials.
//!
//! `normalize` is the chain normal form used everywhere: it strips integer
//! content and sign, then splits the input into pairwise-coprime squarefree
//! factors with multiplicities (Yun's algorithm in `w`, plus a univariate
//! pass for the pure-`z` content). Factors are canonical and sorted, so the
//! output is deterministic. Factors need not be irreducible.

use super::bipoly::{BiPoly, Var};
use super::gcd::{cont_w, div_by_zpoly, div_exact, gcd};
use super::zpoly;
use crate::error::{CoreError, Result};

/// Yun's squarefree decomposition with respect to `w` of an
/// integer-primitive, `w`-content-free polynomial.
fn squarefree_w(f: &BiPoly) -> Vec<(BiPoly, u64)> {
    let Some(dw) = f.deg(Var::W) else {
        return Vec::new();
    };
    if dw == 0 {
        return Vec::new();
    }
    let df = f.derivative(Var::W);
    let g = gcd(f, &df);
    if g == BiPoly::one() {
        return vec![(f.canonicalize().0, 1)];
    }
    let mut out = Vec::new();
    let mut c = div_exact(f, &g).expect("gcd divides");
    let mut d = &div_exact(&df, &g).expect("gcd divides") - &c.derivative(Var::W);
    let mut mult = 1u64;
    loop {
        let a = gcd(&c, &d);
        if a != BiPoly::one() {
            out.push((a.clone(), mult));
        }
        c = div_exact(&c, &a).expect("factor divides");
        if c.degrees().map_or(true, |(dz, dw)| dz == 0 && dw == 0) {
            break;
        }
        d = &div_exact(&d, &a).expect("factor divides") - &c.derivative(Var::W);
        mult += 1;
    }
    out
}

/// Squarefree factorization of the primitive part: pairwise-coprime
/// canonical squarefree factors with multiplicities, sorted. The product of
/// `factor^mult` reproduces the input up to integer content and sign.
///
/// Single-variable factors are always split off, even though the remainder
/// is not factored into irreducibles: any factor free of one variable
/// divides the content with respect to the other, so both contents are
/// stripped first. This is what lets chain validation catch every line
/// component.
pub fn normalize(p: &BiPoly) -> Result<Vec<(BiPoly, u64)>> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let (prim, _) = p.canonicalize();
    // pure-z factors live in the w-content
    let cont_pure_z = cont_w(&prim);
    let pp1 = div_by_zpoly(&prim, &cont_pure_z).expect("content divides");
    // pure-w factors live in the z-content of what is left
    let swapped = pp1.swap_vars();
    let cont_pure_w = cont_w(&swapped);
    let pp = div_by_zpoly(&swapped, &cont_pure_w)
        .expect("content divides")
        .swap_vars();

    let mut factors: Vec<(BiPoly, u64)> = Vec::new();
    for (f, m) in zpoly::squarefree(&cont_pure_z) {
        factors.push((BiPoly::from_z_coeffs(&f).canonicalize().0, m));
    }
    for (f, m) in zpoly::squarefree(&cont_pure_w) {
        factors.push((BiPoly::from_w_coeffs(&f).canonicalize().0, m));
    }
    for (f, m) in squarefree_w(&pp) {
        factors.push((f, m));
    }
    factors.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    Ok(factors)
}

/// Gcd-refines a list of squarefree factors into a pairwise-coprime basis,
/// merging equal factors by adding multiplicities. Inputs must be canonical
/// and squarefree; degenerate (single-variable) parts are kept as factors.
pub fn merge_coprime(mut items: Vec<(BiPoly, u64)>) -> Vec<(BiPoly, u64)> {
    items.retain(|(f, _)| f != &BiPoly::one());
    'outer: loop {
        for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                if items[i].0 == items[j].0 {
                    items[i].1 += items[j].1;
                    items.swap_remove(j);
                    continue 'outer;
                }
                let g = gcd(&items[i].0, &items[j].0);
                if g == BiPoly::one() {
                    continue;
                }
                let (fi, mi) = items[i].clone();
                let (fj, mj) = items[j].clone();
                let ri = div_exact(&fi, &g).expect("gcd divides").canonicalize().0;
                let rj = div_exact(&fj, &g).expect("gcd divides").canonicalize().0;
                items.swap_remove(j);
                items.swap_remove(i);
                items.push((g, mi + mj));
                if ri != BiPoly::one() {
                    items.push((ri, mi));
                }
                if rj != BiPoly::one() {
                    items.push((rj, mj));
                }
                continue 'outer;
            }
        }
        break;
    }
    items.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    items
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bipoly;

    fn bi(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap().0
    }

    #[test]
    fn perfect_square() {
        let p = bi("(w - z)^2");
        assert_eq!(normalize(&p).unwrap(), vec![(bi("w - z"), 2)]);
    }

    #[test]
    fn content_discarded() {
        let p = bi("6*(w^2 - z^2 - 2)^2");
        assert_eq!(normalize(&p).unwrap(), vec![(bi("w^2 - z^2 - 2"), 2)]);
    }

    #[test]
    fn squarefree_product_stays_whole_or_splits_coprime() {
        // (w - z)(w + z) = w^2 - z^2 is squarefree; keeping it whole or
        // splitting it are both valid normal forms as long as factors are
        // coprime and squarefree.
        let p = &bi("w - z") * &bi("w + z");
        let fac = normalize(&p).unwrap();
        let mut prod = BiPoly::one();
        for (f, m) in &fac {
            assert!(f.is_canonical());
            prod = &prod * &f.pow(*m);
        }
        assert_eq!(prod, p.canonicalize().0);
        for i in 0..fac.len() {
            for j in (i + 1)..fac.len() {
                assert_eq!(gcd(&fac[i].0, &fac[j].0), BiPoly::one());
            }
        }
    }

    #[test]
    fn mixed_multiplicities_roundtrip() {
        let p = &(&bi("w - z^2").pow(3) * &bi("w + z").pow(2)) * &bi("z^2 - 3");
        let fac = normalize(&p).unwrap();
        let mut prod = BiPoly::one();
        for (f, m) in &fac {
            prod = &prod * &f.pow(*m);
        }
        let want = p.canonicalize().0;
        assert!(prod == want || prod == (-&want).canonicalize().0);
        assert!(fac.iter().any(|(f, m)| *m == 3 && f == &bi("w - z^2")));
        assert!(fac.iter().any(|(f, m)| *m == 2 && f == &bi("w + z")));
        assert!(fac.iter().any(|(f, m)| *m == 1 && f == &bi("z^2 - 3")));
    }

    #[test]
    fn zero_rejected() {
        assert!(normalize(&BiPoly::zero()).is_err());
    }

    #[test]
    fn merge_refines_overlapping_factors() {
        // (w-z)(w+z) with mult 1 alongside (w-z) with mult 2
        let items = vec![(&bi("w - z") * &bi("w + z"), 1u64), (bi("w - z"), 2u64)];
        let merged = merge_coprime(items);
        assert_eq!(merged, vec![(bi("w - z"), 3), (bi("w + z"), 1)]);
    }
}
