//! Bivariate gcd (primitive PRS in `w` over `Z[z]`), exact division and
//! divisibility tests for [`BiPoly`].

use num_bigint::BigInt;
use num_traits::Zero;

use super::bipoly::{BiPoly, Var};
use super::zpoly;

/// Content of `p` with respect to `w`: the gcd in `Z[z]` of the `w`-slice
/// polynomials (positive leading coefficient, integer content kept).
pub fn cont_w(p: &BiPoly) -> Vec<BigInt> {
    let Some((_, dw)) = p.degrees() else {
        return Vec::new();
    };
    let mut g: Vec<BigInt> = Vec::new();
    for j in 0..=dw {
        let slice = p.w_slice(j);
        if !slice.is_empty() {
            g = zpoly::gcd(&g, &slice);
            if g.len() == 1 && g[0] == BigInt::from(1) {
                break;
            }
        }
    }
    g
}

/// Divides every `w`-slice of `p` by the univariate `z`-polynomial `c`.
pub fn div_by_zpoly(p: &BiPoly, c: &[BigInt]) -> Option<BiPoly> {
    let Some((_, dw)) = p.degrees() else {
        return Some(BiPoly::zero());
    };
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..=dw {
        let q = zpoly::div_exact(&p.w_slice(j), c)?;
        for (i, coeff) in q.into_iter().enumerate() {
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            let row = &mut rows[i];
            if row.len() <= j {
                row.resize(j + 1, BigInt::zero());
            }
            row[j] = coeff;
        }
    }
    Some(BiPoly::from_rows(rows))
}

/// Pseudo-remainder of `p` by `q` with `w` as the main variable. The
/// remainder is only ever used up to content (gcd and primitive-PRS
/// callers), so every reduction step strips contents to curb the
/// coefficient swell of the classical scheme.
fn prem_w(p: &BiPoly, q: &BiPoly) -> BiPoly {
    let dq = q.deg(Var::W).expect("prem by zero");
    let lq = q.leading_coeff(Var::W);
    let mut r = p.clone();
    while let Some(dr) = r.deg(Var::W) {
        if dr < dq {
            break;
        }
        let lr = r.leading_coeff(Var::W);
        r = &(&r * &lq) - &(q * &lr).mul_w_pow(dr - dq);
        if !r.is_zero() {
            let c = cont_w(&r);
            if zpoly::deg(&c).map_or(false, |d| d >= 1) || c.first().map_or(false, |x| x != &BigInt::from(1)) {
                r = div_by_zpoly(&r, &c).expect("content divides");
            }
        }
    }
    r
}

/// Evaluates `z` at an integer, returning the `w`-polynomial over `Z`.
fn eval_z_int(p: &BiPoly, z0: i64) -> Vec<BigInt> {
    let Some((_, dw)) = p.degrees() else {
        return Vec::new();
    };
    let z0 = BigInt::from(z0);
    let mut out = Vec::with_capacity(dw + 1);
    for j in 0..=dw {
        let slice = p.w_slice(j);
        let mut acc = BigInt::from(0);
        for c in slice.iter().rev() {
            acc = acc * &z0 + c;
        }
        out.push(acc);
    }
    zpoly::trim(out)
}

/// Upper bound for `deg_w(gcd(p, q))` from univariate specializations;
/// the gcd of the specialized polynomials is a multiple of the
/// specialized gcd, so a constant specialization certifies coprimality
/// in `w`.
fn gcd_w_degree_bound(p: &BiPoly, q: &BiPoly) -> usize {
    let mut bound = p.deg(Var::W).unwrap_or(0).min(q.deg(Var::W).unwrap_or(0));
    for z0 in [5i64, -7, 11] {
        let a = eval_z_int(p, z0);
        let b = eval_z_int(q, z0);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let g = zpoly::gcd(&a, &b);
        bound = bound.min(zpoly::deg(&g).unwrap_or(0));
        if bound == 0 {
            break;
        }
    }
    bound
}

/// Strips the `w`-content and the integer content, sign-normalized.
fn primitive_w(p: &BiPoly) -> BiPoly {
    if p.is_zero() {
        return BiPoly::zero();
    }
    let c = cont_w(p);
    let q = div_by_zpoly(p, &c).expect("content divides");
    q.canonicalize().0
}

/// Primitive canonical gcd of two bivariate polynomials (content 1,
/// positive lex-leading coefficient). Integer contents are discarded.
pub fn gcd(p: &BiPoly, q: &BiPoly) -> BiPoly {
    if p.is_zero() {
        return q.canonicalize().0;
    }
    if q.is_zero() {
        return p.canonicalize().0;
    }
    let pw = p.deg(Var::W).unwrap();
    let qw = q.deg(Var::W).unwrap();
    if pw == 0 && qw == 0 {
        let g = zpoly::gcd(&p.w_slice(0), &q.w_slice(0));
        return BiPoly::from_z_coeffs(&zpoly::primitive(&g));
    }
    let cp = cont_w(p);
    let cq = cont_w(q);
    let cg = zpoly::primitive(&zpoly::gcd(&cp, &cq));
    let mut a = primitive_w(p);
    let mut b = primitive_w(q);
    if gcd_w_degree_bound(&a, &b) == 0 {
        // coprime in w: only the z-content survives
        return BiPoly::from_z_coeffs(&cg);
    }
    if a.deg(Var::W) < b.deg(Var::W) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = primitive_w(&prem_w(&a, &b));
        a = b;
        b = r;
    }
    if a.deg(Var::W) == Some(0) {
        // primitive parts are coprime in w; only the z-content survives
        return BiPoly::from_z_coeffs(&cg);
    }
    (&a * &BiPoly::from_z_coeffs(&cg)).canonicalize().0
}

/// Exact division by leading-term reduction in the lex order (`w` over
/// `z`); `None` when `d` does not divide `p` over the integers.
pub fn div_exact(p: &BiPoly, d: &BiPoly) -> Option<BiPoly> {
    if d.is_zero() {
        return None;
    }
    if p.is_zero() {
        return Some(BiPoly::zero());
    }
    let (di, dj) = d.lead_monomial().unwrap();
    let dc = d.coeff(di, dj);
    let mut r = p.clone();
    let mut q = BiPoly::zero();
    while !r.is_zero() {
        let (ri, rj) = r.lead_monomial().unwrap();
        if ri < di || rj < dj {
            return None;
        }
        let rc = r.coeff(ri, rj);
        let (t, rem) = num_integer::Integer::div_rem(&rc, &dc);
        if !rem.is_zero() {
            return None;
        }
        let term = BiPoly::monomial(t, ri - di, rj - dj);
        q = &q + &term;
        r = &r - &(d * &term);
    }
    Some(q)
}

/// Whether `d` divides `p` over the rationals (Gauss: primitive parts
/// divide over the integers).
pub fn divides(d: &BiPoly, p: &BiPoly) -> crate::error::Result<bool> {
    if d.is_zero() {
        return Err(crate::error::CoreError::ZeroPolynomial);
    }
    if p.is_zero() {
        return Ok(true);
    }
    let dp = d.canonicalize().0;
    let pp = p.canonicalize().0;
    Ok(div_exact(&pp, &dp).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bipoly;

    fn bi(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap().0
    }

    #[test]
    fn gcd_shared_factor() {
        let a = &bi("w - z") * &bi("w + z");
        let b = &bi("w - z") * &bi("w + 2*z");
        assert_eq!(gcd(&a, &b), bi("w - z"));
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(gcd(&bi("w - z"), &bi("w + z")), BiPoly::one());
    }

    #[test]
    fn gcd_pure_z_content() {
        let a = &bi("z^2 - 1") * &bi("w - z");
        let b = &bi("z - 1") * &bi("w + z");
        assert_eq!(gcd(&a, &b), bi("z - 1"));
    }

    #[test]
    fn div_exact_recovers_factor() {
        let p = &bi("w - z") * &bi("w^2 - z^2 - 2");
        assert_eq!(div_exact(&p, &bi("w - z")), Some(bi("w^2 - z^2 - 2")));
        assert_eq!(div_exact(&bi("w^2 - z^2 - 2"), &bi("w - z")), None);
    }

    #[test]
    fn divides_examples() {
        let p = &bi("w - z") * &bi("w + z");
        assert!(divides(&bi("w - z"), &p).unwrap());
        assert!(!divides(&bi("w - z"), &bi("w^2 - z^2 - 2")).unwrap());
        // divisibility is over the rationals: content does not matter
        assert!(divides(&bi("2*w - 2*z"), &p).unwrap());
    }
}
