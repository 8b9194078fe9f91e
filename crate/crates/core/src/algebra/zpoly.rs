//! Internal univariate polynomial helpers over `BigInt`, lowest degree
//! first. These back the content computations, the bivariate gcd and the
//! squarefree machinery; nothing here is exposed outside the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
    p
}

#[allow(dead_code)]
pub(crate) fn is_zero(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Degree of a trimmed polynomial; zero polynomial has no degree.
pub(crate) fn deg(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn neg(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().map(|c| -c).collect()
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(out)
}

pub(crate) fn mul_scalar(a: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * s).collect()
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive(p: &[BigInt]) -> Vec<BigInt> {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return p;
    }
    let mut c = content(&p);
    if p.last().unwrap().is_negative() {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

pub(crate) fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return Vec::new();
    }
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero), as in the classical
/// primitive PRS: returns `prem` with `lc(b)^k * a = q*b + prem`.
pub(crate) fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "prem by zero");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        // r = lb*r - lr*x^(dr-db)*b
        let mut shifted = vec![BigInt::zero(); dr - db];
        shifted.extend(b.iter().map(|c| c * &lr));
        r = sub(&mul_scalar(&r, &lb), &shifted);
    }
    r
}

/// Sign-normalized copy (positive leading coefficient, content kept).
fn abs_norm(p: Vec<BigInt>) -> Vec<BigInt> {
    match p.last() {
        Some(lc) if lc.is_negative() => neg(&p),
        _ => p,
    }
}

/// Primitive-PRS gcd with positive leading coefficient; the integer
/// content of the result is the gcd of the input contents.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() {
        return abs_norm(b);
    }
    if b.is_empty() {
        return abs_norm(a);
    }
    let ca = content(&a);
    let cb = content(&b);
    let cg = ca.gcd(&cb);
    a = primitive(&a);
    b = primitive(&b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive(&prem(&a, &b));
        a = b;
        b = r;
    }
    if a.len() == 1 {
        // constant gcd: only the integer content survives
        return vec![cg];
    }
    mul_scalar(&a, &cg)
}

/// Exact division, `None` if `b` does not divide `a` over the rationals
/// scaled to integers (used only where divisibility is guaranteed or
/// being tested).
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let b = trim(b.to_vec());
    if b.is_empty() {
        return None;
    }
    let mut r = trim(a.to_vec());
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap();
        let (qd, rem) = lr.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        q[dr - db] = qd.clone();
        let mut shifted = vec![BigInt::zero(); dr - db];
        shifted.extend(b.iter().map(|c| c * &qd));
        r = sub(&r, &shifted);
    }
    if r.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

/// Yun's squarefree decomposition of a primitive polynomial: returns
/// `(factor, multiplicity)` pairs with pairwise-coprime squarefree factors
/// whose weighted product is the input up to sign.
pub(crate) fn squarefree(p: &[BigInt]) -> Vec<(Vec<BigInt>, u64)> {
    let p = primitive(p);
    if p.len() <= 1 {
        return Vec::new();
    }
    let dp = derivative(&p);
    let g = gcd(&p, &dp);
    if g.len() == 1 {
        return vec![(p, 1)];
    }
    let mut out = Vec::new();
    let mut c = div_exact(&p, &g).expect("gcd divides");
    let mut d = sub(&div_exact(&dp, &g).expect("gcd divides"), &derivative(&c));
    let mut mult = 1u64;
    loop {
        let a = primitive(&gcd(&c, &d));
        if deg(&a).map_or(false, |d| d >= 1) {
            out.push((a.clone(), mult));
        }
        c = div_exact(&c, &a).expect("factor divides");
        if c.len() <= 1 {
            break;
        }
        d = sub(&div_exact(&d, &a).expect("factor divides"), &derivative(&c));
        mult += 1;
    }
    out
}
