//! Dense bivariate polynomials over the integers.
//!
//! A [`BiPoly`] stores the coefficient of `z^i w^j` at `rows[i][j]`. The
//! matrix is kept rectangular and trimmed: the last row and the last column
//! always contain a nonzero entry, so the recorded degrees are genuine. The
//! zero polynomial is the unique value with an empty matrix.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Which of the two variables an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::Z => 'z',
            Var::W => 'w',
        }
    }
}

/// Exact bivariate polynomial in `z` and `w` with `BigInt` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    /// `rows[i][j]` is the coefficient of `z^i w^j`; empty means zero.
    rows: Vec<Vec<BigInt>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            BiPoly { rows: vec![vec![c]] }
        }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// `c * z^i * w^j`
    pub fn monomial(c: BigInt, i: usize, j: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut rows = vec![vec![BigInt::zero(); j + 1]; i + 1];
        rows[i][j] = c;
        BiPoly { rows }
    }

    /// Builds from a raw coefficient matrix, trimming phantom degrees.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let mut p = BiPoly { rows };
        p.normalize_shape();
        p
    }

    /// Embeds a univariate polynomial in `z` (lowest degree first).
    pub fn from_z_coeffs(coeffs: &[BigInt]) -> Self {
        Self::from_rows(coeffs.iter().map(|c| vec![c.clone()]).collect())
    }

    /// Embeds a univariate polynomial in `w` (lowest degree first).
    pub fn from_w_coeffs(coeffs: &[BigInt]) -> Self {
        Self::from_rows(vec![coeffs.to_vec()])
    }

    fn normalize_shape(&mut self) {
        let width = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut self.rows {
            row.resize(width, BigInt::zero());
        }
        while let Some(last) = self.rows.last() {
            if last.iter().all(Zero::is_zero) {
                self.rows.pop();
            } else {
                break;
            }
        }
        if self.rows.is_empty() {
            return;
        }
        let mut wdeg = 0;
        for row in &self.rows {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && j > wdeg {
                    wdeg = j;
                }
            }
        }
        for row in &mut self.rows {
            row.truncate(wdeg + 1);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(deg_z, deg_w)`, or `None` for the zero polynomial.
    pub fn degrees(&self) -> Option<(usize, usize)> {
        if self.is_zero() {
            None
        } else {
            Some((self.rows.len() - 1, self.rows[0].len() - 1))
        }
    }

    pub fn deg(&self, var: Var) -> Option<usize> {
        self.degrees().map(|(dz, dw)| match var {
            Var::Z => dz,
            Var::W => dw,
        })
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Coefficient of `w^j` as a univariate polynomial in `z`.
    pub fn w_slice(&self, j: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self
            .rows
            .iter()
            .map(|r| r.get(j).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        while out.last().map_or(false, Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Coefficient of `z^i` as a univariate polynomial in `w`.
    pub fn z_slice(&self, i: usize) -> Vec<BigInt> {
        let mut out = self.rows.get(i).cloned().unwrap_or_default();
        while out.last().map_or(false, Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Leading coefficient with respect to `var` as a polynomial in the
    /// other variable (zero polynomial for zero input).
    pub fn leading_coeff(&self, var: Var) -> BiPoly {
        match self.degrees() {
            None => BiPoly::zero(),
            Some((dz, dw)) => match var {
                Var::W => BiPoly::from_z_coeffs(&self.w_slice(dw)),
                Var::Z => BiPoly::from_w_coeffs(&self.z_slice(dz)),
            },
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        Self::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        )
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|x| x * c)
    }

    /// Multiplies by `w^k` (shifts columns).
    pub fn mul_w_pow(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); k];
                row.extend(r.iter().cloned());
                row
            })
            .collect();
        BiPoly { rows }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exchanges the two variables (matrix transpose).
    pub fn swap_vars(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (dz, dw) = self.degrees().unwrap();
        let mut rows = vec![vec![BigInt::zero(); dz + 1]; dw + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    rows[j][i] = c.clone();
                }
            }
        }
        BiPoly::from_rows(rows)
    }

    pub fn derivative(&self, var: Var) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (dz, dw) = self.degrees().unwrap();
        match var {
            Var::Z => {
                if dz == 0 {
                    return Self::zero();
                }
                let rows = (1..=dz)
                    .map(|i| {
                        self.rows[i]
                            .iter()
                            .map(|c| c * BigInt::from(i))
                            .collect()
                    })
                    .collect();
                BiPoly::from_rows(rows)
            }
            Var::W => {
                if dw == 0 {
                    return Self::zero();
                }
                let rows = self
                    .rows
                    .iter()
                    .map(|r| {
                        (1..=dw)
                            .map(|j| &r[j] * BigInt::from(j))
                            .collect()
                    })
                    .collect();
                BiPoly::from_rows(rows)
            }
        }
    }

    /// Restriction to the diagonal `w := z`, as a univariate polynomial in
    /// `z` (lowest degree first, trimmed).
    pub fn diagonal(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let (dz, dw) = self.degrees().unwrap();
        let mut out = vec![BigInt::zero(); dz + dw + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out[i + j] += c;
                }
            }
        }
        while out.last().map_or(false, Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// The chart flip `z -> 1/z`, i.e. `z^deg_z * p(1/z, w)`.
    pub fn flip_z(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut rows = self.rows.clone();
        rows.reverse();
        BiPoly::from_rows(rows)
    }

    /// The chart flip `w -> 1/w`, i.e. `w^deg_w * p(z, 1/w)`.
    pub fn flip_w(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.reverse();
                r
            })
            .collect();
        BiPoly::from_rows(rows)
    }

    /// Integer content (gcd of all coefficients, non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for row in &self.rows {
            for c in row {
                if !c.is_zero() {
                    g = g.gcd(c);
                    if g.is_one() {
                        return g;
                    }
                }
            }
        }
        g
    }

    /// Lex leading monomial `(i, j)` with `w` ranked above `z`
    /// (`w`-exponent first, ties broken by `z`-exponent).
    pub fn lead_monomial(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => (j, i) > (bj, bi),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    pub fn lead_coeff_graded(&self) -> BigInt {
        match self.lead_monomial() {
            None => BigInt::zero(),
            Some((i, j)) => self.rows[i][j].clone(),
        }
    }

    /// Splits into `(canonical, scale)` with `self = canonical * scale`,
    /// where `canonical` is primitive with positive graded-lex leading
    /// coefficient. The zero polynomial yields `(zero, 0)`.
    pub fn canonicalize(&self) -> (BiPoly, BigInt) {
        if self.is_zero() {
            return (Self::zero(), BigInt::zero());
        }
        let mut scale = self.content();
        if self.lead_coeff_graded().is_negative() {
            scale = -scale;
        }
        let prim = self.map_coeffs(|c| c / &scale);
        (prim, scale)
    }

    /// Primitive with positive leading coefficient, content 1.
    pub fn is_canonical(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.lead_coeff_graded().is_positive()
    }

    /// Deterministic total order used to sort chain components.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        let da = self.degrees().unwrap_or((0, 0));
        let db = other.degrees().unwrap_or((0, 0));
        (da.0 + da.1, da)
            .cmp(&(db.0 + db.1, db))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let nr = self.rows.len().max(rhs.rows.len());
        let nc = self
            .rows
            .first()
            .map_or(0, Vec::len)
            .max(rhs.rows.first().map_or(0, Vec::len));
        let mut rows = vec![vec![BigInt::zero(); nc]; nr];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                rows[i][j] += c;
            }
        }
        for (i, row) in rhs.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                rows[i][j] += c;
            }
        }
        BiPoly::from_rows(rows)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let (az, aw) = self.degrees().unwrap();
        let (bz, bw) = rhs.degrees().unwrap();
        let mut rows = vec![vec![BigInt::zero(); aw + bw + 1]; az + bz + 1];
        for (i, ra) in self.rows.iter().enumerate() {
            for (j, ca) in ra.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (k, rb) in rhs.rows.iter().enumerate() {
                    for (l, cb) in rb.iter().enumerate() {
                        if !cb.is_zero() {
                            rows[i + k][j + l] += ca * cb;
                        }
                    }
                }
            }
        }
        BiPoly::from_rows(rows)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // lex descending, w ranked above z
        let mut terms: Vec<(usize, usize, &BigInt)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((i, j, c));
                }
            }
        }
        terms.sort_by(|a, b| (b.1, b.0).cmp(&(a.1, a.0)));
        for (idx, (i, j, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                parts.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("z".into()),
                _ => parts.push(format!("z^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("w".into()),
                _ => parts.push(format!("w^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(s: &str) -> BiPoly {
        crate::algebra::parse::parse_bipoly(s).unwrap().0
    }

    #[test]
    fn zero_is_unique_and_trimmed() {
        let p = BiPoly::from_rows(vec![vec![BigInt::zero(); 3]; 2]);
        assert!(p.is_zero());
        assert_eq!(p, BiPoly::zero());
        assert_eq!(p.degrees(), None);
    }

    #[test]
    fn degrees_have_no_phantom_rows() {
        let p = BiPoly::from_rows(vec![
            vec![BigInt::from(1), BigInt::zero()],
            vec![BigInt::zero(), BigInt::zero()],
        ]);
        assert_eq!(p.degrees(), Some((0, 0)));
    }

    #[test]
    fn display_matches_convention() {
        assert_eq!(bi("w^2 - z^2 - 1").to_string(), "w^2 - z^2 - 1");
        assert_eq!(bi("w - z^2").to_string(), "w - z^2");
        assert_eq!(bi("3*z*w + 2").to_string(), "3*z*w + 2");
    }

    #[test]
    fn canonical_sign_prefers_w() {
        // lex with w above z: swapping w - z^2 gives z - w^2, whose leading
        // monomial w^2 carries a negative sign, so the canonical form is
        // w^2 - z.
        let p = bi("w - z^2").swap_vars();
        let (canon, scale) = p.canonicalize();
        assert_eq!(canon.to_string(), "w^2 - z");
        assert_eq!(scale, BigInt::from(-1));

        let q = bi("w^2 - z^2 - 1").swap_vars();
        let (canon, _) = q.canonicalize();
        assert_eq!(canon.to_string(), "w^2 - z^2 + 1");

        // w - z^2 is already canonical under this order
        assert!(bi("w - z^2").is_canonical());
    }

    #[test]
    fn content_and_primitive() {
        let p = bi("6*w^2 - 9*z");
        let (canon, scale) = p.canonicalize();
        assert_eq!(scale, BigInt::from(3));
        assert_eq!(canon.to_string(), "2*w^2 - 3*z");
        assert!(canon.is_canonical());
    }

    #[test]
    fn diagonal_restriction() {
        let p = bi("w^2 - z^2 - 1");
        // w := z gives -1
        assert_eq!(p.diagonal(), vec![BigInt::from(-1)]);
        let q = bi("w - z^2");
        assert_eq!(
            q.diagonal(),
            vec![BigInt::zero(), BigInt::one(), BigInt::from(-1)]
        );
    }

    #[test]
    fn flips_are_involutions() {
        let p = bi("w^2 - z^2 - 1");
        assert_eq!(p.flip_z().flip_z(), p);
        assert_eq!(p.flip_w().flip_w(), p);
        assert_eq!(p.swap_vars().swap_vars(), p);
    }

    #[test]
    fn arithmetic_basics() {
        let p = bi("z + w");
        let q = bi("z - w");
        assert_eq!((&p * &q).to_string(), "-w^2 + z^2");
        assert_eq!((&p + &q).to_string(), "2*z");
        assert_eq!(p.pow(2).to_string(), "w^2 + 2*z*w + z^2");
    }
}
