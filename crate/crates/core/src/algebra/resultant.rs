//! Exact resultants by Sylvester determinant with fraction-free (Bareiss)
//! elimination over bivariate integer polynomials. This is the elimination
//! engine behind composition of correspondences and the discriminant.



use super::bipoly::{BiPoly, Var};
use super::gcd::div_exact;
use crate::error::{CoreError, Result};

/// Determinant of the Sylvester matrix of two coefficient vectors (lowest
/// degree first). Entries are polynomials in the surviving variables; the
/// Bareiss scheme keeps every division exact.
fn sylvester_det(pc: &[BiPoly], qc: &[BiPoly]) -> BiPoly {
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![BiPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }

    let mut sign_flip = false;
    let mut prev_pivot = BiPoly::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return BiPoly::zero();
            };
            mat.swap(k, swap);
            sign_flip = !sign_flip;
        }
        let pivot = mat[k][k].clone();
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &pivot) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = div_exact(&num, &prev_pivot).expect("Bareiss division is exact");
            }
            mat[i][k] = BiPoly::zero();
        }
        prev_pivot = pivot;
    }
    let det = mat[size - 1][size - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// Resultant of `p` and `q` with respect to `var`, both living on the same
/// variable pair; the result is constant in `var`.
pub fn resultant_wrt(p: &BiPoly, q: &BiPoly, var: Var) -> Result<BiPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let dp = p.deg(var).unwrap();
    let dq = q.deg(var).unwrap();
    if dp == 0 {
        // Res(const c, q) = c^deg(q)
        return Ok(p.pow(dq as u64));
    }
    if dq == 0 {
        return Ok(q.pow(dp as u64));
    }
    let slices = |f: &BiPoly, d: usize| -> Vec<BiPoly> {
        (0..=d)
            .map(|k| match var {
                Var::W => BiPoly::from_z_coeffs(&f.w_slice(k)),
                Var::Z => BiPoly::from_w_coeffs(&f.z_slice(k)),
            })
            .collect()
    };
    Ok(sylvester_det(&slices(p, dp), &slices(q, dq)))
}

/// Eliminates the shared middle variable of a two-step relation: `p` is a
/// polynomial in `(x, y)` (its `w` slot holding `y`), `q` in `(y, z)` (its
/// `z` slot holding `y`). The result lives in `(x, z)` on the usual slots.
pub fn resultant_middle(p: &BiPoly, q: &BiPoly) -> Result<BiPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let dp = p.deg(Var::W).unwrap();
    let dq = q.deg(Var::Z).unwrap();
    if dp == 0 {
        return Err(CoreError::MissingVariable { var: 'y' });
    }
    if dq == 0 {
        return Err(CoreError::MissingVariable { var: 'y' });
    }
    // p's y-slices are polynomials in x -> slot z of the output;
    // q's y-slices are polynomials in z -> slot w of the output.
    let pc: Vec<BiPoly> = (0..=dp)
        .map(|k| BiPoly::from_z_coeffs(&p.w_slice(k)))
        .collect();
    let qc: Vec<BiPoly> = (0..=dq)
        .map(|k| BiPoly::from_w_coeffs(&q.z_slice(k)))
        .collect();
    Ok(sylvester_det(&pc, &qc))
}

/// `Res_w(p, dp/dw)`: cuts out the critical `z`-locus of the `w`-fiber.
/// Together with the vanishing of the leading `w`-coefficient this covers
/// every degenerate fiber.
pub fn discriminant_w(p: &BiPoly) -> Result<BiPoly> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    if p.deg(Var::W) == Some(0) {
        return Err(CoreError::MissingVariable { var: 'w' });
    }
    let dp = p.derivative(Var::W);
    if dp.is_zero() {
        return Err(CoreError::MissingVariable { var: 'w' });
    }
    resultant_wrt(p, &dp, Var::W)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bipoly;

    fn bi(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap().0
    }

    #[test]
    fn linear_elimination_is_substitution() {
        // Res_y(y - x, z - y^2) = z - x^2
        let p = bi("w - z"); // y - x with (x, y) on slots (z, w)
        let q = bi("w - z^2"); // z - y^2 with (y, z) on slots (z, w)
        let r = resultant_middle(&p, &q).unwrap();
        let want = bi("w - z^2"); // z - x^2 on output slots (x, z) = (z, w)
        assert!(r == want || r == -&want);
    }

    #[test]
    fn quadric_composition_square() {
        // Res_y(y^2 - x^2 - 1, z^2 - y^2 - 1) = (z^2 - x^2 - 2)^2 up to sign
        let p = bi("w^2 - z^2 - 1");
        let q = bi("w^2 - z^2 - 1");
        let r = resultant_middle(&p, &q).unwrap();
        let want = bi("(w^2 - z^2 - 2)^2");
        assert!(r == want || r == -&want, "got {r}");
    }

    #[test]
    fn double_cover_composition() {
        // Res_y(y^2 - x, z - y^2) = (z - x)^2
        let p = bi("w^2 - z");
        let q = bi("w - z^2");
        let r = resultant_middle(&p, &q).unwrap();
        let want = bi("(w - z)^2");
        assert!(r == want || r == -&want, "got {r}");
    }

    #[test]
    fn middle_variable_required() {
        assert!(resultant_middle(&bi("z + 1"), &bi("w - z^2")).is_err());
        assert!(resultant_middle(&bi("w - z^2"), &bi("w + 1")).is_err());
        assert!(resultant_middle(&BiPoly::zero(), &bi("w")).is_err());
    }

    #[test]
    fn discriminant_examples() {
        // w^2 - z^2 - 1: discriminant ~ z^2 + 1
        let d = discriminant_w(&bi("w^2 - z^2 - 1")).unwrap();
        let (canon, _) = d.canonicalize();
        assert_eq!(canon, bi("z^2 + 1"));

        // linear in w: nonzero constant
        let d = discriminant_w(&bi("w - z^2")).unwrap();
        assert_eq!(d.degrees(), Some((0, 0)));

        // w^2 - z: discriminant ~ z
        let d = discriminant_w(&bi("w^2 - z")).unwrap();
        assert_eq!(d.canonicalize().0, bi("z"));

        assert!(discriminant_w(&bi("z^2 - 1")).is_err());
        assert!(discriminant_w(&BiPoly::zero()).is_err());
    }
}
