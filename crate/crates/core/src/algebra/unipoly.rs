//! Univariate complex-float polynomials: the numeric side of the algebra,
//! produced by specializing one variable of an exact [`BiPoly`].

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::bipoly::{BiPoly, Var};

const TRIM_REL: f64 = 1e-12;

/// Complex polynomial, lowest degree first; the leading coefficient is
/// nonzero after trimming below `1e-12` of the largest coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPolyC {
    coeffs: Vec<Complex64>,
}

impl UniPolyC {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = max * TRIM_REL;
        while coeffs.last().map_or(false, |c| c.norm() <= cut) {
            coeffs.pop();
        }
        UniPolyC { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPolyC {
        if self.coeffs.len() <= 1 {
            return UniPolyC { coeffs: Vec::new() };
        }
        UniPolyC {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        }
    }

    /// Largest coefficient magnitude; 0 for the zero polynomial.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates the chosen variable at `value`, returning the complex
/// polynomial in the other variable (Horner accumulation per slice).
pub fn specialize(p: &BiPoly, var: Var, value: Complex64) -> UniPolyC {
    let Some((dz, dw)) = p.degrees() else {
        return UniPolyC::new(Vec::new());
    };
    match var {
        Var::Z => {
            // result in w: coeff_j = sum_i c[i][j] value^i
            let mut out = vec![Complex64::new(0.0, 0.0); dw + 1];
            for (j, slot) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in (0..=dz).rev() {
                    let c = p.coeff(i, j).to_f64().unwrap_or(f64::INFINITY);
                    acc = acc * value + c;
                }
                *slot = acc;
            }
            UniPolyC::new(out)
        }
        Var::W => {
            let mut out = vec![Complex64::new(0.0, 0.0); dz + 1];
            for (i, slot) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in (0..=dw).rev() {
                    let c = p.coeff(i, j).to_f64().unwrap_or(f64::INFINITY);
                    acc = acc * value + c;
                }
                *slot = acc;
            }
            UniPolyC::new(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bipoly;

    fn bi(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap().0
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn specialize_at_zero() {
        // (w^2 - z^2 - 1) at z = 0 -> w^2 - 1
        let u = specialize(&bi("w^2 - z^2 - 1"), Var::Z, c(0.0, 0.0));
        assert_eq!(u.degree(), Some(2));
        assert!((u.eval(c(1.0, 0.0))).norm() < 1e-12);
        assert!((u.eval(c(-1.0, 0.0))).norm() < 1e-12);
    }

    #[test]
    fn specialize_at_i() {
        // (w^2 - z^2 - 1) at z = i -> w^2
        let u = specialize(&bi("w^2 - z^2 - 1"), Var::Z, c(0.0, 1.0));
        assert_eq!(u.degree(), Some(2));
        assert!(u.coeffs()[0].norm() < 1e-12);
        assert!(u.coeffs()[1].norm() < 1e-12);
    }

    #[test]
    fn specialize_other_variable() {
        // (z - x^2) seen as w - z^2 here: set z := 2 in w - z^2 viewed in w
        // (z - x^2) at x = 2 becomes the constant-coefficient polynomial z - 4
        let u = specialize(&bi("w - z^2"), Var::Z, c(2.0, 0.0));
        assert_eq!(u.degree(), Some(1));
        assert!((u.eval(c(4.0, 0.0))).norm() < 1e-12);
    }

    #[test]
    fn trims_relative() {
        let u = UniPolyC::new(vec![c(1.0, 0.0), c(1e-15, 0.0)]);
        assert_eq!(u.degree(), Some(0));
        let z = UniPolyC::new(vec![]);
        assert!(z.is_zero());
    }
}
