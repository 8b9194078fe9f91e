//! Univariate complex root finding behind a small strategy registry.
//!
//! The contract is the residual bound checked by the fiber solver, not the
//! method; both simultaneous-iteration solvers below satisfy it on the
//! small degrees this crate produces (fibers stay below degree ~64).
//! Select one by name via [`lookup`] (the CLI exposes `--root-finder`).

use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub trait RootFinder: Send + Sync {
    fn name(&self) -> &'static str;

    /// All complex roots of `coeffs` (lowest degree first, trimmed, degree
    /// at least 1), in no particular order.
    fn roots(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>>;
}

/// Ehrlich-Aberth simultaneous iteration.
pub struct Aberth;

/// Durand-Kerner (Weierstrass) simultaneous iteration.
pub struct DurandKerner;

static ABERTH: Aberth = Aberth;
static DURAND_KERNER: DurandKerner = DurandKerner;

/// Registered solvers, selectable by name.
pub fn lookup(name: &str) -> Result<&'static dyn RootFinder> {
    match name {
        "aberth" => Ok(&ABERTH),
        "durand-kerner" => Ok(&DURAND_KERNER),
        other => Err(CoreError::UnknownRootFinder(other.to_string())),
    }
}

pub fn default_finder() -> &'static dyn RootFinder {
    &ABERTH
}

pub fn finder_names() -> &'static [&'static str] {
    &["aberth", "durand-kerner"]
}

fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_deriv(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in coeffs.iter().enumerate().rev().take_while(|(i, _)| *i >= 1) {
        acc = acc * x + c * i as f64;
    }
    acc
}

/// Cauchy-style inclusion radius and staggered ring of initial guesses.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    let radius = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    (0..d)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            radius * 0.7 * Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

fn closed_form(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    match coeffs.len() {
        2 => Some(vec![-coeffs[0] / coeffs[1]]),
        3 => {
            let (c, b, a) = (coeffs[0], coeffs[1], coeffs[2]);
            let disc = (b * b - 4.0 * a * c).sqrt();
            // pick the sign that avoids cancellation in -b -+ disc
            let q = if (b + disc).norm() >= (b - disc).norm() {
                -0.5 * (b + disc)
            } else {
                -0.5 * (b - disc)
            };
            if q.norm() == 0.0 {
                return Some(vec![Complex64::new(0.0, 0.0); 2]);
            }
            Some(vec![q / a, c / q])
        }
        _ => None,
    }
}

const MAX_ITER: u32 = 200;
const STEP_TOL: f64 = 1e-14;

impl RootFinder for Aberth {
    fn name(&self) -> &'static str {
        "aberth"
    }

    fn roots(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if let Some(r) = closed_form(coeffs) {
            return Ok(r);
        }
        let mut zs = initial_guesses(coeffs);
        for _ in 0..MAX_ITER {
            let mut moved: f64 = 0.0;
            for k in 0..zs.len() {
                let z = zs[k];
                let p = eval(coeffs, z);
                let dp = eval_deriv(coeffs, z);
                if p.norm() == 0.0 {
                    continue;
                }
                let newton = if dp.norm() == 0.0 {
                    Complex64::new(1e-12, 1e-12)
                } else {
                    p / dp
                };
                let mut s = Complex64::new(0.0, 0.0);
                for (j, &zj) in zs.iter().enumerate() {
                    if j != k {
                        let diff = z - zj;
                        if diff.norm() > 0.0 {
                            s += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - newton * s;
                let delta = if denom.norm() == 0.0 { newton } else { newton / denom };
                zs[k] = z - delta;
                if !zs[k].re.is_finite() || !zs[k].im.is_finite() {
                    return Err(CoreError::FiberSolve(
                        "aberth iteration diverged to a non-finite value".into(),
                    ));
                }
                moved = moved.max(delta.norm() / (1.0 + zs[k].norm()));
            }
            if moved <= STEP_TOL {
                return Ok(zs);
            }
        }
        Ok(zs)
    }
}

impl RootFinder for DurandKerner {
    fn name(&self) -> &'static str {
        "durand-kerner"
    }

    fn roots(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if let Some(r) = closed_form(coeffs) {
            return Ok(r);
        }
        let lead = coeffs[coeffs.len() - 1];
        let mut zs = initial_guesses(coeffs);
        for _ in 0..MAX_ITER {
            let mut moved: f64 = 0.0;
            for k in 0..zs.len() {
                let z = zs[k];
                let mut denom = lead;
                for (j, &zj) in zs.iter().enumerate() {
                    if j != k {
                        denom *= z - zj;
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(1e-280, 0.0);
                }
                let delta = eval(coeffs, z) / denom;
                zs[k] = z - delta;
                if !zs[k].re.is_finite() || !zs[k].im.is_finite() {
                    return Err(CoreError::FiberSolve(
                        "durand-kerner iteration diverged to a non-finite value".into(),
                    ));
                }
                moved = moved.max(delta.norm() / (1.0 + zs[k].norm()));
            }
            if moved <= STEP_TOL {
                return Ok(zs);
            }
        }
        Ok(zs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_all(finder: &dyn RootFinder) {
        // (x-1)(x-2)(x-3)(x+5) = x^4 - x^3 - 19x^2 + 49x - 30
        let coeffs = [c(-30.0, 0.0), c(49.0, 0.0), c(-19.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        let mut roots = finder.roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        let want = [-5.0, 1.0, 2.0, 3.0];
        for (r, w) in roots.iter().zip(want) {
            assert!((r - c(w, 0.0)).norm() < 1e-9, "{} got {r} want {w}", finder.name());
        }
    }

    #[test]
    fn both_strategies_find_quartic_roots() {
        check_all(&Aberth);
        check_all(&DurandKerner);
    }

    #[test]
    fn quadratic_closed_form_is_stable() {
        // roots 1e8 and 1e-8: naive formula loses the small root
        let coeffs = [c(1.0, 0.0), c(-(1e8 + 1e-8), 0.0), c(1.0, 0.0)];
        let mut roots = Aberth.roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!((roots[0] - c(1e-8, 0.0)).norm() < 1e-16);
        assert!((roots[1] - c(1e8, 0.0)).norm() < 1e-2);
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(lookup("aberth").unwrap().name(), "aberth");
        assert_eq!(lookup("durand-kerner").unwrap().name(), "durand-kerner");
        assert!(lookup("subdivision").is_err());
    }

    #[test]
    fn complex_coefficients() {
        // (x - i)(x + 2i) = x^2 + i x + 2
        let coeffs = [c(2.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)];
        for name in finder_names() {
            let finder = lookup(name).unwrap();
            let roots = finder.roots(&coeffs).unwrap();
            for r in &roots {
                assert!(eval(&coeffs, *r).norm() < 1e-9);
            }
        }
    }
}
