//! Points of the projective line over complex floats, with the chordal
//! metric (normalized so the sphere has diameter 1) and area-uniform
//! samplers.

use num_complex::Complex64;
use rand::Rng;

/// Chordal tolerance used for point equality.
pub const POINT_EQ_TOL: f64 = 1e-12;

/// Normalized homogeneous coordinate pair: `max(|a|, |b|) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    a: Complex64,
    b: Complex64,
}

/// Which affine chart a coordinate value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// the `z` chart (`a/b`)
    Front,
    /// the `1/z` chart (`b/a`)
    Back,
}

impl ProjPoint {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        let m = a.norm().max(b.norm());
        assert!(m > 0.0 && m.is_finite(), "degenerate homogeneous pair");
        ProjPoint { a: a / m, b: b / m }
    }

    pub fn from_affine(z: Complex64) -> Self {
        if z.norm() > 1.0 {
            // scale by 1/z to keep both entries bounded
            Self::new(Complex64::new(1.0, 0.0), z.inv())
        } else {
            Self::new(z, Complex64::new(1.0, 0.0))
        }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero() -> Self {
        ProjPoint {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }

    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    pub fn is_infinity(&self) -> bool {
        self.b.norm() <= POINT_EQ_TOL * self.a.norm()
    }

    /// Affine coordinate in the front chart; `None` at (numerical) infinity.
    pub fn affine(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.a / self.b)
        }
    }

    /// The chart in which this point has coordinate magnitude at most 1,
    /// with the coordinate value.
    pub fn chart_value(&self) -> (Chart, Complex64) {
        if self.a.norm() <= self.b.norm() {
            (Chart::Front, self.a / self.b)
        } else {
            (Chart::Back, self.b / self.a)
        }
    }

    pub fn from_chart(chart: Chart, v: Complex64) -> Self {
        match chart {
            Chart::Front => Self::new(v, Complex64::new(1.0, 0.0)),
            Chart::Back => Self::new(Complex64::new(1.0, 0.0), v),
        }
    }

    /// Chordal distance in `[0, 1]`: `|a1 b2 - b1 a2| / (|x| |y|)`.
    pub fn chordal(&self, other: &ProjPoint) -> f64 {
        let cross = (self.a * other.b - self.b * other.a).norm();
        let n1 = (self.a.norm_sqr() + self.b.norm_sqr()).sqrt();
        let n2 = (other.a.norm_sqr() + other.b.norm_sqr()).sqrt();
        (cross / (n1 * n2)).min(1.0)
    }

    pub fn approx_eq(&self, other: &ProjPoint) -> bool {
        self.chordal(other) <= POINT_EQ_TOL
    }

    /// Unit-sphere coordinates (the chordal metric is half the Euclidean
    /// chord of this embedding).
    pub fn to_sphere(&self) -> [f64; 3] {
        let n = self.a.norm_sqr() + self.b.norm_sqr();
        let ab = self.a * self.b.conj();
        [
            2.0 * ab.re / n,
            2.0 * ab.im / n,
            (self.a.norm_sqr() - self.b.norm_sqr()) / n,
        ]
    }

    pub fn from_sphere(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        if z <= 0.0 {
            Self::new(Complex64::new(x, y), Complex64::new(1.0 - z, 0.0))
        } else {
            Self::new(Complex64::new(1.0 + z, 0.0), Complex64::new(x, -y))
        }
    }

    /// Deterministic sort key (chart id, then coordinate bit patterns).
    pub fn sort_key(&self) -> (u8, u64, u64) {
        let (chart, v) = self.chart_value();
        let c = match chart {
            Chart::Front => 0u8,
            Chart::Back => 1u8,
        };
        (c, v.re.to_bits(), v.im.to_bits())
    }

    /// Moves the point by (approximately) the given chordal distance in a
    /// random direction.
    pub fn jitter(&self, eps: f64, rng: &mut impl Rng) -> Self {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let dir = Complex64::new(theta.cos(), theta.sin());
        let (chart, v) = self.chart_value();
        // chordal ~ |dv| / (1 + |v|^2) near v
        let dv = dir * eps * (1.0 + v.norm_sqr());
        Self::from_chart(chart, v + dv)
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.affine() {
            None => write!(f, "inf"),
            Some(z) => write!(
                f,
                "{}{}{}i",
                z.re,
                if z.im < 0.0 { "-" } else { "+" },
                z.im.abs()
            ),
        }
    }
}

/// Uniform with respect to spherical area.
pub fn uniform_sphere(rng: &mut impl Rng) -> ProjPoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    ProjPoint::from_sphere([r * theta.cos(), r * theta.sin(), z])
}

/// Area-uniform point of the chordal ball of radius `r` around `center`.
pub fn uniform_cap(center: &ProjPoint, r: f64, rng: &mut impl Rng) -> ProjPoint {
    let r = r.clamp(0.0, 1.0);
    // chordal = sin(theta/2), so cos(theta) = 1 - 2 r^2 at the rim
    let cos_rim = 1.0 - 2.0 * r * r;
    let ct: f64 = rng.gen_range(cos_rim..=1.0);
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);

    let cv = center.to_sphere();
    // orthonormal frame at cv
    let pick = if cv[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut e1 = [
        cv[1] * pick[2] - cv[2] * pick[1],
        cv[2] * pick[0] - cv[0] * pick[2],
        cv[0] * pick[1] - cv[1] * pick[0],
    ];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in &mut e1 {
        *v /= n1;
    }
    let e2 = [
        cv[1] * e1[2] - cv[2] * e1[1],
        cv[2] * e1[0] - cv[0] * e1[2],
        cv[0] * e1[1] - cv[1] * e1[0],
    ];
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = ct * cv[i] + st * (phi.cos() * e1[i] + phi.sin() * e2[i]);
    }
    ProjPoint::from_sphere(out)
}

/// Area-uniform point of the band of points within chordal distance
/// `width` of the unit circle `|z| = 1`.
pub fn circle_band(width: f64, rng: &mut impl Rng) -> ProjPoint {
    // |z| = rho lies at chordal distance |rho - 1| / sqrt(2 (1 + rho^2))
    // from the circle; the band is symmetric in the sphere Z-coordinate.
    let w2 = 2.0 * width * width;
    let a = 1.0 - w2;
    let disc = (4.0 - 4.0 * a * a).max(0.0).sqrt();
    let rho_hi = (2.0 + disc) / (2.0 * a);
    let z_hi = (rho_hi * rho_hi - 1.0) / (rho_hi * rho_hi + 1.0);
    let z: f64 = rng.gen_range(-z_hi..=z_hi);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    ProjPoint::from_sphere([r * theta.cos(), r * theta.sin(), z])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chordal_of_zero_and_infinity_is_one() {
        assert!((ProjPoint::zero().chordal(&ProjPoint::infinity()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chordal_is_zero_on_equal_points() {
        let x = ProjPoint::from_affine(c(0.3, -0.7));
        assert_eq!(x.chordal(&x), 0.0);
    }

    #[test]
    fn chordal_antipodal_formula() {
        for t in [0.1, 0.5, 1.0, 3.0, 50.0] {
            let x = ProjPoint::from_affine(c(t, 0.0));
            let y = ProjPoint::from_affine(c(-t, 0.0));
            let want = 2.0 * t / (1.0 + t * t);
            assert!((x.chordal(&y) - want).abs() < 1e-12, "t={t}");
        }
        // the decay toward 0 for large |t| is the collapse that kills
        // separation along escaping orbits
        let big = ProjPoint::from_affine(c(1e8, 0.0));
        let neg = ProjPoint::from_affine(c(-1e8, 0.0));
        assert!(big.chordal(&neg) < 1e-7);
    }

    #[test]
    fn sphere_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = uniform_sphere(&mut rng);
            let q = ProjPoint::from_sphere(p.to_sphere());
            assert!(p.chordal(&q) < 1e-12);
        }
    }

    #[test]
    fn chordal_is_half_euclidean_chord() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let p = uniform_sphere(&mut rng);
            let q = uniform_sphere(&mut rng);
            let pv = p.to_sphere();
            let qv = q.to_sphere();
            let chord = ((pv[0] - qv[0]).powi(2)
                + (pv[1] - qv[1]).powi(2)
                + (pv[2] - qv[2]).powi(2))
            .sqrt();
            assert!((p.chordal(&q) - chord / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cap_sampling_stays_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let center = ProjPoint::from_affine(c(1.0, 0.0));
        for _ in 0..500 {
            let p = uniform_cap(&center, 0.3, &mut rng);
            assert!(center.chordal(&p) <= 0.3 + 1e-9);
        }
    }

    #[test]
    fn circle_band_respects_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let p = circle_band(0.1, &mut rng);
            let z = p.affine().expect("band avoids infinity");
            let rho = z.norm();
            let d = (rho - 1.0).abs() / (2.0 * (1.0 + rho * rho)).sqrt();
            assert!(d <= 0.1 + 1e-9, "rho={rho} d={d}");
        }
    }

    #[test]
    fn jitter_moves_by_roughly_eps() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = ProjPoint::from_affine(c(0.5, 0.5));
        let y = x.jitter(1e-9, &mut rng);
        let d = x.chordal(&y);
        assert!(d > 1e-11 && d < 1e-7);
    }
}
