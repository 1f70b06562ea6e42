//! Points of the Riemann sphere in homogeneous coordinates and the
//! chordal metric.
//!
//! A point is a unit pair `(z1, z2)` with affine value `z1/z2`; `z2 = 0`
//! is the point at infinity. Homogeneous storage avoids overflow near
//! infinity and matches the polynomial lift used by the dynamics modules.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::POINT_EQ_TOL;

/// A point of the Riemann sphere, stored as a unit homogeneous pair.
#[derive(Clone, Copy, Debug)]
pub struct SpherePoint {
    z1: Complex64,
    z2: Complex64,
}

impl SpherePoint {
    /// Builds a point from a homogeneous pair, normalizing to unit norm.
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let n = (z1.norm_sqr() + z2.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroPair);
        }
        Ok(SpherePoint {
            z1: z1 / n,
            z2: z2 / n,
        })
    }

    pub fn from_affine(z: Complex64) -> Self {
        if z.re.is_infinite() || z.im.is_infinite() {
            return Self::infinity();
        }
        // For large |z| normalize via 1/z to dodge overflow in norm_sqr.
        if z.norm_sqr() > 1e200 {
            let w = z.inv();
            return SpherePoint::new(Complex64::new(1.0, 0.0), w).expect("finite inverse");
        }
        SpherePoint::new(z, Complex64::new(1.0, 0.0)).expect("finite affine point")
    }

    pub fn zero() -> Self {
        SpherePoint {
            z1: Complex64::new(0.0, 0.0),
            z2: Complex64::new(1.0, 0.0),
        }
    }

    pub fn infinity() -> Self {
        SpherePoint {
            z1: Complex64::new(1.0, 0.0),
            z2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        (self.z1, self.z2)
    }

    /// Affine value `z1/z2`; `None` for the point at infinity.
    pub fn affine(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.z1 / self.z2)
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.z2.norm() <= 1e-15
    }

    /// The antipodal point, at chordal distance 2.
    pub fn antipode(&self) -> Self {
        SpherePoint {
            z1: -self.z2.conj(),
            z2: self.z1.conj(),
        }
    }

    /// Equality as points of the sphere: homogeneous pairs are
    /// complex-proportional, tested via the cross product.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        cross_norm(self, other) <= tol
    }

    pub fn eq_default(&self, other: &Self) -> bool {
        self.approx_eq(other, POINT_EQ_TOL)
    }

    /// Embedding into the unit sphere of R^3; the chordal metric is the
    /// Euclidean distance between embedded points.
    pub fn to_r3(&self) -> [f64; 3] {
        let m = self.z1 * self.z2.conj();
        [2.0 * m.re, 2.0 * m.im, self.z1.norm_sqr() - self.z2.norm_sqr()]
    }

    /// Inverse of [`to_r3`](Self::to_r3) for unit vectors.
    pub fn from_r3(x: [f64; 3]) -> Self {
        let [a, b, c] = x;
        // (z1, z2) with |z1|^2 - |z2|^2 = c and 2 z1 conj(z2) = a + bi.
        let z2 = ((1.0 - c) / 2.0).max(0.0).sqrt();
        if z2 < 1e-8 {
            // Near the north pole flip to the better-conditioned chart.
            let z1 = ((1.0 + c) / 2.0).max(0.0).sqrt();
            let w = Complex64::new(a, -b) / (2.0 * z1);
            return SpherePoint::new(Complex64::new(z1, 0.0), w).expect("unit vector");
        }
        let z1 = Complex64::new(a, b) / (2.0 * z2);
        SpherePoint::new(z1, Complex64::new(z2, 0.0)).expect("unit vector")
    }
}

fn cross_norm(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let (p1, p2) = (p.z1, p.z2);
    let (q1, q2) = (q.z1, q.z2);
    (p1 * q2 - p2 * q1).norm()
}

/// Chordal distance between sphere points, in [0, 2].
///
/// For unit homogeneous pairs this is `2 |z1 w2 - z2 w1|`, the scale-free
/// form of `2|z - w| / sqrt((1 + |z|^2)(1 + |w|^2))`.
pub fn chordal_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    (2.0 * cross_norm(p, q)).min(2.0)
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.affine() {
            None => write!(f, "inf"),
            Some(z) => write!(f, "{}", crate::isometry::fmt_complex(z)),
        }
    }
}

impl serde::Serialize for SpherePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
