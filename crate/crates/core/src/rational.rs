//! Rational maps of the sphere: evaluation, composition, conjugation,
//! critical points and homogeneous lifts.
//!
//! A map is stored as a coprime pair `P/Q`; coprimality is enforced at
//! construction by pairing and removing shared roots. Functional
//! identities between maps are tested on cross-multiplied coefficients
//! after scale normalization, which separates true identities (residuals
//! at machine noise) from failures (residuals of order one) cleanly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::poly::Polynomial;
use crate::sphere::SpherePoint;
use crate::tolerances::ROOT_PAIR_TOL;

#[derive(Clone, Debug)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Builds `P/Q`, reducing to coprime form and normalizing the joint
    /// coefficient scale.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut map = RationalMap { num, den };
        map.reduce()?;
        Ok(map)
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalMap {
            num: p,
            den: Polynomial::one(),
        }
        .normalized()
    }

    pub fn identity() -> Self {
        RationalMap::from_polynomial(Polynomial::monomial(Complex64::new(1.0, 0.0), 1))
    }

    pub fn constant(c: Complex64) -> Self {
        RationalMap::from_polynomial(Polynomial::constant(c))
    }

    fn reduce(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = Polynomial::one();
            return Ok(());
        }
        if self.num.degree() >= 1 && self.den.degree() >= 1 {
            let num_roots = self.num.roots()?;
            let mut den_roots = self.den.roots()?;
            for r in num_roots {
                if let Some(pos) = den_roots
                    .iter()
                    .position(|s| (r - s).norm() <= ROOT_PAIR_TOL)
                {
                    let s = den_roots.remove(pos);
                    let shared = (r + s) / 2.0;
                    self.num = self.num.deflate(shared);
                    self.den = self.den.deflate(shared);
                }
            }
        }
        *self = self.clone().normalized();
        Ok(())
    }

    fn normalized(self) -> Self {
        let scale = self.num.max_coeff_norm().max(self.den.max_coeff_norm());
        if scale == 0.0 {
            return self;
        }
        let k = Complex64::new(1.0 / scale, 0.0);
        RationalMap {
            num: self.num.scale(k),
            den: self.den.scale(k),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        self.num.degree().max(self.den.degree())
    }

    pub fn require_degree(&self, need: usize) -> Result<()> {
        if self.degree() < need {
            return Err(Error::DegreeTooLow {
                need,
                got: self.degree(),
            });
        }
        Ok(())
    }

    /// Total evaluation on the sphere via the homogeneous lift.
    pub fn eval(&self, p: &SpherePoint) -> SpherePoint {
        let (w1, w2) = self.lift().apply(p.homogeneous());
        SpherePoint::new(w1, w2).unwrap_or_else(|_| {
            // A coprime pair has no joint projective zero; reaching this
            // means catastrophic cancellation, so fall back to the pole.
            SpherePoint::infinity()
        })
    }

    /// Plain affine evaluation `P(z)/Q(z)`; poles produce infinities.
    pub fn eval_affine(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// The homogeneous lift, with coefficients normalized so the largest
    /// magnitude is 1.
    pub fn lift(&self) -> HomogeneousLift {
        let d = self.degree();
        let zero = Complex64::new(0.0, 0.0);
        let mut top = vec![zero; d + 1];
        let mut bottom = vec![zero; d + 1];
        for i in 0..=d {
            top[i] = self.num.coeff(i);
            bottom[i] = self.den.coeff(i);
        }
        let scale = top
            .iter()
            .chain(bottom.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        for c in top.iter_mut().chain(bottom.iter_mut()) {
            *c /= scale;
        }
        HomogeneousLift { top, bottom }
    }

    /// Composition `self(other(z))`, done Horner-style on homogeneous
    /// pairs so no pole bookkeeping is needed.
    pub fn compose(&self, other: &RationalMap) -> RationalMap {
        let (num, den) = self.compose_raw(other);
        RationalMap::new(num, den).expect("composition of valid maps")
    }

    /// Composition as an unreduced numerator/denominator pair. Equality
    /// tests on cross-multiplied coefficients are representation
    /// independent, so they can skip the root-finding reduction.
    pub fn compose_raw(&self, other: &RationalMap) -> (Polynomial, Polynomial) {
        let n = self.degree();
        let (ps, qs) = (&other.num, &other.den);
        // Powers of the inner denominator up to n.
        let mut qs_pow = Vec::with_capacity(n + 1);
        qs_pow.push(Polynomial::one());
        for i in 1..=n {
            qs_pow.push(&qs_pow[i - 1] * qs);
        }
        let mut num_acc = Polynomial::constant(self.num.coeff(n));
        let mut den_acc = Polynomial::constant(self.den.coeff(n));
        for i in (0..n).rev() {
            num_acc = &(&num_acc * ps) + &qs_pow[n - i].scale(self.num.coeff(i));
            den_acc = &(&den_acc * ps) + &qs_pow[n - i].scale(self.den.coeff(i));
        }
        (num_acc, den_acc)
    }

    /// Normalized coefficient defect of the identity `self = other`,
    /// computed from `P_R Q_S - P_S Q_R`.
    pub fn residual(&self, other: &RationalMap) -> f64 {
        let left = &self.num * &other.den;
        let right = &other.num * &self.den;
        let diff = &left - &right;
        let scale = left.max_coeff_norm().max(right.max_coeff_norm());
        if scale == 0.0 {
            return 0.0;
        }
        diff.max_coeff_norm() / scale
    }

    /// Equality as maps of the sphere, scale-free.
    pub fn equals(&self, other: &RationalMap, tol: f64) -> bool {
        self.residual(other) <= tol
    }

    /// Conjugation by an isometry: `sigma . self . sigma^{-1}`.
    pub fn conjugate(&self, sigma: &Isometry) -> RationalMap {
        let s = RationalMap::from(sigma);
        let s_inv = RationalMap::from(&sigma.inverse());
        s.compose(&self.compose(&s_inv))
    }

    /// Critical-point polynomial `W = P' Q - P Q'`; finite critical
    /// points are its roots.
    pub fn critical_polynomial(&self) -> Polynomial {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// The `2 deg - 2` critical points, with multiplicity; infinity is
    /// critical when the finite count falls short.
    pub fn critical_points(&self) -> Result<Vec<SpherePoint>> {
        self.require_degree(2)?;
        let w = self.critical_polynomial();
        if w.is_zero() {
            return Err(Error::DegenerateInput(
                "critical polynomial vanished identically".into(),
            ));
        }
        let mut out: Vec<SpherePoint> = w
            .roots()?
            .into_iter()
            .map(SpherePoint::from_affine)
            .collect();
        let expected = 2 * self.degree() - 2;
        while out.len() < expected {
            out.push(SpherePoint::infinity());
        }
        Ok(out)
    }

    /// The full preimage of `w`, with multiplicity: `degree` points,
    /// counting infinity when the fiber polynomial drops degree.
    pub fn preimages(&self, w: &SpherePoint) -> Result<Vec<SpherePoint>> {
        self.require_degree(1)?;
        let (w1, w2) = w.homogeneous();
        let fiber = &self.num.scale(w2) - &self.den.scale(w1);
        if fiber.is_zero() {
            return Err(Error::DegenerateInput(
                "fiber polynomial vanished; target is a totally degenerate value".into(),
            ));
        }
        let mut out: Vec<SpherePoint> = fiber
            .roots()?
            .into_iter()
            .map(SpherePoint::from_affine)
            .collect();
        while out.len() < self.degree() {
            out.push(SpherePoint::infinity());
        }
        Ok(out)
    }
}

impl From<&Isometry> for RationalMap {
    fn from(sigma: &Isometry) -> Self {
        let (a, b) = sigma.params();
        let num = Polynomial::new(vec![-b.conj(), a]);
        let den = Polynomial::new(vec![a.conj(), b]);
        RationalMap { num, den }.normalized()
    }
}

/// Recovers an isometry from a degree-one rational map, if the map is a
/// rotation of the sphere.
pub fn isometry_from_map(map: &RationalMap, tol: f64) -> Result<Isometry> {
    if map.degree() != 1 {
        return Err(Error::NotAnIsometry);
    }
    let (p1, p0) = (map.num.coeff(1), map.num.coeff(0));
    let (q1, q0) = (map.den.coeff(1), map.den.coeff(0));
    let det = p1 * q0 - p0 * q1;
    if det.norm() == 0.0 {
        return Err(Error::NotAnIsometry);
    }
    let k = det.sqrt().inv();
    // In SU(2) form the matrix is [[a, -conj(b)], [b, conj(a)]].
    let (a, nb, b, ca) = (k * p1, k * p0, k * q1, k * q0);
    let defect = (ca - a.conj()).norm() + (nb + b.conj()).norm();
    if defect > tol {
        return Err(Error::NotAnIsometry);
    }
    Isometry::new(a, b)
}

/// Homogeneous degree-d self-map of C^2 projecting to the rational map;
/// coefficient of `z1^i z2^{d-i}` sits at index `i`.
#[derive(Clone, Debug)]
pub struct HomogeneousLift {
    top: Vec<Complex64>,
    bottom: Vec<Complex64>,
}

impl HomogeneousLift {
    pub fn degree(&self) -> usize {
        self.top.len() - 1
    }

    pub fn coefficients(&self) -> (&[Complex64], &[Complex64]) {
        (&self.top, &self.bottom)
    }

    pub fn apply(&self, (z1, z2): (Complex64, Complex64)) -> (Complex64, Complex64) {
        let d = self.degree();
        // Horner in z1 with precomputed powers of z2.
        let mut z2_pow = vec![Complex64::new(1.0, 0.0); d + 1];
        for i in 1..=d {
            z2_pow[i] = z2_pow[i - 1] * z2;
        }
        let mut t = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for i in (0..=d).rev() {
            t = t * z1 + self.top[i] * z2_pow[d - i];
            b = b * z1 + self.bottom[i] * z2_pow[d - i];
        }
        (t, b)
    }
}

/// The Newton iteration map `z - p(z)/p'(z)` of a squarefree polynomial.
pub fn newton_map(p: &Polynomial) -> Result<RationalMap> {
    if p.degree() < 2 {
        return Err(Error::DegenerateInput(
            "newton map needs a polynomial of degree >= 2".into(),
        ));
    }
    let dp = p.derivative();
    let p_roots = p.roots()?;
    let dp_roots = dp.roots()?;
    for r in &p_roots {
        if dp_roots.iter().any(|s| (r - s).norm() <= ROOT_PAIR_TOL) {
            return Err(Error::DegenerateInput(
                "polynomial has a repeated root".into(),
            ));
        }
    }
    let z = Polynomial::monomial(Complex64::new(1.0, 0.0), 1);
    RationalMap::new(&(&z * &dp) - p, dp)
}

// Field arithmetic on rational maps, used by the expression parser.

impl std::ops::Add for &RationalMap {
    type Output = RationalMap;
    fn add(self, rhs: &RationalMap) -> RationalMap {
        RationalMap::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominators")
    }
}

impl std::ops::Sub for &RationalMap {
    type Output = RationalMap;
    fn sub(self, rhs: &RationalMap) -> RationalMap {
        RationalMap::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominators")
    }
}

impl std::ops::Mul for &RationalMap {
    type Output = RationalMap;
    fn mul(self, rhs: &RationalMap) -> RationalMap {
        RationalMap::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl std::ops::Neg for &RationalMap {
    type Output = RationalMap;
    fn neg(self) -> RationalMap {
        RationalMap {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl RationalMap {
    /// Division as rational functions; errors when `rhs` is the zero map.
    pub fn divide(&self, rhs: &RationalMap) -> Result<RationalMap> {
        if rhs.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RationalMap::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Integer power as a rational function (negative exponents invert).
    pub fn pow(&self, k: i32) -> Result<RationalMap> {
        if k < 0 && self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut out = RationalMap::constant(Complex64::new(1.0, 0.0));
        for _ in 0..k.unsigned_abs() {
            out = &out * self;
        }
        if k < 0 {
            out = RationalMap::new(out.den, out.num)?;
        }
        Ok(out)
    }
}

impl std::fmt::Display for RationalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.degree() == 0 && !self.den.is_zero() {
            let d = self.den.coeff(0);
            if (d - Complex64::new(1.0, 0.0)).norm() < 1e-15 {
                return write!(f, "{}", self.num);
            }
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
