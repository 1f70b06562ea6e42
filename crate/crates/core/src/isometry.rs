//! Holomorphic isometries of the Riemann sphere and their finite
//! subgroups.
//!
//! An isometry is the Mobius map `z -> (a z - conj(b)) / (b z + conj(a))`
//! with `|a|^2 + |b|^2 = 1`; on homogeneous pairs it acts as the SU(2)
//! matrix `[[a, -conj(b)], [b, conj(a)]]`. The pair `(a, b)` and its
//! negative give the same map, so elements are canonicalized before
//! comparison.

use num_complex::Complex64;
use serde::ser::SerializeStruct;

use crate::error::{Error, Result};
use crate::sphere::SpherePoint;
use crate::tolerances::{GROUP_CLOSURE_CAP, ISOMETRY_EQ_TOL};

/// A holomorphic isometry of the sphere, stored as a canonicalized unit
/// pair `(a, b)`.
#[derive(Clone, Copy, Debug)]
pub struct Isometry {
    a: Complex64,
    b: Complex64,
}

impl Isometry {
    /// Normalizes `(a, b)` to unit norm. Errors on the zero pair.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroPair);
        }
        Ok(Isometry { a: a / n, b: b / n }.canonicalized())
    }

    // The SU(2) double cover sends (a, b) and (-a, -b) to the same map;
    // fix the sign so the first nonzero component has argument in [0, pi).
    fn canonicalized(self) -> Self {
        let lead = if self.a.norm() > 1e-9 { self.a } else { self.b };
        let arg = lead.arg();
        if (0.0..std::f64::consts::PI).contains(&arg) {
            self
        } else {
            Isometry {
                a: -self.a,
                b: -self.b,
            }
        }
    }

    pub fn identity() -> Self {
        Isometry {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Rotation `z -> e^{i theta} z` about the axis {0, inf}.
    pub fn rotation(theta: f64) -> Self {
        Isometry::new(Complex64::from_polar(1.0, theta / 2.0), Complex64::new(0.0, 0.0))
            .expect("unit pair")
    }

    /// The inversion `z -> mu / z`; only the phase of `mu` is used.
    pub fn inversion(mu: Complex64) -> Self {
        let phase = mu.arg();
        let beta = -(std::f64::consts::PI + phase) / 2.0;
        Isometry::new(Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, beta))
            .expect("unit pair")
    }

    /// An isometry sending `p` to 0 (used to move rotation axes).
    pub fn point_to_zero(p: &SpherePoint) -> Self {
        let (p1, p2) = p.homogeneous();
        Isometry::new(p2, p1.conj()).expect("unit point")
    }

    /// Rotation by `angle` about the axis through `axis` (and its
    /// antipode); in a chart where `axis` sits at 0 the map is
    /// `z -> e^{i angle} z`.
    pub fn rotation_about(axis: &SpherePoint, angle: f64) -> Self {
        let gamma = Isometry::point_to_zero(axis);
        gamma.inverse().compose(&Isometry::rotation(angle)).compose(&gamma)
    }

    pub fn params(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// Action on a sphere point via the homogeneous matrix; total on the
    /// sphere, no pole cases.
    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let (z1, z2) = p.homogeneous();
        let w1 = self.a * z1 - self.b.conj() * z2;
        let w2 = self.b * z1 + self.a.conj() * z2;
        SpherePoint::new(w1, w2).expect("unitary action preserves nonzero pairs")
    }

    /// Composition `self` after `other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (other.a, other.b);
        Isometry::new(a1 * a2 - b1.conj() * b2, b1 * a2 + a1.conj() * b2)
            .expect("product of unit pairs")
    }

    pub fn inverse(&self) -> Isometry {
        Isometry::new(self.a.conj(), -self.b).expect("unit pair")
    }

    /// Iterated composition `self^k`.
    pub fn power(&self, k: usize) -> Isometry {
        let mut out = Isometry::identity();
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Element equality up to the sign ambiguity of the double cover.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        let d_plus = (self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr();
        let d_minus = (self.a + other.a).norm_sqr() + (self.b + other.b).norm_sqr();
        d_plus.min(d_minus).sqrt() <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Isometry::identity(), tol)
    }

    /// The two antipodal fixed points (eigenvector directions of the
    /// SU(2) matrix). Errors for the identity.
    pub fn fixed_points(&self) -> Result<(SpherePoint, SpherePoint)> {
        if self.is_identity(ISOMETRY_EQ_TOL) {
            return Err(Error::IdentityHasNoAxis);
        }
        let (p, _) = self.eigen_axes();
        Ok(p)
    }

    // Eigenvalues are re(a) +- i s with s = sqrt(im(a)^2 + |b|^2);
    // returns the antipodal eigenvector pair and the eigenvalue whose
    // eigenvector is the first point.
    fn eigen_axes(&self) -> ((SpherePoint, SpherePoint), Complex64) {
        let s = (self.a.im * self.a.im + self.b.norm_sqr()).sqrt();
        let lambda = Complex64::new(self.a.re, s);
        let axis = self.eigenvector(lambda);
        ((axis, axis.antipode()), lambda)
    }

    fn eigenvector(&self, lambda: Complex64) -> SpherePoint {
        // (M - lambda I) v = 0 has the two row solutions below; pick the
        // better conditioned one.
        let v_top = (self.b.conj(), self.a - lambda);
        let v_bot = (lambda - self.a.conj(), self.b);
        let n_top = v_top.0.norm_sqr() + v_top.1.norm_sqr();
        let n_bot = v_bot.0.norm_sqr() + v_bot.1.norm_sqr();
        let (v1, v2) = if n_top >= n_bot { v_top } else { v_bot };
        SpherePoint::new(v1, v2).expect("non-identity isometry has an eigenvector")
    }

    /// Rotation axis and angle in (0, pi]; conjugating so the axis moves
    /// to 0 turns the map into `z -> e^{i angle} z`.
    pub fn rotation_axis_angle(&self) -> Result<(SpherePoint, f64)> {
        if self.is_identity(ISOMETRY_EQ_TOL) {
            return Err(Error::IdentityHasNoAxis);
        }
        let ((p, q), lambda) = self.eigen_axes();
        let two_pi = 2.0 * std::f64::consts::PI;
        let theta = (-2.0 * lambda.arg()).rem_euclid(two_pi);
        // The antipodal axis carries the complementary angle; report the
        // one in (0, pi].
        if theta <= std::f64::consts::PI + 1e-15 {
            Ok((p, theta))
        } else {
            Ok((q, two_pi - theta))
        }
    }
}

impl std::fmt::Display for Isometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "mobius(a={}, b={})",
            fmt_complex(self.a),
            fmt_complex(self.b)
        )
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im >= 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}{im}i")
    }
}

impl serde::Serialize for Isometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Isometry", 3)?;
        st.serialize_field("a", &[self.a.re, self.a.im])?;
        st.serialize_field("b", &[self.b.re, self.b.im])?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// Structure of a symmetry group of a Julia set.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "tag")]
pub enum GroupClass {
    Trivial,
    Cyclic { k: usize, axis: [SpherePoint; 2] },
    Dihedral { k: usize, axis: [SpherePoint; 2] },
    Tetrahedral,
    Octahedral,
    Icosahedral,
    CircleWithInversions { axis: [SpherePoint; 2] },
    FullIsometryGroup,
}

impl GroupClass {
    /// Number of elements; `None` for the continuous cases.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupClass::Trivial => Some(1),
            GroupClass::Cyclic { k, .. } => Some(*k),
            GroupClass::Dihedral { k, .. } => Some(2 * k),
            GroupClass::Tetrahedral => Some(12),
            GroupClass::Octahedral => Some(24),
            GroupClass::Icosahedral => Some(60),
            GroupClass::CircleWithInversions { .. } | GroupClass::FullIsometryGroup => None,
        }
    }

    pub fn tag_name(&self) -> &'static str {
        match self {
            GroupClass::Trivial => "Trivial",
            GroupClass::Cyclic { .. } => "Cyclic",
            GroupClass::Dihedral { .. } => "Dihedral",
            GroupClass::Tetrahedral => "Tetrahedral",
            GroupClass::Octahedral => "Octahedral",
            GroupClass::Icosahedral => "Icosahedral",
            GroupClass::CircleWithInversions { .. } => "CircleWithInversions",
            GroupClass::FullIsometryGroup => "FullIsometryGroup",
        }
    }
}

impl std::fmt::Display for GroupClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupClass::Cyclic { k, axis } => {
                write!(f, "Cyclic({k}) about {{{}, {}}}", axis[0], axis[1])
            }
            GroupClass::Dihedral { k, axis } => {
                write!(f, "Dihedral({k}) about {{{}, {}}}", axis[0], axis[1])
            }
            GroupClass::CircleWithInversions { axis } => {
                write!(f, "CircleWithInversions about {{{}, {}}}", axis[0], axis[1])
            }
            other => write!(f, "{}", other.tag_name()),
        }
    }
}

/// Deduplicates by action equality, keeping input order.
pub fn dedup_isometries(elements: &[Isometry], tol: f64) -> Vec<Isometry> {
    let mut out: Vec<Isometry> = Vec::new();
    for e in elements {
        if !out.iter().any(|f| f.approx_eq(e, tol)) {
            out.push(*e);
        }
    }
    out
}

/// Closure of a generating set under composition, capped to guard
/// against tolerance drift producing spurious new elements.
pub fn group_closure(generators: &[Isometry], cap: usize) -> Result<Vec<Isometry>> {
    let mut set = vec![Isometry::identity()];
    for g in generators {
        if !set.iter().any(|f| f.approx_eq(g, ISOMETRY_EQ_TOL)) {
            set.push(*g);
        }
    }
    loop {
        let mut added = false;
        let snapshot = set.clone();
        for x in &snapshot {
            for y in &snapshot {
                let p = x.compose(y);
                if !set.iter().any(|f| f.approx_eq(&p, ISOMETRY_EQ_TOL)) {
                    set.push(p);
                    added = true;
                    if set.len() > cap {
                        return Err(Error::NotAGroup(format!(
                            "closure exceeded {cap} elements"
                        )));
                    }
                }
            }
        }
        if !added {
            return Ok(set);
        }
    }
}

// Axis of a non-identity element as an R^3 direction with a canonical
// sign, so antipodal representatives collapse.
fn canonical_axis(e: &Isometry) -> [f64; 3] {
    let (p, _) = e.fixed_points().expect("non-identity");
    let mut v = p.to_r3();
    let lead = if v[0].abs() > 1e-9 {
        v[0]
    } else if v[1].abs() > 1e-9 {
        v[1]
    } else {
        v[2]
    };
    if lead < 0.0 {
        v = [-v[0], -v[1], -v[2]];
    }
    v
}

fn axis_eq(u: &[f64; 3], v: &[f64; 3]) -> bool {
    let d2: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    d2.sqrt() < 1e-6
}

fn dot(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Classifies a finite set of isometries, which must form a group under
/// composition (verified internally within tolerance).
///
/// Returns one of Trivial, Cyclic, Dihedral, Tetrahedral, Octahedral or
/// Icosahedral; the continuous classes are never produced here.
pub fn classify_finite_group(elements: &[Isometry]) -> Result<GroupClass> {
    let set = dedup_isometries(elements, ISOMETRY_EQ_TOL);
    if set.len() > GROUP_CLOSURE_CAP {
        return Err(Error::NotAGroup(format!(
            "{} elements exceed the enumeration cap",
            set.len()
        )));
    }
    if !set.iter().any(|e| e.is_identity(ISOMETRY_EQ_TOL)) {
        return Err(Error::NotAGroup("identity missing".into()));
    }
    for x in &set {
        if !set
            .iter()
            .any(|f| f.approx_eq(&x.inverse(), ISOMETRY_EQ_TOL))
        {
            return Err(Error::NotAGroup(format!("inverse of {x} missing")));
        }
        for y in &set {
            let p = x.compose(y);
            if !set.iter().any(|f| f.approx_eq(&p, ISOMETRY_EQ_TOL)) {
                return Err(Error::NotAGroup(format!("product {x} * {y} escapes the set")));
            }
        }
    }

    let n = set.len();
    if n == 1 {
        return Ok(GroupClass::Trivial);
    }

    // Group the non-identity elements by rotation axis.
    let mut axes: Vec<([f64; 3], Vec<usize>)> = Vec::new();
    let mut non_id = Vec::new();
    for (i, e) in set.iter().enumerate() {
        if e.is_identity(ISOMETRY_EQ_TOL) {
            continue;
        }
        non_id.push(i);
        let v = canonical_axis(e);
        match axes.iter_mut().find(|(u, _)| axis_eq(u, &v)) {
            Some((_, members)) => members.push(i),
            None => axes.push((v, vec![i])),
        }
    }

    let axis_pair_of = |idx: usize| -> [SpherePoint; 2] {
        let (p, q) = set[idx].fixed_points().expect("non-identity");
        [p, q]
    };

    if axes.len() == 1 {
        return Ok(GroupClass::Cyclic {
            k: n,
            axis: axis_pair_of(axes[0].1[0]),
        });
    }

    // Dihedral: a main axis carrying k - 1 rotations plus k half-turn
    // axes perpendicular to it, total order 2k.
    if n % 2 == 0 {
        let k = n / 2;
        for (main, members) in &axes {
            if members.len() != k - 1 {
                continue;
            }
            let others: Vec<_> = axes.iter().filter(|(u, _)| !axis_eq(u, main)).collect();
            let perpendicular = others
                .iter()
                .all(|(u, m)| m.len() == 1 && dot(u, main).abs() < 1e-6);
            if perpendicular && others.len() == k {
                return Ok(GroupClass::Dihedral {
                    k,
                    axis: axis_pair_of(members[0]),
                });
            }
        }
    }

    match n {
        12 => Ok(GroupClass::Tetrahedral),
        24 => Ok(GroupClass::Octahedral),
        60 => Ok(GroupClass::Icosahedral),
        other => Err(Error::UnrecognizedOrder(other)),
    }
}
