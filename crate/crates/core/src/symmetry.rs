//! Executable symmetry criteria and overall classification of the
//! symmetry group of a Julia set.
//!
//! Algebraic (commutation) evidence outranks numeric (Hausdorff)
//! evidence: the commutation identity is sufficient for membership in
//! the symmetry group, while cloud comparisons are approximate and carry
//! a tolerance. Isometries accepted on numeric evidence alone are
//! flagged as such in the report.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::PointCloud;
use crate::error::{Error, Result};
use crate::isometry::{
    classify_finite_group, group_closure, GroupClass, Isometry,
};
use crate::rational::{isometry_from_map, RationalMap};
use crate::sphere::{chordal_distance, SpherePoint};
use crate::tolerances::{
    GROUP_CLOSURE_CAP, ISOMETRY_EQ_TOL, MAP_EQ_TOL, POINT_EQ_TOL,
};

/// Evidence that an isometry preserves the Julia set.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "type")]
pub enum Evidence {
    /// The identity `R sigma = sigma^k R` holds at the given residual.
    Commutation { k: usize, residual: f64 },
    /// Hausdorff distance between the transformed cloud and the cloud.
    Hausdorff { distance: f64, tolerance: f64 },
}

impl Evidence {
    pub fn is_algebraic(&self) -> bool {
        matches!(self, Evidence::Commutation { .. })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct VerifiedSymmetry {
    pub isometry: Isometry,
    pub evidence: Evidence,
}

/// Verified symmetries of a map, their group classification and notes.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SymmetryReport {
    pub map_description: String,
    pub verified: Vec<VerifiedSymmetry>,
    pub group: GroupClass,
    pub notes: Vec<String>,
}

impl SymmetryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable block used by the CLI.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("map: {}\n", self.map_description));
        out.push_str(&format!("group: {}\n", self.group));
        out.push_str(&format!("verified symmetries: {}\n", self.verified.len()));
        for v in &self.verified {
            match &v.evidence {
                Evidence::Commutation { k, residual } => out.push_str(&format!(
                    "  {}  [algebraic: R sigma = sigma^{} R, residual {:.2e}]\n",
                    v.isometry, k, residual
                )),
                Evidence::Hausdorff {
                    distance,
                    tolerance,
                } => out.push_str(&format!(
                    "  {}  [numeric: hausdorff {:.2e} <= {:.2e}]\n",
                    v.isometry, distance, tolerance
                )),
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Tests the commutation identity `R sigma = sigma^k R`; returns the
/// verdict at the crate map-equality tolerance and the normalized
/// coefficient residual.
pub fn check_commutation(map: &RationalMap, sigma: &Isometry, k: usize) -> (bool, f64) {
    let sigma_map = RationalMap::from(sigma);
    let sigma_k_map = RationalMap::from(&sigma.power(k));
    let (ln, ld) = map.compose_raw(&sigma_map);
    let (rn, rd) = sigma_k_map.compose_raw(map);
    let left = &ln * &rd;
    let right = &rn * &ld;
    let scale = left.max_coeff_norm().max(right.max_coeff_norm());
    let residual = if scale == 0.0 {
        0.0
    } else {
        (&left - &right).max_coeff_norm() / scale
    };
    (residual <= MAP_EQ_TOL, residual)
}

/// Order of `sigma` as a group element, up to `cap`; `None` when no
/// power returns to the identity (an irrational rotation).
pub fn isometry_order(sigma: &Isometry, cap: usize) -> Option<usize> {
    let mut power = *sigma;
    for k in 1..=cap {
        if power.is_identity(ISOMETRY_EQ_TOL) {
            return Some(k);
        }
        power = power.compose(sigma);
    }
    None
}

/// Scans `R sigma = sigma^k R` over k; the scan range is the element
/// order when finite, else `fallback`.
pub fn commutation_scan(
    map: &RationalMap,
    sigma: &Isometry,
    fallback: usize,
) -> Option<(usize, f64)> {
    let bound = isometry_order(sigma, GROUP_CLOSURE_CAP).unwrap_or(fallback);
    for k in 1..=bound {
        let (ok, residual) = check_commutation(map, sigma, k);
        if ok {
            return Some((k, residual));
        }
    }
    None
}

/// Necessary condition at a superattracting fixed point: a symmetry
/// fixing `z0` with local degree `m` must satisfy `R sigma = sigma^m R`.
/// A failed check certifies that `sigma` is not a symmetry.
pub fn necessary_condition_check(
    map: &RationalMap,
    sigma: &Isometry,
    z0: &SpherePoint,
) -> Result<(bool, usize)> {
    if chordal_distance(&sigma.apply(z0), z0) > POINT_EQ_TOL {
        return Err(Error::DoesNotFixPoint);
    }
    let m = crate::dynamics::local_degree(map, z0)?;
    let (ok, _residual) = check_commutation(map, sigma, m);
    Ok((ok, m))
}

// Spatial grid over the R^3 embedding; the chordal metric is Euclidean
// there, so bucket search is exact.
pub(crate) struct NearestGrid {
    cell: f64,
    buckets: HashMap<(i32, i32, i32), Vec<u32>>,
    pts: Vec<[f64; 3]>,
}

impl NearestGrid {
    pub fn build(points: &[SpherePoint]) -> Self {
        let n = points.len().max(1);
        let cell = (4.0 / (n as f64).sqrt()).clamp(0.02, 0.7);
        let pts: Vec<[f64; 3]> = points.iter().map(|p| p.to_r3()).collect();
        let mut buckets: HashMap<(i32, i32, i32), Vec<u32>> = HashMap::new();
        for (i, x) in pts.iter().enumerate() {
            buckets.entry(Self::key_of(x, cell)).or_default().push(i as u32);
        }
        NearestGrid { cell, buckets, pts }
    }

    fn key_of(x: &[f64; 3], cell: f64) -> (i32, i32, i32) {
        (
            (x[0] / cell).floor() as i32,
            (x[1] / cell).floor() as i32,
            (x[2] / cell).floor() as i32,
        )
    }

    fn scan_cell(&self, key: (i32, i32, i32), q: &[f64; 3], skip: Option<u32>, best: &mut f64) {
        if let Some(bucket) = self.buckets.get(&key) {
            for &i in bucket {
                if skip == Some(i) {
                    continue;
                }
                let p = &self.pts[i as usize];
                let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2);
                let d = d2.sqrt();
                if d < *best {
                    *best = d;
                }
            }
        }
    }

    fn scan_shell(&self, home: (i32, i32, i32), r: i32, q: &[f64; 3], skip: Option<u32>, best: &mut f64) {
        let (hx, hy, hz) = home;
        if r == 0 {
            self.scan_cell(home, q, skip, best);
            return;
        }
        for dx in -r..=r {
            for dy in -r..=r {
                self.scan_cell((hx + dx, hy + dy, hz - r), q, skip, best);
                self.scan_cell((hx + dx, hy + dy, hz + r), q, skip, best);
            }
        }
        for dx in -r..=r {
            for dz in -(r - 1)..=(r - 1) {
                self.scan_cell((hx + dx, hy - r, hz + dz), q, skip, best);
                self.scan_cell((hx + dx, hy + r, hz + dz), q, skip, best);
            }
        }
        for dy in -(r - 1)..=(r - 1) {
            for dz in -(r - 1)..=(r - 1) {
                self.scan_cell((hx - r, hy + dy, hz + dz), q, skip, best);
                self.scan_cell((hx + r, hy + dy, hz + dz), q, skip, best);
            }
        }
    }

    /// Exact nearest distance if it is at most `cap`, else `None`.
    /// Points in a shell at Chebyshev cell-distance r are at least
    /// (r - 1) * cell away, which bounds the ring expansion.
    pub fn nearest_within(&self, p: &SpherePoint, cap: f64, skip: Option<u32>) -> Option<f64> {
        let q = p.to_r3();
        let home = Self::key_of(&q, self.cell);
        let mut best = f64::INFINITY;
        let mut r = 0i32;
        loop {
            self.scan_shell(home, r, &q, skip, &mut best);
            if best <= r as f64 * self.cell {
                break;
            }
            if r as f64 * self.cell > cap.min(2.1) {
                break;
            }
            r += 1;
        }
        if best <= cap {
            Some(best)
        } else {
            None
        }
    }

    pub fn nearest(&self, p: &SpherePoint, skip: Option<u32>) -> f64 {
        self.nearest_within(p, 2.1, skip).unwrap_or(2.0)
    }
}

/// Symmetric Hausdorff distance between point clouds in the chordal
/// metric, grid-bucketed.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> f64 {
    directed_hausdorff(&a.points, b).max(directed_hausdorff(&b.points, a))
}

fn directed_hausdorff(from: &[SpherePoint], to: &PointCloud) -> f64 {
    let grid = NearestGrid::build(&to.points);
    from.par_iter()
        .map(|p| grid.nearest(p, None))
        .reduce(|| 0.0, f64::max)
}

/// Largest nearest-neighbour gap within a cloud: its sampling
/// resolution.
pub fn cloud_resolution(cloud: &PointCloud) -> f64 {
    let grid = NearestGrid::build(&cloud.points);
    cloud
        .points
        .par_iter()
        .enumerate()
        .map(|(i, p)| grid.nearest(p, Some(i as u32)))
        .reduce(|| 0.0, f64::max)
}

/// Numeric symmetry verification: Hausdorff distance between the
/// transformed cloud and the cloud, compared against `tol`.
///
/// The returned distance saturates at `max(8 tol, 0.2)`; that is enough
/// to certify both acceptance and rejection with margin, and keeps the
/// grid search bounded.
pub fn verify_symmetry_numeric(
    cloud: &PointCloud,
    sigma: &Isometry,
    tol: f64,
) -> (bool, f64) {
    let cap = (8.0 * tol).max(0.2);
    let transformed: Vec<SpherePoint> =
        cloud.points.par_iter().map(|p| sigma.apply(p)).collect();
    let grid_orig = NearestGrid::build(&cloud.points);
    let d1 = transformed
        .par_iter()
        .map(|p| grid_orig.nearest_within(p, cap, None).unwrap_or(cap))
        .reduce(|| 0.0, f64::max);
    if d1 >= cap {
        return (false, cap);
    }
    let grid_trans = NearestGrid::build(&transformed);
    let d = cloud
        .points
        .par_iter()
        .map(|p| grid_trans.nearest_within(p, cap, None).unwrap_or(cap))
        .reduce(|| d1, f64::max);
    (d <= tol, d)
}

/// The critical points of `R` together with `depth` levels of their
/// preimages, deduplicated as a point set.
pub fn truncated_precritical_set(
    map: &RationalMap,
    depth: usize,
) -> Result<Vec<SpherePoint>> {
    let mut set: Vec<SpherePoint> = Vec::new();
    let push_new = |p: SpherePoint, set: &mut Vec<SpherePoint>| -> bool {
        if set.iter().any(|q| q.approx_eq(&p, POINT_EQ_TOL)) {
            false
        } else {
            set.push(p);
            true
        }
    };
    let mut level: Vec<SpherePoint> = Vec::new();
    for p in map.critical_points()? {
        if push_new(p, &mut set) {
            level.push(p);
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &level {
            for q in map.preimages(p)? {
                if push_new(q, &mut set) {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    Ok(set)
}

/// Whether `sigma` permutes the depth-truncated precritical set, by
/// greedy nearest matching; returns the verdict and the largest match
/// distance.
pub fn precritical_permutation_check(
    map: &RationalMap,
    sigma: &Isometry,
    depth: usize,
    tol: f64,
) -> Result<(bool, f64)> {
    let set = truncated_precritical_set(map, depth)?;
    let mut used = vec![false; set.len()];
    let mut worst = 0.0_f64;
    for p in &set {
        let image = sigma.apply(p);
        let mut best = f64::INFINITY;
        let mut best_idx = None;
        for (j, q) in set.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = chordal_distance(&image, q);
            if d < best {
                best = d;
                best_idx = Some(j);
            }
        }
        if let Some(j) = best_idx {
            used[j] = true;
            worst = worst.max(best);
        } else {
            return Ok((false, 2.0));
        }
    }
    Ok((worst <= tol, worst))
}

/// Shared-Julia-set certificate: searches `candidates` for an isometry
/// with `S R = sigma R S` that is also a verified symmetry of `R`.
/// `None` is inconclusive, not a refutation.
pub fn shared_julia_criterion(
    r: &RationalMap,
    s: &RationalMap,
    candidates: &[Isometry],
) -> Option<Isometry> {
    let (sr_n, sr_d) = s.compose_raw(r);
    let (rs_n, rs_d) = r.compose_raw(s);
    let rs = RationalMap::new(rs_n, rs_d).ok()?;
    let sr = RationalMap::new(sr_n, sr_d).ok()?;
    for sigma in candidates {
        let lhs = RationalMap::from(sigma).compose(&rs);
        if !lhs.equals(&sr, MAP_EQ_TOL) {
            continue;
        }
        if sigma.is_identity(ISOMETRY_EQ_TOL) {
            return Some(*sigma);
        }
        if commutation_scan(r, sigma, crate::tolerances::DEFAULT_MAX_ORDER).is_some() {
            return Some(*sigma);
        }
    }
    None
}

/// Reconstructs the candidate isometry from `S R = sigma R S` by
/// matching three generic point pairs with a Mobius map; returns `None`
/// when the construction degenerates or is not an isometry.
pub fn infer_conjugating_isometry(r: &RationalMap, s: &RationalMap) -> Option<Isometry> {
    let pool = [
        Complex64::new(0.37, 0.21),
        Complex64::new(-0.94, 0.55),
        Complex64::new(1.44, -0.67),
        Complex64::new(0.12, -1.3),
        Complex64::new(-0.51, -0.33),
        Complex64::new(2.1, 0.4),
    ];
    let mut pairs: Vec<(Complex64, Complex64)> = Vec::new();
    for z in pool {
        let p = SpherePoint::from_affine(z);
        let w = r.eval(&s.eval(&p)).affine()?;
        let v = s.eval(&r.eval(&p)).affine()?;
        if pairs
            .iter()
            .all(|(w0, v0)| (w - w0).norm() > 1e-6 && (v - v0).norm() > 1e-6)
        {
            pairs.push((w, v));
        }
        if pairs.len() == 3 {
            break;
        }
    }
    if pairs.len() < 3 {
        return None;
    }
    let to_std = |z1: Complex64, z2: Complex64, z3: Complex64| {
        // Matrix of the Mobius map sending (z1, z2, z3) to (0, 1, inf).
        [
            z2 - z3,
            -z1 * (z2 - z3),
            z2 - z1,
            -z3 * (z2 - z1),
        ]
    };
    let m_w = to_std(pairs[0].0, pairs[1].0, pairs[2].0);
    let m_v = to_std(pairs[0].1, pairs[1].1, pairs[2].1);
    // sigma = m_v^{-1} m_w.
    let inv_v = [m_v[3], -m_v[1], -m_v[2], m_v[0]];
    let prod = [
        inv_v[0] * m_w[0] + inv_v[1] * m_w[2],
        inv_v[0] * m_w[1] + inv_v[1] * m_w[3],
        inv_v[2] * m_w[0] + inv_v[3] * m_w[2],
        inv_v[2] * m_w[1] + inv_v[3] * m_w[3],
    ];
    let num = crate::poly::Polynomial::new(vec![prod[1], prod[0]]);
    let den = crate::poly::Polynomial::new(vec![prod[3], prod[2]]);
    let map = RationalMap::new(num, den).ok()?;
    isometry_from_map(&map, 1e-6).ok()
}

/// Configuration for [`classify_symmetry_group`].
pub struct ClassifyConfig<'a> {
    pub max_order: usize,
    pub cloud: &'a PointCloud,
    pub tol: f64,
}

struct Candidate {
    isometry: Isometry,
    evidence: Option<Evidence>,
    ambiguous: bool,
}

/// Classifies the symmetry group of a rational map.
///
/// Pipeline: (1) detect a circle Julia set from the cloud; (2) derive
/// candidate rotation axes from the critical-point configuration, since
/// symmetries permute the precritical set; (3) test rotations of order
/// 2..max_order about each axis, algebraically first, numerically as a
/// fallback; (4) test inversions `z -> mu/z` in each axis frame;
/// (5) close the accepted set under composition and classify it.
///
/// Completeness is heuristic: the search certifies membership, and
/// classifies the certified set. Numeric evidence within a factor two of
/// the tolerance makes the result inconclusive; the error carries the
/// best-effort report.
pub fn classify_symmetry_group(
    map: &RationalMap,
    config: &ClassifyConfig,
) -> Result<SymmetryReport> {
    map.require_degree(2)?;
    let mut notes = vec![
        "axis candidates derive from the critical-point configuration; \
         completeness of the search is heuristic"
            .to_string(),
        "algebraic certificates assume the map is not a Lattes example"
            .to_string(),
    ];

    // Circle Julia sets carry the continuous symmetry group; finite
    // classification does not apply.
    if let Some(circle) = fit_circle(config.cloud, config.tol) {
        let axis_point = SpherePoint::from_r3(circle.normal);
        let axis = [axis_point, axis_point.antipode()];
        let mut verified = Vec::new();
        for angle in [1.0_f64, 2.0, 2.399963229728653] {
            let sigma = Isometry::rotation_about(&axis_point, angle);
            let (ok, d) = verify_symmetry_numeric(config.cloud, &sigma, config.tol);
            if ok {
                verified.push(VerifiedSymmetry {
                    isometry: sigma,
                    evidence: Evidence::Hausdorff {
                        distance: d,
                        tolerance: config.tol,
                    },
                });
            }
        }
        notes.push(format!(
            "cloud fits a circle on the sphere (max residual {:.2e}); \
             the symmetry group is continuous",
            circle.residual
        ));
        if circle.offset.abs() > 1e-3 {
            notes.push(
                "fitted circle is not a great circle; the inversion family is \
                 formal in this frame"
                    .to_string(),
            );
        }
        return Ok(SymmetryReport {
            map_description: map.to_string(),
            verified,
            group: GroupClass::CircleWithInversions { axis },
            notes,
        });
    }

    // Candidate axes: critical points, their antipodes, and pair
    // centroids.
    let crits = dedup_points(&map.critical_points()?);
    let mut axes: Vec<SpherePoint> = Vec::new();
    let push_axis = |p: SpherePoint, axes: &mut Vec<SpherePoint>| {
        let v = canonical_dir(&p);
        if !axes.iter().any(|q| {
            let w = canonical_dir(q);
            (v[0] - w[0]).abs() + (v[1] - w[1]).abs() + (v[2] - w[2]).abs() < 1e-6
        }) {
            axes.push(p);
        }
    };
    for p in &crits {
        push_axis(*p, &mut axes);
    }
    for (i, p) in crits.iter().enumerate() {
        for q in crits.iter().skip(i + 1) {
            let a = p.to_r3();
            let b = q.to_r3();
            let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
            let n = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
            if n < 1e-6 {
                continue;
            }
            push_axis(
                SpherePoint::from_r3([sum[0] / n, sum[1] / n, sum[2] / n]),
                &mut axes,
            );
        }
    }

    let grid = NearestGrid::build(&config.cloud.points);
    let screen_count = config.cloud.len().min(1500);
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut any_ambiguous = false;

    let test_candidate = |sigma: Isometry, candidates: &mut Vec<Candidate>| {
        if sigma.is_identity(ISOMETRY_EQ_TOL) {
            return;
        }
        if candidates
            .iter()
            .any(|c| c.isometry.approx_eq(&sigma, ISOMETRY_EQ_TOL))
        {
            return;
        }
        let fallback = map.degree().max(config.max_order);
        if let Some((k, residual)) = commutation_scan(map, &sigma, fallback) {
            candidates.push(Candidate {
                isometry: sigma,
                evidence: Some(Evidence::Commutation { k, residual }),
                ambiguous: false,
            });
            return;
        }
        // Numeric screen: directed distance of a subsample of the
        // transformed cloud back to the full cloud is a lower bound on
        // the directed Hausdorff distance, so a far point rejects
        // soundly.
        let cap = 3.0 * config.tol;
        let mut screen_max = 0.0_f64;
        let mut rejected = false;
        for p in config.cloud.points.iter().take(screen_count) {
            match grid.nearest_within(&sigma.apply(p), cap, None) {
                Some(d) => screen_max = screen_max.max(d),
                None => {
                    rejected = true;
                    break;
                }
            }
        }
        if rejected || screen_max > 2.0 * config.tol {
            return;
        }
        let (ok, d) = verify_symmetry_numeric(config.cloud, &sigma, config.tol);
        if ok {
            candidates.push(Candidate {
                isometry: sigma,
                evidence: Some(Evidence::Hausdorff {
                    distance: d,
                    tolerance: config.tol,
                }),
                ambiguous: false,
            });
        } else if d <= 2.0 * config.tol {
            candidates.push(Candidate {
                isometry: sigma,
                evidence: None,
                ambiguous: true,
            });
        }
    };

    for axis in &axes {
        for order in 2..=config.max_order {
            let sigma =
                Isometry::rotation_about(axis, 2.0 * std::f64::consts::PI / order as f64);
            test_candidate(sigma, &mut candidates);
        }
    }

    // Inversion forms z -> mu/z in each axis frame; mu runs over the
    // roots of unity of the largest accepted rotation order.
    for axis in &axes {
        let gamma = Isometry::point_to_zero(axis);
        let max_accepted = candidates
            .iter()
            .filter(|c| !c.ambiguous)
            .filter_map(|c| isometry_order(&c.isometry, config.max_order))
            .max()
            .unwrap_or(1);
        for j in 0..max_accepted {
            let mu = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / max_accepted as f64);
            let sigma = gamma
                .inverse()
                .compose(&Isometry::inversion(mu))
                .compose(&gamma);
            test_candidate(sigma, &mut candidates);
        }
    }

    for c in &candidates {
        if c.ambiguous {
            any_ambiguous = true;
            notes.push(format!(
                "candidate {} sits within 2x of the numeric tolerance; \
                 neither accepted nor excluded",
                c.isometry
            ));
        }
    }

    let accepted: Vec<Isometry> = candidates
        .iter()
        .filter(|c| !c.ambiguous)
        .map(|c| c.isometry)
        .collect();

    let closure = match group_closure(&accepted, GROUP_CLOSURE_CAP) {
        Ok(c) => c,
        Err(e) => {
            let report = SymmetryReport {
                map_description: map.to_string(),
                verified: Vec::new(),
                group: GroupClass::Trivial,
                notes,
            };
            return Err(Error::InconclusiveClassification {
                reason: format!("accepted set does not close into a finite group: {e}"),
                report: Box::new(report),
            });
        }
    };

    // Attach evidence to every closure element.
    let mut verified = Vec::new();
    for e in &closure {
        if e.is_identity(ISOMETRY_EQ_TOL) {
            verified.push(VerifiedSymmetry {
                isometry: *e,
                evidence: Evidence::Commutation { k: 1, residual: 0.0 },
            });
            continue;
        }
        if let Some(prior) = candidates
            .iter()
            .find(|c| !c.ambiguous && c.isometry.approx_eq(e, ISOMETRY_EQ_TOL))
        {
            verified.push(VerifiedSymmetry {
                isometry: *e,
                evidence: prior.evidence.clone().expect("accepted candidates carry evidence"),
            });
            continue;
        }
        let fallback = map.degree().max(config.max_order);
        if let Some((k, residual)) = commutation_scan(map, e, fallback) {
            verified.push(VerifiedSymmetry {
                isometry: *e,
                evidence: Evidence::Commutation { k, residual },
            });
            continue;
        }
        let (ok, d) = verify_symmetry_numeric(config.cloud, e, config.tol);
        if ok {
            verified.push(VerifiedSymmetry {
                isometry: *e,
                evidence: Evidence::Hausdorff {
                    distance: d,
                    tolerance: config.tol,
                },
            });
        } else {
            any_ambiguous = true;
            notes.push(format!(
                "closure element {e} failed verification at distance {d:.3e}"
            ));
        }
    }

    if verified
        .iter()
        .any(|v| !v.evidence.is_algebraic())
    {
        notes.push("some symmetries are verified numerically only".to_string());
    }

    let group = match classify_finite_group(
        &verified.iter().map(|v| v.isometry).collect::<Vec<_>>(),
    ) {
        Ok(g) => g,
        Err(e) => {
            let report = SymmetryReport {
                map_description: map.to_string(),
                verified,
                group: GroupClass::Trivial,
                notes: notes.clone(),
            };
            return Err(Error::InconclusiveClassification {
                reason: format!("verified set resists classification: {e}"),
                report: Box::new(report),
            });
        }
    };

    let report = SymmetryReport {
        map_description: map.to_string(),
        verified,
        group,
        notes,
    };
    if any_ambiguous {
        return Err(Error::InconclusiveClassification {
            reason: "numeric evidence within 2x of tolerance".to_string(),
            report: Box::new(report),
        });
    }
    Ok(report)
}

fn dedup_points(points: &[SpherePoint]) -> Vec<SpherePoint> {
    let mut out: Vec<SpherePoint> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.approx_eq(p, POINT_EQ_TOL)) {
            out.push(*p);
        }
    }
    out
}

fn canonical_dir(p: &SpherePoint) -> [f64; 3] {
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

struct CircleFit {
    normal: [f64; 3],
    offset: f64,
    residual: f64,
}

// Least-squares plane fit on the R^3 embedding; a Julia set lying on a
// round circle has all points on the plane, close to the circle, and
// covering it without large angular gaps (the gap test separates a true
// circle from an arc or segment on the same great circle).
fn fit_circle(cloud: &PointCloud, tol: f64) -> Option<CircleFit> {
    if cloud.len() < 16 {
        return None;
    }
    let pts: Vec<[f64; 3]> = cloud.points.iter().map(|p| p.to_r3()).collect();
    let n = pts.len() as f64;
    let mean = pts.iter().fold([0.0; 3], |m, p| {
        [m[0] + p[0] / n, m[1] + p[1] / n, m[2] + p[2] / n]
    });
    let mut cov = [[0.0_f64; 3]; 3];
    for p in &pts {
        let d = [p[0] - mean[0], p[1] - mean[1], p[2] - mean[2]];
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += d[i] * d[j] / n;
            }
        }
    }
    let normal = smallest_eigenvector(cov);
    let offset = mean[0] * normal[0] + mean[1] * normal[1] + mean[2] * normal[2];
    if offset.abs() >= 1.0 {
        return None;
    }
    let radius = (1.0 - offset * offset).sqrt();

    let mut residual = 0.0_f64;
    for p in &pts {
        let axial = p[0] * normal[0] + p[1] * normal[1] + p[2] * normal[2];
        let radial2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - axial * axial;
        let radial = radial2.max(0.0).sqrt();
        let d = ((axial - offset).powi(2) + (radial - radius).powi(2)).sqrt();
        residual = residual.max(d);
        if residual > tol {
            return None;
        }
    }

    // Angular coverage: reject arcs and segments lying on the circle.
    let e1 = orthogonal_unit(&normal);
    let e2 = [
        normal[1] * e1[2] - normal[2] * e1[1],
        normal[2] * e1[0] - normal[0] * e1[2],
        normal[0] * e1[1] - normal[1] * e1[0],
    ];
    let mut angles: Vec<f64> = pts
        .iter()
        .map(|p| {
            let x = p[0] * e1[0] + p[1] * e1[1] + p[2] * e1[2];
            let y = p[0] * e2[0] + p[1] * e2[1] + p[2] * e2[2];
            y.atan2(x)
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 2.0 * std::f64::consts::PI + angles[0] - angles[angles.len() - 1];
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    if max_gap > 0.5 {
        return None;
    }

    Some(CircleFit {
        normal,
        offset,
        residual,
    })
}

fn orthogonal_unit(v: &[f64; 3]) -> [f64; 3] {
    let pick = if v[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = pick[0] * v[0] + pick[1] * v[1] + pick[2] * v[2];
    let u = [pick[0] - d * v[0], pick[1] - d * v[1], pick[2] - d * v[2]];
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    [u[0] / n, u[1] / n, u[2] / n]
}

// Jacobi eigenvalue iteration for a symmetric 3x3 matrix; returns the
// eigenvector of the smallest eigenvalue.
fn smallest_eigenvector(mut m: [[f64; 3]; 3]) -> [f64; 3] {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        // Largest off-diagonal element.
        let (mut p, mut q, mut max) = (0, 1, m[0][1].abs());
        for (i, j) in [(0usize, 2usize), (1, 2)] {
            if m[i][j].abs() > max {
                max = m[i][j].abs();
                p = i;
                q = j;
            }
        }
        if max < 1e-15 {
            break;
        }
        let theta = 0.5 * (2.0 * m[p][q]).atan2(m[p][p] - m[q][q]);
        let (s, c) = theta.sin_cos();
        let mut rot = [[0.0; 3]; 3];
        for (i, row) in rot.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        rot[p][p] = c;
        rot[q][q] = c;
        rot[p][q] = -s;
        rot[q][p] = s;
        m = mat_mul(&mat_mul(&transpose(&rot), &m), &rot);
        v = mat_mul(&v, &rot);
    }
    let mut idx = 0;
    for i in 1..3 {
        if m[i][i] < m[idx][idx] {
            idx = i;
        }
    }
    let out = [v[0][idx], v[1][idx], v[2][idx]];
    let n = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
    [out[0] / n, out[1] / n, out[2] / n]
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}
