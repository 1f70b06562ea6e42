//! Numeric dynamics: Julia-set sampling by random backward orbits,
//! escape-time rasters, and the potential-theoretic quantities attached
//! to a rational map.
//!
//! Backward orbits choose uniformly among the `d` preimages counted with
//! multiplicity; under that pullback weighting the orbit equidistributes
//! toward the measure of maximal entropy, so the returned clouds serve
//! both as Julia-set approximations and as measure samples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{HomogeneousLift, RationalMap};
use crate::sphere::{chordal_distance, SpherePoint};
use crate::tolerances::{BASIN_ENTRY_RADIUS, LOCAL_DEGREE_TOL, SAMPLE_COLLISION_TOL};

/// How a point cloud was produced.
#[derive(Clone, Debug, serde::Serialize)]
pub enum Provenance {
    InverseIteration {
        seed: u64,
        burn_in: usize,
        count: usize,
    },
    Boundary {
        width: usize,
        height: usize,
    },
}

/// A finite sample of sphere points approximating a Julia set and/or the
/// maximal-entropy measure.
#[derive(Clone, Debug)]
pub struct PointCloud {
    pub points: Vec<SpherePoint>,
    pub provenance: Provenance,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One "re im" affine pair per line, "inf" for the point at infinity.
    pub fn write_points<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        for p in &self.points {
            match p.affine() {
                None => writeln!(w, "inf")?,
                Some(z) => writeln!(w, "{} {}", z.re, z.im)?,
            }
        }
        Ok(())
    }
}

// Samples per independent backward orbit; orbits are seeded from
// disjoint RNG streams so parallel and serial runs agree bit for bit.
const ORBIT_CHUNK: usize = 2000;

/// Approximates J(R) (and mu_R) by random backward orbits: repeatedly
/// pick one of the `d` preimages uniformly with multiplicity, discard
/// `burn_in` steps, keep the rest. Deterministic given `seed`.
pub fn sample_julia(
    map: &RationalMap,
    count: usize,
    burn_in: usize,
    seed: u64,
) -> Result<PointCloud> {
    map.require_degree(2)?;
    if count == 0 {
        return Err(Error::DegenerateInput("sample count must be positive".into()));
    }
    let orbits = count.div_ceil(ORBIT_CHUNK);
    let chunks: Vec<Result<Vec<SpherePoint>>> = (0..orbits)
        .into_par_iter()
        .map(|orbit| {
            let take = ORBIT_CHUNK.min(count - orbit * ORBIT_CHUNK);
            backward_orbit(map, take, burn_in, seed, orbit as u64)
        })
        .collect();
    let mut points = Vec::with_capacity(count);
    for chunk in chunks {
        points.extend(chunk?);
    }
    Ok(PointCloud {
        points,
        provenance: Provenance::InverseIteration {
            seed,
            burn_in,
            count,
        },
    })
}

fn backward_orbit(
    map: &RationalMap,
    take: usize,
    burn_in: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<SpherePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut z = random_sphere_point(&mut rng);
    let mut out = Vec::with_capacity(take);
    let mut failures = 0usize;
    let mut step = 0usize;
    while out.len() < take {
        match map.preimages(&z) {
            Ok(pre) => {
                failures = 0;
                z = pre[rng.random_range(0..pre.len())];
                step += 1;
                if step > burn_in {
                    out.push(z);
                }
            }
            Err(_) => {
                failures += 1;
                if failures > 10 {
                    return Err(Error::PreimageFailure(failures));
                }
                // Nudge off the ill-conditioned fiber and retry.
                let kick = Complex64::new(
                    1e-9 * (rng.random::<f64>() - 0.5),
                    1e-9 * (rng.random::<f64>() - 0.5),
                );
                let (z1, z2) = z.homogeneous();
                z = SpherePoint::new(z1 + kick, z2).expect("nonzero pair");
            }
        }
    }
    Ok(out)
}

fn random_sphere_point<R: Rng>(rng: &mut R) -> SpherePoint {
    // Two complex gaussians normalized give the uniform distribution on
    // the sphere.
    loop {
        let g = |r: &mut R| {
            let u: f64 = r.random();
            let v: f64 = r.random();
            (-2.0 * u.max(1e-12).ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        };
        let z1 = Complex64::new(g(rng), g(rng));
        let z2 = Complex64::new(g(rng), g(rng));
        if let Ok(p) = SpherePoint::new(z1, z2) {
            return p;
        }
    }
}

/// Rectangle in the affine plane, given by center and side lengths.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub center_re: f64,
    pub center_im: f64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn square(center: Complex64, width: f64) -> Self {
        Window {
            center_re: center.re,
            center_im: center.im,
            width,
            height: width,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0)
            || !self.width.is_finite()
            || !self.height.is_finite()
            || !self.center_re.is_finite()
            || !self.center_im.is_finite()
        {
            return Err(Error::InvalidWindow(format!(
                "{} x {} around ({}, {})",
                self.width, self.height, self.center_re, self.center_im
            )));
        }
        Ok(())
    }

    /// Pixel-center coordinate; symmetric around the center so that
    /// mirrored pixel indices land on exactly mirrored points.
    pub fn pixel_center(&self, x: usize, y: usize, w: usize, h: usize) -> Complex64 {
        let re = self.center_re + (x as f64 + 0.5 - w as f64 / 2.0) * (self.width / w as f64);
        let im = self.center_im - (y as f64 + 0.5 - h as f64 / 2.0) * (self.height / h as f64);
        Complex64::new(re, im)
    }
}

/// Per-pixel record of an escape-time iteration.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Cell {
    pub escaped: bool,
    pub iterations: u32,
    pub final_modulus: f64,
}

/// Escape-time raster over a window.
#[derive(Clone, Debug)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub window: Window,
    pub max_iter: usize,
    pub escape_radius: f64,
    pub cells: Vec<Cell>,
}

impl Raster {
    pub fn cell(&self, x: usize, y: usize) -> &Cell {
        &self.cells[y * self.width + x]
    }

    /// Extracts bounded pixels that touch an escaped neighbour: an
    /// approximation of the boundary of the escaping set.
    pub fn boundary_cloud(&self) -> PointCloud {
        let mut points = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.cell(x, y).escaped {
                    continue;
                }
                if self.has_escaped_neighbor(x, y) {
                    points.push(SpherePoint::from_affine(
                        self.window.pixel_center(x, y, self.width, self.height),
                    ));
                }
            }
        }
        PointCloud {
            points,
            provenance: Provenance::Boundary {
                width: self.width,
                height: self.height,
            },
        }
    }

    pub fn has_escaped_neighbor(&self, x: usize, y: usize) -> bool {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
                    continue;
                }
                if self.cell(nx as usize, ny as usize).escaped {
                    return true;
                }
            }
        }
        false
    }
}

/// Forward-iterates every pixel center until the modulus exceeds
/// `escape_radius` or `max_iter` is reached.
pub fn escape_time_raster(
    map: &RationalMap,
    window: Window,
    resolution: (usize, usize),
    max_iter: usize,
    escape_radius: f64,
) -> Result<Raster> {
    window.validate()?;
    let (w, h) = resolution;
    if w == 0 || h == 0 {
        return Err(Error::InvalidWindow("zero resolution".into()));
    }
    let rows: Vec<Vec<Cell>> = (0..h)
        .into_par_iter()
        .map(|y| {
            (0..w)
                .map(|x| {
                    let mut z = window.pixel_center(x, y, w, h);
                    let mut iterations = 0u32;
                    let mut escaped = false;
                    for _ in 0..max_iter {
                        if z.norm() > escape_radius {
                            escaped = true;
                            break;
                        }
                        z = map.eval_affine(z);
                        iterations += 1;
                    }
                    if !escaped && z.norm() > escape_radius && max_iter > 0 {
                        escaped = true;
                    }
                    Cell {
                        escaped,
                        iterations,
                        final_modulus: z.norm(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(Raster {
        width: w,
        height: h,
        window,
        max_iter,
        escape_radius,
        cells: rows.into_iter().flatten().collect(),
    })
}

/// A sufficient escape radius for maps with a superattracting fixed
/// point at infinity (numerator degree at least denominator degree
/// plus 2): for |z| >= r the modulus at least doubles per step.
///
/// From `|P(z)| >= |p_n| r^n - S_p r^{n-1}` and
/// `|Q(z)| <= S_q r^{n-2}`, the bound `|R(z)| >= 2 |z|` holds once
/// `r >= (S_p + 2 S_q) / |p_n|`.
pub fn derive_escape_radius(map: &RationalMap) -> Option<f64> {
    let num = map.numerator();
    let den = map.denominator();
    if num.degree() < den.degree() + 2 {
        return None;
    }
    let n = num.degree();
    let lead = num.coeff(n).norm();
    let s_p: f64 = (0..n).map(|i| num.coeff(i).norm()).sum();
    let s_q: f64 = den.coeffs().iter().map(|c| c.norm()).sum();
    Some(((s_p + 2.0 * s_q) / lead).max(2.0))
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// The elliptic potential of the sampled maximal-entropy measure at `z`:
/// the mean of `log 1/rho(z, w)` over the measure samples.
pub fn ergodic_potential(z: &SpherePoint, samples: &PointCloud) -> Result<Estimate> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("empty measure sample".into()));
    }
    let n = samples.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for w in &samples.points {
        let rho = chordal_distance(z, w);
        if rho < SAMPLE_COLLISION_TOL {
            return Err(Error::SampleCollision(rho));
        }
        let v = -rho.ln();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        stderr: (var / n).sqrt(),
    })
}

/// Paired difference `u(sigma z) - u(z)` over one sample set, with the
/// standard error of the difference. Under an exact symmetry the
/// difference has zero mean.
pub fn ergodic_potential_difference(
    z: &SpherePoint,
    sigma_z: &SpherePoint,
    samples: &PointCloud,
) -> Result<Estimate> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("empty measure sample".into()));
    }
    let n = samples.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for w in &samples.points {
        let rho_a = chordal_distance(sigma_z, w);
        let rho_b = chordal_distance(z, w);
        if rho_a < SAMPLE_COLLISION_TOL || rho_b < SAMPLE_COLLISION_TOL {
            return Err(Error::SampleCollision(rho_a.min(rho_b)));
        }
        let v = rho_b.ln() - rho_a.ln();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        stderr: (var / n).sqrt(),
    })
}

/// Escape-rate function of the homogeneous lift at a point of C^2:
/// `d^{-n} log ||lift^n(p)||`, accumulated with per-step renormalization
/// so no overflow occurs. Converges geometrically in `n`.
pub fn escape_rate(lift: &HomogeneousLift, p: (Complex64, Complex64), n: usize) -> f64 {
    let d = lift.degree() as f64;
    let mut v = p;
    let mut total = 0.0;
    let mut scale = 1.0;
    for _ in 0..n {
        v = lift.apply(v);
        let m = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        scale /= d;
        total += scale * m.max(1e-300).ln();
        v = (v.0 / m, v.1 / m);
    }
    total
}

/// Local degree of the map at a fixed point `z0`: the order of the first
/// nonvanishing term of the conjugated map at the origin. Errors unless
/// `z0` is a superattracting fixed point (local degree at least 2).
pub fn local_degree(map: &RationalMap, z0: &SpherePoint) -> Result<usize> {
    map.require_degree(2)?;
    let image = map.eval(z0);
    if chordal_distance(&image, z0) > LOCAL_DEGREE_TOL {
        return Err(Error::NotSuperattracting(format!(
            "not a fixed point: moves by {:.3e}",
            chordal_distance(&image, z0)
        )));
    }
    let moved = map.conjugate(&Isometry::point_to_zero(z0));
    let num = moved.numerator();
    let den = moved.denominator();
    if den.coeff(0).norm() <= LOCAL_DEGREE_TOL * den.max_coeff_norm() {
        return Err(Error::NotSuperattracting(
            "conjugated map has a pole at the fixed point".into(),
        ));
    }
    let scale = num.max_coeff_norm();
    let m = num
        .coeffs()
        .iter()
        .position(|c| c.norm() > LOCAL_DEGREE_TOL * scale)
        .unwrap_or(0);
    if m < 2 {
        return Err(Error::NotSuperattracting(format!(
            "local degree {m} at the fixed point"
        )));
    }
    Ok(m)
}

use crate::isometry::Isometry;

/// Log-modulus of the Boettcher coordinate at a superattracting fixed
/// point, estimated as `-m^{-n} log(dist to z0 after n steps)` in a
/// chart moving `z0` to the origin.
///
/// The telescoped accumulation switches to the local model
/// `w -> c w^m` once the orbit is deep enough that the remaining terms
/// are constant to machine precision; this sidesteps the underflow of
/// the direct iterate.
pub fn boettcher_potential(
    map: &RationalMap,
    z0: &SpherePoint,
    z: &SpherePoint,
    n: usize,
) -> Result<f64> {
    let m = local_degree(map, z0)? as f64;
    let gamma = Isometry::point_to_zero(z0);
    let moved = map.conjugate(&gamma);
    // Leading local coefficient: moved(w) = c w^m (1 + O(w)).
    let c_lead = moved.numerator().coeff(m as usize) / moved.denominator().coeff(0);

    // Iterate on the sphere; log|w| comes from the homogeneous pair, so
    // neither overflow nor underflow can occur before the deep switch.
    let log_w = |p: &SpherePoint| {
        let (p1, p2) = p.homogeneous();
        p1.norm().max(1e-300).ln() - p2.norm().max(1e-300).ln()
    };
    let origin = SpherePoint::zero();
    let mut p = gamma.apply(z);
    if chordal_distance(&p, &origin) < 1e-14 {
        // Exactly at the fixed point the potential diverges.
        return Err(Error::SampleCollision(0.0));
    }

    let mut l_prev = log_w(&p);
    let mut total = l_prev;
    let mut scale = 1.0;
    let mut entered = chordal_distance(&p, &origin) <= BASIN_ENTRY_RADIUS;
    const DEEP_LOG: f64 = -20.8; // ln 1e-9
    for step in 0..n {
        if l_prev <= DEEP_LOG {
            // In the local model w -> c w^m every remaining telescope
            // term contributes log|c|; add the closed tail and stop.
            let tail = scale * (1.0 - m.powi(-((n - step) as i32))) / (m - 1.0);
            total += tail * c_lead.norm().ln();
            entered = true;
            break;
        }
        p = moved.eval(&p);
        let l = log_w(&p);
        scale /= m;
        total += scale * (l - m * l_prev);
        l_prev = l;
        if !entered && chordal_distance(&p, &origin) <= BASIN_ENTRY_RADIUS {
            entered = true;
        }
    }
    if !entered {
        return Err(Error::NotInBasin(n));
    }
    Ok(-total)
}
