//! The singularly perturbed family `R_lambda(z) = z^m + lambda / z^d`
//! and its exact symmetry classification.
//!
//! The symmetry group depends on lambda only through the flags
//! `lambda = 0`, `m = d` and `|lambda| = 1`: the rotation subgroup is
//! always the (m+d)-th roots of unity about {0, inf}; inversions join
//! exactly when `m = d` and `|lambda| = 1`, and the circle case appears
//! at `lambda = 0` where the map degenerates to `z^m`.

use num_complex::Complex64;

use crate::dynamics::{Raster, Window};
use crate::error::{Error, Result};
use crate::isometry::GroupClass;
use crate::poly::Polynomial;
use crate::rational::RationalMap;
use crate::sphere::SpherePoint;
use crate::tolerances::MCMULLEN_BOUNDARY_TOL;

/// Parameters of the family `z^m + lambda / z^d`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct McMullenParams {
    pub m: u32,
    pub d: u32,
    pub lambda: Complex64,
}

impl McMullenParams {
    pub fn new(m: u32, d: u32, lambda: Complex64) -> Result<Self> {
        if m < 2 || d < 1 {
            return Err(Error::InvalidExponents {
                m: m as i64,
                d: d as i64,
            });
        }
        Ok(McMullenParams { m, d, lambda })
    }
}

/// Builds the reduced rational map `(z^{m+d} + lambda) / z^d`, or `z^m`
/// when lambda vanishes.
pub fn make_mcmullen(params: &McMullenParams) -> RationalMap {
    let one = Complex64::new(1.0, 0.0);
    if params.lambda.norm() == 0.0 {
        return RationalMap::from_polynomial(Polynomial::monomial(one, params.m as usize));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (params.m + params.d) as usize + 1];
    coeffs[0] = params.lambda;
    coeffs[(params.m + params.d) as usize] = one;
    RationalMap::new(
        Polynomial::new(coeffs),
        Polynomial::monomial(one, params.d as usize),
    )
    .expect("monomial denominator")
}

/// Exact, closed-form symmetry classification of the family.
pub fn classify_mcmullen_symmetries(params: &McMullenParams) -> GroupClass {
    let axis = [SpherePoint::zero(), SpherePoint::infinity()];
    let k = (params.m + params.d) as usize;
    if params.lambda.norm() == 0.0 {
        return GroupClass::CircleWithInversions { axis };
    }
    if params.m == params.d && (params.lambda.norm() - 1.0).abs() <= MCMULLEN_BOUNDARY_TOL {
        return GroupClass::Dihedral { k, axis };
    }
    GroupClass::Cyclic { k, axis }
}

/// A radius r with `|z| >= r  =>  |R_lambda(z)| >= 2 |z|`, hence
/// guaranteed escape: for |z| >= max(1, r) the bound
/// `|R(z)| >= |z|^m - |lambda| / |z|^d >= |z| (|z|^{m-1} - |lambda|)`
/// gives the closed form below.
pub fn escape_radius(params: &McMullenParams) -> f64 {
    (2.0 + params.lambda.norm()).powf(1.0 / (params.m as f64 - 1.0)).max(2.0)
}

/// Geometry burned into parameter-plane images and echoed as JSON.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Overlay {
    /// The degenerate parameter lambda = 0 (circle Julia set).
    pub lambda_zero: [f64; 2],
    /// Present exactly when m = d: the symmetry-regime boundary
    /// |lambda| = 1.
    pub unit_circle: bool,
}

/// Parameter-plane raster: per pixel, the orbit of one free critical
/// point of `R_lambda` is iterated and classified by escape.
///
/// The free critical points are the (m+d)-th roots of `d lambda / m`;
/// they are equivalent under the rotation symmetry of the family, so
/// the principal branch suffices.
pub fn render_parameter_plane(
    m: u32,
    d: u32,
    window: Window,
    resolution: (usize, usize),
    max_iter: usize,
) -> Result<(Raster, Overlay)> {
    McMullenParams::new(m, d, Complex64::new(0.0, 0.0))?;
    let (w, h) = resolution;
    if w == 0 || h == 0 {
        return Err(Error::InvalidWindow("zero resolution".into()));
    }
    use rayon::prelude::*;
    let cells: Vec<crate::dynamics::Cell> = (0..h)
        .into_par_iter()
        .flat_map_iter(|y| {
            (0..w).map(move |x| (x, y))
        })
        .map(|(x, y)| {
            let lambda = window.pixel_center(x, y, w, h);
            let params = McMullenParams {
                m,
                d,
                lambda,
            };
            let radius = escape_radius(&params);
            let map = make_mcmullen(&params);
            let v = (lambda * d as f64 / m as f64).powf(1.0 / (m + d) as f64);
            let mut z = v;
            let mut iterations = 0u32;
            let mut escaped = false;
            for _ in 0..max_iter {
                if z.norm() > radius {
                    escaped = true;
                    break;
                }
                z = map.eval_affine(z);
                iterations += 1;
            }
            if !escaped && z.norm() > radius && max_iter > 0 {
                escaped = true;
            }
            crate::dynamics::Cell {
                escaped,
                iterations,
                final_modulus: z.norm(),
            }
        })
        .collect();
    let raster = Raster {
        width: w,
        height: h,
        window,
        max_iter,
        escape_radius: 0.0,
        cells,
    };
    let overlay = Overlay {
        lambda_zero: [0.0, 0.0],
        unit_circle: m == d,
    };
    Ok((raster, overlay))
}
