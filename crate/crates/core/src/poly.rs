//! Complex polynomials in one variable and a simultaneous-iteration
//! root finder.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{MAX_ROOT_ITERS, ROOT_RESIDUAL_TOL};

// Trailing coefficients below this fraction of the largest one are
// treated as rounding noise and trimmed.
const TRIM_REL: f64 = 1e-12;

/// A polynomial with complex coefficients in ascending degree order,
/// kept canonical (no trailing zero coefficients).
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(Complex64::new(1.0, 0.0))
    }

    /// `c z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    fn trim(&mut self) {
        let max = self.max_coeff_norm();
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= TRIM_REL * max {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, k: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Divides out a linear factor `(z - r)` by synthetic division,
    /// discarding the remainder.
    pub fn deflate(&self, r: Complex64) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = self.coeffs[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = carry;
            carry = self.coeffs[i] + carry * r;
        }
        Polynomial::new(out)
    }

    /// All `degree` roots with multiplicity, by Aberth-Ehrlich
    /// simultaneous iteration from deterministic guesses on the
    /// Cauchy-bound circle.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() < 1 || self.is_zero() {
            return Ok(vec![]);
        }
        // Factor out roots at the origin first.
        let k = self
            .coeffs
            .iter()
            .position(|c| c.norm() > TRIM_REL * self.max_coeff_norm())
            .unwrap_or(0);
        let mut roots = vec![Complex64::new(0.0, 0.0); k];
        let reduced = Polynomial::new(self.coeffs[k..].to_vec());
        if reduced.degree() == 0 {
            return Ok(roots);
        }
        roots.extend(aberth(&reduced)?);
        Ok(roots)
    }
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let scale = p.max_coeff_norm();
    let a = p.scale(Complex64::new(1.0 / scale, 0.0));
    match n {
        1 => return Ok(vec![-a.coeff(0) / a.coeff(1)]),
        2 => return Ok(quadratic_roots(a.coeff(0), a.coeff(1), a.coeff(2))),
        _ => {}
    }

    let da = a.derivative();
    let lead = a.coeff(n).norm();
    let cauchy = 1.0
        + a.coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            / lead;
    // Angular offset keeps guesses off the axes where real-coefficient
    // symmetry can stall the iteration.
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(cauchy, 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ROOT_ITERS {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let pv = a.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = da.eval(z[i]);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let denom = dv - pv * sum;
            let step = if denom.norm() > 0.0 {
                pv / denom
            } else {
                // Degenerate configuration: nudge and continue.
                Complex64::new(1e-3, 1e-3)
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }

    // Residual acceptance is backward-error based, so clustered
    // (near-multiple) roots pass even when their locations carry the
    // usual sqrt(eps) uncertainty.
    let residual_ok = |r: Complex64| {
        let bound: f64 = a
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * r.norm().powi(i as i32))
            .sum();
        a.eval(r).norm() <= ROOT_RESIDUAL_TOL * bound.max(1e-300)
    };
    if !z.iter().all(|&r| residual_ok(r)) {
        return Err(Error::NoConvergence {
            degree: n,
            iterations: MAX_ROOT_ITERS,
        });
    }
    Ok(z)
}

fn quadratic_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> Vec<Complex64> {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // Pick the sign that avoids cancellation in -b -+ sqrt(disc).
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -(c1 + disc) / 2.0
    } else {
        -(c1 - disc) / 2.0
    };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / c2, c0 / q]
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &ci) in self.coeffs.iter().enumerate() {
            for (j, &cj) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += ci * cj;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff_str = if c.im == 0.0 {
                format!("{}", c.re)
            } else {
                format!("({})", crate::isometry::fmt_complex(c))
            };
            match i {
                0 => write!(f, "{coeff_str}")?,
                1 if c == Complex64::new(1.0, 0.0) => write!(f, "z")?,
                1 => write!(f, "{coeff_str}*z")?,
                _ if c == Complex64::new(1.0, 0.0) => write!(f, "z^{i}")?,
                _ => write!(f, "{coeff_str}*z^{i}")?,
            }
        }
        Ok(())
    }
}
