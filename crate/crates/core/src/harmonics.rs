//! Spherical harmonics on the unit sphere: the circle Fourier basis for
//! `d = 2`, Laplace spherical harmonics for `d = 3`, and the dimension
//! formula, Laplace-Beltrami eigenvalues and sharp sup-norm bound for all
//! `d >= 2`.
//!
//! The `d = 3` basis uses the complex convention with Condon-Shortley
//! phase, so `Y_l^{-m} = (-1)^m conj(Y_l^m)`.

use num_complex::Complex64;

use crate::specfun::{binomial_count, ln_gamma};
use crate::{Error, Result};

/// A point on the unit sphere, stored in angular coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePoint {
    /// Point on the unit circle at polar angle `theta` in `[0, 2pi)`.
    Circle { theta: f64 },
    /// Point on the 2-sphere at polar angle `theta` in `[0, pi]` and
    /// azimuth `phi` in `[0, 2pi)`.
    Sphere { theta: f64, phi: f64 },
}

impl SurfacePoint {
    pub fn from_angle(theta: f64) -> Self {
        SurfacePoint::Circle { theta }
    }

    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        SurfacePoint::Sphere { theta, phi }
    }

    /// Builds a surface point from Cartesian coordinates of length 2 or 3.
    /// The norm must be 1 within 1e-12.
    pub fn from_cartesian(x: &[f64]) -> Result<Self> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "surface point must have unit norm, got |x| = {norm}"
            )));
        }
        match x.len() {
            2 => Ok(SurfacePoint::Circle {
                theta: x[1].atan2(x[0]).rem_euclid(2.0 * std::f64::consts::PI),
            }),
            3 => Ok(SurfacePoint::Sphere {
                theta: (x[2] / norm).clamp(-1.0, 1.0).acos(),
                phi: x[1].atan2(x[0]).rem_euclid(2.0 * std::f64::consts::PI),
            }),
            n => Err(Error::Domain(format!(
                "surface point needs 2 or 3 coordinates, got {n}"
            ))),
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            SurfacePoint::Circle { .. } => 2,
            SurfacePoint::Sphere { .. } => 3,
        }
    }

    /// Cartesian coordinates, padded with a zero third component for d = 2.
    pub fn cartesian(&self) -> [f64; 3] {
        match *self {
            SurfacePoint::Circle { theta } => [theta.cos(), theta.sin(), 0.0],
            SurfacePoint::Sphere { theta, phi } => [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ],
        }
    }
}

/// Index of a spherical harmonic basis function.
///
/// For `d = 2` the degree and order collapse onto a single integer
/// `j = m` with `l = |j|`, so the order set is `{-l, l}` (just `{0}` at
/// `l = 0`). For `d = 3` the order runs over `-l..=l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularIndex {
    dim: u32,
    l: u32,
    m: i64,
}

impl AngularIndex {
    pub fn new(dim: u32, l: u32, m: i64) -> Result<Self> {
        let valid = match dim {
            2 => m.unsigned_abs() == u64::from(l),
            3 => m.unsigned_abs() <= u64::from(l),
            _ => return Err(Error::UnsupportedDimension(dim)),
        };
        if !valid {
            return Err(Error::Domain(format!(
                "order m = {m} invalid for degree l = {l} in dimension {dim}"
            )));
        }
        Ok(Self { dim, l, m })
    }

    /// The combined circle index `j` for `d = 2`.
    pub fn from_j(j: i64) -> Self {
        Self {
            dim: 2,
            l: j.unsigned_abs() as u32,
            m: j,
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn order(&self) -> i64 {
        self.m
    }
}

/// The order set of degree `l` in dimension `d` (cardinality
/// `dim_harmonic(d, l)`); only `d = 2, 3` have pointwise bases here.
pub fn angular_orders(dim: u32, l: u32) -> Result<Vec<i64>> {
    match dim {
        2 => Ok(if l == 0 {
            vec![0]
        } else {
            vec![-(l as i64), l as i64]
        }),
        3 => Ok((-(l as i64)..=l as i64).collect()),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// `dim H_l = C(l+d-1, d-1) - C(l+d-3, d-1)` with the counting convention
/// that the binomial vanishes when the top is smaller than the bottom.
pub fn dim_harmonic(dim: u32, l: u32) -> u64 {
    assert!(dim >= 2, "dimension must be at least 2");
    let l = l as i64;
    let d = dim as i64;
    binomial_count(l + d - 1, dim - 1) - binomial_count(l + d - 3, dim - 1)
}

/// Laplace-Beltrami eigenvalue `-l(l+d-2)` on degree-`l` harmonics.
pub fn lb_eigenvalue(dim: u32, l: u32) -> i64 {
    let l = l as i64;
    -(l * (l + dim as i64 - 2))
}

/// Surface measure of the unit sphere, `2 pi^(d/2) / Gamma(d/2)`.
pub fn surface_measure(dim: u32) -> f64 {
    assert!(dim >= 2, "dimension must be at least 2");
    let half_d = dim as f64 / 2.0;
    (std::f64::consts::LN_2 + half_d * std::f64::consts::PI.ln() - ln_gamma(half_d)).exp()
}

/// Dimension together with its sphere surface measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    pub dim: u32,
    pub surface_measure: f64,
}

impl SphereGeometry {
    pub fn new(dim: u32) -> Self {
        Self {
            dim,
            surface_measure: surface_measure(dim),
        }
    }
}

/// Fully normalized associated Legendre value carrying the Condon-Shortley
/// phase, so that `Y_l^m = plm_normalized(l, m, cos theta) * e^(i m phi)`
/// is orthonormal on the sphere. Requires `0 <= m <= l`.
fn plm_normalized(l: u32, m: u32, cos_theta: f64) -> f64 {
    debug_assert!(m <= l);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    // Diagonal start: P~_m^m.
    let mut pmm = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for i in 1..=m {
        let i = i as f64;
        pmm *= -((2.0 * i + 1.0) / (2.0 * i)).sqrt() * sin_theta;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = ((2 * m + 3) as f64).sqrt() * cos_theta * pmm;
    if l == m + 1 {
        return p;
    }
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let mf = m as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
            .sqrt();
        let p_next = a * (cos_theta * p - b * p_prev);
        p_prev = p;
        p = p_next;
    }
    p
}

/// Evaluates the orthonormal basis harmonic at a point on the sphere.
pub fn eval_harmonic(index: AngularIndex, point: &SurfacePoint) -> Result<Complex64> {
    if index.dim() != point.dim() {
        return Err(Error::Domain(format!(
            "index dimension {} does not match point dimension {}",
            index.dim(),
            point.dim()
        )));
    }
    match (*point, index.dim()) {
        (SurfacePoint::Circle { theta }, 2) => {
            let j = index.order() as f64;
            let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
            Ok(Complex64::from_polar(norm, j * theta))
        }
        (SurfacePoint::Sphere { theta, phi }, 3) => {
            let l = index.degree();
            let m = index.order();
            let m_abs = m.unsigned_abs() as u32;
            let plm = plm_normalized(l, m_abs, theta.cos());
            let value = plm * Complex64::from_polar(1.0, m_abs as f64 * phi);
            if m >= 0 {
                Ok(value)
            } else {
                // Y_l^{-m} = (-1)^m conj(Y_l^m)
                let sign = if m_abs % 2 == 0 { 1.0 } else { -1.0 };
                Ok(sign * value.conj())
            }
        }
        _ => Err(Error::UnsupportedDimension(index.dim())),
    }
}

/// The addition constant `sum_m |f_{l,m}(x)|^2`, which is independent of
/// the point and equals `dim H_l / |dB|`.
pub fn addition_constant(dim: u32, l: u32, point: &SurfacePoint) -> Result<f64> {
    let mut total = 0.0;
    for m in angular_orders(dim, l)? {
        let v = eval_harmonic(AngularIndex::new(dim, l, m)?, point)?;
        total += v.norm_sqr();
    }
    Ok(total)
}

/// Sharp sup-norm constant: `||f||_inf <= linf_bound(d, l) ||f||_L2` on
/// degree-`l` harmonics.
pub fn linf_bound(dim: u32, l: u32) -> f64 {
    (dim_harmonic(dim, l) as f64 / surface_measure(dim)).sqrt()
}

/// The zonal kernel `sum_m conj(f_{l,m}(x)) f_{l,m}(y)`; the extremal
/// function for the sup-norm bound, peaking at `y = x`.
pub fn zonal_function(dim: u32, l: u32, x: &SurfacePoint, y: &SurfacePoint) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for m in angular_orders(dim, l)? {
        let idx = AngularIndex::new(dim, l, m)?;
        total += eval_harmonic(idx, x)?.conj() * eval_harmonic(idx, y)?;
    }
    Ok(total)
}
