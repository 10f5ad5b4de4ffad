//! Numerical integration backing every verification suite: Gauss rules on
//! `[0,1]` against the weight `r^(d-1)`, the trapezoid rule on the circle
//! (exact for trigonometric polynomials), a Gauss-Legendre x trapezoid
//! product rule on the 2-sphere, and tensorized full-ball inner products.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::harmonics::SurfacePoint;
use crate::specfun::ln_gamma;
use crate::{Error, Result};

/// What measure a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `int_0^1 f(r) r^(d-1) dr`
    RadialPower { dim: u32 },
    /// `int_0^2pi f(theta) dtheta`
    UniformCircle,
    /// Surface measure on the 2-sphere (stored on the product rule).
    SphereProduct,
}

/// A one-dimensional quadrature rule with declared polynomial (or
/// trigonometric) exactness degree.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: u32,
    pub weight: WeightKind,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Jacobi nodes and weights on `[-1, 1]` for the weight
/// `(1-x)^alpha (1+x)^beta`, via the symmetric Jacobi matrix
/// (Golub-Welsch with closed-form recurrence coefficients).
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Quadrature("node count must be positive".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Quadrature(format!(
            "Jacobi exponents must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let ab = alpha + beta;
    // Recurrence coefficients of the symmetric Jacobi matrix.
    let mut diag = vec![0.0; n];
    let mut offdiag = vec![0.0; n]; // offdiag[i] couples i-1 and i, i >= 1
    diag[0] = (beta - alpha) / (ab + 2.0);
    for i in 1..n {
        let k = i as f64;
        let denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag[i] = if denom == 0.0 {
            0.0
        } else {
            (beta * beta - alpha * alpha) / denom
        };
        let off_sq = 4.0 * k * (k + alpha) * (k + beta) * (k + ab)
            / ((2.0 * k + ab).powi(2) * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0));
        if !(off_sq > 0.0) {
            return Err(Error::Quadrature(format!(
                "recurrence lost positivity at index {i} (n = {n} too large for this precision)"
            )));
        }
        offdiag[i] = off_sq.sqrt();
    }

    // Total mass: int (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1).
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
        + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();

    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = diag[i];
        if i >= 1 {
            jacobi[(i - 1, i)] = offdiag[i];
            jacobi[(i, i - 1)] = offdiag[i];
        }
    }
    let mut nodes: Vec<f64> = jacobi.symmetric_eigen().eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    // Evaluates the orthonormal recurrence at x: returns (p_n, p_n',
    // sum_{k<n} p_k^2). Newton-polishing the eigenvalue nodes and taking
    // Christoffel-function weights recovers full double precision.
    let eval = |x: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / mu0.sqrt();
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        let mut kernel = 0.0;
        for i in 0..n {
            kernel += p * p;
            let b_next = if i + 1 < n { offdiag[i + 1] } else { 1.0 };
            let p_next = ((x - diag[i]) * p - if i >= 1 { offdiag[i] * p_prev } else { 0.0 })
                / b_next;
            let dp_next = ((x - diag[i]) * dp + p
                - if i >= 1 { offdiag[i] * dp_prev } else { 0.0 })
                / b_next;
            p_prev = p;
            p = p_next;
            dp_prev = dp;
            dp = dp_next;
        }
        (p, dp, kernel)
    };

    let mut weights = Vec::with_capacity(n);
    for node in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = eval(*node);
            if dp != 0.0 {
                let step = p / dp;
                *node -= step;
                if step.abs() < 1e-16 * node.abs().max(1.0) {
                    break;
                }
            }
        }
        let (_, _, kernel) = eval(*node);
        weights.push(1.0 / kernel);
    }
    if weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Quadrature(
            "Christoffel weights lost positivity".into(),
        ));
    }
    Ok((nodes, weights))
}

/// Gauss rule exact for `int_0^1 p(r) r^(d-1) dr` with `deg p <= 2n - 1`.
///
/// Built from Gauss-Jacobi on `[-1,1]` with the weight `(1+x)^(d-1)` and
/// the affine map `r = (x+1)/2`, so that every monomial moment (even or
/// odd) is exact.
pub fn radial_rule(dim: u32, n_nodes: usize) -> Result<QuadratureRule> {
    assert!(dim >= 2, "dimension must be at least 2");
    let (xs, ws) = gauss_jacobi(n_nodes, 0.0, (dim - 1) as f64)?;
    let scale = 0.5f64.powi(dim as i32);
    Ok(QuadratureRule {
        nodes: xs.iter().map(|&x| 0.5 * (x + 1.0)).collect(),
        weights: ws.iter().map(|&w| w * scale).collect(),
        exactness_degree: 2 * n_nodes as u32 - 1,
        weight: WeightKind::RadialPower { dim },
    })
}

/// Uniform (trapezoid) rule on `[0, 2pi)`, exact for `e^(i j theta)` with
/// `|j| < n_nodes`.
pub fn circle_rule(n_nodes: usize) -> QuadratureRule {
    let w = 2.0 * std::f64::consts::PI / n_nodes as f64;
    QuadratureRule {
        nodes: (0..n_nodes).map(|i| i as f64 * w).collect(),
        weights: vec![w; n_nodes],
        exactness_degree: n_nodes as u32 - 1,
        weight: WeightKind::UniformCircle,
    }
}

/// Product rule on the 2-sphere: Gauss-Legendre in `cos(theta)` times a
/// uniform azimuthal rule. Integrates spherical-harmonic products
/// `Y_l^m conj(Y_l'^m')` exactly for `l + l' < 2 n_polar` and
/// `|m - m'| < n_azimuth`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// (theta, phi, weight) triples.
    pub nodes: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        let (xs, ws) = gauss_jacobi(n_polar, 0.0, 0.0)?;
        let dphi = 2.0 * std::f64::consts::PI / n_azimuth as f64;
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        for (&x, &w) in xs.iter().zip(&ws) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for i in 0..n_azimuth {
                nodes.push((theta, i as f64 * dphi, w * dphi));
            }
        }
        Ok(Self { nodes })
    }

    pub fn integrate<F: FnMut(&SurfacePoint) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .map(|&(theta, phi, w)| w * f(&SurfacePoint::from_spherical(theta, phi)))
            .sum()
    }
}

/// `int_dB f conj(g) dsigma` for d = 2 or 3.
pub fn surface_inner_product<F, G>(dim: u32, f: F, g: G, angular_nodes: usize) -> Result<Complex64>
where
    F: Fn(&SurfacePoint) -> Complex64,
    G: Fn(&SurfacePoint) -> Complex64,
{
    match dim {
        2 => {
            let rule = circle_rule(angular_nodes);
            Ok(rule.integrate_complex(|theta| {
                let p = SurfacePoint::from_angle(theta);
                f(&p) * g(&p).conj()
            }))
        }
        3 => {
            let rule = SphereRule::new(angular_nodes, 2 * angular_nodes.max(2))?;
            Ok(rule.integrate(|p| f(p) * g(p).conj()))
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// `<f, g>_{L^2(B)} = int_B f conj(g) dx` by a tensor rule
/// (radial Gauss x angular rule) in polar coordinates.
pub fn ball_inner_product<F, G>(
    dim: u32,
    f: F,
    g: G,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<Complex64>
where
    F: Fn(f64, &SurfacePoint) -> Complex64,
    G: Fn(f64, &SurfacePoint) -> Complex64,
{
    let radial = radial_rule(dim, radial_nodes)?;
    match dim {
        2 => {
            let circle = circle_rule(angular_nodes);
            let mut total = Complex64::new(0.0, 0.0);
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                total += wr
                    * circle.integrate_complex(|theta| {
                        let p = SurfacePoint::from_angle(theta);
                        f(r, &p) * g(r, &p).conj()
                    });
            }
            Ok(total)
        }
        3 => {
            let sphere = SphereRule::new(angular_nodes, 2 * angular_nodes.max(2))?;
            let mut total = Complex64::new(0.0, 0.0);
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                total += wr * sphere.integrate(|p| f(r, p) * g(r, p).conj());
            }
            Ok(total)
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}
