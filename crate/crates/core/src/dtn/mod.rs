//! Dirichlet-to-Neumann forward maps on the unit disk for the conductivity
//! equation, truncated to the boundary Fourier basis `e^(i j theta) / sqrt(2 pi)`.
//!
//! Rotationally symmetric conductivities go through a per-mode radial ODE
//! (`spectral`); general ones through linear finite elements on a
//! deterministic polar disk mesh (`fem`). The `experiment` module drives
//! Lipschitz-ratio studies over conductivity families.

pub mod experiment;
pub mod fem;
pub mod spectral;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// A strictly positive conductivity on the closed unit disk.
#[derive(Clone)]
pub struct Conductivity2D {
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    radial: Option<RadialProfile>,
}

/// Radial profile with declared discontinuity radii (kept as integration
/// breakpoints by the spectral solver).
#[derive(Clone)]
pub struct RadialProfile {
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    breakpoints: Vec<f64>,
}

impl RadialProfile {
    pub fn value(&self, r: f64) -> f64 {
        (self.profile)(r)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

impl Conductivity2D {
    pub fn constant(value: f64) -> Self {
        Self::radial_with_breakpoints(move |_| value, Vec::new())
    }

    pub fn radial<F: Fn(f64) -> f64 + Send + Sync + 'static>(profile: F) -> Self {
        Self::radial_with_breakpoints(profile, Vec::new())
    }

    pub fn radial_with_breakpoints<F: Fn(f64) -> f64 + Send + Sync + 'static>(
        profile: F,
        breakpoints: Vec<f64>,
    ) -> Self {
        let profile = Arc::new(profile);
        let eval_profile = profile.clone();
        Self {
            eval: Arc::new(move |x, y| eval_profile(x.hypot(y))),
            radial: Some(RadialProfile {
                profile,
                breakpoints,
            }),
        }
    }

    /// Piecewise-constant two-phase profile: `inner_value` for `r < radius`
    /// and 1 outside.
    pub fn two_phase(inner_value: f64, radius: f64) -> Self {
        Self::radial_with_breakpoints(
            move |r| if r < radius { inner_value } else { 1.0 },
            vec![radius],
        )
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(eval: F) -> Self {
        Self {
            eval: Arc::new(eval),
            radial: None,
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn radial_profile(&self) -> Option<&RadialProfile> {
        self.radial.as_ref()
    }

    pub fn is_radial(&self) -> bool {
        self.radial.is_some()
    }

    /// Minimum over a dense polar sample grid; membership in the positive
    /// continuous class requires this to stay above a positive margin.
    pub fn min_sampled(&self, n_radial: usize, n_angular: usize) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..=n_radial {
            let r = i as f64 / n_radial as f64;
            for j in 0..n_angular {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n_angular as f64;
                min = min.min(self.value(r * theta.cos(), r * theta.sin()));
            }
        }
        min
    }

    /// Errors unless the conductivity stays above `margin` on a dense grid.
    pub fn check_positive(&self, margin: f64) -> Result<()> {
        let min = self.min_sampled(200, 256);
        if min < margin {
            return Err(Error::Domain(format!(
                "conductivity must be positive: sampled minimum {min} below margin {margin}"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for Conductivity2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Conductivity2D")
            .field("radial", &self.radial.is_some())
            .finish()
    }
}

/// Truncated DtN operator in the orthonormal boundary Fourier basis:
/// entry `(j', j)` is `<Lambda phi_j, phi_j'>` for `j, j'` in `-N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DtnMatrix {
    truncation: u32,
    entries: DMatrix<Complex64>,
}

impl DtnMatrix {
    pub fn zeros(truncation: u32) -> Self {
        let n = 2 * truncation as usize + 1;
        Self {
            truncation,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    fn offset(&self, j: i64) -> usize {
        (j + self.truncation as i64) as usize
    }

    pub fn get(&self, j_out: i64, j_in: i64) -> Complex64 {
        self.entries[(self.offset(j_out), self.offset(j_in))]
    }

    pub fn set(&mut self, j_out: i64, j_in: i64, value: Complex64) {
        let idx = (self.offset(j_out), self.offset(j_in));
        self.entries[idx] = value;
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.truncation as i64;
        -n..=n
    }

    /// Entrywise difference, used for `Lambda(gamma1) - Lambda(gamma2)`.
    pub fn difference(&self, other: &DtnMatrix) -> Result<DtnMatrix> {
        if self.truncation != other.truncation {
            return Err(Error::Domain(format!(
                "DtN truncations differ: {} vs {}",
                self.truncation, other.truncation
            )));
        }
        Ok(DtnMatrix {
            truncation: self.truncation,
            entries: &self.entries - &other.entries,
        })
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.size() {
            for b in 0..self.size() {
                worst = worst.max((self.entries[(a, b)] - self.entries[(b, a)].conj()).norm());
            }
        }
        worst
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }
}

/// Operator norm of a DtN (difference) matrix as a map
/// `H^{1/2}(dB) -> H^{-1/2}(dB)` under the Fourier-weight norms
/// `||u||_{H^s}^2 = sum (1+j^2)^s |u_j|^2`: the largest singular value of
/// the matrix rescaled by `(1+j^2)^{-1/4}` on both sides.
pub fn operator_norm_h12(matrix: &DtnMatrix) -> f64 {
    let n = matrix.size();
    let weights: Vec<f64> = matrix
        .modes()
        .map(|j| (1.0 + (j * j) as f64).powf(-0.25))
        .collect();
    let mut scaled = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            scaled[(a, b)] = matrix.entries[(a, b)] * weights[a] * weights[b];
        }
    }
    scaled.singular_values().max()
}
