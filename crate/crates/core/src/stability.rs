//! Stability machinery over the Zernike basis: coefficient fields, the
//! sup-norm weights `a_{n,k}`, membership in the weighted-l1 classes, the
//! mixed-term cancellation condition and its stability parameter epsilon,
//! boundary trace expansions, interior/boundary Parseval norms, and the
//! interior-versus-boundary inequality that drives Lipschitz stability.
//!
//! All coefficient fields here are finitely supported, which makes the
//! trace interchange automatic; the weighted l1 norm is still computed and
//! reported as the quantitative proxy for the decay condition.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::harmonics::{
    dim_harmonic, eval_harmonic, surface_measure, AngularIndex, SurfacePoint,
};
use crate::radial::{build_radial, eval_radial, RadialIndex, RadialPolynomial};
use crate::{Error, Result};

/// Index of a Zernike basis function `psi_{l,m,k}`.
///
/// For `d = 2` the angular part collapses to the circle index `j = m` with
/// `l = |j|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    dim: u32,
    l: u32,
    m: i64,
    k: u32,
}

impl BasisIndex {
    pub fn new(dim: u32, l: u32, m: i64, k: u32) -> Result<Self> {
        AngularIndex::new(dim, l, m)?;
        Ok(Self { dim, l, m, k })
    }

    /// d = 2 constructor from the combined circle index.
    pub fn from_j_k(j: i64, k: u32) -> Self {
        Self {
            dim: 2,
            l: j.unsigned_abs() as u32,
            m: j,
            k,
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

    pub fn radial_k(&self) -> u32 {
        self.k
    }

    pub fn angular(&self) -> AngularIndex {
        AngularIndex::new(self.dim, self.l, self.m).expect("validated at construction")
    }

    pub fn radial(&self) -> RadialIndex {
        RadialIndex::new(self.dim, self.l, self.k)
    }

    /// `g_{n,k}(1) = sqrt(2l + 4k + d)`.
    pub fn boundary_value(&self) -> f64 {
        (self.radial().radicand() as f64).sqrt()
    }
}

/// A finitely supported coefficient map over the Zernike basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    dim: u32,
    entries: BTreeMap<BasisIndex, Complex64>,
}

impl CoefficientField {
    pub fn new(dim: u32) -> Self {
        assert!(dim >= 2, "dimension must be at least 2");
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Inserts (or overwrites) a coefficient; a zero value removes the
    /// entry, so stored entries are exactly the nonvanishing coefficients.
    pub fn insert(&mut self, index: BasisIndex, value: Complex64) -> Result<()> {
        if index.dim() != self.dim {
            return Err(Error::Domain(format!(
                "index dimension {} does not match field dimension {}",
                index.dim(),
                self.dim
            )));
        }
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BasisIndex, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries grouped by the angular mode `n = (l, m)`, each row sorted
    /// by `k`.
    pub fn rows(&self) -> BTreeMap<(u32, i64), Vec<(u32, Complex64)>> {
        let mut rows: BTreeMap<(u32, i64), Vec<(u32, Complex64)>> = BTreeMap::new();
        for (idx, &c) in &self.entries {
            rows.entry((idx.l, idx.m)).or_default().push((idx.k, c));
        }
        rows
    }

    /// The radial indices `k` carrying at least one coefficient.
    pub fn occupied_k(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.entries.keys().map(|i| i.k).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// `l^2` norm of the coefficients, which by Parseval is the
    /// `L^2(B)` norm of the represented function.
    pub fn l2_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&i, &c)| (i, c * t))
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }
}

/// Evaluates a fixed field at ball points, caching the radial polynomials.
pub struct FieldEvaluator<'a> {
    field: &'a CoefficientField,
    polys: BTreeMap<(u32, u32), RadialPolynomial>,
}

impl<'a> FieldEvaluator<'a> {
    pub fn new(field: &'a CoefficientField) -> Self {
        let mut polys = BTreeMap::new();
        for (idx, _) in field.entries() {
            polys
                .entry((idx.l, idx.k))
                .or_insert_with(|| build_radial(idx.radial()));
        }
        Self { field, polys }
    }

    /// `sum c_{n,k} R_{l,k}(r) f_{l,m}(theta)`.
    pub fn eval(&self, r: f64, point: &SurfacePoint) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (idx, &c) in self.field.entries() {
            let poly = &self.polys[&(idx.l, idx.k)];
            let radial = eval_radial(poly, r)?;
            total += c * radial * eval_harmonic(idx.angular(), point)?;
        }
        Ok(total)
    }
}

/// Evaluates a single basis function `psi_{l,m,k}` at a ball point.
pub fn eval_basis_function(index: BasisIndex, r: f64, point: &SurfacePoint) -> Result<Complex64> {
    let poly = build_radial(index.radial());
    Ok(eval_radial(&poly, r)? * eval_harmonic(index.angular(), point)?)
}

/// Sup-norm weight `a_{n,k} = |C_{l,k}| (dim H_l / |dB|)^{1/2}` bounding
/// `|psi_{n,k}|` on the closed ball.
pub fn bound_ank(index: BasisIndex) -> f64 {
    let poly = build_radial(index.radial());
    let dim_ratio = dim_harmonic(index.dim, index.l) as f64 / surface_measure(index.dim);
    poly.normalizer().abs() * dim_ratio.sqrt()
}

/// Weighted l1 norm `sum |c_{n,k}| a_{n,k}`.
pub fn weighted_l1_norm(field: &CoefficientField) -> f64 {
    field
        .entries()
        .map(|(idx, c)| c.norm() * bound_ank(*idx))
        .sum()
}

/// Both readings of the stability parameter extracted from the mixed-term
/// condition: the infimum of `|g_{n,k}(1)|` taken over the coefficient-
/// occupied `k` only, and the literal infimum starting at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonEstimate {
    pub occupied: f64,
    pub paper_literal: f64,
}

/// Outcome of the epsilon extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "epsilon_status", rename_all = "kebab-case")]
pub enum EpsilonExtraction {
    /// The largest epsilon satisfying the row-wise condition.
    Ok { epsilon: EpsilonEstimate },
    /// Some nonzero row sums to zero, so no epsilon exists.
    NoEpsilon,
    /// Empty field: the condition is vacuous and every epsilon works.
    Vacuous,
}

impl EpsilonExtraction {
    pub fn estimate(&self) -> Option<EpsilonEstimate> {
        match self {
            EpsilonExtraction::Ok { epsilon } => Some(*epsilon),
            _ => None,
        }
    }
}

/// Largest `epsilon` such that every angular row satisfies
/// `sum_k |c_{n,k}|^2 <= inf_k |g_{n,k}(1)|^2 / eps^2 |sum_k c_{n,k}|^2`.
///
/// Per row this is `inf_k |g_{n,k}(1)| |sum_k c| / (sum_k |c|^2)^{1/2}`;
/// rows whose coefficients cancel completely admit no epsilon.
pub fn extract_epsilon(field: &CoefficientField) -> EpsilonExtraction {
    if field.is_empty() {
        return EpsilonExtraction::Vacuous;
    }
    let mut eps_occupied = f64::INFINITY;
    let mut eps_paper = f64::INFINITY;
    for ((l, _m), row) in field.rows() {
        let sum: Complex64 = row.iter().map(|&(_, c)| c).sum();
        let sum_sq: f64 = row.iter().map(|&(_, c)| c.norm_sqr()).sum();
        if sum.norm() == 0.0 {
            return EpsilonExtraction::NoEpsilon;
        }
        let ratio = sum.norm() / sum_sq.sqrt();
        let k_min = row.iter().map(|&(k, _)| k).min().expect("nonempty row");
        let g_occupied = ((2 * l as u64 + 4 * k_min as u64 + field.dim as u64) as f64).sqrt();
        let g_paper = ((2 * l as u64 + field.dim as u64) as f64).sqrt();
        eps_occupied = eps_occupied.min(g_occupied * ratio);
        eps_paper = eps_paper.min(g_paper * ratio);
    }
    EpsilonExtraction::Ok {
        epsilon: EpsilonEstimate {
            occupied: eps_occupied,
            paper_literal: eps_paper,
        },
    }
}

/// The guaranteed epsilon for fields whose coefficients are real with a
/// sign depending only on the angular mode: the infimum of the boundary
/// values `sqrt(2l + 4k + d)` over the whole basis, which is `sqrt(d)`.
pub fn sign_class_epsilon(dim: u32) -> f64 {
    (dim as f64).sqrt()
}

/// Per-`k` membership flag for the single-radial-index classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KMembership {
    pub k: u32,
    pub member: bool,
}

/// Summary of class membership and the associated stability constants,
/// all reported in units of the boundary-stability constant.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub dim: u32,
    pub c_boundary: f64,
    /// Weighted l1 norm; finite fields always lie in the decay class.
    pub weighted_l1: f64,
    pub in_weighted_l1_class: bool,
    /// Membership in the single-`k` class for each occupied `k`; true only
    /// when that `k` is occupied exclusively. Empty fields are vacuously in
    /// every class.
    pub single_k_classes: Vec<KMembership>,
    pub vacuous: bool,
    #[serde(flatten)]
    pub epsilon: EpsilonExtraction,
    /// `eps^{-1} |dB|^{1/2} C_dB` with the paper-literal epsilon.
    pub constant_theorem: Option<f64>,
    /// Same constant with the occupied-k epsilon.
    pub constant_theorem_occupied: Option<f64>,
    /// `(|dB| / (4k + d))^{1/2} C_dB` for the exclusively occupied `k`.
    pub constant_corollary2: Option<f64>,
}

/// Computes class flags and stability constants for a field.
pub fn class_membership(field: &CoefficientField, c_boundary: f64) -> StabilityReport {
    let dim = field.dim();
    let measure = surface_measure(dim);
    let occupied = field.occupied_k();
    let exclusive = (occupied.len() == 1).then(|| occupied[0]);
    let single_k_classes = occupied
        .iter()
        .map(|&k| KMembership {
            k,
            member: exclusive == Some(k),
        })
        .collect();
    let epsilon = extract_epsilon(field);
    let estimate = epsilon.estimate();
    StabilityReport {
        dim,
        c_boundary,
        weighted_l1: weighted_l1_norm(field),
        in_weighted_l1_class: true,
        single_k_classes,
        vacuous: field.is_empty(),
        epsilon,
        constant_theorem: estimate.map(|e| measure.sqrt() / e.paper_literal * c_boundary),
        constant_theorem_occupied: estimate.map(|e| measure.sqrt() / e.occupied * c_boundary),
        constant_corollary2: exclusive
            .map(|k| (measure / (4.0 * k as f64 + dim as f64)).sqrt() * c_boundary),
    }
}

/// Boundary trace of the expansion:
/// `sum_{n,k} c_{n,k} g_{n,k}(1) f_n(theta)`.
pub fn trace_expansion(field: &CoefficientField, point: &SurfacePoint) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, &c) in field.entries() {
        total += c * idx.boundary_value() * eval_harmonic(idx.angular(), point)?;
    }
    Ok(total)
}

/// The two Parseval norms of the represented function:
/// `(||f||_{L^2(B)}, ||f||_{L^2(dB)})`, the first from `sum |c|^2` and the
/// second from `sum_n |sum_k c_{n,k} g_{n,k}(1)|^2`.
pub fn interior_boundary_norms(field: &CoefficientField) -> (f64, f64) {
    let interior = field.l2_norm();
    let boundary_sq: f64 = field
        .rows()
        .iter()
        .map(|((l, _m), row)| {
            row.iter()
                .map(|&(k, c)| {
                    c * ((2 * *l as u64 + 4 * k as u64 + field.dim as u64) as f64).sqrt()
                })
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    (interior, boundary_sq.sqrt())
}

/// Verdict of the interior-versus-boundary inequality
/// `||f||_{L^2(B)} <= eps^{-1} ||f||_{L^2(dB)}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoreInequalityReport {
    pub interior_norm: f64,
    pub boundary_norm: f64,
    /// The occupied-k epsilon used for the bound.
    pub epsilon: f64,
    /// `eps^{-1} ||f||_{L^2(dB)}`.
    pub bound: f64,
    /// `interior_norm / bound`.
    pub ratio: f64,
    /// Whether the ratio stays within `1 + 1e-12`.
    pub holds: bool,
}

/// Checks the inequality chain for a field admitting an epsilon.
pub fn verify_core_inequality(field: &CoefficientField) -> Result<CoreInequalityReport> {
    let epsilon = match extract_epsilon(field) {
        EpsilonExtraction::Ok { epsilon } => epsilon.occupied,
        EpsilonExtraction::NoEpsilon => {
            return Err(Error::Domain(
                "core inequality needs an epsilon, but a row cancels completely".into(),
            ))
        }
        EpsilonExtraction::Vacuous => {
            return Err(Error::Domain(
                "core inequality is vacuous for an empty field".into(),
            ))
        }
    };
    let (interior, boundary) = interior_boundary_norms(field);
    let bound = boundary / epsilon;
    let ratio = interior / bound;
    Ok(CoreInequalityReport {
        interior_norm: interior,
        boundary_norm: boundary,
        epsilon,
        bound,
        ratio,
        holds: ratio <= 1.0 + 1e-12,
    })
}

/// Sampled weak-maximum-principle check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MaxPrincipleReport {
    pub interior_max: f64,
    pub boundary_max: f64,
    pub tolerance: f64,
    pub passes: bool,
}

/// Samples a claimed maximum-principle function at quasi-uniform random
/// interior and boundary points of the unit ball and compares the maxima.
/// A sampling check can only falsify, not certify; the tolerance guards
/// against maxima hiding between boundary samples.
pub fn max_principle_check<F>(
    dim: u32,
    f: F,
    n_interior: usize,
    n_boundary: usize,
    seed: u64,
) -> Result<MaxPrincipleReport>
where
    F: Fn(&[f64]) -> f64,
{
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_direction = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm_sq: f64 = v.iter().map(|x| x * x).sum();
            if norm_sq > 1e-12 && norm_sq <= 1.0 {
                let norm = norm_sq.sqrt();
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    };

    let mut interior_max = f64::NEG_INFINITY;
    let mut scale = 0.0f64;
    for _ in 0..n_interior {
        let dir = sample_direction(&mut rng);
        let u: f64 = rng.gen_range(0.0..1.0);
        let r = u.powf(1.0 / dim as f64);
        let x: Vec<f64> = dir.iter().map(|&d| d * r).collect();
        let v = f(&x);
        interior_max = interior_max.max(v);
        scale = scale.max(v.abs());
    }
    let mut boundary_max = f64::NEG_INFINITY;
    for _ in 0..n_boundary {
        let x = sample_direction(&mut rng);
        let v = f(&x);
        boundary_max = boundary_max.max(v);
        scale = scale.max(v.abs());
    }
    let tolerance = 1e-9 + 1e-6 * scale;
    Ok(MaxPrincipleReport {
        interior_max,
        boundary_max,
        tolerance,
        passes: interior_max <= boundary_max + tolerance,
    })
}
