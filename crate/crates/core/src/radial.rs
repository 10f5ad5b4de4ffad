//! Radial Zernike polynomials `R_{l,k}` on `[0,1]` in any dimension
//! `d >= 2`: construction with exact coefficients, stable evaluation
//! through the Jacobi-polynomial form, eigenvalues, boundary data, and the
//! monomial expansion.
//!
//! `R_{l,k}` has degree `l + 2k`, only powers of the parity of `l`, and is
//! orthonormal on `[0,1]` against the weight `r^(d-1)`. All coefficients
//! are rational multiples of `sqrt(2l + 4k + d)`, which is what the exact
//! representation stores.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::specfun::{
    binomial_count, binomial_general, binomial_rational, jacobi_eval, pochhammer_rational,
    rational_to_f64, ExactRational, HalfInteger, SqrtRational,
};
use crate::{Error, Result};

/// Index `(d, l, k)` of a radial Zernike polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadialIndex {
    /// Ambient dimension, at least 2.
    pub dim: u32,
    /// Angular degree.
    pub l: u32,
    /// Radial index; the polynomial degree is `l + 2k`.
    pub k: u32,
}

impl RadialIndex {
    pub fn new(dim: u32, l: u32, k: u32) -> Self {
        assert!(dim >= 2, "dimension must be at least 2");
        Self { dim, l, k }
    }

    /// `2l + 4k + d`, the square of the boundary value.
    pub fn radicand(self) -> u64 {
        2 * self.l as u64 + 4 * self.k as u64 + self.dim as u64
    }

    /// Zernike eigenvalue `(l + 2k)(l + 2k + d)`.
    pub fn eigenvalue(self) -> u64 {
        let n = self.l as u64 + 2 * self.k as u64;
        n * (n + self.dim as u64)
    }

    fn half(self, num_offset: i64) -> ExactRational {
        // (d - 2)/2 + num_offset as an exact rational.
        BigRational::new(BigInt::from(self.dim as i64 - 2 + 2 * num_offset), BigInt::from(2))
    }
}

/// A radial Zernike polynomial with exact and floating-point coefficient
/// representations.
#[derive(Debug, Clone)]
pub struct RadialPolynomial {
    index: RadialIndex,
    /// Rational coefficient of `r^(l + 2q)` divided by `sqrt(radicand)`,
    /// for `q = 0..=k`.
    exact_coeffs: Vec<ExactRational>,
    /// Floating-point coefficients of `r^(l + 2q)` including the root.
    coeffs: Vec<f64>,
    normalizer: f64,
    eigenvalue: u64,
    boundary_value: f64,
}

impl RadialPolynomial {
    pub fn index(&self) -> RadialIndex {
        self.index
    }

    pub fn degree(&self) -> u32 {
        self.index.l + 2 * self.index.k
    }

    /// Normalizing constant `C_{l,k}`, carrying the sign `(-1)^k`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// `R_{l,k}(1) = sqrt(2l + 4k + d)`.
    pub fn boundary_value(&self) -> f64 {
        self.boundary_value
    }

    /// Zernike eigenvalue `mu_{l,k} = (l + 2k)(l + 2k + d)`.
    pub fn eigenvalue(&self) -> u64 {
        self.eigenvalue
    }

    pub fn radicand(&self) -> u64 {
        self.index.radicand()
    }

    /// Floating-point monomial coefficients; entry `q` multiplies `r^(l+2q)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Exact coefficients as rational multiples of `sqrt(radicand)`.
    pub fn exact_coeffs(&self) -> Vec<SqrtRational> {
        let radicand = self.radicand();
        self.exact_coeffs
            .iter()
            .map(|c| SqrtRational::new(c.clone(), radicand))
            .collect()
    }

    pub(crate) fn exact_rational_parts(&self) -> &[ExactRational] {
        &self.exact_coeffs
    }
}

/// Builds `R_{l,k}` with exact coefficients from the explicit binomial sum.
pub fn build_radial(index: RadialIndex) -> RadialPolynomial {
    let k = index.k;
    let root = (index.radicand() as f64).sqrt();
    // Coefficient of r^(l+2q): (-1)^(k-q) C(k,q) C(l+k+q+(d-2)/2, k),
    // all times sqrt(2l+4k+d).
    let mut exact_coeffs = Vec::with_capacity(k as usize + 1);
    for q in 0..=k {
        let binom_kq = binomial_rational(&BigRational::from_integer(BigInt::from(k)), q);
        let top = index.half(index.l as i64 + index.k as i64 + q as i64);
        let mut c = binom_kq * binomial_rational(&top, k);
        if (k - q) % 2 == 1 {
            c = -c;
        }
        exact_coeffs.push(c);
    }
    let coeffs: Vec<f64> = exact_coeffs
        .iter()
        .map(|c| rational_to_f64(c) * root)
        .collect();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let normalizer = sign
        * root
        * binomial_general(index.l as f64 + index.k as f64 + (index.dim as f64 - 2.0) / 2.0, k);
    RadialPolynomial {
        index,
        exact_coeffs,
        coeffs,
        normalizer,
        eigenvalue: index.eigenvalue(),
        boundary_value: root,
    }
}

/// Evaluates `R_{l,k}(r)` through the Jacobi form
/// `(-1)^k sqrt(2l+4k+d) r^l P_k^(l+d/2-1, 0)(1 - 2r^2)`,
/// which stays stable at high degree.
pub fn eval_radial(poly: &RadialPolynomial, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "radial evaluation requires r in [0, 1], got {r}"
        )));
    }
    let idx = poly.index;
    let alpha = idx.l as f64 + idx.dim as f64 / 2.0 - 1.0;
    let sign = if idx.k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * poly.boundary_value * r.powi(idx.l as i32) * jacobi_eval(idx.k, alpha, 1.0 - 2.0 * r * r))
}

/// Direct monomial-sum evaluation. Exact-mode companion of [`eval_radial`];
/// cancels catastrophically beyond degree ~40 and is kept for tests and
/// table output.
pub fn eval_radial_monomial(poly: &RadialPolynomial, r: f64) -> f64 {
    let l = poly.index.l as i32;
    let mut acc = 0.0;
    let mut rpow = r.powi(l);
    let r2 = r * r;
    for &c in &poly.coeffs {
        acc += c * rpow;
        rpow *= r2;
    }
    acc
}

/// Zernike eigenvalue `(l + 2k)(l + 2k + d)`.
pub fn eigenvalue(index: RadialIndex) -> u64 {
    index.eigenvalue()
}

/// Derivative `d/dr R_{l,k}` at `r = 1`; strictly positive except at
/// `l = k = 0` where the polynomial is constant.
pub fn boundary_derivative(poly: &RadialPolynomial) -> f64 {
    boundary_derivative_exact(poly).value()
}

/// Exact boundary derivative as a rational multiple of `sqrt(2l+4k+d)`.
pub fn boundary_derivative_exact(poly: &RadialPolynomial) -> SqrtRational {
    let l = poly.index.l as i64;
    let mut acc = BigRational::zero();
    for (q, c) in poly.exact_coeffs.iter().enumerate() {
        acc += c * BigRational::from_integer(BigInt::from(l + 2 * q as i64));
    }
    SqrtRational::new(acc, poly.radicand())
}

/// Expansion coefficients `chi_{l,k,p}` of `r^(l+2p)` over
/// `R_{l,0}, ..., R_{l,p}`.
pub fn monomial_expansion(dim: u32, l: u32, p: u32) -> Vec<f64> {
    monomial_expansion_exact(dim, l, p)
        .iter()
        .map(SqrtRational::value)
        .collect()
}

/// Exact `chi_{l,k,p}`; entry `k` is a rational multiple of
/// `sqrt(2l + 4k + d)`.
pub fn monomial_expansion_exact(dim: u32, l: u32, p: u32) -> Vec<SqrtRational> {
    (0..=p)
        .map(|k| {
            let idx = RadialIndex::new(dim, l, k);
            let denom = BigRational::from_integer(BigInt::from(
                2 * p as i64 + 2 * l as i64 + 2 * k as i64 + dim as i64,
            ));
            let binom_pk = binomial_rational(&BigRational::from_integer(BigInt::from(p)), k);
            let top = idx.half(p as i64 + l as i64 + k as i64);
            let coef = binom_pk / (denom * binomial_rational(&top, k));
            SqrtRational::new(coef, idx.radicand())
        })
        .collect()
}

/// Sturm-Liouville residual of `R_{l,k}` at an interior point:
/// `d/dr[r^(d-1)(1-r^2) R'] + lambda_l r^(d-3) R + mu_{l,k} r^(d-1) R`,
/// which is analytically zero. Returns the signed residual together with
/// the magnitude scale of the evaluated terms, since absolute coefficients
/// grow like binomials.
pub fn sturm_liouville_residual(poly: &RadialPolynomial, r: f64) -> Result<(f64, f64)> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::Domain(format!(
            "Sturm-Liouville residual requires r in (0, 1), got {r}"
        )));
    }
    let idx = poly.index;
    let d = idx.dim as f64;
    let l = idx.l as f64;
    let lambda = -(l * (l + d - 2.0));
    let mu = poly.eigenvalue as f64;

    let mut residual = 0.0;
    let mut scale = 0.0;
    let mut add = |v: f64| {
        residual += v;
        scale += v.abs();
    };

    for (q, &c) in poly.coeffs.iter().enumerate() {
        let p = l + 2.0 * q as f64; // power of this monomial
        let rp = r.powf(p);
        // d/dr[r^(d-1)(1-r^2) d/dr r^p] expands into four monomials.
        add(c * p * (p + d - 2.0) * rp / (r * r) * r.powf(d - 1.0));
        add(-c * p * (p + d) * rp * r.powf(d - 1.0));
        // lambda_l r^(d-3) term (vanishes for l = 0).
        if idx.l > 0 {
            add(c * lambda * rp / (r * r) * r.powf(d - 1.0));
        }
        // mu r^(d-1) term.
        add(c * mu * rp * r.powf(d - 1.0));
    }
    Ok((residual, scale))
}

/// Exact Sturm-Liouville residual polynomial; returns the nonzero
/// (power, coefficient) pairs, which is empty when the identity holds.
pub fn sturm_liouville_residual_exact(index: RadialIndex) -> Vec<(i64, ExactRational)> {
    let poly = build_radial(index);
    let d = index.dim as i64;
    let l = index.l as i64;
    let lambda = BigRational::from_integer(BigInt::from(-(l * (l + d - 2))));
    let mu = BigRational::from_integer(BigInt::from(index.eigenvalue() as i64));

    let mut acc: BTreeMap<i64, ExactRational> = BTreeMap::new();
    let mut add = |power: i64, coef: ExactRational| {
        let entry = acc.entry(power).or_insert_with(BigRational::zero);
        *entry += coef;
        if entry.is_zero() {
            acc.remove(&power);
        }
    };

    for (q, c) in poly.exact_coeffs.iter().enumerate() {
        let p = l + 2 * q as i64;
        let pr = BigRational::from_integer(BigInt::from(p));
        let dr = BigRational::from_integer(BigInt::from(d));
        let two = BigRational::from_integer(BigInt::from(2));
        // d/dr[r^(d-1)(1-r^2) p r^(p-1)] = p(p+d-2) r^(p+d-3) - p(p+d) r^(p+d-1)
        add(p + d - 3, c * &pr * (&pr + &dr - &two));
        add(p + d - 1, -(c * &pr * (&pr + &dr)));
        if l > 0 {
            add(p + d - 3, c * &lambda);
        }
        add(p + d - 1, c * &mu);
    }
    acc.into_iter().collect()
}

/// Coefficients of the 2D radial factor in the form common in the optics
/// literature: `sum_s (-1)^s C(|j|+2k-s, s) C(|j|+2k-2s, k-s) r^(|j|+2k-2s)`.
/// Entry `q` multiplies `r^(|j| + 2q)`; values are exact integers divided
/// by `sqrt(2|j| + 4k + 2)`.
pub fn radial_coeffs_2d_common_form(j_abs: u32, k: u32) -> Vec<ExactRational> {
    let mut out = vec![BigRational::zero(); k as usize + 1];
    for s in 0..=k {
        let q = (k - s) as usize;
        let a = binomial_count((j_abs + 2 * k - s) as i64, s);
        let b = binomial_count((j_abs + 2 * k - 2 * s) as i64, k - s);
        let mut c = BigRational::from_integer(BigInt::from(a) * BigInt::from(b));
        if s % 2 == 1 {
            c = -c;
        }
        out[q] = c;
    }
    out
}

/// Coefficients of the 3D radial factor from the explicit half-integer
/// binomial form, `sum_s (-1)^s C(k,s) C(l+2k-s+1/2, k) r^(l+2k-2s)`.
/// Entry `q` multiplies `r^(l + 2q)`; values are rational multiples of
/// `sqrt(2l + 4k + 3)`.
pub fn radial_coeffs_3d(l: u32, k: u32) -> Vec<ExactRational> {
    let mut out = vec![BigRational::zero(); k as usize + 1];
    for s in 0..=k {
        let q = (k - s) as usize;
        let binom_ks = binomial_rational(&BigRational::from_integer(BigInt::from(k)), s);
        let top = HalfInteger::from_twice(2 * (l + 2 * k - s) as i64 + 1);
        let mut c = binom_ks * binomial_rational(&top.to_rational(), k);
        if s % 2 == 1 {
            c = -c;
        }
        out[q] = c;
    }
    out
}

/// Unnormalized hypergeometric factors from the analysis of the radial
/// polynomials: `F_k = R_{l,k} / (C_{l,k} r^l)` and its index-shifted
/// companion. Exposed for the verification suites only.
#[doc(hidden)]
pub mod unnormalized {
    use super::*;

    /// Coefficients of `F_k(r) = 2F1(-k, l+k+d/2; l+d/2; r^2)` in powers
    /// `r^(2q)`, `q = 0..=k`.
    pub fn f_poly(dim: u32, l: u32, k: u32) -> Vec<ExactRational> {
        hypergeometric_poly(dim, l, k as i64, k)
    }

    /// Coefficients of `F~_k(r) = 2F1(-(k-1), l+k+d/2; l+d/2; r^2)` in
    /// powers `r^(2q)`, `q = 0..k`. Requires `k >= 1`.
    pub fn f_tilde_poly(dim: u32, l: u32, k: u32) -> Vec<ExactRational> {
        assert!(k >= 1, "F~_k is defined for k >= 1");
        hypergeometric_poly(dim, l, k as i64, k - 1)
    }

    /// Terminating 2F1(-trunc, l+shift+d/2; l+d/2; r^2) coefficients.
    fn hypergeometric_poly(dim: u32, l: u32, shift: i64, trunc: u32) -> Vec<ExactRational> {
        let b = BigRational::new(BigInt::from(2 * l as i64 + 2 * shift + dim as i64), BigInt::from(2));
        let c = BigRational::new(BigInt::from(2 * l as i64 + dim as i64), BigInt::from(2));
        (0..=trunc)
            .map(|q| {
                let binom = binomial_rational(
                    &BigRational::from_integer(BigInt::from(trunc)),
                    q,
                );
                let num = pochhammer_rational(&b, q);
                let den = pochhammer_rational(&c, q);
                let mut coef = binom * num / den;
                if q % 2 == 1 {
                    coef = -coef;
                }
                coef
            })
            .collect()
    }

    /// Evaluates an even-power coefficient list at `r`.
    pub fn eval_even_poly(coeffs: &[ExactRational], r: f64) -> f64 {
        let r2 = r * r;
        let mut rpow = 1.0;
        let mut acc = 0.0;
        for c in coeffs {
            acc += rational_to_f64(c) * rpow;
            rpow *= r2;
        }
        acc
    }

    /// Exact value at `r = 1` (sum of the coefficients).
    pub fn value_at_one(coeffs: &[ExactRational]) -> ExactRational {
        coeffs.iter().fold(BigRational::zero(), |a, c| a + c)
    }

    /// Exact `||r^l F||^2` in `L^2_{r^(d-1)}([0,1])` for an even-power
    /// coefficient list: `sum_{q,q'} c_q c_q' / (2l + 2q + 2q' + d)`.
    pub fn weighted_norm_sq(dim: u32, l: u32, coeffs: &[ExactRational]) -> ExactRational {
        let mut acc = BigRational::zero();
        for (q, cq) in coeffs.iter().enumerate() {
            for (qp, cqp) in coeffs.iter().enumerate() {
                let denom = BigRational::from_integer(BigInt::from(
                    2 * l as i64 + 2 * (q + qp) as i64 + dim as i64,
                ));
                acc += cq * cqp / denom;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::radial_rule;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_traits::{Signed, ToPrimitive};

    fn rat(n: i64, d: i64) -> ExactRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn build_small_cases() {
        // R_{0,0} in d = 2 is the constant sqrt(2).
        let p = build_radial(RadialIndex::new(2, 0, 0));
        assert_eq!(p.exact_rational_parts(), &[rat(1, 1)]);
        assert_relative_eq!(p.normalizer(), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(p.boundary_value(), 2f64.sqrt(), max_relative = 1e-15);

        // R_{0,1} in d = 2 is sqrt(6) (2r^2 - 1).
        let p = build_radial(RadialIndex::new(2, 0, 1));
        assert_eq!(p.exact_rational_parts(), &[rat(-1, 1), rat(2, 1)]);
        assert_relative_eq!(p.normalizer(), -6f64.sqrt(), max_relative = 1e-15);

        // R_{1,0} in d = 3 is sqrt(5) r.
        let p = build_radial(RadialIndex::new(3, 1, 0));
        assert_eq!(p.exact_rational_parts(), &[rat(1, 1)]);
        assert_relative_eq!(p.coeffs()[0], 5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn normalization_by_quadrature() {
        // Cross-checks the explicit forms against the weighted norm.
        let rule2 = radial_rule(2, 8).unwrap();
        let p = build_radial(RadialIndex::new(2, 0, 1));
        let norm = rule2.integrate(|r| {
            let v = eval_radial_monomial(&p, r);
            v * v
        });
        assert_relative_eq!(norm, 1.0, max_relative = 1e-13);

        let rule3 = radial_rule(3, 8).unwrap();
        let p = build_radial(RadialIndex::new(3, 1, 0));
        let norm = rule3.integrate(|r| {
            let v = eval_radial_monomial(&p, r);
            v * v
        });
        assert_relative_eq!(norm, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn eval_matches_boundary_and_roots() {
        for dim in [2u32, 3, 4, 7] {
            for l in [0u32, 1, 2, 9] {
                for k in [0u32, 1, 3, 10] {
                    let idx = RadialIndex::new(dim, l, k);
                    let p = build_radial(idx);
                    let at_one = eval_radial(&p, 1.0).unwrap();
                    assert_relative_eq!(
                        at_one,
                        (idx.radicand() as f64).sqrt(),
                        max_relative = 1e-12
                    );
                }
            }
        }
        // Root of sqrt(6)(2r^2 - 1) at 1/sqrt(2).
        let p = build_radial(RadialIndex::new(2, 0, 1));
        let v = eval_radial(&p, 1.0 / 2f64.sqrt()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        // R_{0,0} is the constant sqrt(d).
        for dim in [2u32, 3, 5] {
            let p = build_radial(RadialIndex::new(dim, 0, 0));
            for r in [0.0, 0.3, 0.99] {
                assert_relative_eq!(
                    eval_radial(&p, r).unwrap(),
                    (dim as f64).sqrt(),
                    max_relative = 1e-14
                );
            }
        }
        assert!(eval_radial(&p, 1.2).is_err());
        assert!(eval_radial(&p, -0.1).is_err());
    }

    #[test]
    fn jacobi_and_monomial_paths_agree() {
        // Relative agreement to 1e-10 for degrees up to 60.
        for dim in [2u32, 3] {
            for l in [0u32, 2, 10, 20] {
                for k in [0u32, 5, 12, 20] {
                    if l + 2 * k > 60 {
                        continue;
                    }
                    let p = build_radial(RadialIndex::new(dim, l, k));
                    for i in 0..=50 {
                        let r = i as f64 / 50.0;
                        let a = eval_radial(&p, r).unwrap();
                        let b = eval_radial_monomial(&p, r);
                        // The monomial sum is conditioned like the sum of
                        // its absolute terms; compare relative to that.
                        let mut abs_sum = 0.0;
                        let mut rpow = r.powi(l as i32);
                        for &c in p.coeffs() {
                            abs_sum += c.abs() * rpow;
                            rpow *= r * r;
                        }
                        let scale = a.abs().max(b.abs()).max(abs_sum);
                        assert!(
                            (a - b).abs() <= 1e-10 * scale,
                            "paths disagree at d={dim} l={l} k={k} r={r}: {a} vs {b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue(RadialIndex::new(2, 0, 0)), 0);
        assert_eq!(eigenvalue(RadialIndex::new(9, 0, 0)), 0);
        assert_eq!(eigenvalue(RadialIndex::new(2, 1, 1)), 15);
        assert_eq!(eigenvalue(RadialIndex::new(3, 2, 0)), 10);
    }

    #[test]
    fn orthonormality_moderate_range() {
        for dim in [2u32, 3, 5] {
            for l in [0u32, 1, 4, 8] {
                let polys: Vec<_> = (0..=8)
                    .map(|k| build_radial(RadialIndex::new(dim, l, k)))
                    .collect();
                let max_degree = 2 * (l + 16) + dim;
                let rule = radial_rule(dim, (max_degree / 2 + 2) as usize).unwrap();
                for (ki, pi) in polys.iter().enumerate() {
                    for (kj, pj) in polys.iter().enumerate() {
                        let ip = rule.integrate(|r| {
                            eval_radial(pi, r).unwrap() * eval_radial(pj, r).unwrap()
                        });
                        let expect = if ki == kj { 1.0 } else { 0.0 };
                        assert_abs_diff_eq!(ip, expect, epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_derivative_values() {
        let p = build_radial(RadialIndex::new(2, 0, 0));
        assert_eq!(boundary_derivative(&p), 0.0);
        let p = build_radial(RadialIndex::new(7, 0, 0));
        assert_eq!(boundary_derivative(&p), 0.0);

        // d/dr sqrt(6)(2r^2-1) at 1 is 4 sqrt(6).
        let p = build_radial(RadialIndex::new(2, 0, 1));
        assert_relative_eq!(boundary_derivative(&p), 4.0 * 6f64.sqrt(), max_relative = 1e-14);

        // R_{1,0} = 2r in d=2.
        let p = build_radial(RadialIndex::new(2, 1, 0));
        assert_relative_eq!(boundary_derivative(&p), 2.0, max_relative = 1e-15);

        // Strict positivity away from l = k = 0.
        for dim in [2u32, 3, 4] {
            for l in 0..=12u32 {
                for k in 0..=12u32 {
                    if l == 0 && k == 0 {
                        continue;
                    }
                    let exact = boundary_derivative_exact(&build_radial(RadialIndex::new(dim, l, k)));
                    assert!(exact.coef.is_positive(), "derivative sign at d={dim} l={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn uniform_bound_and_boundary_attainment() {
        for dim in [2u32, 3] {
            for l in [0u32, 3, 10] {
                for k in [0u32, 2, 7, 15] {
                    let p = build_radial(RadialIndex::new(dim, l, k));
                    let cap = p.normalizer().abs() * (1.0 + 1e-12);
                    let mut sup: f64 = 0.0;
                    for i in 0..=10_000 {
                        let r = i as f64 / 10_000.0;
                        sup = sup.max(eval_radial(&p, r).unwrap().abs());
                    }
                    assert!(sup <= cap, "uniform bound violated at d={dim} l={l} k={k}");

                    // Near r = 1 the maximum is the boundary value for some eta.
                    let target = p.boundary_value();
                    let attained = [0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001].iter().any(|&eta| {
                        let mut max_shell: f64 = 0.0;
                        for i in 0..=200 {
                            let r = 1.0 - eta + eta * i as f64 / 200.0;
                            max_shell = max_shell.max(eval_radial(&p, r).unwrap().abs());
                        }
                        (max_shell - target).abs() <= 1e-10 * target
                    });
                    assert!(attained, "no shell attains R(1) at d={dim} l={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn monomial_expansion_small_values() {
        // chi_{0,0,0} = 1/sqrt(2) in d = 2.
        let chi = monomial_expansion(2, 0, 0);
        assert_eq!(chi.len(), 1);
        assert_relative_eq!(chi[0], 1.0 / 2f64.sqrt(), max_relative = 1e-15);

        // chi for r^2 in d = 2: [sqrt(2)/4, sqrt(6)/12].
        let chi = monomial_expansion(2, 0, 1);
        assert_relative_eq!(chi[0], 2f64.sqrt() / 4.0, max_relative = 1e-15);
        assert_relative_eq!(chi[1], 6f64.sqrt() / 12.0, max_relative = 1e-15);

        // k = 0 entry is sqrt(2l+d)/(2p+2l+d).
        for dim in [2u32, 3] {
            for l in [0u32, 2, 5] {
                for p in [0u32, 1, 7] {
                    let chi = monomial_expansion(dim, l, p);
                    let expect = ((2 * l + dim) as f64).sqrt() / (2 * p + 2 * l + dim) as f64;
                    assert_relative_eq!(chi[0], expect, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn monomial_expansion_reconstructs_powers() {
        for dim in [2u32, 3] {
            for l in [0u32, 1, 5, 10] {
                for p in [0u32, 1, 4, 12, 20] {
                    let chi = monomial_expansion(dim, l, p);
                    let polys: Vec<_> = (0..=p)
                        .map(|k| build_radial(RadialIndex::new(dim, l, k)))
                        .collect();
                    let mut worst: f64 = 0.0;
                    for i in 0..=100 {
                        let r = i as f64 / 100.0;
                        let recon: f64 = chi
                            .iter()
                            .zip(&polys)
                            .map(|(&c, poly)| c * eval_radial(poly, r).unwrap())
                            .sum();
                        worst = worst.max((recon - r.powi((l + 2 * p) as i32)).abs());
                    }
                    assert!(
                        worst <= 1e-10,
                        "reconstruction error {worst} at d={dim} l={l} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn monomial_expansion_matches_quadrature_inner_products() {
        // chi_{l,k,p} = <r^(l+2p), R_{l,k}> in the weighted space.
        for dim in [2u32, 3] {
            for l in [0u32, 2] {
                for p in [1u32, 3, 6] {
                    let chi = monomial_expansion(dim, l, p);
                    let rule = radial_rule(dim, (l + 2 * p + dim) as usize).unwrap();
                    for k in 0..=p {
                        let poly = build_radial(RadialIndex::new(dim, l, k));
                        let ip = rule.integrate(|r| {
                            r.powi((l + 2 * p) as i32) * eval_radial(&poly, r).unwrap()
                        });
                        assert_abs_diff_eq!(ip, chi[k as usize], epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn sturm_liouville_residual_vanishes() {
        // Constant eigenfunction: residual is exactly zero.
        let p = build_radial(RadialIndex::new(2, 0, 0));
        let (res, _) = sturm_liouville_residual(&p, 0.5).unwrap();
        assert_eq!(res, 0.0);

        for dim in [2u32, 3] {
            for l in [0u32, 1, 2, 8, 15] {
                for k in [0u32, 1, 2, 9, 15] {
                    let poly = build_radial(RadialIndex::new(dim, l, k));
                    for i in 1..50 {
                        let r = i as f64 / 50.0;
                        let (res, scale) = sturm_liouville_residual(&poly, r).unwrap();
                        assert!(
                            res.abs() <= 1e-9 * scale.max(1e-300),
                            "relative residual {} at d={dim} l={l} k={k} r={r}",
                            res.abs() / scale
                        );
                    }
                }
            }
        }
        assert!(sturm_liouville_residual(&p, 0.0).is_err());
        assert!(sturm_liouville_residual(&p, 1.0).is_err());
    }

    #[test]
    fn sturm_liouville_exact_identity() {
        for dim in [2u32, 3, 4, 7] {
            for l in [0u32, 1, 3, 6] {
                for k in [0u32, 1, 2, 5] {
                    let leftover = sturm_liouville_residual_exact(RadialIndex::new(dim, l, k));
                    assert!(
                        leftover.is_empty(),
                        "nonzero residual coefficients at d={dim} l={l} k={k}: {leftover:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_dim_forms_agree_exactly() {
        for j_abs in 0..=15u32 {
            for k in 0..=15u32 {
                let standard = build_radial(RadialIndex::new(2, j_abs, k));
                let alt = radial_coeffs_2d_common_form(j_abs, k);
                assert_eq!(standard.exact_rational_parts(), &alt[..], "at |j|={j_abs}, k={k}");
            }
        }
    }

    #[test]
    fn three_dim_form_matches_general_formula() {
        for l in 0..=10u32 {
            for k in 0..=10u32 {
                let standard = build_radial(RadialIndex::new(3, l, k));
                let explicit = radial_coeffs_3d(l, k);
                assert_eq!(standard.exact_rational_parts(), &explicit[..], "at l={l}, k={k}");
            }
        }
    }

    #[test]
    fn hypergeometric_factor_boundary_value() {
        // F_k(1) = (-1)^k / C(l+k+(d-2)/2, k), exactly.
        for dim in [2u32, 3, 4, 7] {
            for l in [0u32, 1, 5] {
                for k in 0..=10u32 {
                    let f = unnormalized::f_poly(dim, l, k);
                    let at_one = unnormalized::value_at_one(&f);
                    let top = BigRational::new(
                        BigInt::from(2 * (l + k) as i64 + dim as i64 - 2),
                        BigInt::from(2),
                    );
                    let mut expect = binomial_rational(&top, k).recip();
                    if k % 2 == 1 {
                        expect = -expect;
                    }
                    assert_eq!(at_one, expect, "at d={dim} l={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn hypergeometric_norm_identity_exact() {
        // ||r^l F_k||^2 = F_k(1)^2 / (2l + 4k + d), exactly in rationals.
        for dim in [2u32, 3, 4] {
            for l in [0u32, 2, 4] {
                for k in 0..=8u32 {
                    let f = unnormalized::f_poly(dim, l, k);
                    let norm_sq = unnormalized::weighted_norm_sq(dim, l, &f);
                    let f1 = unnormalized::value_at_one(&f);
                    let expect = &f1 * &f1
                        / BigRational::from_integer(BigInt::from(
                            2 * l as i64 + 4 * k as i64 + dim as i64,
                        ));
                    assert_eq!(norm_sq, expect, "at d={dim} l={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn contiguous_identity_exact() {
        // F~_j = (l+2j+(d-2)/2-1)/(l+j+(d-2)/2) F_{j-1}
        //        - (j-1)/(l+j+(d-2)/2) F~_{j-1}, as polynomials.
        for dim in [2u32, 4] {
            for l in [0u32, 1, 6] {
                for j in 2..=10u32 {
                    let lhs = unnormalized::f_tilde_poly(dim, l, j);
                    let f_prev = unnormalized::f_poly(dim, l, j - 1);
                    let ft_prev = unnormalized::f_tilde_poly(dim, l, j - 1);
                    let denom = rat(2 * (l + j) as i64 + dim as i64 - 2, 2);
                    let a = rat(2 * (l + 2 * j) as i64 + dim as i64 - 4, 2) / &denom;
                    let b = rat((j - 1) as i64, 1) / &denom;
                    for q in 0..lhs.len() {
                        let fp = f_prev.get(q).cloned().unwrap_or_else(BigRational::zero);
                        let ftp = ft_prev.get(q).cloned().unwrap_or_else(BigRational::zero);
                        let rhs = &a * fp - &b * ftp;
                        assert_eq!(lhs[q], rhs, "coefficient q={q} at d={dim} l={l} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_identity_exact() {
        // r F_k' = -2k (F~_k - F_k) as polynomials in r.
        for dim in [2u32, 3, 6] {
            for l in [0u32, 2, 7] {
                for k in 1..=10u32 {
                    let f = unnormalized::f_poly(dim, l, k);
                    let ft = unnormalized::f_tilde_poly(dim, l, k);
                    for q in 0..f.len() {
                        // coefficient of r^(2q) in r F_k' is 2q c_q
                        let lhs = &f[q] * BigRational::from_integer(BigInt::from(2 * q as i64));
                        let ftq = ft.get(q).cloned().unwrap_or_else(BigRational::zero);
                        let rhs = BigRational::from_integer(BigInt::from(-2 * k as i64))
                            * (ftq - &f[q]);
                        assert_eq!(lhs, rhs, "coefficient q={q} at d={dim} l={l} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn identities_float_odd_dimension() {
        // Floating-point residuals of the proof identities for odd d,
        // relative to the absolute-term sums of the evaluations.
        fn eval_abs(coeffs: &[ExactRational], r: f64) -> f64 {
            let r2 = r * r;
            let mut rpow = 1.0;
            let mut acc = 0.0;
            for c in coeffs {
                acc += rational_to_f64(c).abs() * rpow;
                rpow *= r2;
            }
            acc
        }
        for dim in [3u32, 5] {
            for l in [0u32, 3] {
                for k in 2..=10u32 {
                    let f = unnormalized::f_poly(dim, l, k);
                    let ft = unnormalized::f_tilde_poly(dim, l, k);
                    let f_prev = unnormalized::f_poly(dim, l, k - 1);
                    let ft_prev = unnormalized::f_tilde_poly(dim, l, k - 1);
                    let denom = l as f64 + k as f64 + (dim as f64 - 2.0) / 2.0;
                    let a = (l as f64 + 2.0 * k as f64 + (dim as f64 - 2.0) / 2.0 - 1.0) / denom;
                    let b = (k as f64 - 1.0) / denom;
                    for i in 0..50 {
                        let r = (i as f64 + 0.5) / 50.0;
                        let lhs = unnormalized::eval_even_poly(&ft, r);
                        let rhs = a * unnormalized::eval_even_poly(&f_prev, r)
                            - b * unnormalized::eval_even_poly(&ft_prev, r);
                        let scale = eval_abs(&ft, r)
                            + a.abs() * eval_abs(&f_prev, r)
                            + b.abs() * eval_abs(&ft_prev, r);
                        assert!(
                            (lhs - rhs).abs() <= 1e-12 * scale,
                            "contiguous identity residual at d={dim} l={l} k={k} r={r}"
                        );

                        // derivative identity, evaluated
                        let r2 = r * r;
                        let mut df = 0.0;
                        let mut df_abs = 0.0;
                        let mut rpow = 1.0;
                        for (q, c) in f.iter().enumerate() {
                            df += rational_to_f64(c) * 2.0 * q as f64 * rpow;
                            df_abs += rational_to_f64(c).abs() * 2.0 * q as f64 * rpow;
                            rpow *= r2;
                        }
                        let rhs2 = -2.0 * k as f64
                            * (unnormalized::eval_even_poly(&ft, r)
                                - unnormalized::eval_even_poly(&f, r));
                        let scale2 =
                            df_abs + 2.0 * k as f64 * (eval_abs(&ft, r) + eval_abs(&f, r));
                        assert!(
                            (df - rhs2).abs() <= 1e-12 * scale2,
                            "derivative identity residual at d={dim} l={l} k={k} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn norm_identity_by_quadrature() {
        // ||r^l F_k||^2 = F_k(1)^2/(2l+4k+d) checked by Gauss quadrature.
        for dim in [2u32, 3] {
            for l in [0u32, 4] {
                for k in [1u32, 3, 8] {
                    let f = unnormalized::f_poly(dim, l, k);
                    let rule = radial_rule(dim, (l + 2 * k + 4) as usize).unwrap();
                    let norm_sq = rule.integrate(|r| {
                        let v = r.powi(l as i32) * unnormalized::eval_even_poly(&f, r);
                        v * v
                    });
                    let f1 = rational_to_f64(&unnormalized::value_at_one(&f));
                    let expect = f1 * f1 / (2 * l + 4 * k + dim) as f64;
                    assert_abs_diff_eq!(norm_sq, expect, epsilon = 1e-10 * (1.0 + expect));
                }
            }
        }
    }

    #[test]
    fn exact_coeff_views() {
        let p = build_radial(RadialIndex::new(2, 1, 1));
        let coeffs = p.exact_coeffs();
        assert_eq!(coeffs.len(), 2);
        assert!(coeffs.iter().all(|c| c.radicand == 8));
        assert_relative_eq!(
            coeffs[1].value(),
            p.coeffs()[1],
            max_relative = 1e-15
        );
        assert_eq!(p.degree(), 3);
        assert!(p.eigenvalue() == 3 * (3 + 2));
        // big rational to f64 helper sanity
        assert_eq!(rat(1, 2).to_f64().unwrap(), 0.5);
    }
}
