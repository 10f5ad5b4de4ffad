//! Special-function kernels shared by the Zernike formulas: log-gamma,
//! Pochhammer symbols, generalized binomial coefficients with half-integer
//! arguments, and Jacobi polynomials `P_k^(alpha,0)` by recurrence.
//!
//! Everything exists in two flavors. The floating-point routines go through
//! log-gamma so that degrees of several hundred do not overflow. The exact
//! routines work on arbitrary-precision rationals and back the bit-exact
//! identity tests; half-integer arguments (`l + d/2` for odd `d`) stay exact
//! because every Pochhammer factor is a ratio of odd integers over powers
//! of two.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// A number of the form `n/2`, used for the `d/2` and `(d-2)/2` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    /// Builds the half-integer with value `twice / 2`.
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_integer(n: i64) -> Self {
        Self { twice: 2 * n }
    }

    pub fn twice_value(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rational(self) -> ExactRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl std::ops::Add<i64> for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: i64) -> HalfInteger {
        HalfInteger::from_twice(self.twice + 2 * rhs)
    }
}

impl std::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A rational multiple of a single square root: `coef * sqrt(radicand)`.
///
/// The Zernike coefficient formulas are rational up to a common factor
/// `sqrt(2l + 4k + d)`, so one radicand tag per polynomial suffices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtRational {
    pub coef: ExactRational,
    pub radicand: u64,
}

impl SqrtRational {
    pub fn new(coef: ExactRational, radicand: u64) -> Self {
        Self { coef, radicand }
    }

    pub fn zero(radicand: u64) -> Self {
        Self::new(BigRational::zero(), radicand)
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    /// Numerical value `coef * sqrt(radicand)`.
    pub fn value(&self) -> f64 {
        rational_to_f64(&self.coef) * (self.radicand as f64).sqrt()
    }
}

impl std::fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}*sqrt({})", self.coef, self.radicand)
    }
}

/// Converts a big rational to `f64` without overflowing intermediate
/// integer-to-float casts.
pub fn rational_to_f64(x: &ExactRational) -> f64 {
    // Split off the integer part; the remainder is in [0, 1) and both
    // conversions stay within f64 range for every quantity in this crate.
    let trunc = x.trunc();
    let frac = x - &trunc;
    let trunc_f = bigint_to_f64(trunc.to_integer());
    if frac.is_zero() {
        return trunc_f;
    }
    let num = bigint_to_f64(frac.numer().clone());
    let den = bigint_to_f64(frac.denom().clone());
    trunc_f + num / den
}

fn bigint_to_f64(x: BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Natural log of the gamma function for `x > 0`.
///
/// Godfrey's Lanczos-type approximation; accurate to ~1e-15 relative over
/// the positive axis.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    const G: f64 = 10.900511;
    const COEFFS: [f64; 11] = [
        2.48574089138753565546e-5,
        1.05142378581721974210,
        -3.45687097222016235469,
        4.51227709466894823700,
        -2.98285225323576655721,
        1.05639711577126713077,
        -1.95428773191645869583e-1,
        1.70970543404441224307e-2,
        -5.71926117404305781283e-4,
        4.63399473359905636708e-6,
        -2.71994908488607703910e-9,
    ];
    let s = COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(COEFFS[0], |acc, (i, c)| acc + c / (x + i as f64 - 1.0));
    let two_sqrt_e_over_pi = 2.0 * (std::f64::consts::E / std::f64::consts::PI).sqrt();
    s.ln() + two_sqrt_e_over_pi.ln() + (x - 0.5) * ((x - 0.5 + G) / std::f64::consts::E).ln()
}

/// Rising factorial `x (x+1) ... (x+q-1)`; the empty product (`q = 0`) is 1.
pub fn pochhammer(x: f64, q: u32) -> f64 {
    (0..q).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// Exact rising factorial over rationals.
pub fn pochhammer_rational(x: &ExactRational, q: u32) -> ExactRational {
    let mut acc = BigRational::one();
    for i in 0..q {
        acc *= x + BigRational::from_integer(BigInt::from(i));
    }
    acc
}

/// Factorial as an exact rational (used to keep binomials exact).
pub fn factorial_rational(k: u32) -> ExactRational {
    let mut acc = BigInt::one();
    for i in 2..=k as u64 {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

/// Generalized binomial coefficient `C(top, k) = (top-k+1)_k / k!` for real
/// `top`, computed through log-gamma when the arguments allow it.
///
/// Integer tops follow the combinatorial convention `C(m, k) = 0` for
/// `0 <= m < k`.
pub fn binomial_general(top: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    // A nonnegative-integer top below k makes a Pochhammer factor vanish.
    if top >= 0.0 && top.fract() == 0.0 && top < kf {
        return 0.0;
    }
    if top - kf + 1.0 > 0.0 {
        // All gamma arguments positive: C(top,k) = G(top+1)/(G(k+1)G(top-k+1)).
        (ln_gamma(top + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(top - kf + 1.0)).exp()
    } else {
        // Negative factors present; the direct product is short in practice.
        pochhammer(top - kf + 1.0, k) / pochhammer(1.0, k)
    }
}

/// Exact generalized binomial for a half-integer (or integer) top.
pub fn binomial_half_integer(top: HalfInteger, k: u32) -> ExactRational {
    binomial_rational(&top.to_rational(), k)
}

/// Exact generalized binomial `(top-k+1)_k / k!` over rationals.
pub fn binomial_rational(top: &ExactRational, k: u32) -> ExactRational {
    if k == 0 {
        return BigRational::one();
    }
    if top.is_integer() && !top.is_negative() && top < &BigRational::from_integer(BigInt::from(k))
    {
        return BigRational::zero();
    }
    let start = top - BigRational::from_integer(BigInt::from(k)) + BigRational::one();
    pochhammer_rational(&start, k) / factorial_rational(k)
}

/// Binomial coefficient under the counting convention of the dimension
/// formula: zero whenever `m < k` (including negative `m`).
pub fn binomial_count(m: i64, k: u32) -> u64 {
    if m < k as i64 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc
            .checked_mul(m as u128 - i)
            .expect("binomial_count overflow");
        acc /= i + 1;
    }
    u64::try_from(acc).expect("binomial_count exceeds u64")
}

/// Jacobi polynomial `P_k^(alpha, 0)(x)` by the standard three-term
/// recurrence. Only the `beta = 0` family is needed here.
pub fn jacobi_eval(k: u32, alpha: f64, x: f64) -> f64 {
    match k {
        0 => 1.0,
        _ => {
            let mut p_prev = 1.0;
            let mut p = 0.5 * alpha + 0.5 * (alpha + 2.0) * x;
            for n in 2..=k as u64 {
                let n = n as f64;
                let a = 2.0 * n * (n + alpha) * (2.0 * n + alpha - 2.0);
                let b = (2.0 * n + alpha - 1.0)
                    * ((2.0 * n + alpha) * (2.0 * n + alpha - 2.0) * x + alpha * alpha);
                let c = 2.0 * (n + alpha - 1.0) * (n - 1.0) * (2.0 * n + alpha);
                let p_next = (b * p - c * p_prev) / a;
                p_prev = p;
                p = p_next;
            }
            p
        }
    }
}
