//! Spectral DtN path for rotationally symmetric conductivities: each
//! boundary Fourier mode decouples into a radial ODE
//! `(r gamma u')' = (j^2 / r) gamma u` with `u ~ r^|j|` at the origin, and
//! the DtN eigenvalue is `gamma(1) u'(1) / u(1)`.
//!
//! The solver works on the regularized pair `v = u / r^|j|`,
//! `q = r gamma u' / r^|j|` in the log-radius variable, which keeps the
//! state O(1) for every mode and makes `v, q` continuous across
//! conductivity jumps.

use num_complex::Complex64;

use super::{Conductivity2D, DtnMatrix, RadialProfile};
use crate::{Error, Result};

const START_RADIUS: f64 = 1e-8;
const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;

/// Assembles the diagonal DtN matrix of a radial conductivity for modes
/// `|j| <= n_modes`.
pub fn dtn_spectral_radial(gamma: &Conductivity2D, n_modes: u32) -> Result<DtnMatrix> {
    let profile = gamma
        .radial_profile()
        .ok_or_else(|| Error::Domain("spectral DtN path requires a radial conductivity".into()))?;
    gamma.check_positive(1e-12)?;
    let mut matrix = DtnMatrix::zeros(n_modes);
    for j in 1..=n_modes {
        let lambda = mode_eigenvalue(profile, j)?;
        matrix.set(j as i64, j as i64, Complex64::new(lambda, 0.0));
        matrix.set(-(j as i64), -(j as i64), Complex64::new(lambda, 0.0));
    }
    // The constant mode is annihilated: Lambda(gamma) 1 = 0.
    Ok(matrix)
}

/// DtN eigenvalue of a single mode, `gamma(1) u'(1) / u(1)`.
pub fn mode_eigenvalue(profile: &RadialProfile, j: u32) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    let a = j as f64;
    let t0 = START_RADIUS.ln();

    // Segment the integration at declared discontinuity radii.
    let mut stops: Vec<f64> = profile
        .breakpoints()
        .iter()
        .copied()
        .filter(|&r| r > START_RADIUS && r < 1.0)
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let mut ts = vec![t0];
    ts.extend(stops.iter().map(|r| r.ln()));
    ts.push(0.0);

    let mut state = [1.0, a * profile.value(START_RADIUS)];
    for w in ts.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        // Clamp the evaluation radius into the open segment so that stage
        // evaluations at segment ends pick the correct side of a jump.
        let (ra, rb) = (ta.exp(), tb.exp());
        let lo = ra * (1.0 + 1e-14);
        let hi = rb * (1.0 - 1e-14);
        let rhs = |t: f64, y: [f64; 2]| -> [f64; 2] {
            let g = profile.value(t.exp().clamp(lo, hi));
            let [v, q] = y;
            [q / g - a * v, a * (a * g * v - q)]
        };
        state = integrate_adaptive(rhs, ta, tb, state)?;
        if state[0] <= 0.0 {
            return Err(Error::Solver(format!(
                "radial solution lost positivity for mode {j} at r = {rb}"
            )));
        }
    }
    Ok(state[1] / state[0])
}

/// Adaptive Dormand-Prince 5(4) step for a two-component system.
fn integrate_adaptive<F>(f: F, t0: f64, t1: f64, y0: [f64; 2]) -> Result<[f64; 2]>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(y0);
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = (span / 100.0).min(0.05);
    let mut steps = 0usize;
    while t < t1 {
        if steps > 2_000_000 {
            return Err(Error::Solver(
                "radial ODE integration exceeded the step budget".into(),
            ));
        }
        steps += 1;
        h = h.min(t1 - t);
        let mut k = [[0.0f64; 2]; 7];
        k[0] = f(t, y);
        for stage in 0..6 {
            let mut arg = y;
            for (prev, kp) in k.iter().enumerate().take(stage + 1) {
                arg[0] += h * A[stage][prev] * kp[0];
                arg[1] += h * A[stage][prev] * kp[1];
            }
            k[stage + 1] = f(t + C[stage] * h, arg);
        }
        let mut y5 = y;
        let mut y4 = y;
        for (i, ki) in k.iter().enumerate() {
            y5[0] += h * B5[i] * ki[0];
            y5[1] += h * B5[i] * ki[1];
            y4[0] += h * B4[i] * ki[0];
            y4[1] += h * B4[i] * ki[1];
        }
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let scale = ATOL + RTOL * y5[i].abs().max(y[i].abs());
            err = err.max(((y5[i] - y4[i]) / scale).abs());
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < 1e-14 {
            return Err(Error::Solver(format!(
                "radial ODE step size collapsed near t = {t}"
            )));
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Closed-form two-phase DtN eigenvalue from matching the power
    /// solutions `r^|j|`, `r^-|j|` at the interface.
    fn two_phase_reference(inner: f64, radius: f64, j: u32) -> f64 {
        let mu = (1.0 - inner) / (1.0 + inner);
        let rho = radius.powi(2 * j as i32);
        j as f64 * (1.0 - mu * rho) / (1.0 + mu * rho)
    }

    #[test]
    fn unit_conductivity_modes() {
        let gamma = Conductivity2D::constant(1.0);
        let m = dtn_spectral_radial(&gamma, 32).unwrap();
        for j in m.modes() {
            let lambda = m.get(j, j);
            assert_abs_diff_eq!(lambda.re, j.unsigned_abs() as f64, epsilon = 1e-10);
            assert_eq!(lambda.im, 0.0);
        }
        assert!(m.hermitian_defect() < 1e-12);

        // Off-diagonal entries vanish for radial conductivities.
        assert_eq!(m.get(3, -3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn constant_conductivity_scales_linearly() {
        for c in [0.25, 3.0] {
            let m = dtn_spectral_radial(&Conductivity2D::constant(c), 8).unwrap();
            for j in m.modes() {
                assert_abs_diff_eq!(
                    m.get(j, j).re,
                    c * j.unsigned_abs() as f64,
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn two_phase_matches_closed_form() {
        for (inner, radius) in [(4.0, 0.5), (0.2, 0.3), (10.0, 0.8)] {
            let gamma = Conductivity2D::two_phase(inner, radius);
            let m = dtn_spectral_radial(&gamma, 16).unwrap();
            for j in 1..=16u32 {
                let expect = two_phase_reference(inner, radius, j);
                assert_abs_diff_eq!(m.get(j as i64, j as i64).re, expect, epsilon = 1e-8);
                assert_abs_diff_eq!(
                    m.get(-(j as i64), -(j as i64)).re,
                    expect,
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn smooth_radial_profile_bounds() {
        // gamma between m and M forces m |j| <= lambda_j <= M |j|
        // (monotonicity of the DtN map in the conductivity).
        let gamma = Conductivity2D::radial(|r| 1.0 + r * r * (1.0 - r));
        let m = dtn_spectral_radial(&gamma, 12).unwrap();
        for j in 1..=12i64 {
            let lambda = m.get(j, j).re;
            assert!(lambda >= 1.0 * j as f64 - 1e-9);
            assert!(lambda <= (1.0 + 4.0 / 27.0) * j as f64 + 1e-9);
        }
    }

    #[test]
    fn rejects_nonradial_and_nonpositive() {
        let general = Conductivity2D::from_fn(|x, _| 1.0 + x);
        assert!(dtn_spectral_radial(&general, 4).is_err());
        let negative = Conductivity2D::radial(|r| 0.5 - r);
        assert!(dtn_spectral_radial(&negative, 4).is_err());
    }

    #[test]
    fn integrator_reproduces_exponentials() {
        // y' = -3y from 0 to 1.
        let y = integrate_adaptive(|_, y| [-3.0 * y[0], 0.0], 0.0, 1.0, [1.0, 0.0]).unwrap();
        assert_relative_eq!(y[0], (-3.0f64).exp(), max_relative = 1e-11);
    }
}
