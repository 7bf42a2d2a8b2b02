//! Gaussian tail helpers and a small adaptive quadrature.

use std::f64::consts::SQRT_2;

/// Gaussian tail probability `Q(x) = P(Z > x)`, evaluated through the
/// complementary error function: `Q(x) = erfc(x / sqrt(2)) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Standard normal CDF `Phi(x) = 1 - Q(x)`, computed from the erfc of the
/// negated argument to stay accurate in the lower tail.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Adaptive Simpson integration of `f` over `[a, b]`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Expectation of `f(w)` for `w ~ N(mean, std^2)`, truncated at 12 sigma.
pub(crate) fn gaussian_expectation<F: Fn(f64) -> f64>(f: F, mean: f64, std: f64) -> f64 {
    debug_assert!(std > 0.0);
    let norm = 1.0 / (std * (2.0 * std::f64::consts::PI).sqrt());
    let g = |w: f64| {
        let z = (w - mean) / std;
        f(w) * norm * (-0.5 * z * z).exp()
    };
    integrate(&g, mean - 12.0 * std, mean + 12.0 * std, 1e-12)
}
