#![allow(dead_code)]

use magphon::model::{ModelParams, K_B};

pub fn params(a: f64, t: f64) -> ModelParams {
    ModelParams {
        a_coupling: a,
        temperature: t,
        ..Default::default()
    }
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
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
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Magnon energy from its definition, without the library.
pub fn magnon(x: f64, w: f64) -> f64 {
    let s = (std::f64::consts::FRAC_PI_2 * x).sin();
    w * s * s
}

/// Bose factor from its definition, without the library.
pub fn bose(omega: f64, t: f64) -> f64 {
    1.0 / ((omega / (K_B * t)).exp() - 1.0)
}

/// Sharp-pole magnon number `∫ 3x² n_B(ω_M(x)) dx`.
pub fn sharp_magnon_number(w: f64, t: f64) -> f64 {
    // the integrand tends to 12 k_B T/(π² W) at x = 0
    let f = |x: f64| {
        if x == 0.0 {
            12.0 * K_B * t / (std::f64::consts::PI.powi(2) * w)
        } else {
            3.0 * x * x * bose(magnon(x, w), t)
        }
    };
    adaptive_simpson(&f, 0.0, 1.0, 1e-12)
}

/// Local maxima of `values` with their indices.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}
