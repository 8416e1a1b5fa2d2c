//! Discrete principal-value Hilbert transform on a uniform grid.
//!
//! For a function analytic in the upper half plane and decaying at infinity,
//!
//! ```text
//! Re f(ω) = (1/π) P∫ Im f(ω') / (ω' − ω) dω'.
//! ```
//!
//! The singular part is split off as `Im f(ω) · ln((b − ω)/(ω − a))`; the
//! remaining difference quotient is regular and integrated with the
//! trapezoidal rule, using the central-difference derivative at `ω' = ω`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::grid::{FrequencyGrid, RetardedFunction};

/// Real part reconstructed from `imag` on the grid interior. The two end
/// points, where the logarithm diverges, are returned as NaN.
pub fn real_from_imag(grid: &FrequencyGrid, imag: &[f64]) -> Vec<f64> {
    assert_eq!(grid.len(), imag.len(), "samples must match the grid");
    let n = grid.len();
    let h = grid.step();
    let a = grid.min();
    let b = grid.max();
    (0..n)
        .into_par_iter()
        .map(|i| {
            if i == 0 || i == n - 1 {
                return f64::NAN;
            }
            let omega = grid.point(i);
            let fi = imag[i];
            let derivative = (imag[i + 1] - imag[i - 1]) / (2.0 * h);
            let quotient = |j: usize| {
                if j == i {
                    derivative
                } else {
                    (imag[j] - fi) / (grid.point(j) - omega)
                }
            };
            let mut regular = 0.5 * (quotient(0) + quotient(n - 1));
            for j in 1..n - 1 {
                regular += quotient(j);
            }
            regular *= h;
            (regular + fi * ((b - omega) / (omega - a)).ln()) / PI
        })
        .collect()
}

/// Largest `|Re f − KK[Im f]|` over the central `fraction` of the grid.
pub fn kramers_kronig_residual(f: &RetardedFunction, fraction: f64) -> f64 {
    let grid = f.grid();
    let reconstructed = real_from_imag(grid, &f.imag());
    let n = grid.len();
    let margin = ((1.0 - fraction) * 0.5 * n as f64).ceil() as usize;
    let lo = margin.max(1);
    let hi = n.saturating_sub(margin.max(1));
    f.values()[lo..hi]
        .iter()
        .zip(&reconstructed[lo..hi])
        .map(|(z, re)| (z.re - re).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn single_pole_is_reconstructed() {
        let grid = FrequencyGrid::new(-2.0, 2.0, 1e-3).unwrap();
        let eta = 0.01;
        let values: Vec<Complex64> = grid
            .points()
            .map(|w| 1.0 / Complex64::new(w - 0.1, eta))
            .collect();
        let f = RetardedFunction::new(grid, values).unwrap();
        let residual = kramers_kronig_residual(&f, 0.8);
        // the truncated tails beyond ±2 cost ~η/2 relative to the 1/η peak
        assert!(residual < 0.02 * f.max_norm(), "{residual}");
    }

    #[test]
    fn endpoints_are_nan() {
        let grid = FrequencyGrid::new(0.0, 1.0, 0.1).unwrap();
        let out = real_from_imag(&grid, &vec![0.0; grid.len()]);
        assert!(out[0].is_nan() && out[grid.len() - 1].is_nan());
        assert!(out[1..grid.len() - 1].iter().all(|&v| v == 0.0));
    }
}
