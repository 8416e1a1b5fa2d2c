//! Fock and renormalized magnon propagators and their spectral functions.
//!
//! The Fock magnon is the bare pole `r = 1/(ω − ω_M(k) + iη)`. Dressing by the
//! k-independent coupling gives `ℛ = r/(1 − rΔ_total)`, and the spectral
//! function is `A = −Im ℛ / π`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::grid::{FrequencyGrid, RetardedFunction};
use crate::model::{magnon_energy, sphere_radius, ModelParams};
use crate::quadrature::RadialRule;

pub const DEFAULT_K_NODES: usize = 256;
pub const DEFAULT_DOS_NODES: usize = 1024;
pub const DEFAULT_PLOT_K_POINTS: usize = 200;

#[inline]
pub fn fock_propagator(magnon: f64, omega: f64, eta: f64) -> Complex64 {
    1.0 / Complex64::new(omega - magnon, eta)
}

/// Dyson resummation `r/(1 − rΔ)`.
#[inline]
pub fn dress(fock: Complex64, delta: Complex64) -> Complex64 {
    fock / (1.0 - fock * delta)
}

#[inline]
pub fn spectral_weight(propagator: Complex64) -> f64 {
    -propagator.im / std::f64::consts::PI
}

pub fn fock_magnon_retarded(k: f64, omega: f64, params: &ModelParams) -> Result<Complex64> {
    let magnon = magnon_energy(k, params)?;
    Ok(fock_propagator(magnon, omega, params.eta))
}

/// Renormalized propagator at `(k, ω)`; `delta_total` is interpolated
/// linearly when `ω` falls between grid points.
pub fn renormalized_magnon_retarded(
    k: f64,
    omega: f64,
    delta_total: &RetardedFunction,
    params: &ModelParams,
) -> Result<Complex64> {
    let fock = fock_magnon_retarded(k, omega, params)?;
    Ok(dress(fock, delta_total.at(omega)?))
}

/// Signed `A(k, ω) = −Im ℛ / π`.
pub fn spectral_function(
    k: f64,
    omega: f64,
    delta_total: &RetardedFunction,
    params: &ModelParams,
) -> Result<f64> {
    Ok(spectral_weight(renormalized_magnon_retarded(
        k,
        omega,
        delta_total,
        params,
    )?))
}

/// Signed spectral function on a product grid of reduced wavenumbers
/// `q/K` and the frequency grid of the coupling.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    k_reduced: Vec<f64>,
    /// Radial quadrature weights when the k nodes come from a [`RadialRule`].
    measure: Option<Vec<f64>>,
    k_radius: f64,
    grid: FrequencyGrid,
    values: Vec<f64>,
}

impl SpectralGrid {
    /// k-resolved spectrum on Gauss-Legendre nodes.
    pub fn build(params: &ModelParams, delta_total: &RetardedFunction, k_nodes: usize) -> Result<Self> {
        let rule = RadialRule::new(k_nodes)?;
        let xs = rule.nodes().iter().map(|n| n.x).collect();
        let measure = rule.nodes().iter().map(|n| n.measure).collect();
        Self::from_nodes(params, delta_total, xs, Some(measure))
    }

    /// k-resolved spectrum on `n` uniform points `q/K = i/(n − 1)`.
    pub fn build_uniform(params: &ModelParams, delta_total: &RetardedFunction, n: usize) -> Result<Self> {
        let xs = match n {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
        };
        Self::from_nodes(params, delta_total, xs, None)
    }

    fn from_nodes(
        params: &ModelParams,
        delta_total: &RetardedFunction,
        k_reduced: Vec<f64>,
        measure: Option<Vec<f64>>,
    ) -> Result<Self> {
        params.validate()?;
        let grid = *delta_total.grid();
        let n_omega = grid.len();
        let delta = delta_total.values();
        let eta = params.eta;
        let rows: Vec<Vec<f64>> = k_reduced
            .par_iter()
            .map(|&x| {
                let magnon = params.magnon_energy_reduced(x);
                (0..n_omega)
                    .map(|i| {
                        let r = fock_propagator(magnon, grid.point(i), eta);
                        spectral_weight(dress(r, delta[i]))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            k_reduced,
            measure,
            k_radius: sphere_radius(params),
            grid,
            values: rows.concat(),
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn k_reduced(&self) -> &[f64] {
        &self.k_reduced
    }

    /// Wavenumbers in inverse bohr.
    pub fn k_values(&self) -> Vec<f64> {
        self.k_reduced.iter().map(|x| x * self.k_radius).collect()
    }

    pub fn len_k(&self) -> usize {
        self.k_reduced.len()
    }

    pub fn row(&self, k_index: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[k_index * n..(k_index + 1) * n]
    }

    /// `∫ A(k, ω) dω` over the grid.
    pub fn sum_rule(&self, k_index: usize) -> f64 {
        self.grid.trapezoid(self.row(k_index))
    }

    /// Radial integral of the stored rows; only available for
    /// Gauss-Legendre k nodes.
    pub fn total(&self) -> Option<Vec<f64>> {
        let measure = self.measure.as_ref()?;
        let n = self.grid.len();
        let mut out = vec![0.0; n];
        for (k_index, &w) in measure.iter().enumerate() {
            for (acc, &a) in out.iter_mut().zip(self.row(k_index)) {
                *acc += w * a;
            }
        }
        Some(out)
    }
}

/// `A(ω) = ∫₀^K (3k²/K³) A(k, ω) dk` on the frequency grid of `delta_total`.
pub fn total_spectral_function(
    params: &ModelParams,
    delta_total: &RetardedFunction,
    rule: &RadialRule,
) -> Vec<f64> {
    let grid = *delta_total.grid();
    let delta = delta_total.values();
    let eta = params.eta;
    let magnons: Vec<(f64, f64)> = rule
        .nodes()
        .iter()
        .map(|n| (params.magnon_energy_reduced(n.x), n.measure))
        .collect();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let omega = grid.point(i);
            magnons
                .iter()
                .map(|&(magnon, w)| w * spectral_weight(dress(fock_propagator(magnon, omega, eta), delta[i])))
                .sum()
        })
        .collect()
}

/// Sub-grid peak location from a parabola through the maximum and its two
/// neighbours.
pub fn refine_peak(grid: &FrequencyGrid, values: &[f64], index: usize) -> f64 {
    let omega = grid.point(index);
    if index == 0 || index + 1 >= values.len() {
        return omega;
    }
    let (l, c, r) = (values[index - 1], values[index], values[index + 1]);
    let curvature = l - 2.0 * c + r;
    if curvature >= 0.0 {
        return omega;
    }
    omega + 0.5 * grid.step() * (l - r) / curvature
}

/// Refined location of the global maximum of `values`.
pub fn peak_position(grid: &FrequencyGrid, values: &[f64]) -> f64 {
    let index = argmax_index(values);
    refine_peak(grid, values, index)
}

pub fn argmax_index(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
        .0
}
