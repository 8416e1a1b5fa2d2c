//! Retarded magnon-phonon coupling for the isotropic model.
//!
//! ```text
//! Δ(z) = 𝒜² ∫₀¹ 3x² dx [ (n_P − n_M(x)) / (z + ω_P − ω_M(x))
//!                       + (1 + n_P + n_M(x)) / (z − ω_P − ω_M(x)) ]
//! ```
//!
//! evaluated at `z = ω + iη` (retarded) or `z = iω_m` (Matsubara). The first
//! term is phonon absorption and vanishes identically at `T = 0`; the second
//! is emission.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, RetardedFunction};
use crate::model::{bose_occupation, ModelParams, K_B};
use crate::quadrature::{RadialRule, DEFAULT_QUADRATURE_NODES};

/// Relative change on doubling the node count above which the retarded
/// coupling counts as unconverged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

/// Smallest accepted truncation for [`matsubara_sum_oracle`].
pub const MIN_ORACLE_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
struct KernelTerm {
    omega_m: f64,
    /// `(n_P − n_M) · measure`
    absorption: f64,
    /// `(1 + n_P + n_M) · measure`
    emission: f64,
}

/// Coupling integrand tabulated on a radial rule for one `(params, T)`.
#[derive(Debug, Clone)]
pub struct CouplingKernel {
    a2: f64,
    omega_p: f64,
    eta: f64,
    temperature: f64,
    terms: Vec<KernelTerm>,
}

impl CouplingKernel {
    pub fn new(params: &ModelParams, rule: &RadialRule) -> Result<Self> {
        params.validate()?;
        let t = params.temperature;
        let n_p = bose_occupation(params.omega_p, t)?;
        let terms = rule
            .nodes()
            .iter()
            .map(|node| {
                let omega_m = params.magnon_energy_reduced(node.x);
                let (absorption, emission) = if t == 0.0 {
                    (0.0, node.measure)
                } else {
                    let n_m = bose_occupation(omega_m, t)?;
                    (
                        (n_p - n_m) * node.measure,
                        (1.0 + n_p + n_m) * node.measure,
                    )
                };
                Ok(KernelTerm {
                    omega_m,
                    absorption,
                    emission,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            a2: params.a_coupling * params.a_coupling,
            omega_p: params.omega_p,
            eta: params.eta,
            temperature: t,
            terms,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Coupling at an arbitrary complex frequency off the real axis.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        if self.temperature == 0.0 {
            for term in &self.terms {
                sum += term.emission / (z - (self.omega_p + term.omega_m));
            }
        } else {
            for term in &self.terms {
                sum += term.absorption / (z + (self.omega_p - term.omega_m));
                sum += term.emission / (z - (self.omega_p + term.omega_m));
            }
        }
        sum * self.a2
    }

    /// Retarded coupling at real `omega`, i.e. `evaluate(ω + iη)`.
    pub fn retarded(&self, omega: f64) -> Complex64 {
        self.evaluate(Complex64::new(omega, self.eta))
    }

    /// Samples the retarded coupling on `grid`; the output does not depend on
    /// the rayon worker count.
    pub fn on_grid(&self, grid: &FrequencyGrid) -> RetardedFunction {
        let values: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .map(|i| self.retarded(grid.point(i)))
            .collect();
        RetardedFunction::new(*grid, values).expect("one value per grid point")
    }

    /// Goldstone shift: the real part of the coupling at `ω = 0`.
    pub fn goldstone_shift(&self) -> GoldstoneShift {
        GoldstoneShift {
            u_prime_d: self.retarded(0.0).re,
            temperature: self.temperature,
        }
    }
}

/// Constant real shift restoring `Re Δ_total(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldstoneShift {
    pub u_prime_d: f64,
    pub temperature: f64,
}

/// `Δ_MP(ω)` on the default 512-node rule.
pub fn coupling_retarded(omega: f64, params: &ModelParams) -> Result<Complex64> {
    coupling_retarded_with(omega, params, DEFAULT_QUADRATURE_NODES)
}

pub fn coupling_retarded_with(omega: f64, params: &ModelParams, nodes: usize) -> Result<Complex64> {
    let rule = RadialRule::new(nodes)?;
    Ok(CouplingKernel::new(params, &rule)?.retarded(omega))
}

/// Like [`coupling_retarded_with`] but fails when doubling the node count
/// moves the result by more than [`CONVERGENCE_TOLERANCE`] (relative).
pub fn coupling_retarded_checked(omega: f64, params: &ModelParams, nodes: usize) -> Result<Complex64> {
    let coarse = coupling_retarded_with(omega, params, nodes)?;
    let fine = coupling_retarded_with(omega, params, 2 * nodes)?;
    let scale = fine.norm();
    let relative_change = if scale == 0.0 {
        (fine - coarse).norm()
    } else {
        (fine - coarse).norm() / scale
    };
    if relative_change > CONVERGENCE_TOLERANCE {
        return Err(Error::NonConvergence {
            omega,
            relative_change,
        });
    }
    Ok(coarse)
}

/// Bosonic Matsubara frequency `2πm k_B T`.
pub fn matsubara_frequency(m: i64, temperature: f64) -> f64 {
    2.0 * PI * m as f64 * K_B * temperature
}

/// Closed-form coupling at `iω_m`.
pub fn coupling_matsubara(m: i64, params: &ModelParams) -> Result<Complex64> {
    coupling_matsubara_with(m, params, DEFAULT_QUADRATURE_NODES)
}

pub fn coupling_matsubara_with(m: i64, params: &ModelParams, nodes: usize) -> Result<Complex64> {
    if params.temperature <= 0.0 {
        return Err(Error::ZeroTemperatureMatsubara);
    }
    let rule = RadialRule::new(nodes)?;
    let kernel = CouplingKernel::new(params, &rule)?;
    let omega_m = matsubara_frequency(m, params.temperature);
    Ok(kernel.evaluate(Complex64::new(0.0, omega_m)))
}

/// Brute-force bosonic frequency sum
///
/// ```text
/// −(𝒜²/β) Σ_{n=−N}^{N} ∫ 3x² dx  1/(iω_m − iω_n − ω_M) · 2ω_P/((iω_n)² − ω_P²)
/// ```
///
/// built from the undamped magnon and phonon propagators, with no reference
/// to the analytic summation used by [`coupling_matsubara`].
pub fn matsubara_sum_oracle(m: i64, params: &ModelParams, n_trunc: usize) -> Result<Complex64> {
    matsubara_sum_oracle_with(m, params, n_trunc, DEFAULT_QUADRATURE_NODES)
}

pub fn matsubara_sum_oracle_with(
    m: i64,
    params: &ModelParams,
    n_trunc: usize,
    nodes: usize,
) -> Result<Complex64> {
    params.validate()?;
    if params.temperature <= 0.0 {
        return Err(Error::ZeroTemperatureMatsubara);
    }
    if n_trunc < MIN_ORACLE_TERMS {
        return Err(Error::InvalidParameter {
            name: "N_trunc",
            reason: format!("must be at least {MIN_ORACLE_TERMS}"),
        });
    }
    let rule = RadialRule::new(nodes)?;
    let t = params.temperature;
    let omega_p = params.omega_p;
    let omega_m = matsubara_frequency(m, t);
    let n = n_trunc as i64;

    let per_node: Vec<Complex64> = rule
        .nodes()
        .par_iter()
        .map(|node| {
            let magnon = params.magnon_energy_reduced(node.x);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in -n..=n {
                let omega_n = matsubara_frequency(k, t);
                let phonon = 2.0 * omega_p / (-(omega_n * omega_n) - omega_p * omega_p);
                let fock = 1.0 / Complex64::new(-magnon, omega_m - omega_n);
                acc += fock * phonon;
            }
            acc * node.measure
        })
        .collect();
    let sum: Complex64 = per_node.into_iter().sum();
    Ok(sum * (-params.a_coupling * params.a_coupling * K_B * t))
}

pub fn goldstone_shift(params: &ModelParams) -> Result<GoldstoneShift> {
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES)?;
    Ok(CouplingKernel::new(params, &rule)?.goldstone_shift())
}

/// Coupling on a frequency grid together with its Goldstone shift.
#[derive(Debug, Clone)]
pub struct ShiftedCoupling {
    pub raw: RetardedFunction,
    pub shift: GoldstoneShift,
}

impl ShiftedCoupling {
    pub fn compute(params: &ModelParams, rule: &RadialRule, grid: &FrequencyGrid) -> Result<Self> {
        let kernel = CouplingKernel::new(params, rule)?;
        Ok(Self {
            raw: kernel.on_grid(grid),
            shift: kernel.goldstone_shift(),
        })
    }

    /// `Δ_total = Δ_MP − U′_D`.
    pub fn total(&self) -> RetardedFunction {
        self.raw.shifted(self.shift.u_prime_d)
    }
}
