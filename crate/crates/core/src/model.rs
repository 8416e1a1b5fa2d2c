//! Model inputs: dispersions, occupations and the Brillouin-sphere measure.
//!
//! Energies are in eV, temperatures in K, lengths in atomic units. The zone
//! is replaced by a sphere of radius `K = π/a` whose volume `4πK³/3` is used
//! as the normalizing volume, so the radial measure `3q²/K³ dq` integrates to
//! one on `[0, K]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Boltzmann constant (CODATA 2018) in eV/K.
pub const K_B: f64 = 8.617333262e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Magnon bandwidth.
    pub w_magnon: f64,
    /// Flat optical phonon energy.
    pub omega_p: f64,
    /// Magnon-phonon coupling strength.
    pub a_coupling: f64,
    /// Convergence broadening.
    pub eta: f64,
    /// Temperature in K.
    pub temperature: f64,
    /// Lattice constant in bohr.
    pub a_lattice: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            w_magnon: 0.1,
            omega_p: 0.05,
            a_coupling: 0.032,
            eta: 3e-4,
            temperature: 300.0,
            a_lattice: 7.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, name: &'static str, reason: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: reason.to_string(),
                })
            }
        }
        check(
            self.w_magnon.is_finite() && self.w_magnon > 0.0,
            "W_magnon",
            "must be finite and > 0",
        )?;
        check(
            self.omega_p.is_finite() && self.omega_p > 0.0,
            "omega_P",
            "must be finite and > 0",
        )?;
        check(
            self.eta.is_finite() && self.eta > 0.0,
            "eta",
            "must be finite and > 0",
        )?;
        check(
            self.a_coupling.is_finite() && self.a_coupling >= 0.0,
            "A_coupling",
            "must be finite and >= 0",
        )?;
        check(
            self.temperature.is_finite() && self.temperature >= 0.0,
            "T",
            "must be finite and >= 0",
        )?;
        check(
            self.a_lattice.is_finite() && self.a_lattice > 0.0,
            "a_lattice",
            "must be finite and > 0",
        )
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        Self {
            temperature,
            ..*self
        }
    }

    pub fn with_coupling(&self, a_coupling: f64) -> Self {
        Self {
            a_coupling,
            ..*self
        }
    }

    /// Volume of the Brillouin sphere, `4πK³/3`.
    pub fn brillouin_volume(&self) -> f64 {
        let k = sphere_radius(self);
        4.0 * PI * k * k * k / 3.0
    }

    /// Magnon energy at reduced wavenumber `x = q/K ∈ [0, 1]`.
    #[inline]
    pub fn magnon_energy_reduced(&self, x: f64) -> f64 {
        let s = (0.5 * PI * x).sin();
        self.w_magnon * s * s
    }
}

/// Radius of the Brillouin sphere, `K = π/a`.
pub fn sphere_radius(params: &ModelParams) -> f64 {
    PI / params.a_lattice
}

/// `W · sin²(qπ/2K)` for `0 ≤ q ≤ K`.
pub fn magnon_energy(q: f64, params: &ModelParams) -> Result<f64> {
    let k_max = sphere_radius(params);
    // allow the endpoint to be hit through rounding
    if !(q >= 0.0 && q <= k_max * (1.0 + 1e-14)) {
        return Err(Error::WavenumberOutOfRange { q, k_max });
    }
    Ok(params.magnon_energy_reduced((q / k_max).min(1.0)))
}

/// `1/(e^{ω/k_BT} − 1)`.
///
/// At `T = 0` this is the limit: `0` for `ω > 0`, `−1` for `ω < 0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::BoseSingular { temperature });
    }
    if temperature == 0.0 {
        return Ok(if omega > 0.0 { 0.0 } else { -1.0 });
    }
    Ok(1.0 / (omega / (K_B * temperature)).exp_m1())
}

/// `1/(e^{ξ/k_BT} + 1)`; a step with value 1/2 at `ξ = 0` when `T = 0`.
pub fn fermi_occupation(xi: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return if xi < 0.0 {
            1.0
        } else if xi > 0.0 {
            0.0
        } else {
            0.5
        };
    }
    let x = xi / (K_B * temperature);
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Discrete electron levels standing in for a zone average.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronBand {
    levels: Vec<(f64, f64)>,
}

impl ElectronBand {
    /// `levels` are `(ξ, weight)` pairs; weights must be positive and sum to 1.
    pub fn new(levels: Vec<(f64, f64)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: "band needs at least one level".into(),
            });
        }
        if levels
            .iter()
            .any(|&(xi, w)| !xi.is_finite() || !w.is_finite() || w <= 0.0)
        {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: "energies must be finite and weights positive".into(),
            });
        }
        let total: f64 = levels.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[(f64, f64)] {
        &self.levels
    }
}

/// Averaged Green's function `Σ w (n_F(ξ) − 1/2)/|ξ|` in eV⁻¹.
pub fn gbar(band: &ElectronBand, temperature: f64) -> Result<f64> {
    band.levels
        .iter()
        .map(|&(xi, w)| {
            if xi == 0.0 {
                Err(Error::ZeroEnergyLevel)
            } else {
                Ok(w * (fermi_occupation(xi, temperature) - 0.5) / xi.abs())
            }
        })
        .sum()
}
