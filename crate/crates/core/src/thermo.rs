//! Magnon number, magnetization `m(T)` and the Curie temperature.
//!
//! The magnon number is `∫ n_B(ω) A(ω) dω` over the frequency grid with the
//! window `|ω| < ω_cut` removed; `m(T) = 1/2 − n(T)` in units of `gμ_B` per
//! unit cell. The coupling and its Goldstone shift are recomputed at every
//! temperature.

use rayon::prelude::*;

use crate::coupling::ShiftedCoupling;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::{bose_occupation, ModelParams};
use crate::quadrature::{RadialRule, DEFAULT_QUADRATURE_NODES};
use crate::spectra::{total_spectral_function, DEFAULT_DOS_NODES};

/// Spin magnetization per unit cell at `T = 0`.
pub const M_ZERO: f64 = 0.5;

/// Negative `n_B·A` values below this fraction of the peak are reported.
pub const CLAMP_REPORT_FRACTION: f64 = 1e-6;

pub const DEFAULT_TC_BRACKET: (f64, f64) = (50.0, 3000.0);
pub const TC_BRACKET_CEILING: f64 = 1e4;
pub const TC_TOLERANCE: f64 = 1.0;

/// `n_B(ω) · A(ω)` with negative products clamped to zero.
pub fn occupied_value(omega: f64, temperature: f64, spectral: f64) -> Result<f64> {
    Ok((bose_occupation(omega, temperature)? * spectral).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupiedSpectrum {
    /// Clamped product, zero inside the infrared window.
    pub values: Vec<f64>,
    /// Most negative raw product encountered (0 if none).
    pub most_negative: f64,
    pub peak: f64,
}

impl OccupiedSpectrum {
    /// Whether clamping removed more than grid noise.
    pub fn clamp_reported(&self) -> bool {
        self.most_negative < -CLAMP_REPORT_FRACTION * self.peak
    }
}

pub fn occupied_spectrum(
    grid: &FrequencyGrid,
    a_total: &[f64],
    temperature: f64,
    omega_cut: f64,
) -> Result<OccupiedSpectrum> {
    if a_total.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} spectral samples for a grid of {} points",
            a_total.len(),
            grid.len()
        )));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut most_negative = 0.0f64;
    let mut peak = 0.0f64;
    for (i, &a) in a_total.iter().enumerate() {
        let omega = grid.point(i);
        if omega.abs() < omega_cut {
            values.push(0.0);
            continue;
        }
        let raw = bose_occupation(omega, temperature)? * a;
        most_negative = most_negative.min(raw);
        peak = peak.max(raw);
        values.push(raw.max(0.0));
    }
    Ok(OccupiedSpectrum {
        values,
        most_negative,
        peak,
    })
}

pub fn magnon_number(grid: &FrequencyGrid, occupied: &OccupiedSpectrum) -> f64 {
    grid.trapezoid(&occupied.values)
}

pub fn magnetization(magnon_number: f64) -> f64 {
    M_ZERO - magnon_number
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoSettings {
    pub grid: FrequencyGrid,
    pub quadrature_nodes: usize,
    pub dos_nodes: usize,
    pub omega_cut: f64,
}

impl ThermoSettings {
    pub fn defaults_for(params: &ModelParams) -> Self {
        Self {
            grid: FrequencyGrid::default(),
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
            dos_nodes: DEFAULT_DOS_NODES,
            omega_cut: params.eta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationSample {
    pub temperature: f64,
    pub m: f64,
    /// `∫ n_B A dω`
    pub magnon_number: f64,
    pub u_prime_d: f64,
    pub clamp_reported: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationCurve {
    pub a_coupling: f64,
    pub samples: Vec<MagnetizationSample>,
}

impl MagnetizationCurve {
    /// Whether `m` is non-increasing up to its first zero crossing.
    pub fn is_monotone_until_zero(&self) -> bool {
        for pair in self.samples.windows(2) {
            if pair[0].m <= 0.0 {
                break;
            }
            if pair[1].m > pair[0].m {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurieResult {
    pub a_coupling: f64,
    pub t_c: f64,
    pub m_at_t_c: f64,
    pub evaluations: usize,
}

/// Evaluates the occupation-weighted spectrum for one coupling strength at
/// arbitrary temperatures.
#[derive(Debug, Clone)]
pub struct ThermoSolver {
    params: ModelParams,
    settings: ThermoSettings,
    coupling_rule: RadialRule,
    dos_rule: RadialRule,
}

/// Spectral data behind one magnetization sample.
#[derive(Debug, Clone)]
pub struct ThermalSpectrum {
    pub coupling: ShiftedCoupling,
    pub a_total: Vec<f64>,
}

impl ThermoSolver {
    pub fn new(params: ModelParams, settings: ThermoSettings) -> Result<Self> {
        params.validate()?;
        if !(settings.omega_cut.is_finite() && settings.omega_cut >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_cut",
                reason: "must be finite and >= 0".into(),
            });
        }
        Ok(Self {
            params,
            settings,
            coupling_rule: RadialRule::new(settings.quadrature_nodes)?,
            dos_rule: RadialRule::new(settings.dos_nodes)?,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn settings(&self) -> &ThermoSettings {
        &self.settings
    }

    pub fn spectrum(&self, temperature: f64) -> Result<ThermalSpectrum> {
        let p = self.params.with_temperature(temperature);
        let coupling = ShiftedCoupling::compute(&p, &self.coupling_rule, &self.settings.grid)?;
        let a_total = total_spectral_function(&p, &coupling.total(), &self.dos_rule);
        Ok(ThermalSpectrum { coupling, a_total })
    }

    pub fn sample(&self, temperature: f64) -> Result<MagnetizationSample> {
        let spectrum = self.spectrum(temperature)?;
        let occupied = occupied_spectrum(
            &self.settings.grid,
            &spectrum.a_total,
            temperature,
            self.settings.omega_cut,
        )?;
        let n = magnon_number(&self.settings.grid, &occupied);
        Ok(MagnetizationSample {
            temperature,
            m: magnetization(n),
            magnon_number: n,
            u_prime_d: spectrum.coupling.shift.u_prime_d,
            clamp_reported: occupied.clamp_reported(),
        })
    }

    pub fn curve(&self, temperatures: &[f64]) -> Result<MagnetizationCurve> {
        let samples = temperatures
            .par_iter()
            .map(|&t| self.sample(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(MagnetizationCurve {
            a_coupling: self.params.a_coupling,
            samples,
        })
    }

    /// Root of `m(T)` by bisection to [`TC_TOLERANCE`], finished with one
    /// secant step between the final bracket ends.
    pub fn curie_temperature(&self, bracket: (f64, f64)) -> Result<CurieResult> {
        let (mut lo, mut hi) = bracket;
        let mut evaluations = 0usize;
        let mut m_at = |t: f64| -> Result<f64> {
            evaluations += 1;
            Ok(self.sample(t)?.m)
        };
        let mut m_lo = m_at(lo)?;
        if m_lo <= 0.0 {
            return Err(Error::BracketFailure { low: lo, high: hi });
        }
        let mut m_hi = m_at(hi)?;
        while m_hi > 0.0 {
            if hi * 2.0 > TC_BRACKET_CEILING {
                return Err(Error::BracketFailure { low: lo, high: hi });
            }
            lo = hi;
            m_lo = m_hi;
            hi *= 2.0;
            m_hi = m_at(hi)?;
        }
        while hi - lo > TC_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            let m_mid = m_at(mid)?;
            if m_mid > 0.0 {
                lo = mid;
                m_lo = m_mid;
            } else {
                hi = mid;
                m_hi = m_mid;
            }
        }
        let t_c = lo + m_lo * (hi - lo) / (m_lo - m_hi);
        let m_at_t_c = m_at(t_c)?;
        Ok(CurieResult {
            a_coupling: self.params.a_coupling,
            t_c,
            m_at_t_c,
            evaluations,
        })
    }
}

/// Curie temperature for one coupling strength.
pub fn curie_temperature(
    a_coupling: f64,
    base: &ModelParams,
    settings: ThermoSettings,
    bracket: (f64, f64),
) -> Result<CurieResult> {
    ThermoSolver::new(base.with_coupling(a_coupling), settings)?.curie_temperature(bracket)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupied_zero_at_zero_temperature() {
        assert_eq!(occupied_value(0.05, 0.0, 3.0).unwrap(), 0.0);
        // n_B = −1 below zero: positive A is clamped away
        assert_eq!(occupied_value(-0.05, 0.0, 3.0).unwrap(), 0.0);
        // negative A at negative ω gives a positive product
        assert!(occupied_value(-0.05, 300.0, -1.0).unwrap() > 0.0);
    }

    #[test]
    fn infrared_window_is_excluded() {
        let grid = FrequencyGrid::new(-0.01, 0.01, 1e-3).unwrap();
        let a = vec![1.0; grid.len()];
        let occ = occupied_spectrum(&grid, &a, 300.0, 2.5e-3).unwrap();
        for (i, v) in occ.values.iter().enumerate() {
            if grid.point(i).abs() < 2.5e-3 {
                assert_eq!(*v, 0.0);
            }
        }
        assert!(occ.clamp_reported());
        assert!(occupied_spectrum(&grid, &a[1..], 300.0, 0.0).is_err());
    }

    #[test]
    fn magnetization_at_zero_temperature_is_exact() {
        for a in [0.0, 0.032, 0.128] {
            let p = ModelParams {
                a_coupling: a,
                ..Default::default()
            };
            let mut settings = ThermoSettings::defaults_for(&p);
            settings.grid = FrequencyGrid::new(-0.3, 0.4, 1e-3).unwrap();
            settings.dos_nodes = 128;
            let solver = ThermoSolver::new(p, settings).unwrap();
            assert_eq!(solver.sample(0.0).unwrap().m, 0.5);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 5.0, 10.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((log_log_slope(&xs, &ys) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn bracket_failure_is_reported() {
        let p = ModelParams {
            a_coupling: 0.0,
            ..Default::default()
        };
        let mut settings = ThermoSettings::defaults_for(&p);
        settings.grid = FrequencyGrid::new(-0.3, 0.4, 1e-3).unwrap();
        settings.dos_nodes = 128;
        let solver = ThermoSolver::new(p, settings).unwrap();
        // m is already negative at the lower end
        assert!(matches!(
            solver.curie_temperature((5000.0, 9000.0)),
            Err(Error::BracketFailure { .. })
        ));
    }
}
