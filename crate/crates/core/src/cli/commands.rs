use crate::coupling::{coupling_matsubara_with, matsubara_frequency, matsubara_sum_oracle_with, CouplingKernel, ShiftedCoupling};
use crate::error::{Error, Result};
use crate::quadrature::RadialRule;
use crate::spectra::{total_spectral_function, SpectralGrid};
use crate::thermo::ThermoSolver;

use super::config::RunConfig;
use super::selftest;
use super::Command;

/// Oracle rows above this relative error fail the `oracle` command.
pub const ORACLE_TOLERANCE: f64 = 1e-3;

/// Tabular command output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Human-readable report written to stderr.
    pub summary: Option<String>,
    /// Numerical check failed; the table is still written.
    pub failed: bool,
}

impl Table {
    fn new(header: &[&'static str], rows: Vec<Vec<f64>>) -> Self {
        Self {
            header: header.to_vec(),
            rows,
            summary: None,
            failed: false,
        }
    }
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Table> {
    match command {
        Command::Coupling => coupling_table(cfg),
        Command::Spectrum => spectrum_table(cfg),
        Command::Dos => dos_table(cfg),
        Command::Magnetization => magnetization_table(cfg),
        Command::Curie => curie_table(cfg),
        Command::Oracle => oracle_table(cfg),
        Command::Selftest => selftest::run(cfg),
    }
}

pub fn coupling_table(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.grid()?;
    let rule = RadialRule::new(cfg.quadrature_nodes)?;
    let delta = CouplingKernel::new(&cfg.params, &rule)?.on_grid(&grid);
    let rows = grid
        .points()
        .zip(delta.values())
        .map(|(w, d)| vec![w, d.re, d.im])
        .collect();
    Ok(Table::new(&["omega_eV", "re_delta_eV", "im_delta_eV"], rows))
}

fn shifted_coupling(cfg: &RunConfig) -> Result<ShiftedCoupling> {
    let rule = RadialRule::new(cfg.quadrature_nodes)?;
    ShiftedCoupling::compute(&cfg.params, &rule, &cfg.grid()?)
}

pub fn spectrum_table(cfg: &RunConfig) -> Result<Table> {
    let delta = shifted_coupling(cfg)?.total();
    let spectra = SpectralGrid::build_uniform(&cfg.params, &delta, cfg.k_output)?;
    let grid = *spectra.grid();
    let mut rows = Vec::with_capacity(spectra.len_k() * grid.len());
    for (k_index, &x) in spectra.k_reduced().iter().enumerate() {
        for (w, &a) in grid.points().zip(spectra.row(k_index)) {
            rows.push(vec![x, w, a, a.abs()]);
        }
    }
    Ok(Table::new(&["k_over_K", "omega_eV", "A_signed", "A_magnitude"], rows))
}

pub fn dos_table(cfg: &RunConfig) -> Result<Table> {
    let delta = shifted_coupling(cfg)?.total();
    let rule = RadialRule::new(cfg.dos_nodes)?;
    let a_total = total_spectral_function(&cfg.params, &delta, &rule);
    let rows = delta
        .grid()
        .points()
        .zip(&a_total)
        .map(|(w, &a)| vec![w, a, a.abs()])
        .collect();
    Ok(Table::new(&["omega_eV", "A_total", "A_total_magnitude"], rows))
}

pub fn magnetization_table(cfg: &RunConfig) -> Result<Table> {
    let solver = ThermoSolver::new(cfg.params, cfg.thermo_settings()?)?;
    let curve = solver.curve(&cfg.temperatures)?;
    let clamped: Vec<String> = curve
        .samples
        .iter()
        .filter(|s| s.clamp_reported)
        .map(|s| format!("{}", s.temperature))
        .collect();
    let rows = curve
        .samples
        .iter()
        .map(|s| vec![s.temperature, s.m, s.magnon_number, s.u_prime_d])
        .collect();
    let mut table = Table::new(&["T_K", "m", "n_B_A_integral", "U_prime_D_eV"], rows);
    if !clamped.is_empty() {
        table.summary = Some(format!(
            "negative n_B*A clamped at T = {} K",
            clamped.join(", ")
        ));
    }
    Ok(table)
}

pub fn curie_table(cfg: &RunConfig) -> Result<Table> {
    let settings = cfg.thermo_settings()?;
    let mut rows = Vec::with_capacity(cfg.couplings.len());
    let mut notes = Vec::new();
    for &a in &cfg.couplings {
        let solver = ThermoSolver::new(cfg.params.with_coupling(a), settings)?;
        match solver.curie_temperature((cfg.tc_low, cfg.tc_high)) {
            Ok(result) => rows.push(vec![a, result.t_c]),
            Err(err @ Error::BracketFailure { .. }) => {
                notes.push(format!("A = {a} eV: {err}"));
                rows.push(vec![a, f64::NAN]);
            }
            Err(err) => return Err(err),
        }
    }
    let mut table = Table::new(&["A_eV", "Tc_K"], rows);
    if !notes.is_empty() {
        table.summary = Some(notes.join("\n"));
        table.failed = true;
    }
    Ok(table)
}

pub fn oracle_table(cfg: &RunConfig) -> Result<Table> {
    let p = &cfg.params;
    let mut rows = Vec::with_capacity(cfg.oracle_m.len());
    let mut worst = 0.0f64;
    for &m in &cfg.oracle_m {
        let closed = coupling_matsubara_with(m, p, cfg.quadrature_nodes)?;
        let brute = matsubara_sum_oracle_with(m, p, cfg.oracle_terms, cfg.quadrature_nodes)?;
        let rel = (closed - brute).norm() / brute.norm();
        worst = worst.max(rel);
        rows.push(vec![
            m as f64,
            matsubara_frequency(m, p.temperature),
            closed.re,
            closed.im,
            brute.re,
            brute.im,
            rel,
        ]);
    }
    let mut table = Table::new(
        &[
            "m",
            "omega_m_eV",
            "re_closed_eV",
            "im_closed_eV",
            "re_sum_eV",
            "im_sum_eV",
            "rel_error",
        ],
        rows,
    );
    table.failed = !(worst < ORACLE_TOLERANCE);
    table.summary = Some(format!(
        "max relative error {worst:.3e} (tolerance {ORACLE_TOLERANCE:.0e})"
    ));
    Ok(table)
}
