//! Invariant suite behind the `selftest` command.

use num_complex::Complex64;

use crate::coupling::{coupling_matsubara_with, coupling_retarded_checked, matsubara_sum_oracle_with, ShiftedCoupling};
use crate::error::Result;
use crate::kramers_kronig::kramers_kronig_residual;
use crate::quadrature::RadialRule;
use crate::spectra::{dress, fock_propagator, peak_position, total_spectral_function, SpectralGrid};
use crate::spin_algebra::{
    build_bare_interaction, crossing_violation, pauli_decompose, pauli_reconstruct, SPIN_TOLERANCE,
};
use crate::thermo::{ThermoSolver, M_ZERO};

use super::commands::{Table, ORACLE_TOLERANCE};
use super::config::RunConfig;

/// Coupling probes away from the resonance bands.
pub const CONVERGENCE_PROBES: [f64; 2] = [-0.25, 0.35];
pub const SUM_RULE_TOLERANCE: f64 = 0.02;
pub const KK_TOLERANCE: f64 = 0.02;
pub const KK_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

pub fn checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let p = cfg.params;
    let grid = cfg.grid()?;
    let mut out = Vec::new();

    let mut spin = 0.0f64;
    for u in [-2.0, -0.5, 0.0, 1.0, 3.7] {
        let t = build_bare_interaction(u);
        spin = spin.max(crossing_violation(&t));
        spin = spin.max(pauli_reconstruct(&pauli_decompose(&t)?).max_abs_diff(&t));
    }
    out.push(Check::below("spin crossing and Pauli round trip", spin, SPIN_TOLERANCE));

    let zero = Complex64::new(0.0, 0.0);
    let reduction = grid
        .points()
        .map(|w| {
            let r = fock_propagator(0.04, w, p.eta);
            (dress(r, zero) - r).norm() / r.norm()
        })
        .fold(0.0, f64::max);
    out.push(Check::below("zero coupling reduces to the Fock propagator", reduction, 1e-15));

    let mut convergence = 0.0f64;
    for omega in CONVERGENCE_PROBES {
        if coupling_retarded_checked(omega, &p, cfg.quadrature_nodes).is_err() {
            convergence = f64::INFINITY;
        }
    }
    out.push(Check::below("coupling converged on node doubling", convergence, 0.0));

    if p.temperature > 0.0 {
        let closed = coupling_matsubara_with(1, &p, cfg.quadrature_nodes)?;
        let brute = matsubara_sum_oracle_with(1, &p, cfg.oracle_terms, cfg.quadrature_nodes)?;
        out.push(Check::below(
            "Matsubara closed form matches frequency sum",
            (closed - brute).norm() / brute.norm(),
            ORACLE_TOLERANCE,
        ));
    }

    let rule = RadialRule::new(cfg.quadrature_nodes)?;
    let coupling = ShiftedCoupling::compute(&p, &rule, &grid)?;
    let scale = coupling.raw.max_norm();
    let kk = if scale > 0.0 {
        kramers_kronig_residual(&coupling.raw, KK_FRACTION) / scale
    } else {
        0.0
    };
    out.push(Check::below("Kramers-Kronig consistency", kk, KK_TOLERANCE));

    let delta = coupling.total();
    let spectra = SpectralGrid::build(&p, &delta, cfg.k_nodes)?;
    let per_k = (0..spectra.len_k())
        .map(|k| (spectra.sum_rule(k) - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::below("per-k sum rule", per_k, SUM_RULE_TOLERANCE));
    let a_total = total_spectral_function(&p, &delta, &RadialRule::new(cfg.dos_nodes)?);
    out.push(Check::below(
        "total sum rule",
        (grid.trapezoid(&a_total) - 1.0).abs(),
        SUM_RULE_TOLERANCE,
    ));

    let k0 = SpectralGrid::build_uniform(&p, &delta, 2)?;
    let goldstone = peak_position(&grid, k0.row(0)).abs();
    out.push(Check::below("Goldstone peak at zero", goldstone, p.eta));

    let solver = ThermoSolver::new(p, cfg.thermo_settings()?)?;
    let m0 = solver.sample(0.0)?.m;
    out.push(Check::below("m(0) = 1/2", (m0 - M_ZERO).abs(), 0.0));

    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Table> {
    let checks = checks(cfg)?;
    let passed = checks.iter().filter(|c| c.passed).count();
    let mut summary = String::new();
    for c in &checks {
        summary.push_str(&format!(
            "{} {} ({:.3e} vs {:.3e})\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        ));
    }
    summary.push_str(&format!("{passed} passed, {} failed", checks.len() - passed));
    let rows = checks
        .iter()
        .enumerate()
        .map(|(i, c)| vec![i as f64, if c.passed { 1.0 } else { 0.0 }, c.value, c.tolerance])
        .collect();
    Ok(Table {
        header: vec!["check", "passed", "value", "tolerance"],
        rows,
        summary: Some(summary),
        failed: passed != checks.len(),
    })
}
