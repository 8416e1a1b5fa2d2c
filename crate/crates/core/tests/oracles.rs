mod common;

use common::{adaptive_simpson, bose, magnon, params, sharp_magnon_number};
use magphon::coupling::{
    coupling_matsubara, coupling_retarded, matsubara_sum_oracle, CouplingKernel, ShiftedCoupling,
};
use magphon::grid::FrequencyGrid;
use magphon::quadrature::{RadialRule, DEFAULT_QUADRATURE_NODES};
use magphon::spectra::{
    argmax_index, spectral_function, total_spectral_function, SpectralGrid, DEFAULT_DOS_NODES,
};
use magphon::thermo::{occupied_spectrum, ThermoSettings, ThermoSolver};

const A32: f64 = 0.032;
const A64: f64 = 0.064;

fn emission_integral_at_zero(a: f64) -> f64 {
    let f = |x: f64| 3.0 * x * x / (0.05 + magnon(x, 0.1));
    -a * a * adaptive_simpson(&f, 0.0, 1.0, 1e-14)
}

#[test]
fn zero_temperature_coupling_at_zero_frequency() {
    let oracle = emission_integral_at_zero(A32);
    assert!((oracle - -0.00820325873764642).abs() < 1e-12, "{oracle}");
    let delta = coupling_retarded(0.0, &params(A32, 0.0)).unwrap();
    assert!((delta.re - oracle).abs() < 1e-4 * oracle.abs(), "{} vs {oracle}", delta.re);
    // |Im| ≤ η 𝒜² ∫ 3x²/d² with d ≥ ω_P
    assert!(delta.im <= 0.0 && delta.im.abs() < 3e-4 * oracle.abs() / 0.05);
}

#[test]
fn goldstone_shift_equals_zero_frequency_coupling() {
    let p = params(A32, 0.0);
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let shift = CouplingKernel::new(&p, &rule).unwrap().goldstone_shift();
    let oracle = emission_integral_at_zero(A32);
    assert!((shift.u_prime_d - oracle).abs() < 1e-4 * oracle.abs());
}

#[test]
fn matsubara_closed_form_matches_frequency_sum() {
    let p = params(A32, 300.0);
    for m in [1, 2, 5, 10] {
        let closed = coupling_matsubara(m, &p).unwrap();
        let brute = matsubara_sum_oracle(m, &p, 200_000).unwrap();
        let rel = (closed - brute).norm() / brute.norm();
        assert!(rel < 1e-3, "m = {m}: {rel:e}");
    }
}

/// Magnon density of states from 10⁶ stratified ball-measure samples,
/// binned finely and convolved with the Lorentzian of width η.
fn histogram_dos(grid: &FrequencyGrid, w: f64, eta: f64) -> Vec<f64> {
    let samples = 1_000_000usize;
    let bin = 1e-6;
    let bins = (w / bin).ceil() as usize + 1;
    let mut hist = vec![0.0f64; bins];
    for i in 0..samples {
        let u = (i as f64 + 0.5) / samples as f64;
        let omega = magnon(u.cbrt(), w);
        hist[((omega / bin).round() as usize).min(bins - 1)] += 1.0 / samples as f64;
    }
    let occupied: Vec<(f64, f64)> = hist
        .iter()
        .enumerate()
        .filter(|(_, &h)| h > 0.0)
        .map(|(j, &h)| (j as f64 * bin, h))
        .collect();
    grid.points()
        .map(|omega| {
            occupied
                .iter()
                .map(|&(c, h)| h * eta / std::f64::consts::PI / ((omega - c).powi(2) + eta * eta))
                .sum()
        })
        .collect()
}

#[test]
fn free_magnon_dos_matches_histogram() {
    let p = params(0.0, 300.0);
    let grid = FrequencyGrid::new(-0.05, 0.15, 2e-4).unwrap();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let delta = ShiftedCoupling::compute(&p, &rule, &grid).unwrap().total();
    let a_total = total_spectral_function(&p, &delta, &RadialRule::new(DEFAULT_DOS_NODES).unwrap());
    let oracle = histogram_dos(&grid, p.w_magnon, p.eta);
    let mut worst = 0.0f64;
    for (a, o) in a_total.iter().zip(&oracle) {
        worst = worst.max((a - o).abs() / o);
    }
    assert!(worst < 0.01, "worst relative deviation {worst:e}");
    // van Hove pile-up at the band top
    let peak = grid.point(argmax_index(&a_total));
    assert!((peak - p.w_magnon).abs() < 2e-3, "{peak}");
}

#[test]
fn occupied_spectrum_at_band_top_is_product_of_factors() {
    let p = params(0.0, 300.0);
    let grid = FrequencyGrid::new(0.09, 0.11, 1e-4).unwrap();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let delta = ShiftedCoupling::compute(&p, &rule, &grid).unwrap().total();
    let a_total = total_spectral_function(&p, &delta, &RadialRule::new(DEFAULT_DOS_NODES).unwrap());
    let occupied = occupied_spectrum(&grid, &a_total, 300.0, p.eta).unwrap();
    let i = grid.nearest_index(0.1).unwrap();
    let point = FrequencyGrid::new(0.1, 0.1 + 1e-4, 1e-4).unwrap();
    let oracle = bose(0.1, 300.0) * histogram_dos(&point, p.w_magnon, p.eta)[0];
    assert!((occupied.values[i] - oracle).abs() < 0.01 * oracle, "{} vs {oracle}", occupied.values[i]);
}

#[test]
fn dressed_spectrum_matches_explicit_dyson_form() {
    let p = params(A64, 300.0);
    let grid = FrequencyGrid::new(-0.1, 0.2, 5e-4).unwrap();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let delta = ShiftedCoupling::compute(&p, &rule, &grid).unwrap().total();
    let k_radius = std::f64::consts::PI / p.a_lattice;
    for x in [0.0, 0.25, 0.5, 1.0] {
        let om = magnon(x, p.w_magnon);
        for (i, omega) in grid.points().enumerate() {
            let d = delta.values()[i];
            let gamma = p.eta - d.im;
            let oracle = gamma / std::f64::consts::PI / ((omega - om - d.re).powi(2) + gamma * gamma);
            let a = spectral_function(x * k_radius, omega, &delta, &p).unwrap();
            assert!((a - oracle).abs() <= 1e-9 * oracle.abs().max(1.0), "x = {x}, ω = {omega}");
        }
    }
}

#[test]
fn zone_boundary_peak_sits_on_a_dressed_pole() {
    let p = params(A32, 0.0);
    let grid = FrequencyGrid::default();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let delta = ShiftedCoupling::compute(&p, &rule, &grid).unwrap().total();
    let spectra = SpectralGrid::build_uniform(&p, &delta, 2).unwrap();
    let row = spectra.row(1);
    let observed = argmax_index(row);

    // roots of ω − ω_M − Re Δ_total(ω), ranked by the height 1/(η − Im Δ)
    let f: Vec<f64> = grid
        .points()
        .zip(delta.values())
        .map(|(w, d)| w - p.w_magnon - d.re)
        .collect();
    let best = (0..f.len() - 1)
        .filter(|&i| f[i] == 0.0 || f[i].signum() != f[i + 1].signum())
        .max_by(|&i, &j| {
            let hi = 1.0 / (p.eta - delta.values()[i].im);
            let hj = 1.0 / (p.eta - delta.values()[j].im);
            hi.total_cmp(&hj)
        })
        .expect("at least one root");
    assert!(observed.abs_diff(best) <= 3, "argmax {} vs root {}", grid.point(observed), grid.point(best));
    assert!((grid.point(observed) - p.w_magnon).abs() > grid.step());
}

#[test]
fn free_magnon_number_matches_sharp_pole_integral() {
    let p = params(0.0, 300.0);
    let solver = ThermoSolver::new(p, ThermoSettings::defaults_for(&p)).unwrap();
    let n = solver.sample(300.0).unwrap().magnon_number;
    let oracle = sharp_magnon_number(p.w_magnon, 300.0);
    let rel = (n - oracle).abs() / oracle;
    assert!(rel < 0.03, "n = {n}, sharp-pole oracle = {oracle}, relative {rel:.4}");
}

#[test]
fn magnetization_regression_at_strong_coupling() {
    let p = params(A64, 300.0);
    let solver = ThermoSolver::new(p, ThermoSettings::defaults_for(&p)).unwrap();
    let m = solver.sample(300.0).unwrap().m;
    assert!((m - GOLDEN_M_A64_T300).abs() < 1e-9, "{m:.15}");
}

const GOLDEN_M_A64_T300: f64 = 0.284148058855866;

#[test]
fn imaginary_part_sign() {
    let grid = FrequencyGrid::default();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let cold = CouplingKernel::new(&params(A32, 0.0), &rule).unwrap().on_grid(&grid);
    assert!(cold.imag().iter().all(|&v| v <= 1e-12));
    // bosonic absorption makes Im Δ positive below zero frequency at T > 0
    let warm = CouplingKernel::new(&params(A32, 300.0), &rule).unwrap().on_grid(&grid);
    for (w, v) in grid.points().zip(warm.imag()) {
        if w >= 0.0 {
            assert!(v <= 1e-12, "ω = {w}: {v}");
        }
    }
}

#[test]
fn zero_temperature_spectrum_has_no_weight_below_zero() {
    let grid = FrequencyGrid::default();
    let rule = RadialRule::new(DEFAULT_QUADRATURE_NODES).unwrap();
    let dos_rule = RadialRule::new(DEFAULT_DOS_NODES).unwrap();
    let cut = -5.0 * 3e-4;
    for a in [A32, A64] {
        let p = params(a, 0.0);
        let delta = ShiftedCoupling::compute(&p, &rule, &grid).unwrap().total();
        let a_total = total_spectral_function(&p, &delta, &dos_rule);
        let below: Vec<f64> = grid
            .points()
            .zip(&a_total)
            .map(|(w, &v)| if w < cut { v } else { 0.0 })
            .collect();
        let weight = grid.trapezoid(&below);
        assert!(weight < 0.01, "A = {a}: {weight}");
    }
}
