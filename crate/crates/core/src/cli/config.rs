//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Lists are comma separated
//! or given as an inclusive range `start:stop:step`. Every error carries the
//! line it came from; values supplied on the command line continue the line
//! numbering after the file.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::coupling::MIN_ORACLE_TERMS;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::ModelParams;
use crate::quadrature::DEFAULT_QUADRATURE_NODES;
use crate::spectra::{DEFAULT_DOS_NODES, DEFAULT_K_NODES, DEFAULT_PLOT_K_POINTS};
use crate::thermo::{ThermoSettings, DEFAULT_TC_BRACKET};

pub const MIN_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_step: f64,
    pub quadrature_nodes: usize,
    pub k_nodes: usize,
    pub dos_nodes: usize,
    pub k_output: usize,
    /// Infrared cutoff; `None` means "equal to eta".
    pub omega_cut: Option<f64>,
    pub output_path: Option<String>,
    pub temperatures: Vec<f64>,
    pub couplings: Vec<f64>,
    pub oracle_terms: usize,
    pub oracle_m: Vec<i64>,
    pub tc_low: f64,
    pub tc_high: f64,
    /// Rayon worker count; 0 uses the rayon default.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            omega_min: -0.30,
            omega_max: 0.40,
            omega_step: 1e-4,
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
            k_nodes: DEFAULT_K_NODES,
            dos_nodes: DEFAULT_DOS_NODES,
            k_output: DEFAULT_PLOT_K_POINTS,
            omega_cut: None,
            output_path: None,
            temperatures: (0..=100).map(|i| 10.0 * i as f64).collect(),
            couplings: vec![0.0, 0.016, 0.032, 0.064, 0.128],
            oracle_terms: 200_000,
            oracle_m: vec![1, 2, 5, 10],
            tc_low: DEFAULT_TC_BRACKET.0,
            tc_high: DEFAULT_TC_BRACKET.1,
            workers: 0,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::new(self.omega_min, self.omega_max, self.omega_step)
    }

    pub fn omega_cut(&self) -> f64 {
        self.omega_cut.unwrap_or(self.params.eta)
    }

    pub fn thermo_settings(&self) -> Result<ThermoSettings> {
        Ok(ThermoSettings {
            grid: self.grid()?,
            quadrature_nodes: self.quadrature_nodes,
            dos_nodes: self.dos_nodes,
            omega_cut: self.omega_cut(),
        })
    }

    /// Canonical text form; parsing it yields `self` again.
    pub fn to_config_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "# magphon run configuration");
        let _ = writeln!(s, "W_magnon = {}", p.w_magnon);
        let _ = writeln!(s, "omega_P = {}", p.omega_p);
        let _ = writeln!(s, "A_coupling = {}", p.a_coupling);
        let _ = writeln!(s, "eta = {}", p.eta);
        let _ = writeln!(s, "T = {}", p.temperature);
        let _ = writeln!(s, "a_lattice = {}", p.a_lattice);
        let _ = writeln!(s, "omega_min = {}", self.omega_min);
        let _ = writeln!(s, "omega_max = {}", self.omega_max);
        let _ = writeln!(s, "omega_step = {}", self.omega_step);
        let _ = writeln!(s, "quadrature_nodes = {}", self.quadrature_nodes);
        let _ = writeln!(s, "k_nodes = {}", self.k_nodes);
        let _ = writeln!(s, "dos_nodes = {}", self.dos_nodes);
        let _ = writeln!(s, "k_output = {}", self.k_output);
        match self.omega_cut {
            Some(cut) => {
                let _ = writeln!(s, "omega_cut = {cut}");
            }
            None => {
                let _ = writeln!(s, "# omega_cut defaults to eta");
            }
        }
        if let Some(path) = &self.output_path {
            let _ = writeln!(s, "output_path = {path}");
        }
        let _ = writeln!(s, "T_list = {}", join(&self.temperatures));
        let _ = writeln!(s, "A_list = {}", join(&self.couplings));
        let _ = writeln!(s, "oracle_terms = {}", self.oracle_terms);
        let _ = writeln!(s, "oracle_m = {}", join(&self.oracle_m));
        let _ = writeln!(s, "tc_low = {}", self.tc_low);
        let _ = writeln!(s, "tc_high = {}", self.tc_high);
        let _ = writeln!(s, "workers = {}", self.workers);
        s
    }
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Accumulates `key = value` assignments and validates them at the end.
#[derive(Debug, Default)]
pub struct ConfigBuilder {
    config: RunConfig,
    lines: HashMap<&'static str, usize>,
    next_line: usize,
}

fn config_error(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_f64(value: &str, key: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| config_error(line, format!("`{key}`: malformed number `{value}`")))
}

fn parse_usize(value: &str, key: &str, line: usize) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| config_error(line, format!("`{key}`: expected a non-negative integer, got `{value}`")))
}

fn parse_f64_list(value: &str, key: &str, line: usize) -> Result<Vec<f64>> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(config_error(line, format!("`{key}`: range must be start:stop:step")));
        }
        let start = parse_f64(parts[0], key, line)?;
        let stop = parse_f64(parts[1], key, line)?;
        let step = parse_f64(parts[2], key, line)?;
        if !(step > 0.0) || stop < start {
            return Err(config_error(line, format!("`{key}`: range needs step > 0 and stop >= start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|v| parse_f64(v.trim(), key, line))
        .collect()
}

fn parse_i64_list(value: &str, key: &str, line: usize) -> Result<Vec<i64>> {
    value
        .split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<i64>()
                .map_err(|_| config_error(line, format!("`{key}`: malformed integer `{v}`")))
        })
        .collect()
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds a whole document.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for raw in text.lines() {
            self.next_line += 1;
            self.apply_line(raw, self.next_line)?;
        }
        Ok(())
    }

    /// Feeds a single `key=value` override, numbered after the document.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        self.next_line += 1;
        self.apply_line(assignment, self.next_line)
    }

    fn apply_line(&mut self, raw: &str, line: usize) -> Result<()> {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if content.is_empty() {
            return Ok(());
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(line, format!("expected `key = value`, got `{content}`")))?;
        self.set(key.trim(), value.trim(), line)
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let c = &mut self.config;
        let canonical: &'static str = match key {
            "W_magnon" => {
                c.params.w_magnon = parse_f64(value, key, line)?;
                "W_magnon"
            }
            "omega_P" => {
                c.params.omega_p = parse_f64(value, key, line)?;
                "omega_P"
            }
            "A_coupling" => {
                c.params.a_coupling = parse_f64(value, key, line)?;
                "A_coupling"
            }
            "eta" => {
                c.params.eta = parse_f64(value, key, line)?;
                "eta"
            }
            "T" => {
                c.params.temperature = parse_f64(value, key, line)?;
                "T"
            }
            "a_lattice" => {
                c.params.a_lattice = parse_f64(value, key, line)?;
                "a_lattice"
            }
            "omega_min" => {
                c.omega_min = parse_f64(value, key, line)?;
                "omega_min"
            }
            "omega_max" => {
                c.omega_max = parse_f64(value, key, line)?;
                "omega_max"
            }
            "omega_step" => {
                c.omega_step = parse_f64(value, key, line)?;
                "omega_step"
            }
            "quadrature_nodes" => {
                c.quadrature_nodes = parse_usize(value, key, line)?;
                "quadrature_nodes"
            }
            "k_nodes" => {
                c.k_nodes = parse_usize(value, key, line)?;
                "k_nodes"
            }
            "dos_nodes" => {
                c.dos_nodes = parse_usize(value, key, line)?;
                "dos_nodes"
            }
            "k_output" => {
                c.k_output = parse_usize(value, key, line)?;
                "k_output"
            }
            "omega_cut" => {
                c.omega_cut = Some(parse_f64(value, key, line)?);
                "omega_cut"
            }
            "output_path" => {
                c.output_path = Some(value.to_string());
                "output_path"
            }
            "T_list" => {
                c.temperatures = parse_f64_list(value, key, line)?;
                "T_list"
            }
            "A_list" => {
                c.couplings = parse_f64_list(value, key, line)?;
                "A_list"
            }
            "oracle_terms" => {
                c.oracle_terms = parse_usize(value, key, line)?;
                "oracle_terms"
            }
            "oracle_m" => {
                c.oracle_m = parse_i64_list(value, key, line)?;
                "oracle_m"
            }
            "tc_low" => {
                c.tc_low = parse_f64(value, key, line)?;
                "tc_low"
            }
            "tc_high" => {
                c.tc_high = parse_f64(value, key, line)?;
                "tc_high"
            }
            "workers" => {
                c.workers = parse_usize(value, key, line)?;
                "workers"
            }
            _ => return Err(config_error(line, format!("unknown key `{key}`"))),
        };
        self.lines.insert(canonical, line);
        Ok(())
    }

    fn line_of(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(0)
    }

    /// Checks every invariant and returns the finished configuration.
    pub fn finish(self) -> Result<RunConfig> {
        let c = &self.config;
        let fail = |key: &str, message: &str| Err(config_error(self.line_of(key), format!("`{key}` {message}")));

        if let Err(Error::InvalidParameter { name, reason }) = c.params.validate() {
            return fail(name, &reason);
        }
        for (key, v) in [("omega_min", c.omega_min), ("omega_max", c.omega_max), ("omega_step", c.omega_step)] {
            if !v.is_finite() {
                return fail(key, "must be finite");
            }
        }
        if !(c.omega_step > 0.0) {
            return fail("omega_step", "must be > 0");
        }
        if !(c.omega_max > c.omega_min) {
            return fail("omega_max", "must exceed omega_min");
        }
        for (key, n) in [
            ("quadrature_nodes", c.quadrature_nodes),
            ("k_nodes", c.k_nodes),
            ("dos_nodes", c.dos_nodes),
        ] {
            if n < MIN_NODES {
                return fail(key, &format!("must be at least {MIN_NODES}"));
            }
        }
        if c.k_output < 2 {
            return fail("k_output", "must be at least 2");
        }
        if let Some(cut) = c.omega_cut {
            if !(cut.is_finite() && cut >= 0.0) {
                return fail("omega_cut", "must be finite and >= 0");
            }
        }
        if c.temperatures.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return fail("T_list", "entries must be finite and >= 0");
        }
        if c.couplings.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return fail("A_list", "entries must be finite and >= 0");
        }
        if c.oracle_terms < MIN_ORACLE_TERMS {
            return fail("oracle_terms", &format!("must be at least {MIN_ORACLE_TERMS}"));
        }
        if !(c.tc_low.is_finite() && c.tc_high.is_finite() && 0.0 < c.tc_low && c.tc_low < c.tc_high) {
            return fail("tc_high", "bracket must satisfy 0 < tc_low < tc_high");
        }
        Ok(self.config)
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut builder = ConfigBuilder::new();
    builder.apply_text(text)?;
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.params.omega_p, 0.05);
        assert_eq!(c.params.w_magnon, 0.1);
        assert_eq!(c.params.eta, 3e-4);
        assert_eq!(c.params.a_lattice, 7.0);
        assert_eq!(c.grid().unwrap().len(), 7001);
        assert_eq!(c.omega_cut(), 3e-4);
    }

    #[test]
    fn coupling_in_ev() {
        let c = parse_config("A_coupling = 0.032").unwrap();
        assert_eq!(c.params.a_coupling, 0.032);
    }

    #[test]
    fn invariant_violation_names_key_and_line() {
        let err = parse_config("# header\n\neta = -1\n").unwrap_err();
        match err {
            Error::Config { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("eta"), "{message}");
                assert!(message.contains("> 0"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_and_malformed_number() {
        match parse_config("T = 10\nbogus = 1\n").unwrap_err() {
            Error::Config { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("unknown key"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_config("T = 1O0").unwrap_err() {
            Error::Config { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("malformed"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn grid_and_node_invariants() {
        assert!(parse_config("omega_min = 0.5\nomega_max = 0.1").is_err());
        assert!(parse_config("omega_step = 0").is_err());
        assert!(parse_config("k_nodes = 32").is_err());
        assert!(parse_config("oracle_terms = 10").is_err());
    }

    #[test]
    fn lists_and_ranges() {
        let c = parse_config("T_list = 0:100:10\nA_list = 0, 0.032\noracle_m = 1, -2\n").unwrap();
        assert_eq!(c.temperatures.len(), 11);
        assert_eq!(c.temperatures[10], 100.0);
        assert_eq!(c.couplings, vec![0.0, 0.032]);
        assert_eq!(c.oracle_m, vec![1, -2]);
    }

    #[test]
    fn overrides_follow_the_document() {
        let mut b = ConfigBuilder::new();
        b.apply_text("T = 10\nA_coupling = 0.01\n").unwrap();
        b.apply_override("T=0").unwrap();
        let c = b.finish().unwrap();
        assert_eq!(c.params.temperature, 0.0);
        let mut b = ConfigBuilder::new();
        b.apply_text("T = 10\n").unwrap();
        match b.apply_override("nope=1").unwrap_err() {
            Error::Config { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dump_round_trips() {
        let defaults = RunConfig::default();
        assert_eq!(parse_config(&defaults.to_config_text()).unwrap(), defaults);
        let mut custom = RunConfig::default();
        custom.params.a_coupling = 0.064;
        custom.omega_cut = Some(1.5e-4);
        custom.output_path = Some("out/dos.csv".into());
        custom.temperatures = vec![0.0, 12.5, 300.0];
        assert_eq!(parse_config(&custom.to_config_text()).unwrap(), custom);
    }
}
