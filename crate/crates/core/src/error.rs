use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wavenumber q = {q} outside [0, {k_max}]")]
    WavenumberOutOfRange { q: f64, k_max: f64 },

    #[error("Bose occupation is singular at omega = 0 for T = {temperature} K")]
    BoseSingular { temperature: f64 },

    #[error("level at xi = 0 has no finite contribution to the averaged Green's function")]
    ZeroEnergyLevel,

    #[error("Matsubara frequencies require T > 0")]
    ZeroTemperatureMatsubara,

    #[error("tensor is not representable in diagonal Pauli form (residual {residual:.3e})")]
    NotPauliRepresentable { residual: f64 },

    #[error("quadrature not converged at omega = {omega} eV: relative change {relative_change:.3e} on doubling nodes")]
    NonConvergence { omega: f64, relative_change: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("no sign change of m(T) on [{low} K, {high} K]")]
    BracketFailure { low: f64, high: f64 },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
