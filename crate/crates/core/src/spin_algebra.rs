//! Spin-indexed four-point interactions and their Pauli-matrix expansion.
//!
//! A [`SpinTensor4`] stores `v^{σ1σ2}_{σ3σ4}` with the storage order
//! `(σ1, σ2, σ3, σ4)`. The Pauli form used throughout is
//!
//! ```text
//! v^{σ1σ2}_{σ3σ4} = Σ_{μ1 μ2} σ^{μ1}_{σ1σ2} v_{μ1μ2} σ^{μ2}_{σ4σ3}
//! ```
//!
//! with `σ^0 = 1` and `σ^z = diag(1, -1)` in the `(up, down)` basis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for the crossing and round-trip checks.
pub const SPIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    Identity,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::Identity, Pauli::X, Pauli::Y, Pauli::Z];

    fn index(self) -> usize {
        match self {
            Pauli::Identity => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    /// Matrix element `σ^μ_{ab}`.
    pub fn element(self, a: Spin, b: Spin) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (self, a, b) {
            (Pauli::Identity, a, b) => {
                if a == b {
                    one
                } else {
                    zero
                }
            }
            (Pauli::X, a, b) => {
                if a == b {
                    zero
                } else {
                    one
                }
            }
            (Pauli::Y, Spin::Up, Spin::Down) => -i,
            (Pauli::Y, Spin::Down, Spin::Up) => i,
            (Pauli::Y, _, _) => zero,
            (Pauli::Z, Spin::Up, Spin::Up) => one,
            (Pauli::Z, Spin::Down, Spin::Down) => -one,
            (Pauli::Z, _, _) => zero,
        }
    }
}

fn flat(s1: Spin, s2: Spin, s3: Spin, s4: Spin) -> usize {
    (s1.index() << 3) | (s2.index() << 2) | (s3.index() << 1) | s4.index()
}

fn spins_of(idx: usize) -> [Spin; 4] {
    let s = |bit: usize| if (idx >> bit) & 1 == 0 { Spin::Up } else { Spin::Down };
    [s(3), s(2), s(1), s(0)]
}

/// Complex 2×2×2×2 tensor over spin labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTensor4 {
    entries: [Complex64; 16],
}

impl Default for SpinTensor4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl SpinTensor4 {
    pub fn zeros() -> Self {
        Self {
            entries: [Complex64::new(0.0, 0.0); 16],
        }
    }

    pub fn from_fn(mut f: impl FnMut(Spin, Spin, Spin, Spin) -> Complex64) -> Self {
        let mut t = Self::zeros();
        for (idx, e) in t.entries.iter_mut().enumerate() {
            let [s1, s2, s3, s4] = spins_of(idx);
            *e = f(s1, s2, s3, s4);
        }
        t
    }

    pub fn get(&self, s1: Spin, s2: Spin, s3: Spin, s4: Spin) -> Complex64 {
        self.entries[flat(s1, s2, s3, s4)]
    }

    pub fn set(&mut self, s1: Spin, s2: Spin, s3: Spin, s4: Spin, value: Complex64) {
        self.entries[flat(s1, s2, s3, s4)] = value;
    }

    /// Iterates `((σ1, σ2, σ3, σ4), value)` over all 16 components.
    pub fn iter(&self) -> impl Iterator<Item = ([Spin; 4], Complex64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(idx, &v)| (spins_of(idx), v))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &SpinTensor4) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> SpinTensor4 {
        let mut out = *self;
        for e in out.entries.iter_mut() {
            *e *= factor;
        }
        out
    }
}

/// Local bare interaction `(U/2)(δ_{σ1σ2}δ_{σ3σ4} − δ_{σ1σ3}δ_{σ2σ4})`.
pub fn build_bare_interaction(u: f64) -> SpinTensor4 {
    let delta = |a: Spin, b: Spin| if a == b { 1.0 } else { 0.0 };
    SpinTensor4::from_fn(|s1, s2, s3, s4| {
        Complex64::new(
            0.5 * u * (delta(s1, s2) * delta(s3, s4) - delta(s1, s3) * delta(s2, s4)),
            0.0,
        )
    })
}

/// Largest violation of `v^{σ1σ2}_{σ3σ4} = −v^{σ1σ3}_{σ2σ4}`.
pub fn crossing_violation(t: &SpinTensor4) -> f64 {
    t.iter()
        .map(|([s1, s2, s3, s4], v)| (v + t.get(s1, s3, s2, s4)).norm())
        .fold(0.0, f64::max)
}

pub fn check_crossing(t: &SpinTensor4) -> bool {
    crossing_violation(t) <= SPIN_TOLERANCE
}

/// Coefficients `v_{μ1μ2}` of the Pauli expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficients {
    v: [[Complex64; 4]; 4],
}

impl Default for PauliCoefficients {
    fn default() -> Self {
        Self::zeros()
    }
}

impl PauliCoefficients {
    pub fn zeros() -> Self {
        Self {
            v: [[Complex64::new(0.0, 0.0); 4]; 4],
        }
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut c = Self::zeros();
        for (mu, &value) in d.iter().enumerate() {
            c.v[mu][mu] = Complex64::new(value, 0.0);
        }
        c
    }

    pub fn get(&self, mu1: Pauli, mu2: Pauli) -> Complex64 {
        self.v[mu1.index()][mu2.index()]
    }

    pub fn set(&mut self, mu1: Pauli, mu2: Pauli, value: Complex64) {
        self.v[mu1.index()][mu2.index()] = value;
    }

    pub fn diagonal_part(&self) -> PauliCoefficients {
        let mut d = Self::zeros();
        for mu in 0..4 {
            d.v[mu][mu] = self.v[mu][mu];
        }
        d
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    m = m.max(self.v[a][b].norm());
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &PauliCoefficients) -> f64 {
        let mut m = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                m = m.max((self.v[a][b] - other.v[a][b]).norm());
            }
        }
        m
    }
}

/// Full trace projection onto the 16-element Pauli product basis.
///
/// Uses `Σ_{ab} conj(σ^μ_{ab}) σ^ν_{ab} = tr(σ^μ σ^ν) = 2δ_{μν}` on both pairs.
pub fn pauli_project(t: &SpinTensor4) -> PauliCoefficients {
    let mut c = PauliCoefficients::zeros();
    for mu1 in Pauli::ALL {
        for mu2 in Pauli::ALL {
            let sum: Complex64 = t
                .iter()
                .map(|([s1, s2, s3, s4], v)| {
                    mu1.element(s1, s2).conj() * mu2.element(s4, s3).conj() * v
                })
                .sum();
            c.set(mu1, mu2, sum * 0.25);
        }
    }
    c
}

/// Diagonal Pauli coefficients of `t`; fails when the diagonal form does not
/// reproduce `t` to [`SPIN_TOLERANCE`].
pub fn pauli_decompose(t: &SpinTensor4) -> Result<PauliCoefficients> {
    let full = pauli_project(t);
    let diag = full.diagonal_part();
    let residual = pauli_reconstruct(&diag).max_abs_diff(t);
    if residual > SPIN_TOLERANCE {
        return Err(Error::NotPauliRepresentable { residual });
    }
    Ok(diag)
}

pub fn pauli_reconstruct(c: &PauliCoefficients) -> SpinTensor4 {
    SpinTensor4::from_fn(|s1, s2, s3, s4| {
        let mut sum = Complex64::new(0.0, 0.0);
        for mu1 in Pauli::ALL {
            for mu2 in Pauli::ALL {
                sum += mu1.element(s1, s2) * c.get(mu1, mu2) * mu2.element(s4, s3);
            }
        }
        sum
    })
}
