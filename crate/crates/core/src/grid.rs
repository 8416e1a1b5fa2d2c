use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform real-frequency grid `ω_i = min + i·step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    min: f64,
    step: f64,
    len: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self::new(-0.30, 0.40, 1e-4).expect("default grid is valid")
    }
}

impl FrequencyGrid {
    /// Grid covering `[min, max]`; `max` is reached to within rounding of the
    /// step count.
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega grid",
                reason: "bounds and step must be finite".into(),
            });
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega_step",
                reason: "must be > 0".into(),
            });
        }
        if max <= min {
            return Err(Error::InvalidParameter {
                name: "omega_max",
                reason: "must exceed omega_min".into(),
            });
        }
        let intervals = ((max - min) / step).round() as usize;
        Ok(Self {
            min,
            step,
            len: intervals + 1,
        })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// Index of the grid point closest to `omega`, if inside the grid.
    pub fn nearest_index(&self, omega: f64) -> Option<usize> {
        let t = (omega - self.min) / self.step;
        if t < -0.5 || t > self.len as f64 - 0.5 {
            return None;
        }
        Some((t.round() as usize).min(self.len - 1))
    }

    /// Trapezoidal integral of samples on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        if values.len() < 2 {
            return 0.0;
        }
        let interior: f64 = values[1..values.len() - 1].iter().sum();
        self.step * (interior + 0.5 * (values[0] + values[values.len() - 1]))
    }
}

/// Complex function of real frequency sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RetardedFunction {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl RetardedFunction {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn imag(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.im).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Subtracts a real constant from every sample.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|z| z - shift).collect(),
        }
    }

    /// Linear interpolation inside the grid.
    pub fn at(&self, omega: f64) -> Result<Complex64> {
        let t = (omega - self.grid.min) / self.grid.step;
        let last = (self.grid.len - 1) as f64;
        if !(t >= -1e-9 && t <= last + 1e-9) {
            return Err(Error::GridMismatch(format!(
                "omega = {omega} outside [{}, {}]",
                self.grid.min(),
                self.grid.max()
            )));
        }
        let t = t.clamp(0.0, last);
        let i = (t.floor() as usize).min(self.grid.len - 2);
        let frac = t - i as f64;
        Ok(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }
}
