//! Fixed-order Gauss-Legendre rule for the normalized radial measure.
//!
//! Nodes live on the reduced wavenumber `x = q/K ∈ (0, 1)`; each node
//! carries the weight `3x²·w`, so `Σ measure = ∫₀¹ 3x² dx = 1` to rounding.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

pub const DEFAULT_QUADRATURE_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNode {
    /// Reduced wavenumber `q/K`.
    pub x: f64,
    /// Plain Gauss-Legendre weight on `[0, 1]`.
    pub weight: f64,
    /// `3x² · weight`.
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    nodes: Vec<RadialNode>,
}

impl RadialRule {
    pub fn new(n: usize) -> Result<Self> {
        let degree = std::num::NonZeroUsize::new(n).ok_or(Error::InvalidParameter {
            name: "quadrature_nodes",
            reason: "must be positive".into(),
        })?;
        let rule = GaussLegendre::new(degree);
        let mut nodes: Vec<RadialNode> = rule
            .iter()
            .map(|(t, w)| {
                let x = 0.5 * (t + 1.0);
                let weight = 0.5 * w;
                RadialNode {
                    x,
                    weight,
                    measure: 3.0 * x * x * weight,
                }
            })
            .collect();
        nodes.sort_by(|a, b| a.x.total_cmp(&b.x));
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[RadialNode] {
        &self.nodes
    }

    /// `∫₀¹ 3x² f(x) dx`, summed in ascending node order.
    pub fn integrate_measure(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.measure * f(n.x)).sum()
    }

    /// `∫₀¹ f(x) dx` with the plain weights.
    pub fn integrate_plain(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_is_normalized() {
        for n in [64, 256, 512, 1024] {
            let rule = RadialRule::new(n).unwrap();
            assert_eq!(rule.len(), n);
            let total = rule.integrate_measure(|_| 1.0);
            assert!((total - 1.0).abs() < 1e-13, "n = {n}: {total}");
        }
    }

    #[test]
    fn integrates_smooth_functions() {
        let rule = RadialRule::new(64).unwrap();
        let got = rule.integrate_plain(|x| (3.0 * x).cos());
        assert!((got - 3.0f64.sin() / 3.0).abs() < 1e-14);
        // ∫ 3x² · x² dx = 3/5
        assert!((rule.integrate_measure(|x| x * x) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn nodes_sorted_inside_unit_interval() {
        let rule = RadialRule::new(128).unwrap();
        let xs: Vec<f64> = rule.nodes().iter().map(|n| n.x).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs[0] > 0.0 && *xs.last().unwrap() < 1.0);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(RadialRule::new(0).is_err());
    }
}
