//! Spherical quadrature grids for dimensions 2 and 3.
//!
//! * `S^1`: uniform midpoint rule on the circle (trapezoid-equivalent for
//!   periodic integrands, spectrally accurate for smooth ones).
//! * `S^2`: Gauss-Legendre in `cos(theta)` crossed with a uniform midpoint
//!   rule in `phi`, spectrally accurate for smooth integrands.
//!
//! Node counts are even and the `phi` offsets are half-steps, so every grid
//! is symmetric under `u -> -u`; even integrands integrate to twice the
//! half-sphere sum and odd integrands cancel to rounding.

use crate::error::{LlbmError, Result};
use crate::geometry::Vector;
use crate::linalg::gauss_legendre;

/// Quadrature nodes and weights on the unit sphere `S^(dim-1)`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    dim: usize,
    nodes: Vec<(Vector, f64)>,
    /// Node counts per axis: `(polar, azimuthal)` for `S^2`,
    /// `(0, angular)` for `S^1`.
    counts: (usize, usize),
}

impl QuadratureGrid {
    /// Default grid: 512 nodes on the circle, 64 x 128 on the sphere.
    pub fn standard(dim: usize) -> Result<Self> {
        match dim {
            2 => Self::circle(512),
            3 => Self::sphere(64, 128),
            _ => Err(LlbmError::Unsupported(format!(
                "quadrature grids exist for dimensions 2 and 3, not {dim}"
            ))),
        }
    }

    /// Uniform midpoint grid on the circle with `m` (even) nodes.
    pub fn circle(m: usize) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(LlbmError::InvalidInput(format!(
                "circle grid needs an even node count >= 4, got {m}"
            )));
        }
        let w = std::f64::consts::TAU / m as f64;
        let nodes = (0..m)
            .map(|j| {
                let ang = std::f64::consts::TAU * (j as f64 + 0.5) / m as f64;
                (Vector::from_raw(vec![ang.cos(), ang.sin()]), w)
            })
            .collect();
        Ok(Self { dim: 2, nodes, counts: (0, m) })
    }

    /// Gauss-Legendre(`polar`) x uniform(`azimuthal`) grid on `S^2`.
    /// Both counts must be even so the grid is antipodally symmetric.
    pub fn sphere(polar: usize, azimuthal: usize) -> Result<Self> {
        if polar < 2 || polar % 2 != 0 || azimuthal < 4 || azimuthal % 2 != 0 {
            return Err(LlbmError::InvalidInput(format!(
                "sphere grid needs even counts (polar >= 2, azimuthal >= 4), \
                 got {polar} x {azimuthal}"
            )));
        }
        let gl = gauss_legendre(polar);
        let dphi = std::f64::consts::TAU / azimuthal as f64;
        let mut nodes = Vec::with_capacity(polar * azimuthal);
        for &(x, wx) in &gl {
            // x = cos(theta); sin(theta) >= 0 on [0, pi].
            let s = (1.0 - x * x).max(0.0).sqrt();
            for j in 0..azimuthal {
                let phi = std::f64::consts::TAU * (j as f64 + 0.5) / azimuthal as f64;
                let u = Vector::from_raw(vec![s * phi.cos(), s * phi.sin(), x]);
                nodes.push((u, wx * dphi));
            }
        }
        Ok(Self { dim: 3, nodes, counts: (polar, azimuthal) })
    }

    /// The same family of grid with twice the nodes per axis, for error
    /// estimation by refinement.
    pub fn refined(&self) -> Result<Self> {
        match self.dim {
            2 => Self::circle(self.counts.1 * 2),
            _ => Self::sphere(self.counts.0 * 2, self.counts.1 * 2),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[(Vector, f64)] {
        &self.nodes
    }

    pub fn counts(&self) -> (usize, usize) {
        self.counts
    }

    /// Total weight; must equal the surface measure of the sphere.
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }

    /// Integrates an arbitrary function over the grid.
    pub fn integrate<F: FnMut(&Vector) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|(u, w)| w * f(u)).sum()
    }
}
