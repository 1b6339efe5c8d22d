use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};

/// Uniform grid on `[-half_width, half_width]` with an odd number of nodes,
/// so that the origin is always a node.
///
/// Every node carries an unknown. Dirichlet closure sits one spacing beyond
/// the outermost nodes (ghost values are zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    half_width: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        require_positive("half_width", half_width)?;
        if n < 3 || n.is_multiple_of(2) {
            return domain(format!("grid point count must be odd and >= 3, got {n}"));
        }
        Ok(Self { half_width, n })
    }

    /// Grid with the requested spacing (rounded so that the extent is kept).
    pub fn with_spacing(half_width: f64, dx: f64) -> Result<Self> {
        require_positive("dx", dx)?;
        let half = (half_width / dx).round().max(1.0) as usize;
        Self::new(half_width, 2 * half + 1)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    /// Index of the node at the origin.
    pub fn center(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - self.center() as f64) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Same extent, spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            n: 2 * self.n - 1,
        }
    }

    /// Same spacing, extent multiplied by `factor` (an integer keeps the
    /// coarse nodes as a subset).
    pub fn widened(&self, factor: usize) -> Self {
        let half = self.center() * factor;
        Self {
            half_width: self.half_width * factor as f64,
            n: 2 * half + 1,
        }
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.half_width * factor, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_a_node() {
        let g = Grid1D::new(2.0, 5).unwrap();
        assert_eq!(g.nodes(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.node(g.center()), 0.0);
    }

    #[test]
    fn rejects_even_or_tiny_counts() {
        assert!(Grid1D::new(1.0, 4).is_err());
        assert!(Grid1D::new(1.0, 1).is_err());
        assert!(Grid1D::new(0.0, 5).is_err());
        assert!(Grid1D::new(f64::NAN, 5).is_err());
    }

    #[test]
    fn refinement_and_widening_nest() {
        let g = Grid1D::new(3.0, 7).unwrap();
        assert_eq!(g.refined().dx(), g.dx() / 2.0);
        let w = g.widened(2);
        assert_eq!(w.dx(), g.dx());
        assert_eq!(w.half_width(), 6.0);
        let s = Grid1D::with_spacing(10.0, 0.1).unwrap();
        assert_eq!(s.len(), 201);
    }
}
