use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid on [0, 1] with `n` intervals and `n + 1` nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        let nodes = (0..=n).map(|i| i as f64 / n as f64).collect();
        Ok(Grid {
            n,
            h: 1.0 / n as f64,
            nodes,
        })
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn ones(&self) -> Vec<f64> {
        vec![1.0; self.len()]
    }

    /// Grid function `x^k` (with `x^0 = 1` everywhere).
    pub fn monomial(&self, k: u32) -> Vec<f64> {
        self.nodes.iter().map(|x| x.powi(k as i32)).collect()
    }

    pub fn e_left(&self) -> Vec<f64> {
        crate::numkernel::unit(self.len(), 0)
    }

    pub fn e_right(&self) -> Vec<f64> {
        crate::numkernel::unit(self.len(), self.n)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}

/// Uniform grid with `n` intervals; fails with `InvalidN` for `n < 2`.
pub fn make_grid(n: usize) -> Result<Grid> {
    Grid::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids() {
        assert_eq!(make_grid(2).unwrap().nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(make_grid(4).unwrap().h(), 0.25);
        let g = make_grid(24).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g.nodes()[12], 0.5);
        assert_eq!(g.nodes()[24], 1.0);
    }

    #[test]
    fn too_few_intervals() {
        assert_eq!(make_grid(1), Err(Error::InvalidN(1)));
        assert_eq!(make_grid(0), Err(Error::InvalidN(0)));
    }
}
