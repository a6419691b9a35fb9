//! Tensor-product sample grids and midpoint quadrature.

use crate::error::{Error, Result};

/// One grid axis. Periodic axes sample the half-open interval [lo, hi),
/// closed axes sample [lo, hi] including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn closed(lo: f64, hi: f64, count: usize) -> Self {
        Axis { lo, hi, count, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64, count: usize) -> Self {
        Axis { lo, hi, count, periodic: true }
    }

    fn spacing(&self) -> f64 {
        if self.periodic {
            (self.hi - self.lo) / self.count as f64
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        let d = self.spacing();
        (0..self.count).map(|i| self.lo + d * i as f64).collect()
    }

    /// Quadrature nodes (cell midpoints, or the nodes themselves on a
    /// periodic axis) and the common weight.
    pub fn cells(&self) -> (Vec<f64>, f64) {
        let d = self.spacing();
        if self.periodic {
            (self.nodes(), d)
        } else {
            let mids = (0..self.count - 1)
                .map(|i| self.lo + d * (i as f64 + 0.5))
                .collect();
            (mids, d)
        }
    }
}

/// Cartesian product of axes, enumerated with the first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for a in &axes {
            if a.count < 2 || !(a.lo.is_finite() && a.hi.is_finite()) || a.hi <= a.lo {
                return Err(Error::EmptyGrid);
            }
        }
        Ok(Grid { axes })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let nodes: Vec<Vec<f64>> = self.axes.iter().map(Axis::nodes).collect();
        product(&nodes)
    }

    /// Quadrature nodes with their weights.
    pub fn quadrature(&self) -> Vec<(Vec<f64>, f64)> {
        let cells: Vec<(Vec<f64>, f64)> = self.axes.iter().map(Axis::cells).collect();
        let nodes: Vec<Vec<f64>> = cells.iter().map(|c| c.0.clone()).collect();
        let w: f64 = cells.iter().map(|c| c.1).product();
        product(&nodes).into_iter().map(|p| (p, w)).collect()
    }
}

fn product(nodes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in nodes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for p in &out {
            for &v in axis {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
