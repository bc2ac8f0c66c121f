use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::output::fmt_sig;

use super::DirectedGraph;

/// Damping used when nothing else is configured.
pub const DEFAULT_Q: f64 = 0.9;

const COLUMN_SUM_TOL: f64 = 1e-12;

/// Column-stochastic operator: entry `(i, j)` is the probability of a hop
/// from `j` to `i`, so a distribution evolves as `p <- M p`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    m: DMatrix<f64>,
}

impl StochasticMatrix {
    /// Wraps a matrix after checking entries lie in `[0, 1]` and every
    /// column sums to one within `1e-12`.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if let Some(bad) = m.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidParameter(format!("entry {bad} outside [0, 1]")));
        }
        for (j, col) in m.column_iter().enumerate() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > COLUMN_SUM_TOL {
                return Err(Error::InvalidParameter(format!("column {j} sums to {s}")));
            }
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Largest deviation of a column sum from one.
    pub fn max_column_defect(&self) -> f64 {
        self.m
            .column_iter()
            .map(|c| (c.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `out = M p`, accumulated column by column.
    ///
    /// The classical and quantum integrators share this routine so that at
    /// `alpha = 1` both perform bit-identical population updates.
    pub fn apply_into(&self, p: &[f64], out: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(p.len(), n);
        out.iter_mut().for_each(|x| *x = 0.0);
        let data = self.m.as_slice();
        for (j, &pj) in p.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            let col = &data[j * n..(j + 1) * n];
            for (o, &c) in out.iter_mut().zip(col) {
                *o += c * pj;
            }
        }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(p, &mut out);
        out
    }

    /// CSV with one row per destination node.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for row in self.m.row_iter() {
            let line: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Random-walk transition matrix with `(i, j) = a_ji / k_j` for out-degree
/// `k_j`. Dangling columns become uniform over the other `n - 1` nodes.
pub fn transition_matrix(g: &DirectedGraph) -> StochasticMatrix {
    let n = g.node_count();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let out = g.out_neighbors(j);
        if out.is_empty() {
            if n > 1 {
                let w = 1.0 / (n - 1) as f64;
                for i in (0..n).filter(|&i| i != j) {
                    m[(i, j)] = w;
                }
            } else {
                m[(0, 0)] = 1.0;
            }
        } else {
            let w = 1.0 / out.len() as f64;
            for &i in out {
                m[(i, j)] = w;
            }
        }
    }
    StochasticMatrix { m }
}

/// `G = q Pi + (1 - q) F` with `F_ij = 1 / (n - 1)` off the diagonal.
pub fn google_matrix(pi: &StochasticMatrix, q: f64) -> Result<StochasticMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} outside [0, 1]")));
    }
    let n = pi.dim();
    if n < 2 {
        return Err(Error::InvalidParameter("Google matrix needs at least two nodes".into()));
    }
    let hop = (1.0 - q) / (n - 1) as f64;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let base = q * pi.m[(i, j)];
        if i == j {
            base
        } else {
            base + hop
        }
    });
    Ok(StochasticMatrix { m })
}
