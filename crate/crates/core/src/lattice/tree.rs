//! Shifted LDL^T factorization of a symmetric matrix whose sparsity graph is
//! a tree. Eliminating leaves first keeps the factorization fill-free, which
//! gives Sylvester inertia counts and linear solves in O(n).

use super::propagate::SparseSymmetric;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TreeOrder {
    /// Vertices in breadth-first order from the root.
    order: Vec<usize>,
    /// Parent and coupling to the parent (root has none).
    parent: Vec<Option<(usize, f64)>>,
}

impl TreeOrder {
    pub fn new(h: &SparseSymmetric, root: usize) -> Result<Self> {
        let n = h.diag.len();
        if h.edge_count() + 1 != n {
            return Err(Error::Unsupported("coupling graph is not a tree".into()));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(c, w) in &h.neighbors[v] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some((v, w));
                    order.push(c);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Unsupported("coupling graph is not connected".into()));
        }
        Ok(Self { order, parent })
    }

    /// Pivots of `H - sigma` in elimination (leaves-first) order, indexed by vertex.
    fn pivots(&self, h: &SparseSymmetric, sigma: f64) -> Vec<f64> {
        let n = h.diag.len();
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + sigma.abs());
        let mut d: Vec<f64> = h.diag.iter().map(|&x| x - sigma).collect();
        let mut done = vec![0.0; n];
        for &v in self.order.iter().rev() {
            let mut dv = d[v] - done[v];
            if dv == 0.0 {
                dv = -tiny;
            }
            d[v] = dv;
            if let Some((p, w)) = self.parent[v] {
                done[p] += w * w / dv;
            }
        }
        d
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, h: &SparseSymmetric, sigma: f64) -> usize {
        self.pivots(h, sigma).iter().filter(|&&d| d < 0.0).count()
    }

    /// Solve `(H - sigma) x = b`.
    pub fn solve(&self, h: &SparseSymmetric, sigma: f64, b: &[f64]) -> Vec<f64> {
        let d = self.pivots(h, sigma);
        let mut y = b.to_vec();
        for &v in self.order.iter().rev() {
            if let Some((p, w)) = self.parent[v] {
                let f = w / d[v];
                y[p] -= f * y[v];
            }
        }
        let mut x = vec![0.0; y.len()];
        for &v in &self.order {
            let up = self.parent[v].map_or(0.0, |(p, w)| w * x[p]);
            x[v] = (y[v] - up) / d[v];
        }
        x
    }

    /// The `index`-th smallest eigenvalue (zero-based) inside `[lo, hi]` by bisection.
    pub fn eigenvalue(&self, h: &SparseSymmetric, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(h, mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for an isolated eigenvalue by inverse iteration.
    pub fn eigenvector(&self, h: &SparseSymmetric, eigenvalue: f64) -> Vec<f64> {
        let n = h.diag.len();
        let shift = eigenvalue + 1e-11 * (1.0 + eigenvalue.abs());
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            let mut x = self.solve(h, shift, &v);
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            for a in x.iter_mut() {
                *a /= norm;
            }
            v = x;
        }
        v
    }
}
