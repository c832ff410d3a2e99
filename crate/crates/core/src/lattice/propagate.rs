//! Chebyshev expansion of `exp(-i H t)` for real symmetric operators.

use crate::special::bessel_j_sequence;
use crate::C64;

/// Real symmetric operator applied matrix-free.
pub trait Operator: Sync {
    fn dim(&self) -> usize;
    /// `y = H x`.
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// Interval containing the spectrum.
    fn spectral_bounds(&self) -> (f64, f64);
}

/// Sparse symmetric matrix stored as diagonal plus an edge list.
#[derive(Debug, Clone)]
pub struct SparseSymmetric {
    pub diag: Vec<f64>,
    /// Neighbor lists `(j, h_ij)`; each edge appears in both endpoints' lists.
    pub neighbors: Vec<Vec<(usize, f64)>>,
}

impl SparseSymmetric {
    pub fn new(diag: Vec<f64>) -> Self {
        let n = diag.len();
        Self {
            diag,
            neighbors: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, i: usize, j: usize, h: f64) {
        assert_ne!(i, j, "diagonal entries go in `diag`");
        self.neighbors[i].push((j, h));
        self.neighbors[j].push((i, h));
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Gershgorin interval.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &d) in self.diag.iter().enumerate() {
            let r: f64 = self.neighbors[i].iter().map(|(_, h)| h.abs()).sum();
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.diag.len();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            for &(j, h) in &self.neighbors[i] {
                m[(i, j)] += h;
            }
        }
        m
    }
}

impl Operator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for i in 0..self.diag.len() {
            let mut acc = x[i] * self.diag[i];
            for &(j, h) in &self.neighbors[i] {
                acc += x[j] * h;
            }
            y[i] = acc;
        }
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        self.gershgorin()
    }
}

/// Largest rescaled step `a dt` per Chebyshev expansion.
const MAX_STEP: f64 = 25.0;

/// Evolve `psi` in place to time `t` under `op`.
pub fn evolve<O: Operator + ?Sized>(op: &O, psi: &mut [C64], t: f64) {
    assert_eq!(psi.len(), op.dim());
    if t == 0.0 {
        return;
    }
    let (lo, hi) = op.spectral_bounds();
    let margin = 1e-6 * (hi - lo).abs().max(1.0);
    let half = 0.5 * (hi - lo) + margin;
    let center = 0.5 * (hi + lo);
    let steps = ((half * t.abs()) / MAX_STEP).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let tau = half * dt.abs();
    // Terms until the Bessel coefficients are negligible.
    let mut n_terms = (tau as usize) + 20;
    let coeffs = loop {
        let j = bessel_j_sequence(n_terms + 10, tau);
        if j[n_terms - 5..].iter().all(|v| v.abs() < 1e-18) {
            break j;
        }
        n_terms += 10;
    };
    let sign = if dt >= 0.0 { 1.0 } else { -1.0 };
    let n = psi.len();
    let mut t_prev = vec![C64::new(0.0, 0.0); n];
    let mut t_cur = vec![C64::new(0.0, 0.0); n];
    let mut t_next = vec![C64::new(0.0, 0.0); n];
    let mut acc = vec![C64::new(0.0, 0.0); n];
    let scale = |x: &[C64], y: &mut [C64]| {
        op.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi - xi * center) / half;
        }
    };
    // (-i)^m for m mod 4, with the time direction folded in.
    let phase = |m: usize| -> C64 {
        let base = C64::new(0.0, -sign);
        base.powi(m as i32)
    };
    for _ in 0..steps {
        t_prev.copy_from_slice(psi);
        scale(&t_prev, &mut t_cur);
        for i in 0..n {
            acc[i] = t_prev[i] * coeffs[0] + t_cur[i] * (2.0 * coeffs[1]) * phase(1);
        }
        for (m, &coeff) in coeffs.iter().enumerate().take(n_terms).skip(2) {
            scale(&t_cur, &mut t_next);
            let c = phase(m) * (2.0 * coeff);
            for i in 0..n {
                t_next[i] = t_next[i] * 2.0 - t_prev[i];
                acc[i] += t_next[i] * c;
            }
            std::mem::swap(&mut t_prev, &mut t_cur);
            std::mem::swap(&mut t_cur, &mut t_next);
        }
        let global = C64::from_polar(1.0, -center * dt);
        for i in 0..n {
            psi[i] = acc[i] * global;
        }
    }
}

pub fn norm_sqr(psi: &[C64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum()
}
