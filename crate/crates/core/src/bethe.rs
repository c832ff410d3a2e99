//! Bethe-ansatz scattering eigenstates of the single-waveguide emitter.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{invalid, Result};
use crate::model::TWGParams;
use crate::C64;

/// Single-photon phase `exp(i delta_p) = (p - omega - i g/2) / (p - omega + i g/2)`.
pub fn single_phase(p: &TWGParams, k: f64) -> C64 {
    let g = p.gamma_t();
    C64::new(k - p.omega_atom(), -0.5 * g) / C64::new(k - p.omega_atom(), 0.5 * g)
}

/// Two-body exchange phase `(ki - kj - i g) / (ki - kj + i g)`.
pub fn two_body_phase(gamma: f64, ki: f64, kj: f64) -> C64 {
    two_body_phase_at(gamma, C64::new(ki - kj, 0.0))
}

/// Two-body phase continued to a complex momentum difference.
pub fn two_body_phase_at(gamma: f64, diff: C64) -> C64 {
    (diff - C64::new(0.0, gamma)) / (diff + C64::new(0.0, gamma))
}

/// Plane-wave amplitudes of an N-photon eigenstate, one per ordering of
/// the momenta over the (ordered) coordinates.
#[derive(Debug, Clone)]
pub struct BetheState {
    momenta: Vec<f64>,
    params: TWGParams,
    amplitudes: HashMap<Vec<usize>, C64>,
}

/// Apply the adjacent transposition at `j` to `perm`, returning the factor
/// `A_new / A_old`.
fn transpose(perm: &mut [usize], j: usize, k: &[f64], gamma: f64) -> C64 {
    perm.swap(j, j + 1);
    two_body_phase(gamma, k[perm[j]], k[perm[j + 1]])
}

impl BetheState {
    /// Build all `N!` amplitudes with `A_identity = 1`. Permutations are
    /// zero-based: `perm[j]` is the momentum index placed at coordinate `j`.
    pub fn new(params: TWGParams, momenta: Vec<f64>) -> Result<Self> {
        let n = momenta.len();
        if n == 0 || n > 8 {
            return Err(invalid("momenta", "between 1 and 8 photons are supported"));
        }
        if momenta.iter().any(|k| !k.is_finite()) {
            return Err(invalid("momenta", "must be finite"));
        }
        let mut amplitudes = HashMap::new();
        for perm in (0..n).permutations(n) {
            let a = Self::amplitude_along(&momenta, params.gamma_t(), &perm, &bubble_path(&perm));
            amplitudes.insert(perm, a);
        }
        Ok(Self {
            momenta,
            params,
            amplitudes,
        })
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma_t()
    }

    pub fn amplitude(&self, perm: &[usize]) -> Result<C64> {
        self.amplitudes.get(perm).copied().ok_or_else(|| {
            invalid(
                "perm",
                format!("{perm:?} is not a permutation of the momenta"),
            )
        })
    }

    /// Product of exchange phases along a path of adjacent transpositions
    /// (given by their left positions) that takes the identity to `target`.
    pub fn amplitude_along(momenta: &[f64], gamma: f64, target: &[usize], path: &[usize]) -> C64 {
        let mut perm: Vec<usize> = (0..momenta.len()).collect();
        let mut a = C64::new(1.0, 0.0);
        for &j in path {
            a *= transpose(&mut perm, j, momenta, gamma);
        }
        assert_eq!(perm, target, "path does not reach the target permutation");
        a
    }

    /// Eigenstate at strictly increasing nonzero coordinates: each photon
    /// carries its plane wave and, past the emitter, its transmission phase.
    pub fn eigenstate_value(&self, x: &[f64]) -> Result<C64> {
        if x.len() != self.momenta.len() {
            return Err(invalid("x", "one coordinate per photon"));
        }
        if x.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(invalid("x", "coordinates must be finite and nonzero"));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("x", "coordinates must be strictly increasing"));
        }
        let phase: Vec<C64> = self
            .momenta
            .iter()
            .map(|&k| single_phase(&self.params, k))
            .collect();
        let mut total = C64::new(0.0, 0.0);
        for (perm, a) in self.sorted_amplitudes() {
            let mut term = a;
            for (j, &m) in perm.iter().enumerate() {
                term *= C64::from_polar(1.0, self.momenta[m] * x[j]);
                if x[j] > 0.0 {
                    term *= phase[m];
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Amplitudes in lexicographic permutation order.
    pub fn sorted_amplitudes(&self) -> Vec<(Vec<usize>, C64)> {
        let mut v: Vec<(Vec<usize>, C64)> = self
            .amplitudes
            .iter()
            .map(|(p, a)| (p.clone(), *a))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// Adjacent-transposition path from the identity to `target` (bubble sort
/// of the inverse ordering).
pub fn bubble_path(target: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..target.len()).collect();
    let mut path = Vec::new();
    for (pos, &want) in target.iter().enumerate() {
        let from = perm
            .iter()
            .position(|&v| v == want)
            .expect("target is a permutation");
        for j in (pos..from).rev() {
            perm.swap(j, j + 1);
            path.push(j);
        }
    }
    path
}
