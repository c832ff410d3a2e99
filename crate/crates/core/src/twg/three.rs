//! Three-photon scattering: connected T-matrix, S-matrix tiers and the
//! real-space out-state.

use std::f64::consts::PI;

use itertools::Itertools;

use super::{check_shell, transmission_t, two_photon_t_unchecked};
use crate::amplitude::{
    ConnectedDensity, DisconnectedTerm, LegPin, PartialTerm, ScatteringAmplitudeSet,
};
use crate::error::{invalid, Result};
use crate::model::TWGParams;
use crate::quadrature::{integrate, integrate_2d, QuadratureConfig};
use crate::C64;

/// Below this distance (in units of `gamma_t`) between an outgoing and an
/// incoming momentum the density is evaluated through a contour mean.
const COINCIDENCE: f64 = 1e-3;
const CIRCLE_POINTS: usize = 24;
const CIRCLE_RADIUS: f64 = 0.125;
/// On-shell direction along which the contour mean is taken; components are
/// distinct and nonzero so every outgoing momentum leaves its coincidence.
const CIRCLE_DIRECTION: [f64; 3] = [0.6, 0.2, -0.8];

/// Connected three-photon density for a fixed incoming triple.
///
/// The printed density is a sum of three permutation sums `F1 + F2 + F3`
/// over the pairings of incoming and outgoing legs. The three sums are equal
/// as rational functions (they differ by a relabeling of the dummy
/// permutations), so the evaluator uses `3 F1`, computed from reciprocal
/// tables. Individual terms have poles where an outgoing momentum equals an
/// incoming one; these cancel in the sum. Near such points the value is
/// taken as the mean over a small complex circle on the energy shell, which
/// equals the regular value by analyticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePhotonConnectedT {
    params: TWGParams,
    k: [f64; 3],
}

impl ThreePhotonConnectedT {
    pub fn new(params: TWGParams, k: [f64; 3]) -> Result<Self> {
        if k.iter().any(|v| !v.is_finite()) {
            return Err(invalid("k", "incoming momenta must be finite"));
        }
        Ok(Self { params, k })
    }

    pub fn params(&self) -> &TWGParams {
        &self.params
    }

    pub fn incoming(&self) -> [f64; 3] {
        self.k
    }

    pub fn total_energy(&self) -> f64 {
        self.k.iter().sum()
    }

    /// Density at on-shell outgoing momenta.
    pub fn eval(&self, p: [f64; 3]) -> Result<C64> {
        check_shell(self.total_energy(), p.iter().sum())?;
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: [f64; 3]) -> C64 {
        let g = self.params.gamma_t();
        if g == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let closest = p
            .iter()
            .flat_map(|&pj| self.k.iter().map(move |&ki| (pj - ki).abs()))
            .fold(f64::INFINITY, f64::min);
        let sum = if closest < COINCIDENCE * g {
            self.circle_mean(p)
        } else {
            self.f_sum(p.map(|v| C64::new(v, 0.0)))
        };
        C64::i() * g * g * g / (4.0 * PI * PI) * sum
    }

    fn circle_mean(&self, p: [f64; 3]) -> C64 {
        let r = CIRCLE_RADIUS * self.params.gamma_t();
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..CIRCLE_POINTS {
            let theta = 2.0 * PI * (m as f64 + 0.5) / CIRCLE_POINTS as f64;
            let z = C64::from_polar(r, theta);
            let q = [0, 1, 2].map(|j| p[j] + z * CIRCLE_DIRECTION[j]);
            acc += self.f_sum(q);
        }
        acc / CIRCLE_POINTS as f64
    }

    /// Ridge profile: along a line where one outgoing momentum `u` stays
    /// finite and the other two run off to `+-R`, the density approaches
    /// `ridge(u) / ((p_a - alpha) (p_b - alpha))` up to `O(R^-3)`.
    pub(crate) fn ridge(&self, u: f64) -> C64 {
        let g = self.params.gamma_t();
        if g == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let a = self.params.alpha();
        let e = self.total_energy();
        let ka = self.k.map(|k| 1.0 / (k - a));
        let mut s = C64::new(0.0, 0.0);
        for i in 0..3 {
            let (b, c) = others(i);
            s += ka[i]
                * (ka[c] / (e - self.k[b] - u - a)
                    + ka[b] / (e - self.k[c] - u - a)
                    + (ka[b] + ka[c]) / (u - a));
        }
        -C64::i() * g * g * g / (2.0 * PI * PI) * s
    }

    /// Sum of the three ridge terms at on-shell real momenta.
    fn ridge_model(&self, p: [f64; 3]) -> C64 {
        let a = self.params.alpha();
        (0..3)
            .map(|m| {
                let (i, j) = others(m);
                self.ridge(p[m]) / ((p[i] - a) * (p[j] - a))
            })
            .sum()
    }

    /// `F1` at (possibly complex) on-shell outgoing momenta.
    fn f_sum(&self, p: [C64; 3]) -> C64 {
        let a = self.params.alpha();
        let total: f64 = self.total_energy();
        let ka = self.k.map(|k| 1.0 / (k - a));
        let pa = p.map(|q| 1.0 / (q - a));
        let mut d = [[C64::new(0.0, 0.0); 3]; 3];
        // c[m][j] = 1 / (k_i1 + k_i2 - p_j - alpha) with m the leg left out.
        let mut c = [[C64::new(0.0, 0.0); 3]; 3];
        for j in 0..3 {
            for i in 0..3 {
                d[j][i] = 1.0 / (p[j] - self.k[i]);
                c[i][j] = 1.0 / (total - self.k[i] - p[j] - a);
            }
        }
        let mut sum = C64::new(0.0, 0.0);
        for first in 0..3 {
            for last in (0..3).filter(|&b| b != first) {
                let mut inner = C64::new(0.0, 0.0);
                for j in 0..3 {
                    for l in (0..3).filter(|&l| l != j) {
                        inner += d[j][first] * d[l][last] * pa[l] * c[last][j];
                    }
                }
                sum += ka[first] * inner;
            }
        }
        sum
    }
}

pub fn three_photon_connected_t(p: &TWGParams, k: [f64; 3], out: [f64; 3]) -> Result<C64> {
    ThreePhotonConnectedT::new(*p, k)?.eval(out)
}

/// `|T3|^2` at outgoing `(p1, p2, E - p1 - p2)`.
pub fn three_photon_fluorescence(p: &TWGParams, k: [f64; 3], p1: f64, p2: f64) -> Result<f64> {
    let t = ThreePhotonConnectedT::new(*p, k)?;
    let e = t.total_energy();
    Ok(t.eval_unchecked([p1, p2, e - p1 - p2]).norm_sqr())
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Three-photon S-matrix.
///
/// * fully disconnected: `t1 t2 t3` on each of the 6 distinct matchings of
///   outgoing to incoming legs;
/// * one photon transmitted independently while the other two scatter
///   connectedly: one term per (incoming leg, outgoing leg) pair, 9 in all;
/// * fully connected density.
pub fn three_photon_s(p: &TWGParams, k: [f64; 3]) -> ScatteringAmplitudeSet {
    let t = k.map(|v| transmission_t(p, v));
    let w = t[0] * t[1] * t[2];
    let disconnected = (0..3)
        .permutations(3)
        .map(|sigma| DisconnectedTerm {
            pins: (0..3)
                .map(|i| LegPin {
                    outgoing: sigma[i],
                    momentum: k[i],
                })
                .collect(),
            weight: w,
        })
        .collect();
    let mut partial = Vec::new();
    let mut connected = None;
    if !p.is_decoupled() {
        for i in 0..3 {
            let (g, d) = others(i);
            let (kg, kd) = (k[g], k[d]);
            for j in 0..3 {
                let (l, b) = others(j);
                let params = *p;
                partial.push(PartialTerm {
                    pins: vec![LegPin {
                        outgoing: j,
                        momentum: k[i],
                    }],
                    weight: t[i],
                    connected: ConnectedDensity::new(vec![l, b], kg + kd, move |q| {
                        two_photon_t_unchecked(&params, kg, kd, q[0], q[1])
                    }),
                });
            }
        }
        let dens = ThreePhotonConnectedT { params: *p, k };
        connected = Some(ConnectedDensity::new(
            vec![0, 1, 2],
            k.iter().sum(),
            move |q| dens.eval_unchecked([q[0], q[1], q[2]]),
        ));
    }
    ScatteringAmplitudeSet::new(k.to_vec(), disconnected, partial, connected)
}

/// Settings for the connected part of the three-photon out-state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePhotonOutConfig {
    /// Half-width of the momentum window around `E/3`, in units of `gamma_t`.
    pub window: f64,
    /// Half-width (units of `gamma_t`) of the one-dimensional integrals
    /// that add back the ridge tails cut off by the window; 0 disables the
    /// ridge correction and leaves a truncation error of order
    /// `1 / window` where coordinates coincide.
    pub ridge_window: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for ThreePhotonOutConfig {
    fn default() -> Self {
        Self {
            window: 40.0,
            ridge_window: 400.0,
            quadrature: QuadratureConfig {
                rel_tol: 1e-8,
                abs_tol: 1e-10,
                max_intervals: 4000,
            },
        }
    }
}

/// Out-state value split by tier, each carrying the common
/// `1 / (6 (2 pi)^{3/2})` prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePhotonOutValue {
    pub disconnected: C64,
    pub partial: C64,
    pub connected: C64,
    /// Quadrature error estimate of the connected tier (same prefactor).
    pub connected_error: f64,
}

impl ThreePhotonOutValue {
    pub fn total(&self) -> C64 {
        self.disconnected + self.partial + self.connected
    }
}

fn prefactor() -> f64 {
    1.0 / (6.0 * (2.0 * PI).powf(1.5))
}

/// Real-space three-photon out-state.
///
/// The momentum-space tiers are Fourier transformed separately: the
/// disconnected and partial tiers in closed form, the connected tier by
/// adaptive quadrature over `p1, p2` after eliminating the energy delta.
pub fn three_photon_out_wavefunction(
    p: &TWGParams,
    k: [f64; 3],
    x: [f64; 3],
    cfg: &ThreePhotonOutConfig,
) -> Result<ThreePhotonOutValue> {
    let dens = ThreePhotonConnectedT::new(*p, k)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("x", "positions must be finite"));
    }
    let pre = prefactor();
    let t = k.map(|v| transmission_t(p, v));
    let plane: C64 = (0..3)
        .permutations(3)
        .map(|s| C64::from_polar(1.0, k[s[0]] * x[0] + k[s[1]] * x[1] + k[s[2]] * x[2]))
        .sum();
    let disconnected = pre * t[0] * t[1] * t[2] * plane;
    if p.is_decoupled() {
        return Ok(ThreePhotonOutValue {
            disconnected,
            partial: C64::new(0.0, 0.0),
            connected: C64::new(0.0, 0.0),
            connected_error: 0.0,
        });
    }
    let a = p.alpha();
    let g = p.gamma_t();
    let mut partial = C64::new(0.0, 0.0);
    for i in 0..3 {
        let (gi, di) = others(i);
        let e2 = k[gi] + k[di];
        let half = e2 / 2.0 - a;
        for j in 0..3 {
            let (l, b) = others(j);
            let pair = 2.0
                * g
                * g
                * C64::from_polar(1.0, e2 * (x[l] + x[b]) / 2.0)
                * (C64::i() * half * (x[l] - x[b]).abs()).exp()
                / ((k[gi] - a) * (k[di] - a));
            partial += t[i] * C64::from_polar(1.0, k[i] * x[j]) * pair;
        }
    }
    let (connected, err) = connected_fourier(&dens, x, cfg)?;
    Ok(ThreePhotonOutValue {
        disconnected,
        partial: pre * partial,
        connected: pre * connected,
        connected_error: pre * err,
    })
}

/// Fourier transform over the whole shell of the ridge model: the pair of
/// running momenta is integrated in closed form, leaving one integral over
/// the finite momentum per ridge.
fn ridge_fourier(
    dens: &ThreePhotonConnectedT,
    x: [f64; 3],
    cfg: &ThreePhotonOutConfig,
) -> Result<(C64, f64)> {
    let e = dens.total_energy();
    let g = dens.params.gamma_t();
    let a = dens.params.alpha();
    let omega = dens.params.omega_atom();
    let reach = cfg.ridge_window * g;
    let center = e / 3.0;
    let mut breaks = vec![omega, e - 2.0 * omega];
    breaks.extend(dens.k.iter().map(|&kb| e - kb - omega));
    let breaks: Vec<f64> = breaks
        .into_iter()
        .filter(|&b| (b - center).abs() < reach)
        .collect();
    let one_d = QuadratureConfig {
        max_intervals: cfg.quadrature.max_intervals.max(20_000),
        ..cfg.quadrature
    };
    let mut total = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for m in 0..3 {
        let (i, j) = others(m);
        let (xa, xb) = (x[i], x[j]);
        let r = integrate(
            |u| {
                let rest = e - u;
                let pair = -2.0 * PI * C64::i() / (rest - 2.0 * a)
                    * C64::from_polar(1.0, rest * (xa + xb) / 2.0)
                    * (C64::i() * (rest / 2.0 - a) * (xa - xb).abs()).exp();
                dens.ridge(u) * C64::from_polar(1.0, u * x[m]) * pair
            },
            center - reach,
            center + reach,
            &breaks,
            &one_d,
        )?;
        total += r.value;
        error += r.error;
    }
    Ok((total, error))
}

fn connected_fourier(
    dens: &ThreePhotonConnectedT,
    x: [f64; 3],
    cfg: &ThreePhotonOutConfig,
) -> Result<(C64, f64)> {
    let e = dens.total_energy();
    let g = dens.params.gamma_t();
    let center = e / 3.0;
    let w = cfg.window * g;
    let omega = dens.params.omega_atom();
    // Resonant lines of the density in each outgoing momentum.
    let mut lines = vec![omega];
    for &ki in &dens.k {
        lines.push(e - ki - omega);
    }
    let y1 = x[0] - x[2];
    let y2 = x[1] - x[2];
    let q_lines: Vec<f64> = lines.iter().map(|&v| v - center).collect();
    let inner_breaks = |q1: f64| -> Vec<f64> {
        let mut b: Vec<f64> = q_lines.clone();
        // p3 resonant: p3 = E - p1 - p2.
        for &v in &lines {
            b.push(e - v - (center + q1) - center);
        }
        b
    };
    let r = integrate_2d(
        |q1, q2| {
            let p1 = center + q1;
            let p2 = center + q2;
            let q = [p1, p2, e - p1 - p2];
            let mut v = dens.eval_unchecked(q);
            if cfg.ridge_window > 0.0 {
                v -= dens.ridge_model(q);
            }
            v * C64::from_polar(1.0, p1 * y1 + p2 * y2)
        },
        (-w, w),
        (-w, w),
        &q_lines,
        &inner_breaks,
        &cfg.quadrature,
    )?;
    let mut value = r.value * C64::from_polar(1.0, e * x[2]);
    let mut error = r.error;
    if cfg.ridge_window > 0.0 {
        let (v, err) = ridge_fourier(dens, x, cfg)?;
        value += v;
        error += err;
    }
    Ok((value, error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ridge_profile_is_the_large_momentum_limit() {
        let p = TWGParams::new(1.0, 1.0).unwrap();
        let t = ThreePhotonConnectedT::new(p, [0.7, 1.15, 1.4]).unwrap();
        let e = t.total_energy();
        for u in [-2.0, 0.3, 0.7, 1.0, 1.9, 4.0] {
            for r in [1e4, -1e4] {
                let q = [u, r, e - u - r];
                let exact = t.eval_unchecked(q);
                let a = p.alpha();
                let model = t.ridge(u) / ((q[1] - a) * (q[2] - a));
                assert!(
                    (exact - model).norm() < 1e-3 * exact.norm(),
                    "u={u} R={r}: {exact} vs {model}"
                );
            }
        }
    }
}
