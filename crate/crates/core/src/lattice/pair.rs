//! Two-excitation dynamics on an open T-type array.
//!
//! The state is a symmetric photon-pair amplitude `psi(i, j)` over resonator
//! sites plus an emitter-excited amplitude `e(i)` with one photon at site
//! `i`, normalized as `sum |psi|^2 + sum |e|^2 = 1`.

use super::propagate::{evolve, norm_sqr, Operator};
use super::{
    check_packet, gaussian, guard_weight_pair, packet_schedule, Boundary, LatticeKind,
    LatticeModel, PacketConfig,
};
use crate::error::{invalid, Error, Result};
use crate::C64;

struct PairOperator {
    n: usize,
    center: usize,
    w0: f64,
    hopping: f64,
    omega: f64,
    coupling: f64,
}

impl PairOperator {
    fn hop(&self, x: &[C64], i: usize) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        if i > 0 {
            acc += x[i - 1];
        }
        if i + 1 < self.n {
            acc += x[i + 1];
        }
        acc * (-self.hopping)
    }
}

impl Operator for PairOperator {
    fn dim(&self) -> usize {
        self.n * self.n + self.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n;
        let (psi, e) = x.split_at(n * n);
        let (ypsi, ye) = y.split_at_mut(n * n);
        let v = self.coupling / std::f64::consts::SQRT_2;
        for i in 0..n {
            for j in 0..n {
                let mut acc = psi[i * n + j] * (2.0 * self.w0);
                if i > 0 {
                    acc -= psi[(i - 1) * n + j] * self.hopping;
                }
                if i + 1 < n {
                    acc -= psi[(i + 1) * n + j] * self.hopping;
                }
                if j > 0 {
                    acc -= psi[i * n + j - 1] * self.hopping;
                }
                if j + 1 < n {
                    acc -= psi[i * n + j + 1] * self.hopping;
                }
                if i == self.center {
                    acc += e[j] * v;
                }
                if j == self.center {
                    acc += e[i] * v;
                }
                ypsi[i * n + j] = acc;
            }
        }
        let c = self.center;
        for i in 0..n {
            ye[i] = e[i] * (self.omega + self.w0)
                + self.hop(e, i)
                + psi[c * n + i] * (std::f64::consts::SQRT_2 * self.coupling);
        }
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let spread = 4.0 * self.hopping + 2.0 * self.coupling.abs();
        let lo = (2.0 * self.w0).min(self.omega + self.w0) - spread;
        let hi = (2.0 * self.w0).max(self.omega + self.w0) + spread;
        (lo, hi)
    }
}

/// Two-photon run settings: one Gaussian per photon, both starting at the
/// same position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRunConfig {
    pub k1: f64,
    pub k2: f64,
    pub width: f64,
    pub duration: Option<f64>,
    /// Relative distances (in sites) over which the plateau density is averaged.
    pub plateau: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub duration: f64,
    /// Density of the transmitted pair (both photons right of the emitter)
    /// against relative distance `|x1 - x2|`, starting at 0.
    pub relative_density: Vec<f64>,
    /// Same for the emitter-free evolution of the same initial state.
    pub free_relative_density: Vec<f64>,
    pub transmitted_weight: f64,
    /// `(rho(0) / plateau)` of the scattered run over the same ratio of the
    /// free run; 1 means no correlation induced by the emitter.
    pub bunching_indicator: f64,
    pub norm_drift: f64,
}

fn run(
    m: &LatticeModel,
    op: &PairOperator,
    cfg: &PairRunConfig,
    x0: f64,
    duration: f64,
) -> Result<Vec<C64>> {
    let n = m.size();
    let half = m.half();
    let phi = |k: f64| -> Vec<C64> {
        (-half..=half)
            .map(|x| gaussian(x as f64, x0, cfg.width, k))
            .collect()
    };
    let (a, b) = (phi(cfg.k1), phi(cfg.k2));
    let mut state = vec![C64::new(0.0, 0.0); op.dim()];
    for i in 0..n {
        for j in 0..n {
            state[i * n + j] = a[i] * b[j] + a[j] * b[i];
        }
    }
    let norm = norm_sqr(&state).sqrt();
    for z in state.iter_mut() {
        *z /= norm;
    }
    evolve(op, &mut state, duration);
    let leak = guard_weight_pair(m, &state[..n * n]);
    if leak > 1e-6 {
        return Err(Error::Boundary { weight: leak });
    }
    Ok(state)
}

fn relative_density(m: &LatticeModel, state: &[C64]) -> (Vec<f64>, f64) {
    let n = m.size();
    let c = m.half() as usize;
    let mut rho = vec![0.0; n];
    let mut total = 0.0;
    for i in c + 1..n {
        for j in c + 1..n {
            let w = state[i * n + j].norm_sqr();
            rho[i.abs_diff(j)] += w;
            total += w;
        }
    }
    (rho, total)
}

fn ratio(rho: &[f64], plateau: (usize, usize)) -> f64 {
    let (a, b) = plateau;
    let mean = rho[a..=b].iter().sum::<f64>() / (b - a + 1) as f64;
    rho[0] / mean
}

/// Scatter a photon pair off the emitter and measure how the emitter changes
/// the relative-distance distribution of the transmitted pair.
pub fn two_excitation_check(m: &LatticeModel, cfg: &PairRunConfig) -> Result<PairReport> {
    let LatticeKind::T(p) = *m.kind() else {
        return Err(Error::Unsupported(
            "two-excitation runs need a T-type array".into(),
        ));
    };
    if m.boundary() != Boundary::Open {
        return Err(Error::Unsupported(
            "two-excitation runs use open boundaries".into(),
        ));
    }
    if m.size() > 401 {
        return Err(invalid(
            "size",
            "two-excitation runs are limited to 401 sites",
        ));
    }
    for k in [cfg.k1, cfg.k2] {
        check_packet(
            m,
            &PacketConfig {
                k0: k,
                width: cfg.width,
                duration: None,
            },
            1.0,
        )?;
    }
    let (a, b) = cfg.plateau;
    if !(a < b && b < m.size()) {
        return Err(invalid("plateau", "need start < end < size"));
    }
    let v_slow = 2.0 * p.hopping() * cfg.k1.sin().min(cfg.k2.sin());
    let (x0, duration) = packet_schedule(
        m,
        &PacketConfig {
            k0: cfg.k1,
            width: cfg.width,
            duration: cfg.duration,
        },
        v_slow,
    );
    let op = PairOperator {
        n: m.size(),
        center: m.half() as usize,
        w0: p.omega_cavity(),
        hopping: p.hopping(),
        omega: p.omega_atom(),
        coupling: p.coupling(),
    };
    let free = PairOperator {
        coupling: 0.0,
        ..op
    };
    let scattered = run(m, &op, cfg, x0, duration)?;
    let reference = run(m, &free, cfg, x0, duration)?;
    let (rho, weight) = relative_density(m, &scattered);
    let (rho_free, _) = relative_density(m, &reference);
    Ok(PairReport {
        duration,
        bunching_indicator: ratio(&rho, cfg.plateau) / ratio(&rho_free, cfg.plateau),
        relative_density: rho,
        free_relative_density: rho_free,
        transmitted_weight: weight,
        norm_drift: (norm_sqr(&scattered) - 1.0).abs(),
    })
}

/// Evolve the symmetrized pair without the emitter coupling and return the
/// pair amplitude, for comparison with products of one-photon evolutions.
pub fn free_pair_evolution(m: &LatticeModel, cfg: &PairRunConfig) -> Result<Vec<C64>> {
    let LatticeKind::T(p) = *m.kind() else {
        return Err(Error::Unsupported(
            "two-excitation runs need a T-type array".into(),
        ));
    };
    let v_slow = 2.0 * p.hopping() * cfg.k1.sin().min(cfg.k2.sin());
    let (x0, duration) = packet_schedule(
        m,
        &PacketConfig {
            k0: cfg.k1,
            width: cfg.width,
            duration: cfg.duration,
        },
        v_slow,
    );
    let op = PairOperator {
        n: m.size(),
        center: m.half() as usize,
        w0: p.omega_cavity(),
        hopping: p.hopping(),
        omega: p.omega_atom(),
        coupling: 0.0,
    };
    let mut s = run(m, &op, cfg, x0, duration)?;
    s.truncate(m.size() * m.size());
    Ok(s)
}
