//! Single-photon scattering and bound states on the cosine-band resonator array.

use crate::amplitude::{DisconnectedTerm, LegPin, ScatteringAmplitudeSet};
use crate::error::{invalid, require_finite, Error, Result};
use crate::model::TCRAParams;
use crate::C64;

const EDGE_SIN_MIN: f64 = 1e-9;

fn check_momentum(k: f64) -> Result<f64> {
    require_finite("k", k)?;
    if k <= 0.0 || k >= std::f64::consts::PI {
        return Err(invalid(
            "k",
            format!("must lie strictly inside (0, pi), got {k}"),
        ));
    }
    let s = k.sin();
    if s.abs() < EDGE_SIN_MIN {
        return Err(Error::BandEdgeMomentum { k, sin_k: s });
    }
    Ok(s)
}

/// Reflection amplitude `r_k` of a right-moving photon; transmission is `1 + r_k`.
pub fn reflection_amplitude(p: &TCRAParams, k: f64) -> Result<C64> {
    let s = check_momentum(k)?;
    let detuning = p.dispersion().eval(k) - p.omega_atom();
    let g = C64::new(0.0, p.gamma());
    Ok(-g / (2.0 * p.hopping() * s * detuning + g))
}

pub fn transmission_amplitude(p: &TCRAParams, k: f64) -> Result<C64> {
    Ok(1.0 + reflection_amplitude(p, k)?)
}

/// Outgoing momentum `k` carries `1 + r_k`, momentum `-k` carries `r_k`.
pub fn single_photon_s_matrix(p: &TCRAParams, k: f64) -> Result<ScatteringAmplitudeSet> {
    let r = reflection_amplitude(p, k)?;
    let pin = |momentum| {
        vec![LegPin {
            outgoing: 0,
            momentum,
        }]
    };
    Ok(ScatteringAmplitudeSet::new(
        vec![k],
        vec![
            DisconnectedTerm {
                pins: pin(k),
                weight: 1.0 + r,
            },
            DisconnectedTerm {
                pins: pin(-k),
                weight: r,
            },
        ],
        vec![],
        None,
    ))
}

/// Emitter self-energy from the resonator band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfEnergy {
    pub real_part: f64,
    /// `gamma * dos / 2` inside the band, zero outside.
    pub imag_part: f64,
    /// Resonator density of states, zero outside the band.
    pub dos: f64,
}

pub fn self_energy(p: &TCRAParams, omega: f64) -> Result<SelfEnergy> {
    require_finite("omega", omega)?;
    let d = omega - p.omega_cavity();
    let w = 2.0 * p.hopping();
    let gap = d * d - w * w;
    if gap == 0.0 || (d.abs() - w).abs() <= 4.0 * f64::EPSILON * w {
        return Err(Error::BandEdgeEnergy { energy: omega });
    }
    if gap < 0.0 {
        let dos = 2.0 / (-gap).sqrt();
        Ok(SelfEnergy {
            real_part: 0.0,
            imag_part: 0.5 * p.gamma() * dos,
            dos,
        })
    } else {
        Ok(SelfEnergy {
            real_part: -p.gamma() * d.signum() / gap.sqrt(),
            imag_part: 0.0,
            dos: 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Below the band bottom.
    Lower,
    /// Above the band top; its profile alternates in sign.
    Upper,
}

/// Photon-emitter bound state outside the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub branch: Branch,
    /// `ln kappa`, negative.
    pub decay_log: f64,
    /// Resonator amplitude at the emitter site for unit emitter amplitude.
    pub amplitude: f64,
    pub sign_alternating: bool,
    /// Bound-state equation evaluated at `energy`.
    pub residual: f64,
}

/// Left-hand side of the bound-state equation,
/// `E - omega_atom - gamma sign(E - w0) / sqrt((E - w0)^2 - 4 J^2)`.
pub fn bound_state_residual(p: &TCRAParams, energy: f64) -> f64 {
    let d = energy - p.omega_cavity();
    let w = 2.0 * p.hopping();
    let s = d.abs() - w;
    energy - p.omega_atom() - p.gamma() * d.signum() / (s * (s + 2.0 * w)).sqrt()
}

/// Decay factor `kappa` of the branch at `energy` (outside the band).
pub fn kappa(p: &TCRAParams, energy: f64, branch: Branch) -> f64 {
    let u = (energy - p.omega_cavity()) / (2.0 * p.hopping());
    let root = (u * u - 1.0).sqrt();
    match branch {
        // -sqrt(u^2-1) - (w0-E)/2J = u - sqrt(u^2-1)
        Branch::Upper => 1.0 / (u + root),
        // -sqrt(u^2-1) + (w0-E)/2J = -(u + sqrt(u^2-1)) = |u| - sqrt(u^2-1)
        Branch::Lower => 1.0 / (-u + root),
    }
}

/// Both bound states, lower first.
pub fn bound_state_energies(p: &TCRAParams) -> Result<(BoundState, BoundState)> {
    if p.gamma() <= 0.0 {
        return Err(invalid("coupling", "bound states need a nonzero coupling"));
    }
    Ok((
        solve_branch(p, Branch::Lower)?,
        solve_branch(p, Branch::Upper)?,
    ))
}

/// Root of the bound-state equation on one side of the band, parametrized by
/// the distance `s > 0` from the band edge so that `(E-w0)^2 - 4J^2 = s (s + 4J)`
/// is evaluated without cancellation.
fn solve_branch(p: &TCRAParams, branch: Branch) -> Result<BoundState> {
    let w = 2.0 * p.hopping();
    let sign = match branch {
        Branch::Upper => 1.0,
        Branch::Lower => -1.0,
    };
    let edge = p.omega_cavity() + sign * w;
    // Increasing in s for both branches after multiplying by `sign`.
    let f =
        |s: f64| sign * (edge + sign * s - p.omega_atom()) - p.gamma() / (s * (s + 2.0 * w)).sqrt();
    let df = |s: f64| {
        let q = s * (s + 2.0 * w);
        1.0 + p.gamma() * (s + w) / (q * q.sqrt())
    };

    let mut lo = w * 1e-3;
    let mut steps = 0;
    while f(lo) > 0.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 || lo == 0.0 {
            return Err(Error::RootSearch(format!("{branch:?}: no lower bracket")));
        }
    }
    let mut hi = (p.omega_atom() - p.omega_cavity()).abs() + w + 10.0 * p.gamma() + 1.0;
    steps = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 || !hi.is_finite() {
            return Err(Error::RootSearch(format!("{branch:?}: no upper bracket")));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..3 {
        let next = s - f(s) / df(s);
        if next > 0.0 && (next - s).abs() <= (hi - lo).max(f64::EPSILON * s) * 4.0 {
            s = next;
        }
    }
    let energy = edge + sign * s;
    let kap = kappa(p, energy, branch);
    if !(kap > 0.0 && kap < 1.0) {
        return Err(Error::RootSearch(format!(
            "{branch:?}: kappa {kap} outside (0, 1)"
        )));
    }
    Ok(BoundState {
        energy,
        branch,
        decay_log: kap.ln(),
        amplitude: p.coupling() / (s * (s + 2.0 * w)).sqrt(),
        sign_alternating: branch == Branch::Upper,
        residual: bound_state_residual(p, energy),
    })
}

/// Resonator amplitude of the bound state at site `x` (emitter amplitude 1).
pub fn bound_state_wavefunction(b: &BoundState, p: &TCRAParams, x: i64) -> Result<f64> {
    let d = b.energy - p.omega_cavity();
    let w = 2.0 * p.hopping();
    let expected = match b.branch {
        Branch::Upper => d > w,
        Branch::Lower => d < -w,
    };
    if !expected || b.sign_alternating != (b.branch == Branch::Upper) {
        return Err(invalid("bound_state", "branch does not match the energy"));
    }
    let kap = kappa(p, b.energy, b.branch);
    if (kap.ln() - b.decay_log).abs() > 1e-12 * (1.0 + b.decay_log.abs()) {
        return Err(invalid(
            "bound_state",
            "state was built for different parameters",
        ));
    }
    let n = x.unsigned_abs();
    let sign = if b.sign_alternating && n % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let s = d.abs() - w;
    let amp = p.coupling() / (s * (s + 2.0 * w)).sqrt();
    Ok(sign * amp * (n as f64 * b.decay_log).exp())
}
