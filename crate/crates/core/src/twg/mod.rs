//! Linearized single-waveguide scattering: one, two and three photons.
//!
//! All S-matrices here are for e-channel photons with dispersion `|k|` and
//! continuum (Dirac delta) normalization. Connected densities returned by
//! the `*_t` functions already include the factor `i` with which they enter
//! the S-matrix.

mod three;

pub use three::{
    three_photon_connected_t, three_photon_fluorescence, three_photon_out_wavefunction,
    three_photon_s, ThreePhotonConnectedT, ThreePhotonOutConfig, ThreePhotonOutValue,
};

use std::f64::consts::PI;

use crate::amplitude::{ConnectedDensity, DisconnectedTerm, LegPin, ScatteringAmplitudeSet};
use crate::error::{Error, Result};
use crate::model::TWGParams;
use crate::C64;

pub(crate) const SHELL_TOL: f64 = 1e-9;

pub(crate) fn check_shell(incoming: f64, outgoing: f64) -> Result<()> {
    let mismatch = outgoing - incoming;
    if mismatch.abs() > SHELL_TOL * (1.0 + incoming.abs()) {
        return Err(Error::OffShell { mismatch });
    }
    Ok(())
}

/// Single-photon transmission `(k - alpha*) / (k - alpha)`, a pure phase.
pub fn transmission_t(p: &TWGParams, k: f64) -> C64 {
    if p.is_decoupled() {
        return C64::new(1.0, 0.0);
    }
    let a = p.alpha();
    (k - a.conj()) / (k - a)
}

/// Connected two-photon density (coefficient of `delta(k1 + k2 - p1 - p2)`).
pub fn two_photon_t(p: &TWGParams, k1: f64, k2: f64, p1: f64, p2: f64) -> Result<C64> {
    check_shell(k1 + k2, p1 + p2)?;
    Ok(two_photon_t_unchecked(p, k1, k2, p1, p2))
}

pub(crate) fn two_photon_t_unchecked(p: &TWGParams, k1: f64, k2: f64, p1: f64, p2: f64) -> C64 {
    two_photon_t_at(p, k1, k2, C64::new(p1, 0.0), C64::new(p2, 0.0))
}

/// Connected two-photon density continued to complex outgoing momenta
/// (used to locate its poles).
pub fn two_photon_t_at(p: &TWGParams, k1: f64, k2: f64, p1: C64, p2: C64) -> C64 {
    if p.is_decoupled() {
        return C64::new(0.0, 0.0);
    }
    let g = p.gamma_t();
    let a = p.alpha();
    C64::i() * (g * g / PI) * (k1 + k2 - 2.0 * a) / ((p2 - a) * (k1 - a) * (p1 - a) * (k2 - a))
}

/// Two-photon S-matrix: `t1 t2` on both pairings plus the connected density.
pub fn two_photon_s(p: &TWGParams, k1: f64, k2: f64) -> ScatteringAmplitudeSet {
    let w = transmission_t(p, k1) * transmission_t(p, k2);
    let pins = |a: f64, b: f64| {
        vec![
            LegPin {
                outgoing: 0,
                momentum: a,
            },
            LegPin {
                outgoing: 1,
                momentum: b,
            },
        ]
    };
    let params = *p;
    let connected = (!p.is_decoupled()).then(|| {
        ConnectedDensity::new(vec![0, 1], k1 + k2, move |q| {
            two_photon_t_unchecked(&params, k1, k2, q[0], q[1])
        })
    });
    ScatteringAmplitudeSet::new(
        vec![k1, k2],
        vec![
            DisconnectedTerm {
                pins: pins(k1, k2),
                weight: w,
            },
            DisconnectedTerm {
                pins: pins(k2, k1),
                weight: w,
            },
        ],
        vec![],
        connected,
    )
}

/// `|T|^2` of the connected two-photon density with `p2 = k1 + k2 - p1`.
pub fn two_photon_fluorescence(p: &TWGParams, k1: f64, k2: f64, p1: f64) -> f64 {
    two_photon_t_unchecked(p, k1, k2, p1, k1 + k2 - p1).norm_sqr()
}

/// Closed-form two-photon out-state in center/relative coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonOutState {
    pub params: TWGParams,
    pub k1: f64,
    pub k2: f64,
}

impl TwoPhotonOutState {
    pub fn new(params: TWGParams, k1: f64, k2: f64) -> Self {
        Self { params, k1, k2 }
    }

    pub fn total_energy(&self) -> f64 {
        self.k1 + self.k2
    }

    pub fn relative_momentum(&self) -> f64 {
        0.5 * (self.k1 - self.k2)
    }

    /// Plane-wave part `t1 t2 cos(dk x) / 2 pi`, without the center phase.
    pub fn plane_wave(&self, x: f64) -> C64 {
        transmission_t(&self.params, self.k1)
            * transmission_t(&self.params, self.k2)
            * (self.relative_momentum() * x).cos()
            / (2.0 * PI)
    }

    /// Bound part, decaying in `|x|` at rate `gamma_t / 2` when `E = 2 omega_atom`.
    pub fn bound(&self, x: f64) -> C64 {
        let g = self.params.gamma_t();
        if g == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let z = C64::new(self.total_energy() - 2.0 * self.params.omega_atom(), g);
        let d = self.relative_momentum();
        -4.0 * g * g * (C64::i() * z * x.abs() / 2.0).exp() / (4.0 * d * d - z * z) / (2.0 * PI)
    }

    /// Relative-coordinate envelope (the out-state without `exp(i E x_c)`).
    pub fn envelope(&self, x: f64) -> C64 {
        self.plane_wave(x) + self.bound(x)
    }

    pub fn eval(&self, xc: f64, x: f64) -> C64 {
        C64::from_polar(1.0, self.total_energy() * xc) * self.envelope(x)
    }
}

pub fn two_photon_out_wavefunction(p: &TWGParams, k1: f64, k2: f64, xc: f64, x: f64) -> C64 {
    TwoPhotonOutState::new(*p, k1, k2).eval(xc, x)
}
