//! Emitter bridging two linearized waveguides: channel-resolved one- and
//! two-photon scattering, pair wavefunctions and correlations.
//!
//! Only even (e) photons couple to the emitter; odd photons pass freely and
//! are not represented here.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::amplitude::{ConnectedDensity, DisconnectedTerm, LegPin, ScatteringAmplitudeSet};
use crate::error::{invalid, Error, Result};
use crate::model::HWGParams;
use crate::twg::check_shell;
use crate::C64;

fn require_unit_velocities(p: &HWGParams) -> Result<()> {
    if p.has_unit_velocities() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "closed forms are only available for unit group velocities in both waveguides".into(),
        ))
    }
}

/// Single-photon amplitudes at momentum `k`: staying in the incident
/// waveguide (`t11` from waveguide 1, `t22` from waveguide 2) or switching
/// (`t21`, symmetric in the two directions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelAmplitudes {
    pub k: f64,
    pub t11: C64,
    pub t21: C64,
    pub t22: C64,
}

pub fn channel_amplitudes(p: &HWGParams, k: f64) -> Result<ChannelAmplitudes> {
    require_unit_velocities(p)?;
    if p.is_decoupled() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        return Ok(ChannelAmplitudes {
            k,
            t11: one,
            t21: zero,
            t22: one,
        });
    }
    let [v1, v2] = p.vbar();
    let (a, b) = (v1 * v1, v2 * v2);
    let den = C64::new(k - p.omega_atom(), 0.5 * (a + b));
    Ok(ChannelAmplitudes {
        k,
        t11: C64::new(k - p.omega_atom(), 0.5 * (b - a)) / den,
        t21: C64::new(0.0, -v1 * v2) / den,
        t22: C64::new(k - p.omega_atom(), 0.5 * (a - b)) / den,
    })
}

/// Waveguide labels of a two-photon T-matrix element: incoming `(i1, i2)`
/// for momenta `(k1, k2)`, outgoing `(j1, j2)` for `(p1, p2)`. Labels are 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelLabels {
    pub incoming: [u8; 2],
    pub outgoing: [u8; 2],
}

impl ChannelLabels {
    pub fn new(incoming: [u8; 2], outgoing: [u8; 2]) -> Result<Self> {
        if incoming
            .iter()
            .chain(outgoing.iter())
            .any(|&c| c != 1 && c != 2)
        {
            return Err(invalid("channels", "waveguide labels must be 1 or 2"));
        }
        Ok(Self { incoming, outgoing })
    }
}

/// Connected two-photon density between the given waveguide labels.
pub fn two_photon_t_h(
    p: &HWGParams,
    channels: ChannelLabels,
    k1: f64,
    k2: f64,
    p1: f64,
    p2: f64,
) -> Result<C64> {
    check_shell(k1 + k2, p1 + p2)?;
    let vb = p.vbar();
    let v = |c: u8| vb[c as usize - 1];
    let pref = v(channels.incoming[0])
        * v(channels.incoming[1])
        * v(channels.outgoing[0])
        * v(channels.outgoing[1]);
    Ok(pair_density(p, pref, k1, k2, p1, p2))
}

fn pair_density(p: &HWGParams, pref: f64, k1: f64, k2: f64, p1: f64, p2: f64) -> C64 {
    if p.is_decoupled() {
        return C64::new(0.0, 0.0);
    }
    let a = p.alpha_h();
    C64::i() * (pref / PI) * (k1 + k2 - 2.0 * a) / ((p2 - a) * (k1 - a) * (p1 - a) * (k2 - a))
}

/// Outgoing waveguide pair of a two-photon amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelPair {
    P11,
    P12,
    P22,
}

impl ChannelPair {
    pub const ALL: [ChannelPair; 3] = [ChannelPair::P11, ChannelPair::P12, ChannelPair::P22];
}

impl fmt::Display for ChannelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelPair::P11 => "11",
            ChannelPair::P12 => "12",
            ChannelPair::P22 => "22",
        })
    }
}

impl FromStr for ChannelPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "11" | "1,1" => Ok(ChannelPair::P11),
            "12" | "1,2" | "21" | "2,1" => Ok(ChannelPair::P12),
            "22" | "2,2" => Ok(ChannelPair::P22),
            other => Err(invalid(
                "pair",
                format!("expected 11, 12 or 22, got `{other}`"),
            )),
        }
    }
}

/// S-matrix for one photon incident in each waveguide (`k1` in waveguide 1,
/// `k2` in waveguide 2), split by outgoing waveguides. In `s12`, outgoing
/// leg 0 is in waveguide 1 and leg 1 in waveguide 2.
#[derive(Debug, Clone)]
pub struct HTwoPhotonS {
    pub s11: ScatteringAmplitudeSet,
    pub s12: ScatteringAmplitudeSet,
    pub s22: ScatteringAmplitudeSet,
}

impl HTwoPhotonS {
    pub fn get(&self, pair: ChannelPair) -> &ScatteringAmplitudeSet {
        match pair {
            ChannelPair::P11 => &self.s11,
            ChannelPair::P12 => &self.s12,
            ChannelPair::P22 => &self.s22,
        }
    }
}

pub fn two_photon_s_h(p: &HWGParams, k1: f64, k2: f64) -> Result<HTwoPhotonS> {
    let c1 = channel_amplitudes(p, k1)?;
    let c2 = channel_amplitudes(p, k2)?;
    let [v1, v2] = p.vbar();
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
    let both = |w: C64| {
        vec![
            DisconnectedTerm {
                pins: pins(k1, k2),
                weight: w,
            },
            DisconnectedTerm {
                pins: pins(k2, k1),
                weight: w,
            },
        ]
    };
    let params = *p;
    let connected = |pref: f64| {
        Some(ConnectedDensity::new(vec![0, 1], k1 + k2, move |q| {
            pair_density(&params, pref, k1, k2, q[0], q[1])
        }))
    };
    let set = |disc, pref| ScatteringAmplitudeSet::new(vec![k1, k2], disc, vec![], connected(pref));
    Ok(HTwoPhotonS {
        s11: set(both(c1.t11 * c2.t21), v2 * v1.powi(3)),
        s12: set(
            vec![
                DisconnectedTerm {
                    pins: pins(k1, k2),
                    weight: c1.t11 * c2.t22,
                },
                DisconnectedTerm {
                    pins: pins(k2, k1),
                    weight: c1.t21 * c2.t21,
                },
            ],
            v1 * v1 * v2 * v2,
        ),
        s22: set(both(c1.t21 * c2.t22), v1 * v2.powi(3)),
    })
}

/// Relative-coordinate wavefunctions of the outgoing pair for each
/// waveguide combination (center-of-mass phase `exp(i E x_c)` omitted).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWavefunctions {
    params: HWGParams,
    k1: f64,
    k2: f64,
    c1: ChannelAmplitudes,
    c2: ChannelAmplitudes,
}

pub fn pair_wavefunctions(p: &HWGParams, k1: f64, k2: f64) -> Result<PairWavefunctions> {
    Ok(PairWavefunctions {
        params: *p,
        k1,
        k2,
        c1: channel_amplitudes(p, k1)?,
        c2: channel_amplitudes(p, k2)?,
    })
}

impl PairWavefunctions {
    pub fn total_energy(&self) -> f64 {
        self.k1 + self.k2
    }

    pub fn relative_momentum(&self) -> f64 {
        0.5 * (self.k1 - self.k2)
    }

    /// `exp(i (E/2 - alpha_h) |x|) / (4 dk^2 - (E - 2 alpha_h)^2)`.
    fn bound_shape(&self, x: f64) -> C64 {
        if self.params.is_decoupled() {
            return C64::new(0.0, 0.0);
        }
        let a = self.params.alpha_h();
        let e = self.total_energy();
        let d = self.relative_momentum();
        let z = e - 2.0 * a;
        (C64::i() * (0.5 * e - a) * x.abs()).exp() / (4.0 * d * d - z * z)
    }

    pub fn g11(&self, x: f64) -> C64 {
        let [v1, v2] = self.params.vbar();
        let dk = self.relative_momentum();
        (self.c1.t11 * self.c2.t21 * (dk * x).cos() - 4.0 * v2 * v1.powi(3) * self.bound_shape(x))
            / (2.0 * PI)
    }

    pub fn g12(&self, x: f64) -> C64 {
        let [v1, v2] = self.params.vbar();
        let dk = self.relative_momentum();
        let direct = self.c1.t11 * self.c2.t22;
        let exchange = self.c1.t21 * self.c2.t21;
        ((direct + exchange) * (dk * x).cos() + C64::i() * (direct - exchange) * (dk * x).sin()
            - 8.0 * v1 * v1 * v2 * v2 * self.bound_shape(x))
            / (2.0 * PI)
    }

    pub fn g22(&self, x: f64) -> C64 {
        let [v1, v2] = self.params.vbar();
        let dk = self.relative_momentum();
        (self.c1.t21 * self.c2.t22 * (dk * x).cos() - 4.0 * v1 * v2.powi(3) * self.bound_shape(x))
            / (2.0 * PI)
    }

    pub fn get(&self, pair: ChannelPair, x: f64) -> C64 {
        match pair {
            ChannelPair::P11 => self.g11(x),
            ChannelPair::P12 => self.g12(x),
            ChannelPair::P22 => self.g22(x),
        }
    }
}

/// Equal-time-free second-order correlation `|g_pair(x)|^2`.
pub fn second_order_correlation(
    p: &HWGParams,
    pair: ChannelPair,
    k1: f64,
    k2: f64,
    x: f64,
) -> Result<f64> {
    Ok(pair_wavefunctions(p, k1, k2)?.get(pair, x).norm_sqr())
}
