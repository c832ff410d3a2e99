//! Parameter records, dispersion relations and two-photon kinematics.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{invalid, require_finite, Result};
use crate::C64;

/// Coupled-resonator array with a side-coupled emitter (lattice spacing 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCRAParams {
    omega_atom: f64,
    omega_cavity: f64,
    hopping: f64,
    coupling: f64,
    gamma: f64,
}

impl TCRAParams {
    pub fn new(omega_atom: f64, omega_cavity: f64, hopping: f64, coupling: f64) -> Result<Self> {
        require_finite("omega_atom", omega_atom)?;
        require_finite("omega_cavity", omega_cavity)?;
        require_finite("coupling", coupling)?;
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(invalid(
                "hopping",
                format!("must be positive, got {hopping}"),
            ));
        }
        Ok(Self {
            omega_atom,
            omega_cavity,
            hopping,
            coupling,
            gamma: coupling * coupling,
        })
    }

    /// Emitter level spacing.
    pub fn omega_atom(&self) -> f64 {
        self.omega_atom
    }

    /// Bare resonator frequency (band center).
    pub fn omega_cavity(&self) -> f64 {
        self.omega_cavity
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Hybridization strength, the squared coupling.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dispersion(&self) -> Dispersion {
        Dispersion::CosineBand {
            omega_cavity: self.omega_cavity,
            hopping: self.hopping,
        }
    }

    /// Lower and upper band edges.
    pub fn band(&self) -> (f64, f64) {
        (
            self.omega_cavity - 2.0 * self.hopping,
            self.omega_cavity + 2.0 * self.hopping,
        )
    }
}

/// Photon dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dispersion {
    /// Tight-binding band `omega_cavity - 2 J cos k`.
    CosineBand { omega_cavity: f64, hopping: f64 },
    /// Linearized dispersion `v_g |k|`.
    Linear { group_velocity: f64 },
}

impl Default for Dispersion {
    fn default() -> Self {
        Dispersion::Linear {
            group_velocity: 1.0,
        }
    }
}

impl Dispersion {
    pub fn eval(&self, k: f64) -> f64 {
        match *self {
            Dispersion::CosineBand {
                omega_cavity,
                hopping,
            } => omega_cavity - 2.0 * hopping * k.cos(),
            Dispersion::Linear { group_velocity } => group_velocity * k.abs(),
        }
    }

    /// Derivative of the energy with respect to k.
    pub fn group_velocity(&self, k: f64) -> f64 {
        match *self {
            Dispersion::CosineBand { hopping, .. } => 2.0 * hopping * k.sin(),
            Dispersion::Linear { group_velocity } => group_velocity * k.signum(),
        }
    }
}

/// Linearized single-waveguide (e-channel) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TWGParams {
    omega_atom: f64,
    gamma_t: f64,
    alpha: C64,
}

impl TWGParams {
    /// `gamma_t = 0` is accepted and describes a decoupled emitter; every
    /// connected amplitude is then exactly zero.
    pub fn new(omega_atom: f64, gamma_t: f64) -> Result<Self> {
        require_finite("omega_atom", omega_atom)?;
        if !(gamma_t.is_finite() && gamma_t >= 0.0) {
            return Err(invalid(
                "gamma_t",
                format!("must be non-negative, got {gamma_t}"),
            ));
        }
        Ok(Self {
            omega_atom,
            gamma_t,
            alpha: C64::new(omega_atom, -0.5 * gamma_t),
        })
    }

    /// Build from the real-space coupling `V` of the waveguide-emitter term,
    /// using `gamma_t = 2 V^2`.
    pub fn from_coupling(omega_atom: f64, coupling: f64) -> Result<Self> {
        require_finite("coupling", coupling)?;
        Self::new(omega_atom, 2.0 * coupling * coupling)
    }

    pub fn omega_atom(&self) -> f64 {
        self.omega_atom
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    /// Complex pole `omega_atom - i gamma_t / 2`.
    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn is_decoupled(&self) -> bool {
        self.gamma_t == 0.0
    }
}

/// Two-waveguide emitter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HWGParams {
    omega_atom: f64,
    vbar: [f64; 2],
    group_velocity: [f64; 2],
    gamma_e: f64,
    alpha_h: C64,
}

impl HWGParams {
    pub fn new(omega_atom: f64, vbar1: f64, vbar2: f64) -> Result<Self> {
        Self::with_group_velocity(omega_atom, [vbar1, vbar2], [1.0, 1.0])
    }

    pub fn with_group_velocity(
        omega_atom: f64,
        vbar: [f64; 2],
        group_velocity: [f64; 2],
    ) -> Result<Self> {
        require_finite("omega_atom", omega_atom)?;
        require_finite("vbar1", vbar[0])?;
        require_finite("vbar2", vbar[1])?;
        for v in group_velocity {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    "group_velocity",
                    format!("must be positive, got {v}"),
                ));
            }
        }
        let gamma_e = vbar[0] * vbar[0] / group_velocity[0] + vbar[1] * vbar[1] / group_velocity[1];
        Ok(Self {
            omega_atom,
            vbar,
            group_velocity,
            gamma_e,
            alpha_h: C64::new(omega_atom, -0.5 * gamma_e),
        })
    }

    pub fn omega_atom(&self) -> f64 {
        self.omega_atom
    }

    pub fn vbar(&self) -> [f64; 2] {
        self.vbar
    }

    pub fn group_velocity(&self) -> [f64; 2] {
        self.group_velocity
    }

    /// Total emitter decay rate into both waveguides.
    pub fn gamma_e(&self) -> f64 {
        self.gamma_e
    }

    pub fn alpha_h(&self) -> C64 {
        self.alpha_h
    }

    /// Both couplings zero: photons pass without touching the emitter.
    pub fn is_decoupled(&self) -> bool {
        self.gamma_e == 0.0
    }

    /// Same emitter with the two waveguides exchanged.
    pub fn swapped(&self) -> Self {
        Self::with_group_velocity(
            self.omega_atom,
            [self.vbar[1], self.vbar[0]],
            [self.group_velocity[1], self.group_velocity[0]],
        )
        .expect("swapping valid parameters stays valid")
    }

    pub(crate) fn has_unit_velocities(&self) -> bool {
        self.group_velocity == [1.0, 1.0]
    }
}

/// Even/odd recombination of counter-propagating modes at momentum `k`.
///
/// Rows are the (e, o) outputs, columns the (a_k, a_{-k}) inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EoMixing {
    pub k: f64,
    pub matrix: [[f64; 2]; 2],
}

pub fn eo_decompose(k: f64) -> Result<EoMixing> {
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be positive, got {k}")));
    }
    Ok(EoMixing {
        k,
        matrix: [
            [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ],
    })
}

impl EoMixing {
    /// Map amplitudes on (k, -k) to (e, o).
    pub fn apply(&self, forward: C64, backward: C64) -> (C64, C64) {
        let m = &self.matrix;
        (
            forward * m[0][0] + backward * m[0][1],
            forward * m[1][0] + backward * m[1][1],
        )
    }

    /// Map (e, o) amplitudes back to (k, -k).
    pub fn invert(&self, even: C64, odd: C64) -> (C64, C64) {
        let m = &self.matrix;
        (
            even * m[0][0] + odd * m[1][0],
            even * m[0][1] + odd * m[1][1],
        )
    }
}

/// Center-of-mass / relative variables for two photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonKinematics {
    pub total_energy: f64,
    pub relative_momentum: f64,
    pub center: f64,
    pub relative: f64,
}

impl TwoPhotonKinematics {
    pub fn from_particles(k1: f64, k2: f64, x1: f64, x2: f64) -> Self {
        Self {
            total_energy: k1 + k2,
            relative_momentum: 0.5 * (k1 - k2),
            center: 0.5 * (x1 + x2),
            relative: x1 - x2,
        }
    }

    pub fn momenta(&self) -> (f64, f64) {
        (
            0.5 * self.total_energy + self.relative_momentum,
            0.5 * self.total_energy - self.relative_momentum,
        )
    }

    pub fn positions(&self) -> (f64, f64) {
        (
            self.center + 0.5 * self.relative,
            self.center - 0.5 * self.relative,
        )
    }
}
