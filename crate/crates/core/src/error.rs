use thiserror::Error;

/// Errors raised by the scattering evaluators and the lattice oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Group velocity vanishes (k at 0 or pi) so the scattering amplitude is undefined.
    #[error("momentum k = {k} sits on a band edge (|sin k| = {sin_k:e})")]
    BandEdgeMomentum { k: f64, sin_k: f64 },

    /// Energy at the band edge where the resonator density of states diverges.
    #[error("energy {energy} sits on a band edge of the resonator array")]
    BandEdgeEnergy { energy: f64 },

    /// Momenta that do not satisfy the energy-conservation shell.
    #[error("momenta are off the energy shell (mismatch {mismatch:e})")]
    OffShell { mismatch: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("root search failed: {0}")]
    RootSearch(String),

    #[error(
        "quadrature did not reach tolerance: estimate {estimate}, error {error:e}, {evaluations} evaluations"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// Wavepacket reached the guard zone before the measurement time.
    #[error("wavepacket reached the boundary guard zone (weight {weight:e} outside)")]
    Boundary { weight: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
