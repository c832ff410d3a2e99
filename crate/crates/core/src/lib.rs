//! Few-photon scattering off a single two-level emitter.
//!
//! The crate covers two geometries:
//!
//! * a coupled-resonator array (tight-binding chain) with a side-coupled
//!   emitter, solved exactly for single-photon reflection and for the two
//!   photon-emitter bound states that sit outside the band ([`tcra`]);
//! * linearized (chiral) waveguides, where the emitter couples to one
//!   waveguide ([`twg`]) or bridges two of them ([`hwg`]). Here the
//!   multi-photon S-matrices are assembled from disconnected products of
//!   single-photon amplitudes plus connected T-matrix densities.
//!
//! A Bethe-ansatz eigenstate builder ([`bethe`]) and a finite-lattice
//! exact-diagonalization / time-evolution oracle ([`lattice`]) provide
//! independent routes used to cross-check the analytic results, and
//! [`validation`] bundles the acceptance checks that the CLI exposes.

pub mod amplitude;
pub mod bethe;
mod error;
pub mod hwg;
pub mod lattice;
pub mod model;
pub mod quadrature;
mod special;
pub mod tcra;
pub mod twg;
pub mod validation;

pub use amplitude::{
    ConnectedDensity, DisconnectedTerm, LegPin, PartialTerm, ScatteringAmplitudeSet,
};
pub use error::{Error, Result};
pub use model::{Dispersion, EoMixing, HWGParams, TCRAParams, TWGParams, TwoPhotonKinematics};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
