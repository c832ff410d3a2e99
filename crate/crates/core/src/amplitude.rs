//! Structured S-matrix values.
//!
//! An n-photon S-matrix element is a sum of terms, each carrying Dirac
//! deltas in the outgoing momenta. Deltas are never sampled: a term records
//! which outgoing legs are pinned to which momenta, and any smooth factor is
//! kept as a callable density restricted to its energy shell.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::C64;

/// `delta(p[outgoing] - momentum)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegPin {
    pub outgoing: usize,
    pub momentum: f64,
}

/// Product of pins times a constant weight (a product of one-photon amplitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct DisconnectedTerm {
    pub pins: Vec<LegPin>,
    pub weight: C64,
}

type DensityFn = dyn Fn(&[f64]) -> C64 + Send + Sync;

/// Smooth density on the shell `sum_{legs} p = energy`, multiplying one
/// delta of that shell.
#[derive(Clone)]
pub struct ConnectedDensity {
    legs: Vec<usize>,
    energy: f64,
    density: Arc<DensityFn>,
}

impl ConnectedDensity {
    pub fn new<F>(legs: Vec<usize>, energy: f64, density: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        Self {
            legs,
            energy,
            density: Arc::new(density),
        }
    }

    /// Outgoing leg indices the density depends on, in argument order.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    /// Energy carried by the shell constraint.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Evaluate with one momentum per entry of [`legs`](Self::legs). The
    /// caller is responsible for staying on the shell.
    pub fn eval(&self, momenta: &[f64]) -> C64 {
        (self.density)(momenta)
    }
}

impl fmt::Debug for ConnectedDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectedDensity")
            .field("legs", &self.legs)
            .field("energy", &self.energy)
            .finish_non_exhaustive()
    }
}

/// Some legs pinned, the rest carried by a connected density.
#[derive(Debug, Clone)]
pub struct PartialTerm {
    pub pins: Vec<LegPin>,
    pub weight: C64,
    pub connected: ConnectedDensity,
}

#[derive(Debug, Clone)]
pub struct ScatteringAmplitudeSet {
    incoming: Vec<f64>,
    disconnected: Vec<DisconnectedTerm>,
    partial: Vec<PartialTerm>,
    connected: Option<ConnectedDensity>,
}

impl ScatteringAmplitudeSet {
    pub fn new(
        incoming: Vec<f64>,
        disconnected: Vec<DisconnectedTerm>,
        partial: Vec<PartialTerm>,
        connected: Option<ConnectedDensity>,
    ) -> Self {
        Self {
            incoming,
            disconnected,
            partial,
            connected,
        }
    }

    pub fn photons(&self) -> usize {
        self.incoming.len()
    }

    pub fn incoming(&self) -> &[f64] {
        &self.incoming
    }

    pub fn total_energy(&self) -> f64 {
        self.incoming.iter().sum()
    }

    pub fn disconnected(&self) -> &[DisconnectedTerm] {
        &self.disconnected
    }

    pub fn partial(&self) -> &[PartialTerm] {
        &self.partial
    }

    pub fn connected(&self) -> Option<&ConnectedDensity> {
        self.connected.as_ref()
    }

    /// Whether every term is supported only where the outgoing momenta carry
    /// the incoming energy (pins plus shells add up to the total).
    pub fn conserves_energy(&self, tol: f64) -> bool {
        let e = self.total_energy();
        let n = self.photons();
        let full_pins = |pins: &[LegPin]| {
            let mut seen = vec![false; n];
            for pin in pins {
                seen[pin.outgoing] = true;
            }
            seen.iter().all(|&s| s)
        };
        let disc = self.disconnected.iter().all(|t| {
            full_pins(&t.pins) && (t.pins.iter().map(|p| p.momentum).sum::<f64>() - e).abs() <= tol
        });
        let part = self.partial.iter().all(|t| {
            let pinned: f64 = t.pins.iter().map(|p| p.momentum).sum();
            (pinned + t.connected.energy - e).abs() <= tol
                && t.pins.len() + t.connected.legs.len() == n
        });
        let conn = self
            .connected
            .as_ref()
            .is_none_or(|c| (c.energy - e).abs() <= tol && c.legs.len() == n);
        disc && part && conn
    }

    /// Matrix element on a ring of circumference `ring_length` with
    /// Kronecker-normalized momentum states `k = 2 pi n / L`.
    ///
    /// A continuum delta `delta(p - k)` becomes `(L / 2 pi) delta_{pk}` and
    /// each state picks up `sqrt(2 pi / L)`, so a term with `m` pinned or
    /// shell deltas over `n` legs scales as `(2 pi / L)^(n - m)`. Momenta are
    /// matched within `tol`.
    pub fn ring_element(&self, ring_length: f64, outgoing: &[f64], tol: f64) -> C64 {
        assert_eq!(
            outgoing.len(),
            self.photons(),
            "one momentum per outgoing leg"
        );
        let unit = 2.0 * PI / ring_length;
        let pinned = |pins: &[LegPin]| {
            pins.iter()
                .all(|pin| (outgoing[pin.outgoing] - pin.momentum).abs() <= tol)
        };
        let shell_value = |c: &ConnectedDensity| {
            let args: Vec<f64> = c.legs.iter().map(|&l| outgoing[l]).collect();
            if (args.iter().sum::<f64>() - c.energy).abs() <= tol {
                unit.powi(c.legs.len() as i32 - 1) * c.eval(&args)
            } else {
                C64::new(0.0, 0.0)
            }
        };
        let mut total = C64::new(0.0, 0.0);
        for term in &self.disconnected {
            if pinned(&term.pins) {
                total += term.weight;
            }
        }
        for term in &self.partial {
            if pinned(&term.pins) {
                total += term.weight * shell_value(&term.connected);
            }
        }
        if let Some(c) = &self.connected {
            total += shell_value(c);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_element_scaling() {
        let c = ConnectedDensity::new(vec![0, 1], 2.0, |p| C64::new(p[0] * p[1], 0.0));
        let set = ScatteringAmplitudeSet::new(
            vec![0.5, 1.5],
            vec![DisconnectedTerm {
                pins: vec![
                    LegPin {
                        outgoing: 0,
                        momentum: 0.5,
                    },
                    LegPin {
                        outgoing: 1,
                        momentum: 1.5,
                    },
                ],
                weight: C64::new(0.0, 1.0),
            }],
            vec![],
            Some(c),
        );
        assert!(set.conserves_energy(1e-12));
        let l = 100.0;
        let v = set.ring_element(l, &[0.5, 1.5], 1e-9);
        let expect = C64::new(0.75 * 2.0 * PI / l, 1.0);
        assert!((v - expect).norm() < 1e-14);
        assert_eq!(set.ring_element(l, &[0.6, 1.5], 1e-9), C64::new(0.0, 0.0));
    }
}
