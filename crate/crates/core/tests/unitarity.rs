//! Probability conservation of the two-photon S-matrices.
//!
//! The disconnected terms alone already carry total probability one, so the
//! connected density must satisfy an optical theorem: its interference with
//! the disconnected weights at the pinned momenta cancels its own squared
//! norm integrated over the energy shell. Identical photons in one
//! waveguide count each unordered outgoing pair once (factor 1/2).

use photon_scatter_core::hwg::{self, ChannelPair};
use photon_scatter_core::quadrature::{integrate, QuadratureConfig};
use photon_scatter_core::{twg, HWGParams, ScatteringAmplitudeSet, TWGParams, C64};

fn cfg() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        max_intervals: 4000,
    }
}

/// Interference of the disconnected terms with the connected density, and
/// the shell integral of `|T|^2`, for one outgoing sector.
fn sector(s: &ScatteringAmplitudeSet, omega: f64) -> (f64, f64) {
    let c = s.connected().expect("interacting set");
    let mut interference = 0.0;
    for term in s.disconnected() {
        let mut q = vec![0.0; s.photons()];
        for pin in &term.pins {
            q[pin.outgoing] = pin.momentum;
        }
        interference += 2.0 * (term.weight.conj() * c.eval(&q)).re;
    }
    let e = c.energy();
    let r = integrate(
        |p| C64::from(c.eval(&[p, e - p]).norm_sqr()),
        -3000.0,
        3000.0,
        &[omega, e - omega],
        &cfg(),
    )
    .unwrap();
    (interference, r.value.re)
}

#[test]
fn single_waveguide_pair_conserves_probability() {
    for (g, k1, k2) in [
        (1.0, 0.8, 1.3),
        (1.0, 1.0, 1.0),
        (0.4, 0.3, 2.0),
        (2.5, 1.7, -0.2),
    ] {
        let p = TWGParams::new(1.0, g).unwrap();
        let s = twg::two_photon_s(&p, k1, k2);
        let disc: f64 = s
            .disconnected()
            .iter()
            .map(|t| t.weight.norm_sqr())
            .sum::<f64>()
            / 2.0;
        assert!((disc - 1.0).abs() < 1e-14);
        let (inter, sq) = sector(&s, 1.0);
        // Both pinned points are the same unordered pair.
        let total = 0.5 * inter + 0.5 * sq;
        assert!(
            total.abs() < 1e-8 * sq,
            "G={g} k=({k1},{k2}): {inter} + {sq}"
        );
    }
}

#[test]
fn two_waveguide_pair_conserves_probability() {
    for (v1, v2, k1, k2) in [
        (1.0, 2.0, 0.8, 1.3),
        (2.0, 2.0, 1.0, 1.0),
        (0.5, 1.2, 0.3, 1.9),
    ] {
        let p = HWGParams::new(1.0, v1, v2).unwrap();
        let s = hwg::two_photon_s_h(&p, k1, k2).unwrap();
        let mut disc = 0.0;
        let mut conn = 0.0;
        for pair in ChannelPair::ALL {
            let set = s.get(pair);
            // Ordered outgoing legs in distinct waveguides, unordered in one.
            let weight = if pair == ChannelPair::P12 { 1.0 } else { 0.5 };
            disc += weight
                * set
                    .disconnected()
                    .iter()
                    .map(|t| t.weight.norm_sqr())
                    .sum::<f64>();
            let (inter, sq) = sector(set, 1.0);
            conn += weight * (inter + sq);
        }
        assert!(
            (disc - 1.0).abs() < 1e-14,
            "disconnected probability {disc}"
        );
        assert!(
            conn.abs() < 1e-8,
            "vbar=({v1},{v2}) k=({k1},{k2}): connected balance {conn}"
        );
    }
}
