//! Out-states rebuilt from S-matrix elements on a ring of length `L`.
//!
//! Momenta are quantized as `2 pi n / L` and every delta-carrying term of the
//! S-matrix is turned into a Kronecker-normalized ring element by
//! `ScatteringAmplitudeSet::ring_element`. Summing those elements against
//! plane waves must reproduce the closed-form (or quadrature) out-states.

use std::f64::consts::PI;

use itertools::Itertools;
use photon_scatter_core::quadrature::QuadratureConfig;
use photon_scatter_core::twg::{self, ThreePhotonOutConfig};
use photon_scatter_core::{ScatteringAmplitudeSet, TWGParams, C64};

const L: f64 = 201.0;

fn unit() -> f64 {
    2.0 * PI / L
}

fn plane(p: &[f64], x: &[f64]) -> C64 {
    C64::from_polar(1.0, p.iter().zip(x).map(|(a, b)| a * b).sum())
}

fn prefactor() -> f64 {
    1.0 / (6.0 * (2.0 * PI).powf(1.5))
}

struct Case {
    k: [f64; 3],
    /// Grid index of `E / 3`.
    center: i64,
}

fn case(n: [i64; 3]) -> Case {
    let total: i64 = n.iter().sum();
    assert_eq!(total % 3, 0, "E/3 must sit on the ring grid");
    Case {
        k: n.map(|v| unit() * v as f64),
        center: total / 3,
    }
}

const POINTS: [[f64; 3]; 5] = [
    [0.5, 1.3, 2.1],
    [-1.0, 0.7, 3.2],
    [2.4, -0.6, 0.1],
    [4.0, 1.5, -2.5],
    [0.2, 3.7, 1.1],
];

#[test]
fn disconnected_tier_from_ring_elements() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    for c in [case([22, 36, 44]), case([32, 32, 32])] {
        let s = twg::three_photon_s(&p, c.k);
        let only =
            ScatteringAmplitudeSet::new(c.k.to_vec(), s.disconnected().to_vec(), vec![], None);
        let mut vectors: Vec<[f64; 3]> = (0..3)
            .permutations(3)
            .map(|sigma| [c.k[sigma[0]], c.k[sigma[1]], c.k[sigma[2]]])
            .collect();
        vectors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vectors.dedup();
        for x in POINTS {
            let ring: C64 = vectors
                .iter()
                .map(|v| only.ring_element(L, v, 1e-9) * plane(v, &x))
                .sum();
            let exact =
                twg::three_photon_out_wavefunction(&p, c.k, x, &ThreePhotonOutConfig::default())
                    .unwrap()
                    .disconnected;
            assert!((prefactor() * ring - exact).norm() < 1e-14, "{x:?}");
        }
    }
}

#[test]
fn partial_tier_from_ring_elements() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    let reach = (4000.0 / unit()) as i64;
    for c in [case([22, 36, 44]), case([32, 32, 32])] {
        let s = twg::three_photon_s(&p, c.k);
        assert_eq!(s.partial().len(), 9);
        for x in POINTS {
            let mut ring = C64::new(0.0, 0.0);
            for term in s.partial() {
                let single =
                    ScatteringAmplitudeSet::new(c.k.to_vec(), vec![], vec![term.clone()], None);
                let pin = term.pins[0];
                let legs = term.connected.legs();
                let shell = term.connected.energy();
                for m in -reach..=reach {
                    let mut q = [0.0; 3];
                    q[pin.outgoing] = pin.momentum;
                    q[legs[0]] = unit() * m as f64;
                    q[legs[1]] = shell - q[legs[0]];
                    ring += single.ring_element(L, &q, 1e-9) * plane(&q, &x);
                }
            }
            let exact =
                twg::three_photon_out_wavefunction(&p, c.k, x, &ThreePhotonOutConfig::default())
                    .unwrap()
                    .partial;
            let got = prefactor() * ring;
            assert!(
                (got - exact).norm() < 1e-6 * exact.norm().max(1e-3),
                "k={:?} x={x:?}: ring {got} vs closed {exact}",
                c.k
            );
        }
    }
}

#[test]
fn connected_tier_from_ring_elements() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    // Quadrature window edges on half-grid points, so the ring sum is the
    // midpoint rule of the windowed integral.
    let m = (12.0 / unit() - 0.5).round() as i64;
    let window = (m as f64 + 0.5) * unit();
    let cfg = ThreePhotonOutConfig {
        window,
        ridge_window: 0.0,
        quadrature: QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_intervals: 8000,
        },
    };
    for c in [case([22, 36, 44]), case([32, 32, 32])] {
        let s = twg::three_photon_s(&p, c.k);
        let only =
            ScatteringAmplitudeSet::new(c.k.to_vec(), vec![], vec![], s.connected().cloned());
        let e: f64 = c.k.iter().sum();
        for x in &POINTS[..3] {
            let mut ring = C64::new(0.0, 0.0);
            for a in -m..=m {
                for b in -m..=m {
                    let p1 = unit() * (c.center + a) as f64;
                    let p2 = unit() * (c.center + b) as f64;
                    let q = [p1, p2, e - p1 - p2];
                    ring += only.ring_element(L, &q, 1e-9) * plane(&q, x);
                }
            }
            let exact = twg::three_photon_out_wavefunction(&p, c.k, *x, &cfg)
                .unwrap()
                .connected;
            let got = prefactor() * ring;
            assert!(
                (got - exact).norm() < 1e-6 * exact.norm(),
                "k={:?} x={x:?}: ring {got} vs quadrature {exact}",
                c.k
            );
        }
    }
}
