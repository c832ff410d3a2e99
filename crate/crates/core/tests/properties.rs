//! Randomized invariants of the analytic amplitudes.

use itertools::Itertools;
use photon_scatter_core::hwg::{self, ChannelPair};
use photon_scatter_core::model::eo_decompose;
use photon_scatter_core::{
    bethe, tcra, twg, HWGParams, TCRAParams, TWGParams, TwoPhotonKinematics, C64,
};
use proptest::prelude::*;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

/// Transposition path that fills positions from the right, preceded by a
/// swap-and-undo of the first pair. Differs from `bethe::bubble_path`.
fn right_to_left_path(target: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..target.len()).collect();
    let mut path = vec![0, 0];
    for pos in (0..target.len()).rev() {
        let from = perm.iter().position(|&v| v == target[pos]).unwrap();
        for j in from..pos {
            perm.swap(j, j + 1);
            path.push(j);
        }
    }
    path
}

proptest! {
    #[test]
    fn derived_parameters(omega in -5.0..5.0f64, v in -3.0..3.0f64, g in 0.01..4.0f64, v1 in 0.0..3.0f64, v2 in 0.0..3.0f64) {
        let t = TCRAParams::new(omega, 0.3, 1.2, v).unwrap();
        prop_assert_eq!(t.gamma(), v * v);
        let w = TWGParams::new(omega, g).unwrap();
        prop_assert_eq!(w.alpha(), C64::new(omega, -0.5 * g));
        prop_assume!(v1 > 0.0 || v2 > 0.0);
        let h = HWGParams::new(omega, v1, v2).unwrap();
        prop_assert_eq!(h.gamma_e(), v1 * v1 + v2 * v2);
        prop_assert_eq!(h.alpha_h().im, -0.5 * h.gamma_e());
    }

    #[test]
    fn kinematics_round_trip(k1 in -10.0..10.0f64, k2 in -10.0..10.0f64, x1 in -50.0..50.0f64, x2 in -50.0..50.0f64) {
        let kin = TwoPhotonKinematics::from_particles(k1, k2, x1, x2);
        let (a, b) = kin.momenta();
        let (c, d) = kin.positions();
        prop_assert!((a - k1).abs() <= 1e-14 * (1.0 + k1.abs() + k2.abs()));
        prop_assert!((b - k2).abs() <= 1e-14 * (1.0 + k1.abs() + k2.abs()));
        prop_assert!((c - x1).abs() <= 1e-13 * (1.0 + x1.abs() + x2.abs()));
        prop_assert!((d - x2).abs() <= 1e-13 * (1.0 + x1.abs() + x2.abs()));
    }

    #[test]
    fn eo_mixing_inverts(k in 1e-3..10.0f64, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let m = eo_decompose(k).unwrap();
        let z = C64::new(re, im);
        let w = C64::new(im, -re);
        let (e, o) = m.apply(z, w);
        let (f, b) = m.invert(e, o);
        prop_assert!(close(f, z, 1e-15) && close(b, w, 1e-15));
    }

    #[test]
    fn lattice_reflection_is_unitary(k in 1e-3..(std::f64::consts::PI - 1e-3), omega in -4.0..4.0f64, j in 0.1..3.0f64, v in -3.0..3.0f64) {
        let p = TCRAParams::new(omega, 0.0, j, v).unwrap();
        let r = tcra::reflection_amplitude(&p, k).unwrap();
        prop_assert!(((1.0 + r).norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn waveguide_phase_is_unimodular(k in -50.0..50.0f64, omega in -3.0..3.0f64, g in 1e-3..5.0f64) {
        let p = TWGParams::new(omega, g).unwrap();
        prop_assert!((twg::transmission_t(&p, k).norm() - 1.0).abs() < 1e-14);
        prop_assert!((bethe::single_phase(&p, k) - twg::transmission_t(&p, k)).norm() < 1e-15);
    }

    #[test]
    fn two_photon_density_symmetries(k1 in -3.0..3.0f64, k2 in -3.0..3.0f64, p1 in -3.0..3.0f64, g in 0.1..3.0f64) {
        let p = TWGParams::new(1.0, g).unwrap();
        let p2 = k1 + k2 - p1;
        let t = twg::two_photon_t(&p, k1, k2, p1, p2).unwrap();
        prop_assert!(close(t, twg::two_photon_t(&p, k2, k1, p1, p2).unwrap(), 1e-13));
        prop_assert!(close(t, twg::two_photon_t(&p, k1, k2, p2, p1).unwrap(), 1e-13));
        let state = twg::TwoPhotonOutState::new(p, k1, k2);
        prop_assert!(close(state.envelope(p1), state.envelope(-p1), 1e-14));
    }

    #[test]
    fn three_photon_density_is_symmetric(k in prop::array::uniform3(-2.0..4.0f64), q1 in -3.0..3.0f64, q2 in -3.0..3.0f64) {
        let p = TWGParams::new(1.0, 1.0).unwrap();
        let e: f64 = k.iter().sum();
        let out = [q1, q2, e - q1 - q2];
        let base = twg::three_photon_connected_t(&p, k, out).unwrap();
        for (a, b) in (0..3).permutations(3).cartesian_product((0..3).permutations(3)) {
            let kk = [k[a[0]], k[a[1]], k[a[2]]];
            let oo = [out[b[0]], out[b[1]], out[b[2]]];
            prop_assert!(close(twg::three_photon_connected_t(&p, kk, oo).unwrap(), base, 1e-12));
        }
    }

    #[test]
    fn channel_amplitudes_are_unitary(k in -20.0..20.0f64, v1 in 0.0..3.0f64, v2 in 0.01..3.0f64) {
        let p = HWGParams::new(1.0, v1, v2).unwrap();
        let c = hwg::channel_amplitudes(&p, k).unwrap();
        prop_assert!((c.t11.norm_sqr() + c.t21.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((c.t22.norm_sqr() + c.t21.norm_sqr() - 1.0).abs() < 1e-12);
        let s = hwg::channel_amplitudes(&p.swapped(), k).unwrap();
        prop_assert!(close(s.t11, c.t22, 1e-14) && close(s.t22, c.t11, 1e-14) && close(s.t21, c.t21, 1e-14));
    }

    #[test]
    fn swapping_couplings_swaps_pair_channels(k1 in 0.0..2.0f64, k2 in 0.0..2.0f64, x in -10.0..10.0f64, v1 in 0.1..3.0f64, v2 in 0.1..3.0f64) {
        let p = HWGParams::new(1.0, v1, v2).unwrap();
        let g = hwg::pair_wavefunctions(&p, k1, k2).unwrap();
        // Swapping couplings also swaps which waveguide carries which momentum.
        let s = hwg::pair_wavefunctions(&p.swapped(), k2, k1).unwrap();
        prop_assert!(close(s.g11(x), g.g22(x), 1e-12));
        prop_assert!(close(s.g22(x), g.g11(x), 1e-12));
        prop_assert!(close(s.g12(-x), g.g12(x), 1e-12));
        for pair in ChannelPair::ALL {
            let c = hwg::second_order_correlation(&p, pair, k1, k2, x).unwrap();
            prop_assert!(c >= 0.0 && (c - g.get(pair, x).norm_sqr()).abs() <= 1e-15 * (1.0 + c));
        }
    }

    #[test]
    fn bethe_amplitudes_are_path_independent(k in prop::collection::vec(-3.0..3.0f64, 4), g in 0.1..3.0f64) {
        let p = TWGParams::new(1.0, g).unwrap();
        let state = bethe::BetheState::new(p, k.clone()).unwrap();
        for perm in (0..4).permutations(4) {
            let a = state.amplitude(&perm).unwrap();
            prop_assert!((a.norm() - 1.0).abs() < 1e-14);
            let b = bethe::BetheState::amplitude_along(&k, g, &perm, &right_to_left_path(&perm));
            prop_assert!(close(a, b, 1e-12));
        }
    }
}
