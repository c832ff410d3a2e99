//! Finite-lattice runs checked against the analytic single-photon results.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use photon_scatter_core::lattice::{
    self, bound_state_check, evolve, norm_sqr, ring_scattering_check, two_excitation_check,
    wavepacket_scatter, Boundary, HLatticeParams, LatticeKind, LatticeModel, PacketConfig,
    PairRunConfig,
};
use photon_scatter_core::{tcra, HWGParams, TCRAParams, C64};

fn t_model(size: usize, omega: f64, coupling: f64, boundary: Boundary) -> LatticeModel {
    let p = TCRAParams::new(omega, PI, 1.0, coupling).unwrap();
    LatticeModel::new(size, LatticeKind::T(p), boundary).unwrap()
}

#[test]
fn decoupled_emitter_splits_off() {
    let m = t_model(3, 0.7, 0.0, Boundary::Open);
    let h = m.build_single_excitation();
    assert_eq!(h.nrows(), 4);
    let atom = m.atom();
    for i in 0..3 {
        assert_eq!(h[(i, atom)], 0.0);
        assert_eq!(h[(i, i)], PI);
    }
    assert_eq!(h[(atom, atom)], 0.7);
    assert_eq!(h[(0, 1)], -1.0);
    assert_eq!(h[(0, 2)], 0.0);
}

#[test]
fn spectrum_within_coupling_margin() {
    let m = t_model(51, PI + 0.4, 0.8, Boundary::Ring);
    let eig = SymmetricEigen::new(m.build_single_excitation());
    let margin = 2.0 + 0.8 + 0.4;
    for e in eig.eigenvalues.iter() {
        assert!((e - PI).abs() <= margin, "{e}");
    }
    let h = LatticeModel::new(
        31,
        LatticeKind::H(HLatticeParams::new(PI, PI, [1.0, 0.5], [0.3, 0.6]).unwrap()),
        Boundary::Open,
    )
    .unwrap();
    assert_eq!(h.build_single_excitation().nrows(), 63);
}

#[test]
fn bound_state_energies_converge_with_size() {
    let p = TCRAParams::new(PI, PI, 1.0, 0.3).unwrap();
    let (lo, up) = tcra::bound_state_energies(&p).unwrap();
    let mut last = f64::INFINITY;
    for size in [201, 601, 2001] {
        let r = bound_state_check(&t_model(size, PI, 0.3, Boundary::Open)).unwrap();
        let lower = r.lower.unwrap();
        let upper = r.upper.unwrap();
        let err = (lower.lattice_energy - lo.energy)
            .abs()
            .max((upper.lattice_energy - up.energy).abs());
        assert!(err <= last, "L={size}: {err} after {last}");
        last = err;
        // Mirror symmetry about the band centre when the emitter sits there.
        assert!((lower.lattice_energy + upper.lattice_energy - 2.0 * PI).abs() < 1e-10);
    }
    assert!(last < 1e-6);
}

#[test]
fn packet_reflection_off_resonance() {
    let m = t_model(1001, PI, 1.0, Boundary::Open);
    let cfg = PacketConfig {
        k0: PI / 3.0,
        width: 40.0,
        duration: None,
    };
    let r = wavepacket_scatter(&m, &cfg).unwrap();
    assert!((r.reflection - 0.25).abs() < 1e-2, "{}", r.reflection);
    assert!((r.predicted.1 - 0.25).abs() < 1e-12);
    assert!(r.norm_drift < 1e-10);
    let narrow = PacketConfig { width: 20.0, ..cfg };
    assert!(wavepacket_scatter(&m, &narrow).is_err());
}

#[test]
fn h_type_resonance_switches_waveguide() {
    let wg = HWGParams::new(PI, 0.5, 0.5).unwrap();
    let p = HLatticeParams::from_waveguide(&wg, PI).unwrap();
    let m = LatticeModel::new(1001, LatticeKind::H(p), Boundary::Open).unwrap();
    let r = wavepacket_scatter(
        &m,
        &PacketConfig {
            k0: PI / 2.0,
            width: 40.0,
            duration: None,
        },
    )
    .unwrap();
    assert!(r.waveguide[0] < 2e-2, "{:?}", r.waveguide);
    assert!((r.waveguide[1] - 1.0).abs() < 2e-2);
    assert!(r.predicted.0 < 1e-12);
    assert!(r.norm_drift < 1e-10);
}

#[test]
fn ring_dynamics_match_quantized_s_matrix() {
    let m = t_model(601, PI, 1.0, Boundary::Ring);
    let r = ring_scattering_check(
        &m,
        &PacketConfig {
            k0: 1.2,
            width: 10.0,
            duration: None,
        },
    )
    .unwrap();
    assert!(r.max_relative_error < 1e-3, "{}", r.max_relative_error);
    assert!(r.norm_drift < 1e-10);
}

fn packet(m: &LatticeModel, x0: f64, width: f64, k: f64) -> Vec<C64> {
    let mut psi = vec![C64::new(0.0, 0.0); m.dim()];
    for x in -m.half()..=m.half() {
        let d = x as f64 - x0;
        psi[m.site(0, x)] = C64::from_polar((-d * d / (4.0 * width * width)).exp(), k * x as f64);
    }
    psi
}

#[test]
fn free_pair_is_a_product_of_single_photons() {
    let m = t_model(121, PI, 0.7, Boundary::Open);
    let cfg = PairRunConfig {
        k1: 1.1,
        k2: 1.9,
        width: 4.0,
        duration: Some(12.0),
        plateau: (10, 20),
    };
    let pair = lattice::free_pair_evolution(&m, &cfg).unwrap();
    // Runs start three widths inside the guard zone (40% of the array).
    let x0 = -(0.4 * m.size() as f64 - 3.0 * cfg.width);
    let single = t_model(121, PI, 0.0, Boundary::Open);
    let h = single.sparse_hamiltonian();
    let mut a = packet(&single, x0, cfg.width, cfg.k1);
    let mut b = packet(&single, x0, cfg.width, cfg.k2);
    evolve(&h, &mut a, 12.0);
    evolve(&h, &mut b, 12.0);
    let n = m.size();
    let mut product: Vec<C64> = (0..n * n)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            a[i] * b[j] + a[j] * b[i]
        })
        .collect();
    let norm = norm_sqr(&product).sqrt();
    product.iter_mut().for_each(|z| *z /= norm);
    let worst = pair
        .iter()
        .zip(&product)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn pair_run_conserves_probability() {
    let m = t_model(201, PI, 0.7, Boundary::Open);
    let r = two_excitation_check(
        &m,
        &PairRunConfig {
            k1: PI / 2.0,
            k2: PI / 2.0,
            width: 8.0,
            duration: None,
            plateau: (16, 30),
        },
    )
    .unwrap();
    assert!(r.norm_drift < 1e-10);
    assert!(r.bunching_indicator > 1.0);
    let too_big = t_model(403, PI, 0.7, Boundary::Open);
    assert!(two_excitation_check(
        &too_big,
        &PairRunConfig {
            width: 8.0,
            k1: 1.0,
            k2: 1.0,
            duration: None,
            plateau: (1, 2)
        }
    )
    .is_err());
}
