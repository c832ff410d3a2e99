//! Worked values for each physics module. Expected numbers are either exact
//! by construction or hand-evaluated from the closed forms (shown inline).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use photon_scatter_core::hwg::{self, ChannelLabels, ChannelPair};
use photon_scatter_core::model::eo_decompose;
use photon_scatter_core::tcra::{self, Branch};
use photon_scatter_core::twg::{self, ThreePhotonConnectedT, TwoPhotonOutState};
use photon_scatter_core::validation::literal_three_photon_t;
use photon_scatter_core::{bethe, Dispersion, HWGParams, TCRAParams, TWGParams, C64};

fn near(a: C64, b: C64, tol: f64) {
    assert!((a - b).norm() <= tol, "{a} vs {b}");
}

fn lattice() -> TCRAParams {
    TCRAParams::new(PI, PI, 1.0, 1.0).unwrap()
}

#[test]
fn dispersion_values() {
    let band = Dispersion::CosineBand {
        omega_cavity: PI,
        hopping: 1.0,
    };
    assert!((band.eval(PI / 2.0) - PI).abs() < 1e-15);
    assert!((band.eval(0.0) - (PI - 2.0)).abs() < 1e-15);
    assert_eq!(
        Dispersion::Linear {
            group_velocity: 1.0
        }
        .eval(-0.7),
        0.7
    );
}

#[test]
fn even_odd_mixing() {
    let m = eo_decompose(1.0).unwrap();
    assert_eq!(
        m.matrix,
        [
            [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]
        ]
    );
    let c = C64::new(0.3, -1.1);
    let (e, o) = m.apply(c, c);
    near(e, c * 2f64.sqrt(), 1e-15);
    near(o, C64::new(0.0, 0.0), 1e-15);
    assert!(eo_decompose(0.0).is_err() && eo_decompose(-1.0).is_err());
}

#[test]
fn lattice_reflection_values() {
    let p = lattice();
    near(
        tcra::reflection_amplitude(&p, PI / 2.0).unwrap(),
        C64::new(-1.0, 0.0),
        1e-15,
    );
    let r = tcra::reflection_amplitude(&p, PI / 3.0).unwrap();
    // -i / (2 sin(pi/3) (pi - 2 cos(pi/3) - pi) + i) = -i / (-sqrt 3 + i)
    near(r, -C64::i() / C64::new(-3f64.sqrt(), 1.0), 1e-15);
    assert!((r.norm_sqr() - 0.25).abs() < 1e-15);
    let free = TCRAParams::new(PI, PI, 1.0, 0.0).unwrap();
    near(
        tcra::reflection_amplitude(&free, 1.0).unwrap(),
        C64::new(0.0, 0.0),
        0.0,
    );

    let s = tcra::single_photon_s_matrix(&p, PI / 2.0).unwrap();
    let w: Vec<C64> = s.disconnected().iter().map(|t| t.weight).collect();
    near(w[0], C64::new(0.0, 0.0), 1e-15);
    near(w[1], C64::new(-1.0, 0.0), 1e-15);
    assert!(s.connected().is_none());
}

#[test]
fn self_energy_values() {
    let p = lattice();
    let centre = tcra::self_energy(&p, PI).unwrap();
    assert!((centre.dos - 1.0).abs() < 1e-15 && centre.real_part == 0.0);
    let above = tcra::self_energy(&p, PI + 3.0).unwrap();
    assert!((above.real_part + 1.0 / 5f64.sqrt()).abs() < 1e-15);
    assert_eq!(above.imag_part, 0.0);
    assert!(tcra::self_energy(&p, PI + 1e8).unwrap().real_part.abs() < 1e-7);
    assert!(tcra::self_energy(&p, PI + 2.0).is_err());
}

#[test]
fn bound_state_values() {
    let p = lattice();
    let (lower, upper) = tcra::bound_state_energies(&p).unwrap();
    let x = (2.0 + 5f64.sqrt()).sqrt();
    assert!((upper.energy - PI - x).abs() < 1e-12);
    assert!((lower.energy - PI + x).abs() < 1e-12);
    assert!((x - 2.058171).abs() < 1e-6);
    assert!(lower.residual.abs() < 1e-12 && upper.residual.abs() < 1e-12);
    assert!((lower.energy + upper.energy - 2.0 * PI).abs() < 1e-12);

    let kappa = tcra::kappa(&p, lower.energy, Branch::Lower);
    assert!((kappa - 0.786151).abs() < 1e-6);
    assert!((lower.decay_log + 0.240606).abs() < 1e-6);
    let psi0 = tcra::bound_state_wavefunction(&lower, &p, 0).unwrap();
    assert!((psi0 - 1.0 / (x * x - 4.0).sqrt()).abs() < 1e-13);
    let psi5 = tcra::bound_state_wavefunction(&lower, &p, 5).unwrap();
    assert!((psi5 / psi0 - (-1.20303f64).exp()).abs() < 1e-5);
    for n in 0..10 {
        let a = tcra::bound_state_wavefunction(&upper, &p, n).unwrap();
        let b = tcra::bound_state_wavefunction(&upper, &p, n + 1).unwrap();
        assert!(a * b < 0.0);
        assert!((b.abs() / a.abs() - upper.decay_log.exp()).abs() < 1e-13);
    }

    // Weak coupling pushes both states onto the band edges.
    let weak = TCRAParams::new(PI + 0.5, PI, 1.0, 1e-3).unwrap();
    let (lo, up) = tcra::bound_state_energies(&weak).unwrap();
    assert!(lo.energy < PI - 2.0 && lo.energy > PI - 2.0 - 1e-4);
    assert!(up.energy > PI + 2.0 && up.energy < PI + 2.0 + 1e-4);
}

#[test]
fn waveguide_values() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    near(twg::transmission_t(&p, 1.0), C64::new(-1.0, 0.0), 0.0);
    near(twg::transmission_t(&p, 1.5), -C64::i(), 1e-15);
    near(twg::transmission_t(&p, 1e6), C64::new(1.0, 0.0), 1e-5);

    // i (1/pi) (2 - 2 alpha) / ((-1/2 + i/2)(i/2)(1/2 + i/2)(i/2)), alpha = 1 - i/2,
    // which is i (i / pi) / (1/8) = -8 / pi.
    near(
        twg::two_photon_t(&p, 1.0, 1.0, 1.5, 0.5).unwrap(),
        C64::new(-8.0 / PI, 0.0),
        1e-14,
    );
    assert!(twg::two_photon_t(&p, 1.0, 1.0, 1.5, 0.6).is_err());
    let free = TWGParams::new(1.0, 0.0).unwrap();
    assert_eq!(
        twg::two_photon_t(&free, 1.0, 1.0, 1.5, 0.5).unwrap().norm(),
        0.0
    );
    assert_eq!(twg::two_photon_fluorescence(&free, 1.0, 1.0, 1.5), 0.0);

    let s = twg::two_photon_s(&free, 0.4, 1.3);
    assert!(s.connected().is_none() || s.connected().unwrap().eval(&[0.2, 1.5]).norm() == 0.0);
    for t in s.disconnected() {
        near(t.weight, C64::new(1.0, 0.0), 0.0);
    }
}

#[test]
fn two_photon_out_state_values() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    let s = TwoPhotonOutState::new(p, 1.0, 1.0);
    near(s.envelope(0.0), C64::new(-3.0 / (2.0 * PI), 0.0), 1e-15);
    for x in [0.5, 2.0, 7.0] {
        near(
            s.envelope(x),
            C64::new((1.0 - 4.0 * (-0.5 * x).exp()) / (2.0 * PI), 0.0),
            1e-15,
        );
    }
    let off = TwoPhotonOutState::new(p, 0.3, 2.2);
    let far = 80.0;
    let dk: f64 = 0.5 * (0.3 - 2.2);
    let plane = (twg::transmission_t(&p, 0.3) * twg::transmission_t(&p, 2.2)).norm()
        * (dk * far).cos().abs();
    assert!((off.envelope(far).norm() - plane / (2.0 * PI)).abs() < 1e-12);
}

#[test]
fn two_photon_fluorescence_peaks_on_resonance() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    let peak = twg::two_photon_fluorescence(&p, 1.0, 1.0, 1.0);
    for k1 in [0.5, 0.9, 1.0, 1.2] {
        for k2 in [0.7, 1.0, 1.6] {
            for p1 in [-0.5, 0.3, 0.9, 1.0, 1.4] {
                assert!(twg::two_photon_fluorescence(&p, k1, k2, p1) <= peak);
            }
        }
    }
    let e = 2.6;
    for p1 in [0.1, 0.9, 2.0] {
        let a = twg::two_photon_fluorescence(&p, 1.1, 1.5, p1);
        assert!((a - twg::two_photon_fluorescence(&p, 1.1, 1.5, e - p1)).abs() < 1e-14 * a);
    }
}

#[test]
fn three_photon_values() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    let out = [1.3, 1.0, 0.7];
    let t = ThreePhotonConnectedT::new(p, [1.0; 3])
        .unwrap()
        .eval(out)
        .unwrap();
    // p2 = k makes single terms of the literal sum blow up while the total
    // stays finite; averaging over on-shell offsets +-d removes the O(d) error.
    let shifted = |d: f64| literal_three_photon_t(&p, [1.0; 3], [1.3, 1.0 + d, 0.7 - d]);
    let mean = |d: f64| 0.5 * (shifted(d) + shifted(-d));
    // One Richardson step cancels the O(d^2) error as well.
    let literal = (100.0 * mean(1e-4) - mean(1e-3)) / 99.0;
    assert!(
        (t - literal).norm() < 1e-9 * literal.norm(),
        "{t} vs {literal}"
    );

    let s = twg::three_photon_s(&p, [0.4, 1.1, 1.8]);
    assert_eq!(s.partial().len(), 9);
    assert!(s.conserves_energy(1e-12));

    // Third power of the coupling.
    let small = TWGParams::new(1.0, 1e-3).unwrap();
    let smaller = TWGParams::new(1.0, 5e-4).unwrap();
    let k = [0.2, 1.7, 2.9];
    let q = [0.4, 1.9, 2.5];
    let a = twg::three_photon_connected_t(&small, k, q).unwrap().norm();
    let b = twg::three_photon_connected_t(&smaller, k, q)
        .unwrap()
        .norm();
    assert!((a / b - 8.0).abs() < 1e-2, "ratio {}", a / b);
    let free = TWGParams::new(1.0, 0.0).unwrap();
    assert_eq!(
        twg::three_photon_connected_t(&free, k, q).unwrap().norm(),
        0.0
    );
}

#[test]
fn connected_densities_fall_off() {
    // Energy conservation drags an outgoing leg along with a large incoming
    // one, so on the shell the amplitudes decay like 1/|k|; their squares
    // (the fluorescence densities) are below 1e-4 of the peak at |k| = 1e3.
    let p = TWGParams::new(1.0, 1.0).unwrap();
    let two = |k: f64| twg::two_photon_t(&p, k, 1.0, 1.0, k).unwrap().norm();
    let three = |k: f64| {
        twg::three_photon_connected_t(&p, [k, 1.0, 1.0], [1.0, 1.0, k])
            .unwrap()
            .norm()
    };
    let peak3 = three(1.0 + 1e-3);
    for (f, peak) in [(&two as &dyn Fn(f64) -> f64, two(1.0)), (&three, peak3)] {
        assert!((f(1e3) / peak).powi(2) < 1e-4);
        let slope = f(1e4) / f(1e3);
        assert!((slope - 0.1).abs() < 2e-3, "decay ratio {slope}");
    }
}

#[test]
fn channel_amplitude_values() {
    let equal = HWGParams::new(1.0, 2.0, 2.0).unwrap();
    let c = hwg::channel_amplitudes(&equal, 1.0).unwrap();
    assert!(c.t11.norm() < 1e-15 && (c.t21.norm() - 1.0).abs() < 1e-15);

    let p = HWGParams::new(1.0, 1.0, 2.0).unwrap();
    let c = hwg::channel_amplitudes(&p, 1.0).unwrap();
    near(c.t11, C64::new(0.6, 0.0), 1e-15);
    near(c.t21, C64::new(-0.8, 0.0), 1e-15);

    let single = HWGParams::new(1.0, 1.3, 0.0).unwrap();
    let t = TWGParams::new(1.0, 1.3 * 1.3).unwrap();
    for k in [-1.0, 0.4, 1.0, 2.5] {
        let c = hwg::channel_amplitudes(&single, k).unwrap();
        assert_eq!(c.t21.norm(), 0.0);
        near(c.t11, twg::transmission_t(&t, k), 1e-15);
    }
}

#[test]
fn h_two_photon_values() {
    let single = HWGParams::new(1.0, 1.3, 0.0).unwrap();
    let t = TWGParams::new(1.0, 1.3 * 1.3).unwrap();
    let labels = ChannelLabels::new([1, 1], [1, 1]).unwrap();
    near(
        hwg::two_photon_t_h(&single, labels, 0.6, 1.4, 0.3, 1.7).unwrap(),
        twg::two_photon_t(&t, 0.6, 1.4, 0.3, 1.7).unwrap(),
        1e-14,
    );
    assert!(ChannelLabels::new([1, 3], [1, 1]).is_err());

    let p = HWGParams::new(1.0, 1.0, 2.0).unwrap();
    let s = hwg::two_photon_s_h(&p, 0.8, 1.3).unwrap();
    let at = |pair: ChannelPair| s.get(pair).connected().unwrap().eval(&[0.5, 1.6]);
    near(
        at(ChannelPair::P11) / at(ChannelPair::P22),
        C64::new(0.25, 0.0),
        1e-14,
    );

    // With the second waveguide decoupled only the (1,2) direct term survives.
    let s = hwg::two_photon_s_h(&single, 0.8, 1.3).unwrap();
    assert!(
        s.get(ChannelPair::P11)
            .connected()
            .unwrap()
            .eval(&[0.5, 1.6])
            .norm()
            == 0.0
    );
    assert!(
        s.get(ChannelPair::P22)
            .connected()
            .unwrap()
            .eval(&[0.5, 1.6])
            .norm()
            == 0.0
    );
    let direct = &s.get(ChannelPair::P12).disconnected()[0];
    near(
        direct.weight,
        hwg::channel_amplitudes(&single, 0.8).unwrap().t11,
        1e-15,
    );
    assert_eq!(s.get(ChannelPair::P12).disconnected()[1].weight.norm(), 0.0);
}

#[test]
fn correlation_shapes() {
    let p = HWGParams::new(1.0, 2.0, 2.0).unwrap();
    let g = hwg::pair_wavefunctions(&p, 1.0, 1.0).unwrap();
    for x in [0.0, 0.3, 1.0, 4.0] {
        assert!((g.g11(x).norm_sqr() - g.g22(x).norm_sqr()).abs() < 1e-15);
    }
    assert!(g.g11(0.0).norm_sqr() > g.g11(40.0).norm_sqr());

    // Detuned pair at E = 2 Omega: interior extremum of |g|^2.
    let g = hwg::pair_wavefunctions(&HWGParams::new(1.0, 1.0, 1.0).unwrap(), 1.6, 0.4).unwrap();
    let values: Vec<f64> = (0..400)
        .map(|i| g.g12(0.05 * i as f64).norm_sqr())
        .collect();
    assert!(values
        .windows(3)
        .any(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0));
}

#[test]
fn bethe_values() {
    let p = TWGParams::new(1.0, 1.0).unwrap();
    near(bethe::single_phase(&p, 1.0), C64::new(-1.0, 0.0), 0.0);
    near(bethe::single_phase(&p, 1e7), C64::new(1.0, 0.0), 1e-6);
    near(
        bethe::two_body_phase(1.0, 0.7, 0.7),
        C64::new(-1.0, 0.0),
        0.0,
    );
    let a = bethe::two_body_phase(1.3, 0.2, 1.9);
    near(
        a * bethe::two_body_phase(1.3, 1.9, 0.2),
        C64::new(1.0, 0.0),
        1e-15,
    );

    let s = bethe::BetheState::new(p, vec![0.4, 1.5]).unwrap();
    near(s.amplitude(&[0, 1]).unwrap(), C64::new(1.0, 0.0), 0.0);
    near(
        s.amplitude(&[1, 0]).unwrap(),
        bethe::two_body_phase(1.0, 1.5, 0.4),
        1e-15,
    );

    let one = bethe::BetheState::new(p, vec![0.4]).unwrap();
    let x = 2.5;
    near(
        one.eigenstate_value(&[x]).unwrap(),
        C64::from_polar(1.0, 0.4 * x) * twg::transmission_t(&p, 0.4),
        1e-15,
    );
    let three = bethe::BetheState::new(p, vec![0.4, 1.5, -0.3]).unwrap();
    let xs = [-3.0, -1.2, -0.4];
    let direct: C64 = three
        .sorted_amplitudes()
        .iter()
        .map(|(perm, a)| {
            a * C64::from_polar(
                1.0,
                perm.iter()
                    .zip(xs)
                    .map(|(&m, x)| three.momenta()[m] * x)
                    .sum(),
            )
        })
        .sum();
    near(three.eigenstate_value(&xs).unwrap(), direct, 1e-14);
    assert!(three.eigenstate_value(&[-1.0, 0.0, 1.0]).is_err());
}

#[test]
fn decoupled_emitters_are_transparent() {
    let p = HWGParams::new(1.0, 0.0, 0.0).unwrap();
    let c = hwg::channel_amplitudes(&p, 1.0).unwrap();
    near(c.t11, C64::new(1.0, 0.0), 0.0);
    assert_eq!(c.t21.norm(), 0.0);
    let g = hwg::pair_wavefunctions(&p, 1.0, 1.0).unwrap();
    // Only the direct pairing survives.
    assert_eq!(g.g12(0.0), C64::new(1.0 / (2.0 * PI), 0.0));
    let labels = ChannelLabels::new([1, 2], [1, 2]).unwrap();
    assert_eq!(
        hwg::two_photon_t_h(&p, labels, 1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .norm(),
        0.0
    );
    let t = TWGParams::new(1.0, 0.0).unwrap();
    near(
        TwoPhotonOutState::new(t, 1.0, 1.0).envelope(0.0),
        C64::new(1.0 / (2.0 * PI), 0.0),
        1e-16,
    );
}
