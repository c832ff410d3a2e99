use photon_scatter_core::hwg::{self, ChannelPair};
use photon_scatter_core::lattice::{
    self, Boundary, HLatticeParams, LatticeKind, LatticeModel, PacketConfig, PairRunConfig,
};
use photon_scatter_core::quadrature::QuadratureConfig;
use photon_scatter_core::tcra;
use photon_scatter_core::twg::{self, ThreePhotonOutConfig};
use photon_scatter_core::{
    validation, HWGParams, Result as CoreResult, TCRAParams, TWGParams, C64,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::expect_grids;
use crate::output::{CliError, CliResult, Table};
use crate::{
    BranchArg, Command, GeometryArg, HWaveguideArgs, LatticeArgs, OracleCommand, WaveguideArgs,
};

impl LatticeArgs {
    fn params(&self) -> CoreResult<TCRAParams> {
        TCRAParams::new(self.omega, self.omega0, self.hopping, self.coupling)
    }
}

impl WaveguideArgs {
    fn params(&self) -> CoreResult<TWGParams> {
        TWGParams::new(self.omega, self.gamma_t)
    }
}

impl HWaveguideArgs {
    fn params(&self) -> CoreResult<HWGParams> {
        HWGParams::new(self.omega, self.vbar1, self.vbar2)
    }
}

/// Evaluate `f` over `xs` in parallel, keeping grid order.
fn sweep<F>(xs: &[f64], f: F) -> CliResult<Vec<Vec<f64>>>
where
    F: Fn(f64) -> CoreResult<Vec<f64>> + Sync,
{
    xs.par_iter()
        .map(|&x| f(x))
        .collect::<CoreResult<Vec<_>>>()
        .map_err(CliError::from)
}

fn plane(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .collect()
}

fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::TReflect { lattice, grid, out } => {
            let p = lattice.params()?;
            let g = expect_grids(&grid.grids, &["k"])?;
            let mut t = Table::new(&[
                ("k[1/site]", "k"),
                ("energy[E]", "energy"),
                ("re_r[1]", "re_r"),
                ("im_r[1]", "im_r"),
                ("|r|^2[1]", "reflection"),
                ("|1+r|^2[1]", "transmission"),
            ]);
            let disp = p.dispersion();
            t.extend(sweep(&g[0].values(), |k| {
                let r = tcra::reflection_amplitude(&p, k)?;
                Ok(vec![
                    k,
                    disp.eval(k),
                    r.re,
                    r.im,
                    r.norm_sqr(),
                    (1.0 + r).norm_sqr(),
                ])
            })?);
            out.write_table(&t)
        }
        Command::BoundStates { lattice, out } => {
            let p = lattice.params()?;
            let (lo, up) = tcra::bound_state_energies(&p)?;
            out.write_object(&json!({
                "lower": lo.energy,
                "upper": up.energy,
                "kappa_lower": lo.decay_log.exp(),
                "kappa_upper": up.decay_log.exp(),
            }))
        }
        Command::BoundWavefunction {
            lattice,
            branch,
            grid,
            out,
        } => {
            let p = lattice.params()?;
            let (lo, up) = tcra::bound_state_energies(&p)?;
            let state = match branch {
                BranchArg::Lower => lo,
                BranchArg::Upper => up,
            };
            let g = expect_grids(&grid.grids, &["x"])?;
            let mut t = Table::new(&[("x[site]", "x"), ("psi[1]", "psi")]).integer_column(0);
            for x in g[0].sites()? {
                t.push(vec![
                    x as f64,
                    tcra::bound_state_wavefunction(&state, &p, x)?,
                ]);
            }
            out.write_table(&t)
        }
        Command::WgTransmit { wg, grid, out } => {
            let p = wg.params()?;
            let g = expect_grids(&grid.grids, &["k"])?;
            let mut t = Table::new(&[
                ("k[Omega]", "k"),
                ("re_t[1]", "re_t"),
                ("im_t[1]", "im_t"),
                ("arg_t[rad]", "arg_t"),
            ]);
            t.extend(sweep(&g[0].values(), |k| {
                let z = twg::transmission_t(&p, k);
                // Phase in (-pi, pi]: a signed-zero imaginary part must not flip t = -1 to -pi.
                Ok(vec![k, z.re, z.im, (z.im + 0.0).atan2(z.re)])
            })?);
            out.write_table(&t)
        }
        Command::TwoPhotonWf {
            wg,
            momenta,
            xc,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let (k1, k2) = momenta.resolve()?;
            let g = expect_grids(&grid.grids, &["x"])?;
            let state = twg::TwoPhotonOutState::new(p, k1, k2);
            let mut t = Table::new(&[
                ("x[1/Omega]", "x"),
                ("re_psi[1]", "re_psi"),
                ("im_psi[1]", "im_psi"),
                ("|psi|^2[1]", "density"),
            ]);
            t.extend(sweep(&g[0].values(), |x| {
                let z = state.eval(xc, x);
                Ok(vec![x, z.re, z.im, z.norm_sqr()])
            })?);
            out.write_table(&t)
        }
        Command::Fluorescence2 {
            wg,
            momenta,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let (k1, k2) = momenta.resolve()?;
            let g = expect_grids(&grid.grids, &["p1"])?;
            let mut t = Table::new(&[
                ("p1[Omega]", "p1"),
                ("p2[Omega]", "p2"),
                ("|T2|^2[Omega^-2]", "fluorescence"),
            ]);
            t.extend(sweep(&g[0].values(), |p1| {
                Ok(vec![
                    p1,
                    k1 + k2 - p1,
                    twg::two_photon_fluorescence(&p, k1, k2, p1),
                ])
            })?);
            out.write_table(&t)
        }
        Command::Fluorescence3 {
            wg,
            momenta,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let k = momenta.array();
            let e: f64 = k.iter().sum();
            let g = expect_grids(&grid.grids, &["p1", "p2"])?;
            let points = plane(&g[0].values(), &g[1].values());
            let rows = points
                .par_iter()
                .map(|&(p1, p2)| {
                    Ok(vec![
                        p1,
                        p2,
                        e - p1 - p2,
                        twg::three_photon_fluorescence(&p, k, p1, p2)?,
                    ])
                })
                .collect::<CoreResult<Vec<_>>>()?;
            let mut t = Table::new(&[
                ("p1[Omega]", "p1"),
                ("p2[Omega]", "p2"),
                ("p3[Omega]", "p3"),
                ("|T3|^2[Omega^-4]", "fluorescence"),
            ]);
            t.extend(rows);
            out.write_table(&t)
        }
        Command::ThreePhotonWf {
            wg,
            momenta,
            x3,
            window,
            ridge_window,
            rel_tol,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let k = momenta.array();
            let g = expect_grids(&grid.grids, &["x1", "x2"])?;
            if !(window > 0.0 && ridge_window >= 0.0 && rel_tol > 0.0) {
                return Err(CliError::Config(
                    "window and rel-tol must be positive, ridge-window non-negative".into(),
                ));
            }
            let cfg = ThreePhotonOutConfig {
                window,
                ridge_window,
                quadrature: QuadratureConfig {
                    rel_tol,
                    ..ThreePhotonOutConfig::default().quadrature
                },
            };
            let points = plane(&g[0].values(), &g[1].values());
            let values = points
                .par_iter()
                .map(|&(x1, x2)| {
                    twg::three_photon_out_wavefunction(&p, k, [x1, x2, x3], &cfg).map(|v| v.total())
                })
                .collect::<CoreResult<Vec<_>>>()?;
            let peak = values.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            let mut t = Table::new(&[
                ("x1[1/Omega]", "x1"),
                ("x2[1/Omega]", "x2"),
                ("x3[1/Omega]", "x3"),
                ("re_psi[1]", "re_psi"),
                ("im_psi[1]", "im_psi"),
                ("|psi|^2[1]", "density"),
                ("|psi|^2/max[1]", "normalized_density"),
            ]);
            for (&(x1, x2), z) in points.iter().zip(&values) {
                let d = z.norm_sqr();
                t.push(vec![
                    x1,
                    x2,
                    x3,
                    z.re,
                    z.im,
                    d,
                    if peak > 0.0 { d / peak } else { 0.0 },
                ]);
            }
            out.write_table(&t)
        }
        Command::HSingle { wg, grid, out } => {
            let p = wg.params()?;
            let g = expect_grids(&grid.grids, &["k"])?;
            let mut t = Table::new(&[
                ("k[Omega]", "k"),
                ("|t11|^2[1]", "abs_t11_sq"),
                ("|t21|^2[1]", "abs_t21_sq"),
                ("|t22|^2[1]", "abs_t22_sq"),
                ("arg_t11[rad]", "arg_t11"),
                ("arg_t21[rad]", "arg_t21"),
                ("arg_t22[rad]", "arg_t22"),
            ]);
            t.extend(sweep(&g[0].values(), |k| {
                let c = hwg::channel_amplitudes(&p, k)?;
                Ok(vec![
                    k,
                    c.t11.norm_sqr(),
                    c.t21.norm_sqr(),
                    c.t22.norm_sqr(),
                    c.t11.arg(),
                    c.t21.arg(),
                    c.t22.arg(),
                ])
            })?);
            out.write_table(&t)
        }
        Command::HTwoPhoton {
            wg,
            momenta,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let (k1, k2) = momenta.resolve()?;
            let g = expect_grids(&grid.grids, &["p1"])?;
            h_two_photon(&p, k1, k2, &g[0].values(), &out)
        }
        Command::Correlation {
            wg,
            pair,
            momenta,
            grid,
            out,
        } => {
            let p = wg.params()?;
            let (k1, k2) = momenta.resolve()?;
            let g = expect_grids(&grid.grids, &["x"])?;
            let header: (&'static str, &'static str) = match pair {
                ChannelPair::P11 => ("|g11|^2[1]", "g11_sq"),
                ChannelPair::P12 => ("|g12|^2[1]", "g12_sq"),
                ChannelPair::P22 => ("|g22|^2[1]", "g22_sq"),
            };
            let mut t = Table::new(&[("x[1/Omega]", "x"), header]);
            t.extend(sweep(&g[0].values(), |x| {
                Ok(vec![x, hwg::second_order_correlation(&p, pair, k1, k2, x)?])
            })?);
            out.write_table(&t)
        }
        Command::Oracle(o) => oracle(o),
        Command::Validate { criterion, out } => validate(&criterion, &out),
    }
}

fn h_two_photon(
    p: &HWGParams,
    k1: f64,
    k2: f64,
    p1s: &[f64],
    out: &crate::output::OutputArgs,
) -> CliResult<()> {
    let s = hwg::two_photon_s_h(p, k1, k2)?;
    let e = k1 + k2;
    let mut t = Table::new(&[
        ("p1[Omega]", "p1"),
        ("p2[Omega]", "p2"),
        ("re_T11[Omega^-1]", "re_t11"),
        ("im_T11[Omega^-1]", "im_t11"),
        ("re_T12[Omega^-1]", "re_t12"),
        ("im_T12[Omega^-1]", "im_t12"),
        ("re_T22[Omega^-1]", "re_t22"),
        ("im_T22[Omega^-1]", "im_t22"),
    ]);
    for &p1 in p1s {
        let mut row = vec![p1, e - p1];
        for pair in ChannelPair::ALL {
            let c = s
                .get(pair)
                .connected()
                .expect("two-photon sets carry a connected part");
            row.extend(complex(c.eval(&[p1, e - p1])));
        }
        t.push(row);
    }
    if out.format != Some(crate::output::Format::Json) {
        return out.write_table(&t);
    }
    // JSON adds the delta-supported terms, which have no grid form.
    let mut disconnected = serde_json::Map::new();
    for pair in ChannelPair::ALL {
        let terms: Vec<Value> = s
            .get(pair)
            .disconnected()
            .iter()
            .map(|d| {
                json!({
                    "p1": d.pins[0].momentum,
                    "p2": d.pins[1].momentum,
                    "re": d.weight.re,
                    "im": d.weight.im,
                })
            })
            .collect();
        disconnected.insert(format!("pair_{pair}"), Value::from(terms));
    }
    out.write_object(&json!({
        "k1": k1,
        "k2": k2,
        "disconnected": disconnected,
        "connected": t.to_json(),
    }))
}

fn branch_json(b: &Option<lattice::BranchReport>) -> Value {
    match b {
        None => Value::Null,
        Some(r) => json!({
            "lattice_energy": r.lattice_energy,
            "analytic_energy": r.analytic_energy,
            "energy_error": (r.lattice_energy - r.analytic_energy).abs(),
            "fitted_decay_log": r.fitted_decay_log,
            "analytic_decay_log": r.analytic_decay_log,
            "sign_alternates": r.sign_alternates,
            "sign_constant": r.sign_constant,
        }),
    }
}

fn parse_plateau(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Config(format!("plateau `{s}` must look like start:end"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn oracle(o: OracleCommand) -> CliResult<()> {
    match o {
        OracleCommand::Bound { lattice, size, out } => {
            let m = LatticeModel::new(size, LatticeKind::T(lattice.params()?), Boundary::Open)?;
            let r = lattice::bound_state_check(&m)?;
            out.write_object(&json!({
                "size": r.size,
                "below_band": r.below_band,
                "above_band": r.above_band,
                "lower": branch_json(&r.lower),
                "upper": branch_json(&r.upper),
                "warnings": r.warnings,
            }))
        }
        OracleCommand::Scatter {
            geometry,
            omega,
            omega0,
            hopping,
            coupling,
            coupling1,
            coupling2,
            size,
            k0,
            width,
            duration,
            out,
        } => {
            let kind = match (geometry, coupling, coupling1, coupling2) {
                (GeometryArg::T, Some(v), None, None) => {
                    LatticeKind::T(TCRAParams::new(omega, omega0, hopping, v)?)
                }
                (GeometryArg::H, None, Some(v1), Some(v2)) => {
                    LatticeKind::H(HLatticeParams::new(omega, omega0, [hopping; 2], [v1, v2])?)
                }
                _ => {
                    return Err(CliError::Config(
                        "T-type runs take --V, H-type runs take --V1 and --V2".into(),
                    ))
                }
            };
            let m = LatticeModel::new(size, kind, Boundary::Open)?;
            let r = lattice::wavepacket_scatter(
                &m,
                &PacketConfig {
                    k0,
                    width,
                    duration,
                },
            )?;
            let split = match geometry {
                GeometryArg::T => json!({
                    "transmission": r.transmission,
                    "reflection": r.reflection,
                    "predicted_transmission": r.predicted.0,
                    "predicted_reflection": r.predicted.1,
                }),
                GeometryArg::H => json!({
                    "waveguide_1": r.waveguide[0],
                    "waveguide_2": r.waveguide[1],
                    "predicted_waveguide_1": r.predicted.0,
                    "predicted_waveguide_2": r.predicted.1,
                }),
            };
            out.write_object(&json!({
                "duration": r.duration,
                "channels": split,
                "emitter": r.emitter,
                "norm_drift": r.norm_drift,
            }))
        }
        OracleCommand::Pair {
            lattice,
            size,
            k1,
            k2,
            width,
            duration,
            plateau,
            out,
        } => {
            let m = LatticeModel::new(size, LatticeKind::T(lattice.params()?), Boundary::Open)?;
            let cfg = PairRunConfig {
                k1,
                k2,
                width,
                duration,
                plateau: parse_plateau(&plateau)?,
            };
            let r = lattice::two_excitation_check(&m, &cfg)?;
            out.write_object(&json!({
                "duration": r.duration,
                "bunching_indicator": r.bunching_indicator,
                "transmitted_weight": r.transmitted_weight,
                "norm_drift": r.norm_drift,
                "relative_density": r.relative_density,
                "free_relative_density": r.free_relative_density,
            }))
        }
    }
}

fn validate(ids: &[u32], out: &crate::output::OutputArgs) -> CliResult<()> {
    let ids: Vec<u32> = if ids.is_empty() {
        validation::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        ids.to_vec()
    };
    let mut reports = Vec::new();
    for id in ids {
        let r = validation::run(id)
            .ok_or_else(|| CliError::Config(format!("no criterion {id} (valid: 1 to 11)")))?;
        if out.format != Some(crate::output::Format::Json) {
            println!("{r}");
        }
        reports.push(r);
    }
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    match out.format {
        Some(crate::output::Format::Json) => {
            let list: Vec<Value> = reports
                .iter()
                .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "details": r.details}))
                .collect();
            out.write_object(&json!({"criteria": list, "failed": failed}))?;
        }
        Some(crate::output::Format::Csv) => {
            return Err(CliError::Config("validate reports as text or JSON".into()));
        }
        None => println!(
            "passed {} of {}",
            reports.len() - failed.len(),
            reports.len()
        ),
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("criteria failed: {failed:?}")))
    }
}
