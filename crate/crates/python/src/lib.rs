//! Python access to the scattering amplitudes, bound states and validation
//! suite. Functions take plain floats; complex results come back as Python
//! `complex`.

use photon_scatter_core::hwg::{self, ChannelPair};
use photon_scatter_core::quadrature::QuadratureConfig;
use photon_scatter_core::twg::{self, ThreePhotonOutConfig};
use photon_scatter_core::{tcra, validation, Error, HWGParams, TCRAParams, TWGParams, C64};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::RootSearch(_) | Error::Quadrature { .. } | Error::Boundary { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn lattice(omega: f64, omega0: f64, hopping: f64, coupling: f64) -> PyResult<TCRAParams> {
    TCRAParams::new(omega, omega0, hopping, coupling).map_err(py_err)
}

fn waveguide(omega: f64, gamma_t: f64) -> PyResult<TWGParams> {
    TWGParams::new(omega, gamma_t).map_err(py_err)
}

fn h_waveguide(omega: f64, vbar1: f64, vbar2: f64) -> PyResult<HWGParams> {
    HWGParams::new(omega, vbar1, vbar2).map_err(py_err)
}

/// Reflection amplitude r_k of a resonator-array photon off the emitter.
#[pyfunction]
#[pyo3(signature = (k, *, omega, coupling, omega0 = std::f64::consts::PI, hopping = 1.0))]
fn reflection_amplitude(
    k: f64,
    omega: f64,
    coupling: f64,
    omega0: f64,
    hopping: f64,
) -> PyResult<C64> {
    tcra::reflection_amplitude(&lattice(omega, omega0, hopping, coupling)?, k).map_err(py_err)
}

/// Bound-state energies and decay factors: dict with `lower`, `upper`,
/// `kappa_lower`, `kappa_upper`.
#[pyfunction]
#[pyo3(signature = (*, omega, coupling, omega0 = std::f64::consts::PI, hopping = 1.0))]
fn bound_states<'py>(
    py: Python<'py>,
    omega: f64,
    coupling: f64,
    omega0: f64,
    hopping: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let (lo, up) =
        tcra::bound_state_energies(&lattice(omega, omega0, hopping, coupling)?).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("lower", lo.energy)?;
    d.set_item("upper", up.energy)?;
    d.set_item("kappa_lower", lo.decay_log.exp())?;
    d.set_item("kappa_upper", up.decay_log.exp())?;
    Ok(d)
}

/// Waveguide transmission phase t_k.
#[pyfunction]
#[pyo3(signature = (k, *, gamma_t, omega = 1.0))]
fn transmission(k: f64, gamma_t: f64, omega: f64) -> PyResult<C64> {
    Ok(twg::transmission_t(&waveguide(omega, gamma_t)?, k))
}

/// Two-photon out-state at centre of mass `xc` and separation `x`.
#[pyfunction]
#[pyo3(signature = (k1, k2, xc, x, *, gamma_t, omega = 1.0))]
fn two_photon_out(k1: f64, k2: f64, xc: f64, x: f64, gamma_t: f64, omega: f64) -> PyResult<C64> {
    Ok(twg::two_photon_out_wavefunction(
        &waveguide(omega, gamma_t)?,
        k1,
        k2,
        xc,
        x,
    ))
}

/// |T2|^2 on the energy shell, as a function of the first outgoing momentum.
#[pyfunction]
#[pyo3(signature = (k1, k2, p1, *, gamma_t, omega = 1.0))]
fn two_photon_fluorescence(k1: f64, k2: f64, p1: f64, gamma_t: f64, omega: f64) -> PyResult<f64> {
    Ok(twg::two_photon_fluorescence(
        &waveguide(omega, gamma_t)?,
        k1,
        k2,
        p1,
    ))
}

/// |T3|^2 on the energy shell at outgoing momenta (p1, p2, E - p1 - p2).
#[pyfunction]
#[pyo3(signature = (k, p1, p2, *, gamma_t, omega = 1.0))]
fn three_photon_fluorescence(
    k: [f64; 3],
    p1: f64,
    p2: f64,
    gamma_t: f64,
    omega: f64,
) -> PyResult<f64> {
    twg::three_photon_fluorescence(&waveguide(omega, gamma_t)?, k, p1, p2).map_err(py_err)
}

/// Three-photon out-state at positions `x`; releases the GIL while integrating.
#[pyfunction]
#[pyo3(signature = (k, x, *, gamma_t, omega = 1.0, window = 40.0, ridge_window = 400.0, rel_tol = 1e-8))]
#[allow(clippy::too_many_arguments)]
fn three_photon_out(
    py: Python<'_>,
    k: [f64; 3],
    x: [f64; 3],
    gamma_t: f64,
    omega: f64,
    window: f64,
    ridge_window: f64,
    rel_tol: f64,
) -> PyResult<C64> {
    let p = waveguide(omega, gamma_t)?;
    let cfg = ThreePhotonOutConfig {
        window,
        ridge_window,
        quadrature: QuadratureConfig {
            rel_tol,
            ..ThreePhotonOutConfig::default().quadrature
        },
    };
    py.detach(|| twg::three_photon_out_wavefunction(&p, k, x, &cfg))
        .map(|v| v.total())
        .map_err(py_err)
}

/// Single-photon channel amplitudes (t11, t21, t22) of the two-waveguide emitter.
#[pyfunction]
#[pyo3(signature = (k, *, vbar1, vbar2, omega = 1.0))]
fn channel_amplitudes(k: f64, vbar1: f64, vbar2: f64, omega: f64) -> PyResult<(C64, C64, C64)> {
    let c = hwg::channel_amplitudes(&h_waveguide(omega, vbar1, vbar2)?, k).map_err(py_err)?;
    Ok((c.t11, c.t21, c.t22))
}

/// |g_ij(x)|^2 for outgoing pair "11", "12" or "22".
#[pyfunction]
#[pyo3(signature = (pair, k1, k2, x, *, vbar1, vbar2, omega = 1.0))]
fn correlation(
    pair: &str,
    k1: f64,
    k2: f64,
    x: f64,
    vbar1: f64,
    vbar2: f64,
    omega: f64,
) -> PyResult<f64> {
    let pair: ChannelPair = pair.parse().map_err(py_err)?;
    hwg::second_order_correlation(&h_waveguide(omega, vbar1, vbar2)?, pair, k1, k2, x)
        .map_err(py_err)
}

/// (id, name, passed, details) of one criterion.
type Report = (u32, String, bool, Vec<String>);

/// Run acceptance criteria (all when `ids` is None); list of
/// (id, name, passed, details).
#[pyfunction]
#[pyo3(signature = (ids = None))]
fn validate(py: Python<'_>, ids: Option<Vec<u32>>) -> PyResult<Vec<Report>> {
    let ids = ids.unwrap_or_else(|| validation::CRITERIA.iter().map(|c| c.0).collect());
    py.detach(|| {
        ids.iter()
            .map(|&id| {
                validation::run(id)
                    .map(|r| (r.id, r.name.to_string(), r.passed, r.details))
                    .ok_or_else(|| PyValueError::new_err(format!("no criterion {id}")))
            })
            .collect()
    })
}

#[pymodule]
fn photon_scatter(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(reflection_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(bound_states, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(two_photon_out, m)?)?;
    m.add_function(wrap_pyfunction!(two_photon_fluorescence, m)?)?;
    m.add_function(wrap_pyfunction!(three_photon_fluorescence, m)?)?;
    m.add_function(wrap_pyfunction!(three_photon_out, m)?)?;
    m.add_function(wrap_pyfunction!(channel_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(correlation, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
