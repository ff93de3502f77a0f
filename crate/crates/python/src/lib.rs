//! Python bindings: `import pyburstic`.

use burstic::cgzic::{gamma_chain as core_gamma_chain, run_cgzic_scheme, upper_bound_cgzic};
use burstic::schemes_two_user::{run_scheme, upper_bound_two_user};
use burstic::single_user::interference_free_rate as core_free_rate;
use burstic::sweep::{query_thresholds, reproduce_figure as core_reproduce, Figure, ThresholdMode};
use burstic::very_strong::is_very_strong;
use burstic::{Error, SchemeResult, SchemeTag, SearchConfig, UserBudget};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) | Error::Output(_) | Error::NoFeasiblePoint => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn tag(s: &str) -> PyResult<SchemeTag> {
    s.parse().map_err(to_py)
}

/// `(sum_rate, thetas)` for a scheme result; thetas is empty for Scheme I.
fn unpack(r: SchemeResult) -> (f64, Vec<f64>) {
    (r.sum_rate.bits(), r.profile.map(|p| p.thetas()).unwrap_or_default())
}

#[pyfunction]
fn capacity(snr: f64) -> PyResult<f64> {
    Ok(burstic::capacity(snr).map_err(to_py)?.bits())
}

#[pyfunction]
fn lambert_w0(x: f64) -> PyResult<f64> {
    burstic::lambert_w0(x).map_err(to_py)
}

/// Returns `(theta, nu)` of the rate-maximizing burst.
#[pyfunction]
fn optimal_burstiness(power: f64, eps: f64) -> PyResult<(f64, f64)> {
    let pt = burstic::optimal_burstiness(UserBudget::new(power, eps).map_err(to_py)?);
    Ok((pt.theta, pt.nu))
}

#[pyfunction]
fn interference_free_rate(power: f64, eps: f64) -> PyResult<f64> {
    Ok(core_free_rate(UserBudget::new(power, eps).map_err(to_py)?).bits())
}

#[pyfunction]
fn gamma_chain(a1: f64, a2: f64, p1: f64, p2: f64, p3: f64) -> [f64; 3] {
    core_gamma_chain(a1, a2, p1, p2, p3)
}

/// CSV text of a figure preset such as `"fig4"`.
#[pyfunction]
fn reproduce_figure(figure: &str) -> PyResult<String> {
    let fig: Figure = figure.parse().map_err(to_py)?;
    let table = core_reproduce(fig, &SearchConfig::default()).map_err(to_py)?;
    table.to_csv_string().map_err(to_py)
}

#[pyclass(frozen)]
struct TwoUserChannel {
    inner: burstic::TwoUserChannel,
}

#[pymethods]
impl TwoUserChannel {
    #[new]
    #[pyo3(signature = (a, b, p1, p2, eps1=0.0, eps2=0.0))]
    fn new(a: f64, b: f64, p1: f64, p2: f64, eps1: f64, eps2: f64) -> PyResult<Self> {
        let inner = burstic::TwoUserChannel::new(a, b, p1, p2, eps1, eps2).map_err(to_py)?;
        Ok(TwoUserChannel { inner })
    }

    /// `(sum_rate, thetas)` of scheme `"I"`..`"IV"`.
    fn scheme(&self, name: &str) -> PyResult<(f64, Vec<f64>)> {
        let r = run_scheme(&self.inner, tag(name)?, &SearchConfig::default()).map_err(to_py)?;
        Ok(unpack(r))
    }

    fn upper_bound(&self) -> f64 {
        upper_bound_two_user(&self.inner).bits()
    }

    fn hk_sum_rate(&self) -> f64 {
        let ch = &self.inner;
        burstic::hk_sum_rate(ch.p1(), ch.p2(), ch.a(), ch.b()).0.bits()
    }

    fn is_very_strong(&self) -> bool {
        is_very_strong(&self.inner)
    }

    /// `(a_min, b_min)`; mode is `"exact"` or `"asymptotic"`.
    #[pyo3(signature = (mode="exact"))]
    fn thresholds(&self, mode: &str) -> PyResult<(f64, f64)> {
        let mode: ThresholdMode = mode.parse().map_err(to_py)?;
        let rep = query_thresholds(&self.inner, mode).map_err(to_py)?;
        Ok((rep.a_min, rep.b_min))
    }

    fn __repr__(&self) -> String {
        let ch = &self.inner;
        format!(
            "TwoUserChannel(a={}, b={}, p1={}, p2={}, eps1={}, eps2={})",
            ch.a(),
            ch.b(),
            ch.p1(),
            ch.p2(),
            ch.eps1(),
            ch.eps2()
        )
    }
}

#[pyclass(frozen)]
struct CgzicChannel {
    inner: burstic::CgzicChannel,
}

#[pymethods]
impl CgzicChannel {
    #[new]
    #[pyo3(signature = (a1, a2, powers, eps=[0.0; 3]))]
    fn new(a1: f64, a2: f64, powers: [f64; 3], eps: [f64; 3]) -> PyResult<Self> {
        let inner = burstic::CgzicChannel::new(a1, a2, powers, eps).map_err(to_py)?;
        Ok(CgzicChannel { inner })
    }

    fn scheme(&self, name: &str) -> PyResult<(f64, Vec<f64>)> {
        let r = run_cgzic_scheme(&self.inner, tag(name)?, &SearchConfig::default()).map_err(to_py)?;
        Ok(unpack(r))
    }

    fn upper_bound(&self) -> f64 {
        upper_bound_cgzic(&self.inner).bits()
    }

    fn is_mixed_regime(&self) -> bool {
        self.inner.is_mixed_regime()
    }

    fn __repr__(&self) -> String {
        let ch = &self.inner;
        format!(
            "CgzicChannel(a1={}, a2={}, powers={:?}, eps={:?})",
            ch.a1(),
            ch.a2(),
            ch.powers(),
            ch.eps()
        )
    }
}

#[pymodule]
fn pyburstic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(capacity, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w0, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_burstiness, m)?)?;
    m.add_function(wrap_pyfunction!(interference_free_rate, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_chain, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_figure, m)?)?;
    m.add_class::<TwoUserChannel>()?;
    m.add_class::<CgzicChannel>()?;
    Ok(())
}
