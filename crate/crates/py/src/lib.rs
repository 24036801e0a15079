//! Python bindings. Reports come back as plain dicts and lists.

use std::sync::Arc;

use cherednik::cherednik::{self as rca, CherednikAlgebra};
use cherednik::dunkl::{commute_check, quasi};
use cherednik::exactalg::{ParamScalar, Scalar};
use cherednik::hecke::{self, HeckeAlgebraPresentation, DEFAULT_MAX_COSETS};
use cherednik::kz::{self, LocalModel};
use cherednik::reflgroup::ReflectionGroup;
use cherednik::{cli, Error};
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn rational(s: &str) -> PyResult<BigRational> {
    cli::parse_rational(s).map_err(|_| PyValueError::new_err(format!("malformed number {s:?}")))
}

fn group(key: &str) -> PyResult<Arc<ReflectionGroup>> {
    let kind = key.parse().map_err(err)?;
    Ok(Arc::new(ReflectionGroup::build(kind).map_err(err)?))
}

fn signature(s: &str) -> PyResult<hecke::OrbifoldSignature> {
    s.parse().map_err(err)
}

/// [D_y, D_y'] p = 0 for monomials of degree ≤ deg, t and c formal.
#[pyfunction]
#[pyo3(signature = (group_key, deg = 6))]
fn dunkl_commute_check(py: Python<'_>, group_key: &str, deg: u32) -> PyResult<Py<PyAny>> {
    let g = group(group_key)?;
    to_py(py, &commute_check(&g, deg).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (group_key, deg = 3))]
fn pbw_dimension(py: Python<'_>, group_key: &str, deg: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &rca::pbw_dimension(&CherednikAlgebra::formal(group(group_key)?), deg))
}

/// Euler relations with t formal, or at the given value of t.
#[pyfunction]
#[pyo3(signature = (group_key, t = None))]
fn euler_check(py: Python<'_>, group_key: &str, t: Option<&str>) -> PyResult<Py<PyAny>> {
    let g = group(group_key)?;
    let alg = match t {
        Some(t) => CherednikAlgebra::with_t(g, ParamScalar::from_rational(rational(t)?)),
        None => CherednikAlgebra::formal(g),
    };
    to_py(py, &rca::euler_check(&alg))
}

#[pyfunction]
#[pyo3(signature = (group_key, deg = 4))]
fn satake_check(py: Python<'_>, group_key: &str, deg: u32) -> PyResult<Py<PyAny>> {
    let alg = CherednikAlgebra::with_t(group(group_key)?, ParamScalar::zero());
    to_py(py, &rca::satake_check_t0(&alg, deg).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (m, deg = 12, c = None))]
fn quasi_check(py: Python<'_>, m: u32, deg: u32, c: Option<&str>) -> PyResult<Py<PyAny>> {
    let c = match c {
        Some(c) => rational(c)?,
        None => BigRational::from_integer(m.into()),
    };
    to_py(
        py,
        &serde_json::json!({
            "invariance": quasi::quasi_invariance_check(m, deg, &c),
            "hilbert_series": quasi::quasi_hilbert_series(m),
        }),
    )
}

fn local_model(n: u32, c: Option<Vec<String>>, eta: Option<String>) -> PyResult<LocalModel> {
    match (c, eta) {
        (None, None) => LocalModel::formal(n).map_err(err),
        (c, eta) => {
            let c = match c {
                Some(c) => c.iter().map(|s| rational(s).map(ParamScalar::from_rational)).collect::<PyResult<_>>()?,
                None => vec![ParamScalar::zero(); n.saturating_sub(1) as usize],
            };
            let eta = match eta {
                Some(e) => ParamScalar::from_rational(rational(&e)?),
                None => ParamScalar::zero(),
            };
            LocalModel::new(n, c, eta).map_err(err)
        }
    }
}

/// Numeric monodromy compared with the exact characters.
#[pyfunction]
#[pyo3(signature = (n, c, eta = "0".to_string(), steps = cli::DEFAULT_STEPS))]
fn kz_monodromy(py: Python<'_>, n: u32, c: Vec<String>, eta: String, steps: usize) -> PyResult<Py<PyAny>> {
    let model = local_model(n, Some(c), Some(eta))?;
    let r = kz::monodromy_numeric(&model, steps).map_err(err)?;
    to_py(
        py,
        &serde_json::json!({
            "report": kz::KzReport::new(&model, &r),
            "hecke_residual": r.hecke_residual,
            "roots": kz::hecke_root_check(&model),
        }),
    )
}

/// τ_j / 2πi for j = 1..n; formal in c and η when they are omitted.
#[pyfunction]
#[pyo3(signature = (n, c = None, eta = None))]
fn kz_tau(n: u32, c: Option<Vec<String>>, eta: Option<String>) -> PyResult<Vec<String>> {
    Ok(local_model(n, c, eta)?.tau().coeffs.iter().map(ToString::to_string).collect())
}

/// Order of the orbifold group, or None if enumeration overflows.
#[pyfunction]
#[pyo3(signature = (sig, max_cosets = DEFAULT_MAX_COSETS))]
fn orbifold_group_order(sig: &str, max_cosets: usize) -> PyResult<Option<usize>> {
    let p = hecke::orbifold_presentation(&signature(sig)?);
    Ok(hecke::todd_coxeter(&p, max_cosets).ok().map(|r| r.degree))
}

#[pyfunction]
#[pyo3(signature = (sig, max_cosets = DEFAULT_MAX_COSETS))]
fn sphere_obstruction(py: Python<'_>, sig: &str, max_cosets: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &hecke::sphere_obstruction(&signature(sig)?, max_cosets).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (sig, max_cosets = DEFAULT_MAX_COSETS))]
fn signature_verdict(py: Python<'_>, sig: &str, max_cosets: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &hecke::signature_verdict(&signature(sig)?, max_cosets))
}

/// Rank of a catalog Hecke algebra: "cyclic" (with n), "A2", or an
/// orbifold signature.
#[pyfunction]
#[pyo3(signature = (kind, n = None, trunc = 2, cap = None))]
fn hecke_rank(py: Python<'_>, kind: &str, n: Option<u32>, trunc: u32, cap: Option<usize>) -> PyResult<Py<PyAny>> {
    let h = match kind {
        "cyclic" => HeckeAlgebraPresentation::cyclic(n.ok_or_else(|| PyValueError::new_err("cyclic needs n"))?, trunc),
        "A2" | "a2" => HeckeAlgebraPresentation::type_a2(trunc),
        other => HeckeAlgebraPresentation::from_signature(&signature(other)?, trunc),
    };
    let cap = cap.unwrap_or_else(|| {
        let local = h.local.iter().map(|l| l.order as usize).max().unwrap_or(1);
        local.max(3) + 1
    });
    to_py(py, &hecke::hecke_dimension(&h, cap, DEFAULT_MAX_COSETS).map_err(err)?)
}

/// Runs the command-line harness in process; returns (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cherednik".to_string()).chain(args);
    let code = cli::run(argv, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pyclass(frozen, name = "OrbifoldSignature")]
struct PySignature(hecke::OrbifoldSignature);

#[pymethods]
impl PySignature {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PySignature(signature(text)?))
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus
    }

    #[getter]
    fn orders(&self) -> Vec<u32> {
        self.0.orders.clone()
    }

    /// χ^orb as an exact fraction string.
    #[getter]
    fn chi_orb(&self) -> String {
        self.0.chi_orb().to_string()
    }

    #[getter]
    fn geometry(&self) -> &'static str {
        match self.0.geometry() {
            hecke::Geometry::Spherical => "spherical",
            hecke::Geometry::Euclidean => "euclidean",
            hecke::Geometry::Hyperbolic => "hyperbolic",
        }
    }

    fn presentation(&self) -> String {
        hecke::orbifold_presentation(&self.0).to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("OrbifoldSignature({:?})", self.0.to_string())
    }
}

#[pymodule]
fn cherednik_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_function(wrap_pyfunction!(dunkl_commute_check, m)?)?;
    m.add_function(wrap_pyfunction!(pbw_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(euler_check, m)?)?;
    m.add_function(wrap_pyfunction!(satake_check, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_check, m)?)?;
    m.add_function(wrap_pyfunction!(kz_monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(kz_tau, m)?)?;
    m.add_function(wrap_pyfunction!(orbifold_group_order, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(signature_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_rank, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
