//! Python bindings for rapprox.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rapprox::approx;
use rapprox::arith::fmt_q;
use rapprox::cli::{self, Params};
use rapprox::cones::{is_dual_pair, Cone};
use rapprox::nslattice::{self, format_combination};
use rapprox::predictor::{self, PointContext};
use rapprox::projective;
use rapprox::ratcurves::named;
use rapprox::serial::to_sorted_json;

fn err(e: rapprox::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A point of P^n(Q) in canonical coordinates.
#[pyclass(name = "ProjPoint", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyProjPoint(projective::ProjPoint);

#[pymethods]
impl PyProjPoint {
    #[new]
    fn new(coords: Vec<BigInt>) -> PyResult<Self> {
        projective::ProjPoint::new(&coords).map(PyProjPoint).map_err(err)
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        projective::ProjPoint::parse_colon(s).map(PyProjPoint).map_err(err)
    }

    #[getter]
    fn coords(&self) -> Vec<BigInt> {
        self.0.coords().to_vec()
    }

    #[getter]
    fn height(&self) -> BigInt {
        self.0.height()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Exact distance as (numerator, denominator).
    fn distance(&self, other: &PyProjPoint) -> PyResult<(BigInt, BigInt)> {
        let d = projective::distance(&self.0, &other.0).map_err(err)?;
        Ok((d.numer().clone(), d.denom().clone()))
    }

    fn affine_chart_distance(&self, other: &PyProjPoint, chart: usize) -> PyResult<(BigInt, BigInt)> {
        let d = projective::affine_chart_distance(&self.0, &other.0, chart).map_err(err)?;
        Ok((d.numer().clone(), d.denom().clone()))
    }

    fn __repr__(&self) -> String {
        format!("ProjPoint({})", self.0.to_colon_string())
    }

    fn __str__(&self) -> String {
        self.0.to_colon_string()
    }
}

/// A named surface with its intersection lattice and cones.
#[pyclass(name = "Preset", frozen)]
struct PyPreset(nslattice::Preset);

#[pymethods]
impl PyPreset {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        nslattice::preset(spec).map(PyPreset).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.0.lattice.labels().to_vec()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<BigInt>> {
        self.0.lattice.gram().to_vec()
    }

    #[getter]
    fn effective(&self) -> Vec<String> {
        self.0.effective.clone()
    }

    #[getter]
    fn nef(&self) -> Vec<String> {
        self.0.nef.clone()
    }

    fn class_names(&self) -> Vec<String> {
        self.0.classes.keys().cloned().collect()
    }

    /// Integer coefficients of a class expression such as "2L-E1-E2".
    fn vector(&self, expr: &str) -> PyResult<Vec<BigInt>> {
        self.0.parse_int(expr).map_err(err)
    }

    /// Intersection number of two class expressions, as a string.
    fn intersect(&self, a: &str, b: &str) -> PyResult<String> {
        let a = self.0.parse(a).map_err(err)?;
        let b = self.0.parse(b).map_err(err)?;
        Ok(fmt_q(&a.dot(&b).map_err(err)?))
    }

    fn table(&self, names: Vec<String>) -> PyResult<Vec<Vec<BigInt>>> {
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        nslattice::intersection_table(&self.0, &refs).map_err(err)
    }

    /// Extremal rays of the dual of the effective cone, as expressions.
    fn nef_rays(&self) -> PyResult<Vec<String>> {
        let eff = Cone::new(self.0.lattice.clone(), self.0.effective_vectors()).map_err(err)?;
        let dual = eff.dual().map_err(err)?;
        Ok(dual
            .generators()
            .iter()
            .map(|g| format_combination(self.0.lattice.labels(), &rapprox::arith::to_q(g)))
            .collect())
    }

    fn is_dual_pair(&self) -> PyResult<bool> {
        let eff = Cone::new(self.0.lattice.clone(), self.0.effective_vectors()).map_err(err)?;
        let nef = Cone::new(self.0.lattice.clone(), self.0.nef_vectors()).map_err(err)?;
        is_dual_pair(&eff, &nef).map_err(err)
    }

    /// Least D.C/m over `candidates` = [(label, class, mult)]. Returns
    /// (alpha, winners).
    fn predict(&self, candidates: Vec<(String, String, u32)>, divisor: &str) -> PyResult<(String, Vec<String>)> {
        let cat: Vec<(&str, &str, u32)> = candidates.iter().map(|(l, c, m)| (l.as_str(), c.as_str(), *m)).collect();
        let ctx = PointContext::from_preset(&self.0, &cat).map_err(err)?;
        let d = self.0.parse(divisor).map_err(err)?;
        let p = predictor::predict_alpha(&ctx, &d).map_err(err)?;
        Ok((fmt_q(&p.alpha), p.winners))
    }

    fn __repr__(&self) -> String {
        format!("Preset({:?})", self.0.name)
    }
}

#[pyfunction]
fn enumerate_p1(b: i64) -> Vec<PyProjPoint> {
    approx::enumerate_p1(b).into_iter().map(PyProjPoint).collect()
}

#[pyfunction]
fn enumerate_p2(b: i64) -> Vec<PyProjPoint> {
    approx::enumerate_p2(b).into_iter().map(PyProjPoint).collect()
}

/// Number of points of P^n(Q) with height at most b.
#[pyfunction]
fn counting_function(n: usize, b: u64) -> BigInt {
    approx::counting_function(n, b)
}

/// d/m times the embedding degree for a named curve at parameter t0.
#[pyfunction]
#[pyo3(signature = (curve, t0, embedding_degree = 1))]
fn alpha_along(curve: &str, t0: &PyProjPoint, embedding_degree: u64) -> PyResult<String> {
    let c = match curve {
        "cusp" => named::cuspidal_cubic(),
        "quintic_cusp" => named::quintic_cusp(),
        "line" => named::line(),
        "twisted_cubic" => named::twisted_cubic(),
        "conic" => named::conic(),
        _ => return Err(PyValueError::new_err(format!("unknown curve {curve:?}"))),
    };
    if t0.0.dim() != 1 {
        return Err(PyValueError::new_err("parameter must be a point of P^1"));
    }
    if embedding_degree == 0 {
        return Err(PyValueError::new_err("embedding degree must be positive"));
    }
    Ok(fmt_q(&c.alpha_along(&t0.0, embedding_degree)))
}

/// Run a scenario given as JSON text; returns the report as sorted JSON
/// (or CSV when the scenario asks for it).
#[pyfunction]
fn run_scenario(text: &str) -> PyResult<String> {
    let params = Params::from_scenario(text).map_err(err)?;
    let format = params.format().map_err(err)?;
    let report = cli::run(&params).map_err(err)?;
    report.render(format).map_err(err)
}

/// Verification suite summary as JSON.
#[pyfunction]
fn verify() -> PyResult<String> {
    let p = Params {
        task: Some("verify".into()),
        ..Default::default()
    };
    let r = cli::run(&p).map_err(err)?;
    Ok(to_sorted_json(&r.json))
}

#[pymodule]
fn rapprox_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProjPoint>()?;
    m.add_class::<PyPreset>()?;
    m.add_function(wrap_pyfunction!(enumerate_p1, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_p2, m)?)?;
    m.add_function(wrap_pyfunction!(counting_function, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_along, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("PRESETS", nslattice::PRESET_NAMES.to_vec())?;
    Ok(())
}
