//! Python bindings: parse curves, run the pipeline, read the report.

use polemono_core::pipeline::error_kind;
use polemono_core::{
    milnor_number, parse as parse_poly, run_poly, CurveReport, Error, HilbertData, HomogPoly, Mode, RankPolicy,
    RunConfig,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(polemono, PolemonoError, PyException);
create_exception!(polemono, NotHomogeneousError, PolemonoError);
create_exception!(polemono, NonReducedError, PolemonoError);
create_exception!(polemono, CentralPencilError, PolemonoError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match error_kind(&e) {
        "NotHomogeneous" => NotHomogeneousError::new_err(msg),
        "NonReduced" => NonReducedError::new_err(msg),
        "CentralPencil" => CentralPencilError::new_err(msg),
        _ => PolemonoError::new_err(msg),
    }
}

/// A homogeneous polynomial in x, y, z with rational coefficients.
#[pyclass(name = "Polynomial", module = "polemono", frozen, from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: HomogPoly,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_poly(text)
            .map(|inner| PyPolynomial { inner })
            .map_err(|e| to_py(e.into()))
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Gradient `(f_x, f_y, f_z)`.
    fn gradient(&self) -> Vec<PyPolynomial> {
        self.inner
            .gradient()
            .into_iter()
            .map(|inner| PyPolynomial { inner })
            .collect()
    }

    /// Graded dimensions `m(f)_j` of the Milnor algebra for `j ∈ [0, 5d]`.
    #[pyo3(signature = (primes=2, seed=0x5eed))]
    fn milnor_algebra_dims(&self, py: Python<'_>, primes: usize, seed: u64) -> PyResult<Vec<usize>> {
        let f = self.inner.clone();
        py.detach(|| HilbertData::compute(&f, &RankPolicy::modular(primes, seed)))
            .map(|h| h.m)
            .map_err(to_py)
    }

    #[pyo3(signature = (primes=2, seed=0x5eed))]
    fn milnor_number(&self, py: Python<'_>, primes: usize, seed: u64) -> PyResult<usize> {
        let f = self.inner.clone();
        py.detach(|| milnor_number(&f, &RankPolicy::modular(primes, seed), seed))
            .map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.inner == other.inner
    }
}

/// Result of [`analyze`].
#[pyclass(name = "Report", module = "polemono", frozen)]
struct PyReport {
    inner: CurveReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn degree(&self) -> usize {
        self.inner.hilbert.d
    }

    #[getter]
    fn mu(&self) -> usize {
        self.inner.mu()
    }

    #[getter]
    fn tau(&self) -> usize {
        self.inner.tau()
    }

    #[getter]
    fn mdr(&self) -> usize {
        self.inner.hilbert.mdr
    }

    #[getter]
    fn st(&self) -> usize {
        self.inner.hilbert.st
    }

    #[getter]
    fn ct(&self) -> Option<usize> {
        self.inner.hilbert.ct
    }

    #[getter]
    fn chi_u(&self) -> i64 {
        self.inner.spectral.chi_u
    }

    #[getter]
    fn q0(&self) -> Option<usize> {
        self.inner.spectral.q0_observed
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status().as_str()
    }

    #[getter]
    fn all_certified(&self) -> bool {
        self.inner.spectral.all_certified
    }

    #[getter]
    fn certificate(&self) -> Vec<bool> {
        self.inner.spectral.certificate.clone()
    }

    #[getter]
    fn eps_prime(&self) -> Vec<usize> {
        self.inner.first.epsprime.clone()
    }

    #[getter]
    fn theta(&self) -> Vec<usize> {
        self.inner.first.theta.clone()
    }

    #[getter]
    fn eps(&self) -> Vec<usize> {
        self.inner.second.eps.clone()
    }

    /// `grp_h1[p][k-1] = dim Gr_P^p H^1(F)_λ_k`.
    #[getter]
    fn grp_h1(&self) -> Vec<Vec<usize>> {
        self.inner.spectral.grp_h1.clone()
    }

    /// `grp_h2[p][k-1] = dim Gr_P^p H^2(F)_λ_k`.
    #[getter]
    fn grp_h2(&self) -> Vec<Vec<usize>> {
        self.inner.spectral.grp_h2.clone()
    }

    #[getter]
    fn h1_eigenspaces(&self) -> Vec<usize> {
        self.inner.invariants.h1_eigenspaces.clone()
    }

    #[getter]
    fn h2_eigenspaces(&self) -> Vec<usize> {
        self.inner.invariants.h2_eigenspaces.clone()
    }

    /// `[(num, den, mult)]` with exponent `num/den`.
    fn pole_spectrum(&self, j: u8) -> PyResult<Vec<(usize, usize, usize)>> {
        match j {
            0 => Ok(self.inner.invariants.sp_p0.entries.clone()),
            1 => Ok(self.inner.invariants.sp_p1.entries.clone()),
            _ => Err(PyValueError::new_err("j must be 0 or 1")),
        }
    }

    /// Certified roots of `b_f(-s)` as reduced `(num, den)` pairs.
    #[getter]
    fn bs_roots(&self) -> Vec<(usize, usize)> {
        self.inner
            .invariants
            .bs_roots_certified
            .roots
            .iter()
            .map(|r| (r.num, r.den))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(f='{}', mu={}, tau={}, status='{}')",
            self.inner.f,
            self.inner.mu(),
            self.inner.tau(),
            self.status()
        )
    }
}

/// Runs the full computation on a curve given as text or as a `Polynomial`.
#[pyfunction]
#[pyo3(signature = (curve, mode="auto", primes=2, exact=false, seed=0x5eed, threads=None))]
fn analyze(
    py: Python<'_>,
    curve: &Bound<'_, PyAny>,
    mode: &str,
    primes: usize,
    exact: bool,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<PyReport> {
    let (text, f) = if let Ok(p) = curve.cast::<PyPolynomial>() {
        let inner = p.get().inner.clone();
        (inner.to_string(), inner)
    } else {
        let text: String = curve.extract()?;
        let f = parse_poly(&text).map_err(|e| to_py(e.into()))?;
        (text, f)
    };
    let mode: Mode = mode.parse().map_err(PyValueError::new_err)?;
    if primes == 0 {
        return Err(PyValueError::new_err("primes must be at least 1"));
    }
    let config = RunConfig {
        mode,
        primes,
        exact,
        seed,
        threads,
    };
    py.detach(|| run_poly(&text, f, &config))
        .map(|inner| PyReport { inner })
        .map_err(to_py)
}

#[pymodule]
fn polemono(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add("PolemonoError", py.get_type::<PolemonoError>())?;
    m.add("NotHomogeneousError", py.get_type::<NotHomogeneousError>())?;
    m.add("NonReducedError", py.get_type::<NonReducedError>())?;
    m.add("CentralPencilError", py.get_type::<CentralPencilError>())?;
    m.add("SCHEMA", polemono_core::SCHEMA)?;
    Ok(())
}
