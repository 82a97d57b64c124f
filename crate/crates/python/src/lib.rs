//! Python bindings for `fintetris`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use fin::enumerate as en;
use fin::lps;
use fin::search::{self, Engine, GowersOutcome, SearchConfig, SolverCommand};
use fin::{subspace, Error};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e @ (Error::BudgetExceeded { .. } | Error::Solver(_)) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn hash_of(x: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

// `Vec<u8>` would cross over as `bytes`
fn widen(xs: &[u8]) -> Vec<u32> {
    xs.iter().map(|&x| x as u32).collect()
}

fn config(jobs: usize) -> SearchConfig {
    SearchConfig { jobs: jobs.max(1), ..SearchConfig::default() }
}

fn engine(solver: Option<&str>) -> PyResult<Engine> {
    match solver {
        None => Ok(Engine::Exhaustive),
        Some(cmd) => Ok(Engine::Cnf(SolverCommand::parse(cmd).map_err(to_py)?)),
    }
}

/// A nonzero vector in `FIN_k(n)`.
#[pyclass(name = "FinVector", module = "fintetris", frozen, eq, ord, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PyFinVector(fin::FinVector);

#[pymethods]
impl PyFinVector {
    #[new]
    fn new(values: Vec<i64>, k: i64) -> PyResult<Self> {
        fin::FinVector::new(&values, k).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_digits(digits: &str, k: i64) -> PyResult<Self> {
        fin::FinVector::from_digits(digits, k).map(Self).map_err(to_py)
    }

    #[getter]
    fn values(&self) -> Vec<u32> {
        widen(self.0.values())
    }

    #[getter]
    fn k(&self) -> u8 {
        self.0.k_bound()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn layer(&self) -> u8 {
        self.0.layer()
    }

    #[getter]
    fn support(&self) -> Vec<usize> {
        self.0.support().as_slice().to_vec()
    }

    /// `self + other`, defined only when `supp(self) < supp(other)`.
    fn ordered_sum(&self, other: &Self) -> PyResult<Self> {
        self.0.ordered_sum(&other.0).map(Self).map_err(to_py)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.ordered_sum(other)
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FinVector('{}', k={})", self.0, self.0.k_bound())
    }
}

/// A nondecreasing surjection `{0..k} -> {0..j}`.
#[pyclass(name = "TetrisMap", module = "fintetris", frozen, eq, ord, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PyTetrisMap(fin::TetrisMap);

#[pymethods]
impl PyTetrisMap {
    #[new]
    fn new(image: Vec<i64>) -> PyResult<Self> {
        fin::TetrisMap::new(&image).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn identity(k: u8) -> Self {
        Self(fin::TetrisMap::identity(k))
    }

    /// The basic map `T_i` on `{0..k}`.
    #[staticmethod]
    fn basic(i: u8, k: u8) -> PyResult<Self> {
        fin::TetrisMap::basic(i, k).map(Self).map_err(to_py)
    }

    #[getter]
    fn image(&self) -> Vec<u32> {
        widen(self.0.image())
    }

    #[getter]
    fn k(&self) -> u8 {
        self.0.k()
    }

    #[getter]
    fn j(&self) -> u8 {
        self.0.j()
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &Self) -> PyResult<Self> {
        self.0.compose(&inner.0).map(Self).map_err(to_py)
    }

    /// Pointwise image; `None` when every entry maps to zero.
    fn apply(&self, v: &PyFinVector) -> PyResult<Option<PyFinVector>> {
        Ok(self.0.apply(&v.0).map_err(to_py)?.into_vector().map(PyFinVector))
    }

    fn __call__(&self, v: &PyFinVector) -> PyResult<Option<PyFinVector>> {
        self.apply(v)
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TetrisMap({:?})", self.0.image())
    }
}

#[pyclass(name = "BlockSequence", module = "fintetris", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyBlockSequence(fin::BlockSequence);

#[pymethods]
impl PyBlockSequence {
    #[new]
    fn new(blocks: Vec<PyFinVector>) -> PyResult<Self> {
        fin::BlockSequence::new(blocks.into_iter().map(|b| b.0).collect())
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_digits(blocks: Vec<String>, k: i64) -> PyResult<Self> {
        fin::BlockSequence::from_digits(&blocks, k).map(Self).map_err(to_py)
    }

    #[getter]
    fn blocks(&self) -> Vec<PyFinVector> {
        self.0.blocks().iter().cloned().map(PyFinVector).collect()
    }

    #[getter]
    fn k(&self) -> u8 {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn prefix(&self, len: usize) -> PyResult<Self> {
        self.0.prefix(len).map(Self).map_err(to_py)
    }

    /// `TS_j` as a sorted list.
    fn subspace(&self, j: u8) -> PyResult<Vec<PyFinVector>> {
        tetris_subspace(self, j)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BlockSequence('{}')", self.0)
    }
}

/// A (possibly partial) `r`-coloring of `FIN_<=k(n)`.
#[pyclass(name = "Coloring", module = "fintetris", skip_from_py_object)]
#[derive(Clone)]
struct PyColoring(search::Coloring);

#[pymethods]
impl PyColoring {
    /// Colors from a `{"digits": color}` mapping; unlisted elements stay
    /// uncolored.
    #[new]
    #[pyo3(signature = (k, n, r, assignment=None))]
    fn new(k: u8, n: usize, r: u8, assignment: Option<HashMap<String, u8>>) -> PyResult<Self> {
        let mut c = search::Coloring::empty(k, n, r, 1).map_err(to_py)?;
        for (digits, color) in assignment.unwrap_or_default() {
            let v = fin::FinVector::from_digits(&digits, k as i64).map_err(to_py)?;
            c.set(&v, color).map_err(to_py)?;
        }
        Ok(Self(c))
    }

    #[staticmethod]
    fn constant(k: u8, n: usize, r: u8, color: u8) -> PyResult<Self> {
        search::Coloring::constant(k, n, r, 1, color).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        search::Coloring::from_json(text).map(Self).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn set(&mut self, v: &PyFinVector, color: u8) -> PyResult<()> {
        self.0.set(&v.0, color).map_err(to_py)
    }

    fn color_of(&self, v: &PyFinVector) -> PyResult<u8> {
        self.0.color_of(&v.0).map_err(to_py)
    }

    fn is_total(&self) -> PyResult<bool> {
        self.0.is_total().map_err(to_py)
    }

    fn assignment(&self) -> Vec<(String, u8)> {
        self.0.assignment()
    }

    #[getter]
    fn k(&self) -> u8 {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn r(&self) -> u8 {
        self.0.r()
    }

    fn __repr__(&self) -> String {
        format!("Coloring(k={}, n={}, r={})", self.0.k(), self.0.n(), self.0.r())
    }
}

/// A block sequence each of whose tetris subspaces is monochromatic.
#[pyclass(name = "Witness", module = "fintetris", frozen)]
struct PyWitness(search::Witness);

#[pymethods]
impl PyWitness {
    #[getter]
    fn blocks(&self) -> PyBlockSequence {
        PyBlockSequence(self.0.blocks.clone())
    }

    /// Entry `j - 1` is the color of `TS_j`.
    #[getter]
    fn colors(&self) -> Vec<u32> {
        widen(&self.0.per_layer_color)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Witness('{}')", self.0)
    }
}

#[pyfunction]
fn enum_fin(k: u8, n: usize) -> PyResult<Vec<PyFinVector>> {
    Ok(en::enum_fin(k, n).map_err(to_py)?.map(PyFinVector).collect())
}

#[pyfunction]
fn enum_fin_upto(k: u8, n: usize) -> PyResult<Vec<PyFinVector>> {
    Ok(en::enum_fin_upto(k, n).map_err(to_py)?.map(PyFinVector).collect())
}

#[pyfunction]
fn enum_surjections(k: u8, j: u8) -> PyResult<Vec<PyTetrisMap>> {
    Ok(en::enum_surjections(k, j).map_err(to_py)?.map(PyTetrisMap).collect())
}

#[pyfunction]
fn enum_block_sequences(k: u8, n: usize, ell: usize) -> PyResult<Vec<PyBlockSequence>> {
    Ok(en::enum_block_sequences(k, n, ell).map_err(to_py)?.map(PyBlockSequence).collect())
}

#[pyfunction]
fn fin_count(k: u8, n: usize) -> u128 {
    en::fin_count(k, n)
}

#[pyfunction]
fn surjection_count(k: u8, j: u8) -> u128 {
    en::surjection_count(k, j)
}

#[pyfunction]
fn block_sequence_count(k: u8, n: usize, ell: usize) -> u128 {
    en::block_sequence_count(k, n, ell)
}

#[pyfunction]
fn tetris_subspace(bs: &PyBlockSequence, j: u8) -> PyResult<Vec<PyFinVector>> {
    Ok(subspace::tetris_subspace(&bs.0, j).map_err(to_py)?.into_iter().map(PyFinVector).collect())
}

/// `TS_j^[m]` as a sorted list of `m`-tuples.
#[pyfunction]
fn tetris_subspace_multidim(bs: &PyBlockSequence, j: u8, m: usize) -> PyResult<Vec<Vec<PyFinVector>>> {
    Ok(subspace::tetris_subspace_multidim(&bs.0, j, m)
        .map_err(to_py)?
        .into_iter()
        .map(|t| t.parts().iter().cloned().map(PyFinVector).collect())
        .collect())
}

/// Every composite of basic tetris maps `{0..k} -> {0..j}`.
#[pyfunction]
fn composite_maps(k: u8, j: u8) -> PyResult<Vec<PyTetrisMap>> {
    Ok(subspace::composite_maps(k, j).map_err(to_py)?.into_iter().map(PyTetrisMap).collect())
}

/// Checks the blocks against the coloring; returns `(passed, message)`.
#[pyfunction]
fn verify_blocks(c: &PyColoring, bs: &PyBlockSequence) -> PyResult<(bool, String)> {
    let report = search::verify_blocks(&c.0, &bs.0).map_err(to_py)?;
    Ok((report.passed, report.to_string()))
}

#[pyfunction]
#[pyo3(signature = (c, ell, jobs=1))]
fn find_witness(py: Python<'_>, c: &PyColoring, ell: usize, jobs: usize) -> PyResult<Option<PyWitness>> {
    let cfg = config(jobs);
    let found = py.detach(|| search::find_witness(&c.0, ell, &cfg)).map_err(to_py)?;
    Ok(found.map(PyWitness))
}

/// A coloring of `FIN_<=k(n)` with no witness of length `ell`, or `None`.
/// With `solver` (e.g. `"kissat -q"`) the question goes to that DIMACS solver.
#[pyfunction]
#[pyo3(signature = (k, n, r, ell, solver=None, jobs=1))]
fn exists_bad_coloring(
    py: Python<'_>,
    k: u8,
    n: usize,
    r: u8,
    ell: usize,
    solver: Option<&str>,
    jobs: usize,
) -> PyResult<Option<PyColoring>> {
    let engine = engine(solver)?;
    let cfg = config(jobs);
    let found = py
        .detach(|| search::exists_bad_coloring(k, n, r, ell, &engine, &cfg))
        .map_err(to_py)?;
    Ok(found.map(PyColoring))
}

/// The least `n <= max_n` at which every coloring has a witness, or `None`.
#[pyfunction]
#[pyo3(signature = (k, r, ell, max_n=6, solver=None, jobs=1))]
fn gowers_number(
    py: Python<'_>,
    k: u8,
    r: u8,
    ell: usize,
    max_n: usize,
    solver: Option<&str>,
    jobs: usize,
) -> PyResult<Option<usize>> {
    let engine = engine(solver)?;
    let cfg = config(jobs);
    let outcome = py
        .detach(|| search::gowers_number(k, r, ell, &engine, max_n, &cfg))
        .map_err(to_py)?;
    Ok(match outcome {
        GowersOutcome::Resolved(n) => Some(n),
        GowersOutcome::Unresolved { .. } => None,
    })
}

/// DIMACS text of the bad-coloring question.
#[pyfunction]
fn export_cnf(k: u8, n: usize, r: u8, ell: usize) -> PyResult<String> {
    Ok(search::export_cnf(k, n, r, ell, &SearchConfig::default()).map_err(to_py)?.to_dimacs())
}

/// Runs every axiom check on the `FIN_<=k(n)` instance; returns
/// `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (k, n, horizon=1))]
fn check_fin_instance(py: Python<'_>, k: u8, n: usize, horizon: usize) -> PyResult<(bool, String)> {
    let report = py.detach(|| lps::check_fin_instance(k, n, horizon)).map_err(to_py)?;
    Ok((report.passed(), report.to_string()))
}

/// Checks a table given as JSON text; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (text, horizon=1))]
fn check_table(py: Python<'_>, text: &str, horizon: usize) -> PyResult<(bool, String)> {
    let spec = lps::TableFile::from_json(text).and_then(|f| f.build()).map_err(to_py)?;
    let report = py.detach(|| spec.check(horizon)).map_err(to_py)?;
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
fn fintetris(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFinVector>()?;
    m.add_class::<PyTetrisMap>()?;
    m.add_class::<PyBlockSequence>()?;
    m.add_class::<PyColoring>()?;
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(enum_fin, m)?)?;
    m.add_function(wrap_pyfunction!(enum_fin_upto, m)?)?;
    m.add_function(wrap_pyfunction!(enum_surjections, m)?)?;
    m.add_function(wrap_pyfunction!(enum_block_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(fin_count, m)?)?;
    m.add_function(wrap_pyfunction!(surjection_count, m)?)?;
    m.add_function(wrap_pyfunction!(block_sequence_count, m)?)?;
    m.add_function(wrap_pyfunction!(tetris_subspace, m)?)?;
    m.add_function(wrap_pyfunction!(tetris_subspace_multidim, m)?)?;
    m.add_function(wrap_pyfunction!(composite_maps, m)?)?;
    m.add_function(wrap_pyfunction!(verify_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(find_witness, m)?)?;
    m.add_function(wrap_pyfunction!(exists_bad_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(gowers_number, m)?)?;
    m.add_function(wrap_pyfunction!(export_cnf, m)?)?;
    m.add_function(wrap_pyfunction!(check_fin_instance, m)?)?;
    m.add_function(wrap_pyfunction!(check_table, m)?)?;
    Ok(())
}
