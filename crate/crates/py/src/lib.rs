//! Python bindings: matroids, representations, proxies and the class engine.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;

use minorforge::engine::{self, ClassSpec, EngineConfig, FilterConfig, LevelStore};
use minorforge::linrep::{self, ExtensionMode};
use minorforge::matroid::{self, catalog, elements_of, BasisMatroid, MinorCache};
use minorforge::pfield::{self, PartialFieldPresentation, DEFAULT_BOUND, DEFAULT_PRIME_CEILING};
use minorforge::{Error, FieldSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } | Error::GroupIo { .. } => PyIOError::new_err(e.to_string()),
        Error::UnknownName(_) => PyKeyError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A matroid on `{0, ..., n-1}` given by its bases.
#[pyclass(name = "Matroid", module = "minorforge", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyMatroid {
    inner: BasisMatroid,
}

impl From<BasisMatroid> for PyMatroid {
    fn from(inner: BasisMatroid) -> Self {
        PyMatroid { inner }
    }
}

fn mask(elements: &[usize], n: usize) -> PyResult<u32> {
    let mut m = 0u32;
    for &e in elements {
        if e >= n {
            return Err(PyValueError::new_err(format!("element {e} out of range for n = {n}")));
        }
        m |= 1 << e;
    }
    Ok(m)
}

#[pymethods]
impl PyMatroid {
    /// Builds a matroid from a list of bases.
    #[new]
    fn new(n: usize, rank: usize, bases: Vec<Vec<usize>>) -> PyResult<Self> {
        BasisMatroid::from_bases(n, rank, &bases).map(Into::into).map_err(to_py)
    }

    /// A catalog matroid, e.g. `"F7-"`, `"P8"` or `"U2,5*"`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        catalog::get(name).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn catalog_names() -> Vec<&'static str> {
        catalog::NAMES.to_vec()
    }

    #[staticmethod]
    fn uniform(rank: usize, n: usize) -> Self {
        BasisMatroid::uniform(rank, n).into()
    }

    /// Parses the `B n r hex` form produced by `serialize`.
    #[staticmethod]
    fn parse(line: &str) -> PyResult<Self> {
        BasisMatroid::parse(line).map(Into::into).map_err(to_py)
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn basis_count(&self) -> usize {
        self.inner.basis_count()
    }

    fn bases(&self) -> Vec<Vec<usize>> {
        self.inner.bases().map(elements_of).collect()
    }

    fn rank_of(&self, elements: Vec<usize>) -> PyResult<usize> {
        Ok(self.inner.rank_of(mask(&elements, self.inner.n())?))
    }

    fn dual(&self) -> Self {
        self.inner.dual().into()
    }

    fn delete(&self, e: usize) -> PyResult<Self> {
        mask(&[e], self.inner.n())?;
        Ok(self.inner.delete(e).into())
    }

    fn contract(&self, e: usize) -> PyResult<Self> {
        mask(&[e], self.inner.n())?;
        Ok(self.inner.contract(e).into())
    }

    /// Relaxes a circuit-hyperplane.
    fn relax(&self, elements: Vec<usize>) -> PyResult<Self> {
        self.inner.relax(mask(&elements, self.inner.n())?).map(Into::into).map_err(to_py)
    }

    fn circuit_hyperplanes(&self) -> Vec<Vec<usize>> {
        self.inner.circuit_hyperplanes().into_iter().map(elements_of).collect()
    }

    fn is_simple(&self) -> bool {
        self.inner.is_simple()
    }

    fn is_cosimple(&self) -> bool {
        self.inner.is_cosimple()
    }

    fn is_3connected(&self) -> bool {
        self.inner.is_3connected()
    }

    fn is_isomorphic(&self, other: &PyMatroid) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    /// A relabelling `p` with `self.relabel(p) == other`, or `None`.
    fn isomorphism(&self, other: &PyMatroid) -> Option<Vec<usize>> {
        self.inner.isomorphism(&other.inner)
    }

    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        let n = self.inner.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(PyValueError::new_err("not a permutation of the ground set"));
        }
        Ok(self.inner.relabel(&perm).into())
    }

    /// True iff `minor` is isomorphic to a minor of this matroid.
    fn has_minor(&self, minor: &PyMatroid) -> bool {
        matroid::has_minor_iso(&self.inner, &minor.inner, &MinorCache::new())
    }

    /// The Delta-Y class up to isomorphism.
    #[pyo3(signature = (with_duals = true))]
    fn delta_y_class(&self, with_duals: bool) -> Vec<PyMatroid> {
        matroid::delta_y_closure(&self.inner, with_duals).into_iter().map(Into::into).collect()
    }

    /// Catalog name of this matroid (or its dual), if any.
    fn catalog_name(&self) -> Option<String> {
        engine::catalog_name(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Matroid({:?})", self.inner.serialize())
    }

    fn __hash__(&self) -> u64 {
        self.inner.invariant_key().hash
    }
}

/// A reduced matrix `[I | A]` over a finite field.
#[pyclass(name = "LinearRep", module = "minorforge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyLinearRep {
    inner: linrep::LinearRep,
}

#[pymethods]
impl PyLinearRep {
    /// The reduced matrix with rows `a` over GF(q); entries are reduced mod q
    /// for prime q and use the 0, 1, 2 = x, 3 = x + 1 encoding for GF(4).
    #[new]
    fn new(q: u32, a: Vec<Vec<i64>>) -> PyResult<Self> {
        let field = FieldSpec::new(q).map_err(to_py)?;
        linrep::LinearRep::from_rows(field, &a).map(|inner| PyLinearRep { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn parse(line: &str) -> PyResult<Self> {
        linrep::LinearRep::parse(line).map(|inner| PyLinearRep { inner }).map_err(to_py)
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.field.order()
    }

    fn matroid(&self) -> PyMatroid {
        self.inner.matroid().into()
    }

    fn dual(&self) -> Self {
        PyLinearRep { inner: self.inner.dual() }
    }

    fn pivot(&self, i: usize, j: usize) -> PyResult<Self> {
        if i >= self.inner.r() || j >= self.inner.c() {
            return Err(PyValueError::new_err("pivot position out of range"));
        }
        self.inner.pivot(i, j).map(|inner| PyLinearRep { inner }).map_err(to_py)
    }

    /// Cross ratios of the matrix, as field elements.
    fn cross_ratios(&self) -> Vec<u32> {
        linrep::cross_ratios(&self.inner).into_iter().collect()
    }

    fn __repr__(&self) -> String {
        format!("LinearRep({:?})", self.inner.serialize())
    }
}

/// A finite-field proxy for a partial field.
#[pyclass(name = "Proxy", module = "minorforge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyProxy {
    inner: pfield::Proxy,
}

#[pymethods]
impl PyProxy {
    #[getter]
    fn pf(&self) -> String {
        self.inner.pf_name.clone()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.field.order()
    }

    #[getter]
    fn images(&self) -> BTreeMap<String, u32> {
        self.inner.image_keys.iter().cloned().zip(self.inner.images.iter().copied()).collect()
    }

    /// The confinement set, without 0 and 1.
    #[getter]
    fn f(&self) -> Vec<u32> {
        self.inner.f.clone()
    }

    fn stanza(&self) -> String {
        self.inner.stanza()
    }

    /// True iff every cross ratio of `rep` lies in `F` together with 0, 1.
    fn confines(&self, rep: &PyLinearRep) -> PyResult<bool> {
        if rep.inner.field != self.inner.field {
            return Err(PyValueError::new_err("representation is over a different field"));
        }
        Ok(linrep::is_confined(&rep.inner, self.inner.allowed_table()))
    }

    fn __repr__(&self) -> String {
        format!("Proxy({:?})", self.inner.stanza())
    }
}

/// The proxy over the smallest prime admitting one.
#[pyfunction]
#[pyo3(signature = (pf, prime_ceiling = DEFAULT_PRIME_CEILING, bound = DEFAULT_BOUND))]
fn find_proxy(py: Python<'_>, pf: &str, prime_ceiling: u32, bound: i32) -> PyResult<PyProxy> {
    let pres = PartialFieldPresentation::resolve(pf).map_err(to_py)?;
    py.detach(|| pfield::find_proxy(&pres, &pres.fundamentals(bound), prime_ceiling))
        .map(|inner| PyProxy { inner })
        .map_err(to_py)
}

/// Checks a candidate proxy; raises `ValueError` naming the violated condition.
#[pyfunction]
#[pyo3(signature = (pf, q, images, bound = DEFAULT_BOUND))]
fn verify_proxy(pf: &str, q: u32, images: Vec<u32>, bound: i32) -> PyResult<PyProxy> {
    let pres = PartialFieldPresentation::resolve(pf).map_err(to_py)?;
    let field = FieldSpec::new(q).map_err(to_py)?;
    pfield::verify_proxy(&pres, &pres.fundamentals(bound), &field, &images)
        .map(|inner| PyProxy { inner })
        .map_err(|v| PyValueError::new_err(v.to_string()))
}

/// A confined representation of `m` over the proxy of `class_name`, if any.
#[pyfunction]
fn confined_rep(class_name: &str, m: &PyMatroid) -> PyResult<Option<PyLinearRep>> {
    let class = ClassSpec::resolve(class_name).map_err(to_py)?;
    let rep = linrep::find_confined_rep(&m.inner, &class.proxy.field, Some(class.proxy.allowed_table()));
    Ok(rep.map(|inner| PyLinearRep { inner }))
}

fn open(store: PathBuf, class_name: &str) -> PyResult<(ClassSpec, LevelStore)> {
    let class = ClassSpec::resolve(class_name).map_err(to_py)?;
    let ls = LevelStore::open(&store, &class.name).map_err(to_py)?;
    Ok((class, ls))
}

fn config(groups: usize, batch_size: usize, fast: bool) -> EngineConfig {
    EngineConfig {
        filter: FilterConfig { groups, batch_size },
        mode: if fast { ExtensionMode::Fast } else { ExtensionMode::Exact },
    }
}

/// Generates (or verifies) levels up to `max_n`; returns `{n: {rank: count}}`.
#[pyfunction]
#[pyo3(signature = (class_name, max_n, store, groups = 127, batch_size = 100_000, fast_confinement = false))]
fn generate(
    py: Python<'_>,
    class_name: &str,
    max_n: usize,
    store: PathBuf,
    groups: usize,
    batch_size: usize,
    fast_confinement: bool,
) -> PyResult<BTreeMap<usize, BTreeMap<usize, usize>>> {
    let (class, ls) = open(store, class_name)?;
    let cfg = config(groups, batch_size, fast_confinement);
    py.detach(|| {
        for n in class.n0()..=max_n {
            if ls.is_complete(n) {
                ls.read_level(&class.name, n)?;
            } else {
                engine::generate_level(&class, n, &ls, &cfg)?;
            }
        }
        engine::counts_report(&class.name, &ls)
    })
    .map_err(to_py)
}

/// Per-rank counts of every complete level in the store.
#[pyfunction]
fn counts(class_name: &str, store: PathBuf) -> PyResult<BTreeMap<usize, BTreeMap<usize, usize>>> {
    let (class, ls) = open(store, class_name)?;
    engine::counts_report(&class.name, &ls).map_err(to_py)
}

/// Members of one complete level.
#[pyfunction]
fn members(class_name: &str, n: usize, store: PathBuf) -> PyResult<Vec<PyMatroid>> {
    let (class, ls) = open(store, class_name)?;
    let level = ls.read_level(&class.name, n).map_err(to_py)?;
    Ok(level.into_iter().map(|r| r.matroid.into()).collect())
}

/// Excluded minors found by the sieve, by size, for sizes up to `max_n`.
#[pyfunction]
#[pyo3(signature = (class_name, max_n, store, groups = 127, batch_size = 100_000))]
fn excluded_minors(
    py: Python<'_>,
    class_name: &str,
    max_n: usize,
    store: PathBuf,
    groups: usize,
    batch_size: usize,
) -> PyResult<BTreeMap<usize, Vec<PyMatroid>>> {
    let (class, ls) = open(store, class_name)?;
    let cfg = config(groups, batch_size, false);
    let report = py.detach(|| engine::excluded_minors(&class, max_n, &ls, &cfg)).map_err(to_py)?;
    if !report.base_ok() {
        return Err(PyValueError::new_err("base excluded-minor list failed verification"));
    }
    Ok(report.sieved.into_iter().map(|(n, v)| (n, v.into_iter().map(Into::into).collect())).collect())
}

/// `(name, outside_class, failing_single_element_minors)` per base matroid.
#[pyfunction]
fn verify_base(py: Python<'_>, class_name: &str) -> PyResult<Vec<(String, bool, Vec<String>)>> {
    let class = ClassSpec::resolve(class_name).map_err(to_py)?;
    let checks = py.detach(|| engine::verify_base_excluded(&class)).map_err(to_py)?;
    Ok(checks.into_iter().map(|b| (b.name, b.outside, b.failing_minors)).collect())
}

#[pymodule]
fn minorforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatroid>()?;
    m.add_class::<PyLinearRep>()?;
    m.add_class::<PyProxy>()?;
    m.add_function(wrap_pyfunction!(find_proxy, m)?)?;
    m.add_function(wrap_pyfunction!(verify_proxy, m)?)?;
    m.add_function(wrap_pyfunction!(confined_rep, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(counts, m)?)?;
    m.add_function(wrap_pyfunction!(members, m)?)?;
    m.add_function(wrap_pyfunction!(excluded_minors, m)?)?;
    m.add_function(wrap_pyfunction!(verify_base, m)?)?;
    m.add("BUILTIN_CLASSES", engine::BUILTIN_CLASSES.to_vec())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
