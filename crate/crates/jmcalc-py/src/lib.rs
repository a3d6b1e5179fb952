//! Python bindings.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use jmcalc::atoms::{GAtom, RGSum};
use jmcalc::ledger::{decomposition_of, Knowledge};
use jmcalc::mustar::{mu_star_depth, multiplicity_of, Depth, GExpr, GGTerm};
use jmcalc::parse::{parse_atom, parse_expr, parse_gl, parse_half};
use jmcalc::report::Report;
use jmcalc::theorems::{check_ids, verify_lemma, Ctx, TheoremError};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn theorem_err(e: TheoremError) -> PyErr {
    match e {
        TheoremError::UnknownCheck { .. } => PyKeyError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Atom", frozen, eq, hash, ord, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PyAtom(GAtom);

#[pymethods]
impl PyAtom {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        parse_atom(src).map(PyAtom).map_err(value_err)
    }

    fn is_tempered(&self) -> bool {
        self.0.is_tempered()
    }

    fn is_discrete_series(&self) -> bool {
        self.0.is_discrete_series()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Atom('{}')", self.0)
    }
}

#[pyclass(name = "Expr", frozen, from_py_object)]
#[derive(Clone)]
struct PyExpr(GExpr);

#[pymethods]
impl PyExpr {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        parse_expr(src).map(PyExpr).map_err(value_err)
    }

    fn exponent_count(&self) -> usize {
        self.0.exponent_count()
    }

    /// Jacquet module as `(coefficient, gl, g)` triples; `depth` is a level
    /// count or `"full"`.
    #[pyo3(signature = (depth = "1"))]
    fn mu_star(&self, depth: &str) -> PyResult<Vec<(i64, String, String)>> {
        let d = match depth {
            "full" => Depth::Full,
            n => Depth::Levels(n.parse().map_err(value_err)?),
        };
        let sum = mu_star_depth(&self.0, d).map_err(value_err)?;
        Ok(sum.terms().iter().map(|(t, &n)| (n, t.gl.to_string(), t.g.to_string())).collect())
    }

    /// Composition factors the knowledge base can certify, with a flag for
    /// completeness.
    fn decompose(&self) -> (BTreeMap<String, i64>, bool) {
        let d = Knowledge::new().decompose(&self.0);
        (sum_dict(&d.lower), d.complete)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.0)
    }
}

fn sum_dict(s: &RGSum) -> BTreeMap<String, i64> {
    s.terms().iter().map(|(a, &n)| (a.to_string(), n)).collect()
}

#[pyclass(name = "Triple", frozen, from_py_object)]
#[derive(Clone)]
struct PyTriple(jmcalc::ledger::Triple);

#[pymethods]
impl PyTriple {
    #[new]
    fn new(a: &str, b: &str, c: &str) -> PyResult<Self> {
        let h = |s: &str| parse_half(s).map_err(value_err);
        jmcalc::ledger::Triple::new(h(a)?, h(b)?, h(c)?).map(PyTriple).map_err(value_err)
    }

    fn psi(&self) -> PyExpr {
        PyExpr(self.0.psi())
    }

    fn main_decomposition(&self) -> PyResult<BTreeMap<String, i64>> {
        let k = Knowledge::new();
        Ctx::new(self.0, &k).main_decomposition().map(|s| sum_dict(&s)).map_err(theorem_err)
    }

    /// `W1 … W4` as lists of atom strings.
    fn filtration(&self) -> PyResult<Vec<Vec<String>>> {
        let k = Knowledge::new();
        let f = Ctx::new(self.0, &k).filtration().map_err(theorem_err)?;
        Ok(f.layers.iter().map(|l| l.atoms().map(|a| a.to_string()).collect()).collect())
    }

    fn ds_candidates(&self) -> PyResult<Vec<PyAtom>> {
        let k = Knowledge::new();
        let d = jmcalc::theorems::enumerate_ds_candidates(&self.0, &k).map_err(theorem_err)?;
        Ok(d.atoms.into_iter().map(PyAtom).collect())
    }

    /// Status of one registered check.
    fn verify_lemma(&self, id: &str) -> PyResult<String> {
        verify_lemma(id, self.0).map(|r| r.status.to_string()).map_err(theorem_err)
    }

    /// The full report as JSON.
    #[pyo3(signature = (only = None))]
    fn report_json(&self, only: Option<Vec<String>>) -> PyResult<String> {
        Report::run(self.0, only.as_deref()).map(|r| r.to_json()).map_err(theorem_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Triple{}", self.0)
    }
}

/// Multiplicity of `gl ⊗ g` in `μ*(host)`, as `"2"`, `">=1"` or `"?"`.
#[pyfunction]
fn multiplicity(gl: &str, g: &str, host: &str) -> PyResult<String> {
    let gl = parse_gl(gl).map_err(value_err)?;
    let g = parse_expr(g).map_err(value_err)?;
    let host = parse_expr(host).map_err(value_err)?;
    let k = Knowledge::new();
    Ok(multiplicity_of(&GGTerm::new(gl, g), &host, &k).mult.to_string())
}

/// A table entry's composition factors.
#[pyfunction]
fn decomposition(name: &str, params: Vec<String>) -> PyResult<BTreeMap<String, i64>> {
    let ps = params.iter().map(|p| parse_half(p)).collect::<Result<Vec<_>, _>>().map_err(value_err)?;
    decomposition_of(name, &ps).map(|s| sum_dict(&s)).map_err(value_err)
}

#[pyfunction(name = "check_ids")]
fn py_check_ids() -> Vec<&'static str> {
    check_ids()
}

#[pymodule]
fn jmcalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAtom>()?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyTriple>()?;
    m.add_function(wrap_pyfunction!(multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_ids, m)?)?;
    m.add("__version__", jmcalc::report::ENGINE_VERSION)?;
    Ok(())
}
