//! Python bindings: rings, ideals, grades, Cohen-Macaulay checks and the
//! script session.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use cmgrade::cmsense::{self, FamilyOptions, Sense, TestFamily};
use cmgrade::constructors::{self, ValuationModel};
use cmgrade::dsl::{self, Options};
use cmgrade::grade;
use cmgrade::poly::{MonomialOrder, Poly, PolyRing};
use cmgrade::ring::{self, IdealHandle, PresentedModule, PresentedRing};
use cmgrade::scalars::Field;
use cmgrade::IntOrInf;

create_exception!(cmgrade_py, CmgradeError, PyException);

fn err(e: cmgrade::Error) -> PyErr {
    CmgradeError::new_err(e.to_string())
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(f)) => f.into_pyobject(py)?.into_any(),
            _ => py.None().into_bound(py),
        },
        // infinite grades serialize as the string "inf"
        Value::String(s) if s == "inf" => f64::INFINITY.into_pyobject(py)?.into_any(),
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(value_to_py(py, x)?)?;
            }
            l.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, value_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn to_py<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| CmgradeError::new_err(e.to_string()))?;
    value_to_py(py, &v)
}

fn int_or_inf<'py>(py: Python<'py>, g: IntOrInf) -> PyResult<Bound<'py, PyAny>> {
    Ok(match g {
        IntOrInf::Fin(n) => n.into_pyobject(py)?.into_any(),
        IntOrInf::Inf => f64::INFINITY.into_pyobject(py)?.into_any(),
    })
}

fn parse_field(s: &str) -> PyResult<Field> {
    let t = s.trim();
    if t == "QQ" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("GF(")
        .or_else(|| t.strip_prefix("ZZ/"))
        .map(|r| r.trim_end_matches(')'))
        .and_then(|r| r.trim().parse::<u64>().ok())
        .ok_or_else(|| CmgradeError::new_err(format!("unsupported field `{s}`")))?;
    Field::prime(p).map_err(err)
}

/// `k[vars] / (relations)`.
#[pyclass(module = "cmgrade_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ring {
    inner: ring::Ring,
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (vars, relations = Vec::new(), field = "QQ"))]
    fn new(vars: Vec<String>, relations: Vec<String>, field: &str) -> PyResult<Ring> {
        let s = PolyRing::new(parse_field(field)?, vars, MonomialOrder::DegRevLex);
        let gens = relations.iter().map(|r| dsl::parse_poly(&s, r)).collect::<cmgrade::Result<Vec<Poly>>>().map_err(err)?;
        Ok(Ring { inner: PresentedRing::new(&s, &gens).map_err(err)? })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.ambient().vars().to_vec()
    }

    #[getter]
    fn relations(&self) -> Vec<String> {
        self.inner.defining().iter().map(Poly::to_string).collect()
    }

    fn krull_dim(&self) -> PyResult<usize> {
        self.inner.krull_dim().map_err(err)
    }

    fn is_polynomial_ring(&self) -> bool {
        self.inner.is_polynomial_ring()
    }

    fn ideal(&self, gens: Vec<String>) -> PyResult<Ideal> {
        let gs: Vec<&str> = gens.iter().map(String::as_str).collect();
        Ok(Ideal { inner: IdealHandle::parse(&self.inner, &gs).map_err(err)? })
    }

    /// The ideal generated by the variables.
    fn irrelevant(&self) -> Ideal {
        Ideal { inner: IdealHandle::irrelevant(&self.inner) }
    }

    /// Normal form of an element modulo the relations.
    fn reduce(&self, f: &str) -> PyResult<String> {
        let p = self.inner.parse(f).map_err(err)?;
        Ok(self.inner.reduce(&p).map_err(err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Ring({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A finitely generated ideal of a `Ring`.
#[pyclass(module = "cmgrade_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ideal {
    inner: IdealHandle,
}

impl Ideal {
    fn module(&self, module: Option<Vec<Vec<String>>>) -> PyResult<PresentedModule> {
        let r = self.inner.ring();
        match module {
            None => Ok(PresentedModule::free(r, 1)),
            Some(rows) => {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(|f| r.parse(f)).collect::<cmgrade::Result<Vec<Poly>>>())
                    .collect::<cmgrade::Result<Vec<_>>>()
                    .map_err(err)?;
                PresentedModule::coker(r, &rows).map_err(err)
            }
        }
    }
}

#[pymethods]
impl Ideal {
    #[getter]
    fn gens(&self) -> Vec<String> {
        self.inner.gens().iter().map(Poly::to_string).collect()
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring { inner: self.inner.ring().clone() }
    }

    fn is_unit(&self) -> bool {
        self.inner.is_unit()
    }

    fn contains(&self, f: &str) -> PyResult<bool> {
        let p = self.inner.ring().parse(f).map_err(err)?;
        self.inner.contains(&p).map_err(err)
    }

    fn height<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        int_or_inf(py, self.inner.height().map_err(err)?)
    }

    fn minimal_primes(&self) -> PyResult<Vec<Ideal>> {
        Ok(self.inner.minimal_primes().map_err(err)?.into_iter().map(|p| Ideal { inner: p.ideal }).collect())
    }

    /// Grade on `R` or on the cokernel of `module` (rows of a relation matrix).
    /// `notion` is one of koszul, ext, classical, pgrade, hgrade, cech.
    #[pyo3(signature = (notion = "koszul", module = None, n_max = 3, depth_bound = 4))]
    fn grade<'py>(
        &self,
        py: Python<'py>,
        notion: &str,
        module: Option<Vec<Vec<String>>>,
        n_max: usize,
        depth_bound: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let m = self.module(module)?;
        let a = &self.inner;
        let n = grade::Notion::parse(notion).ok_or_else(|| CmgradeError::new_err(format!("unknown notion `{notion}`")))?;
        let r = py
            .detach(|| match n {
                grade::Notion::Koszul => grade::koszul_grade(a, &m),
                grade::Notion::Ext => grade::ext_grade(a, &m),
                grade::Notion::Classical => grade::classical_grade(a, &m, depth_bound),
                grade::Notion::PolynomialWitness => grade::polynomial_grade_witness(a, &m),
                grade::Notion::HgradeTruncated => grade::hgrade_truncated(a, &m, n_max),
                grade::Notion::CechAlias => grade::cech_grade(a, &m),
            })
            .map_err(err)?;
        to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("Ideal({} in {})", self.inner, self.inner.ring())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Script session; `exec` returns one dict per command.
#[pyclass(module = "cmgrade_py")]
struct Session {
    inner: dsl::Session,
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (budget = None, n_max = None, degree_bound = None))]
    fn new(budget: Option<u64>, n_max: Option<usize>, degree_bound: Option<u32>) -> Session {
        let d = Options::default();
        let o = Options {
            budget: budget.unwrap_or(d.budget),
            n_max: n_max.unwrap_or(d.n_max),
            degree_bound: degree_bound.unwrap_or(d.degree_bound),
            ..d
        };
        Session { inner: dsl::Session::new(o) }
    }

    fn exec<'py>(&mut self, py: Python<'py>, src: &str) -> PyResult<Bound<'py, PyAny>> {
        let out = self.inner.exec(src).map_err(err)?;
        to_py(py, &out)
    }

    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn ring(&self, name: &str) -> PyResult<Ring> {
        Ok(Ring { inner: self.inner.ring(name).map_err(err)? })
    }

    fn to_script(&self) -> PyResult<String> {
        self.inner.to_script().map_err(err)
    }
}

fn family_for(r: &Ring, family: Option<Vec<Vec<String>>>) -> PyResult<TestFamily> {
    match family {
        None => cmsense::generated_family(&r.inner, &FamilyOptions::default()).map_err(err),
        Some(ideals) => {
            let mut fam = TestFamily::new();
            for gens in ideals {
                let gs: Vec<&str> = gens.iter().map(String::as_str).collect();
                let a = IdealHandle::parse(&r.inner, &gs).map_err(err)?;
                fam.push(a, cmsense::Provenance::User);
            }
            Ok(fam)
        }
    }
}

/// One Cohen-Macaulay sense (fg, primes, max, glaz, wb, wbh, hm) over a test
/// family; the default family is generated.
#[pyfunction]
#[pyo3(signature = (ring, sense, family = None))]
fn cm_check<'py>(py: Python<'py>, ring: &Ring, sense: &str, family: Option<Vec<Vec<String>>>) -> PyResult<Bound<'py, PyAny>> {
    let s = Sense::parse(sense).ok_or_else(|| CmgradeError::new_err(format!("unknown sense `{sense}`")))?;
    let fam = family_for(ring, family)?;
    let r = &ring.inner;
    let report = py
        .detach(|| -> cmgrade::Result<cmsense::CMReport> {
            match s {
                Sense::FgIdeals => cmsense::check_sense_fg(r, &fam),
                Sense::Primes => cmsense::check_sense_primes(r, &cmsense::primes_family(r, &fam, 16)?),
                Sense::Max => cmsense::check_sense_max(r, &[]),
                Sense::Glaz => cmsense::check_sense_glaz(r, &cmsense::primes_family(r, &fam, 16)?),
                Sense::Wb => cmsense::check_wb_unmixed(r, &fam, false),
                Sense::Wbh => cmsense::check_wb_unmixed(r, &fam, true),
                Sense::HmSurrogate => cmsense::check_hm_surrogate(r, &cmsense::sequence_pool(r, 2)),
            }
        })
        .map_err(err)?;
    to_py(py, &report)
}

/// Every sense on one shared family plus the implications between them.
#[pyfunction]
#[pyo3(signature = (ring, family = None))]
fn implication_audit<'py>(py: Python<'py>, ring: &Ring, family: Option<Vec<Vec<String>>>) -> PyResult<Bound<'py, PyAny>> {
    let fam = family_for(ring, family)?;
    let a = py.detach(|| cmsense::implication_audit(&ring.inner, &fam)).map_err(err)?;
    to_py(py, &a)
}

/// The `n`-th Veronese subring of `field[vars]`: its presentation ring and the
/// generators in the source ring.
#[pyfunction]
#[pyo3(signature = (vars, n, field = "QQ"))]
fn veronese(vars: Vec<String>, n: u32, field: &str) -> PyResult<(Ring, Vec<String>)> {
    let src = Ring::new(vars, Vec::new(), field)?;
    let v = constructors::veronese(&src.inner, n).map_err(err)?;
    Ok((Ring { inner: v.presentation().clone() }, v.generators().iter().map(Poly::to_string).collect()))
}

/// The seven conditions of the rank-`rank` valuation model.
#[pyfunction]
fn valuation_conditions<'py>(py: Python<'py>, rank: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ValuationModel::new(rank).conditions())
}

/// Grade and height of a fractional-exponent ideal in the perfect closure.
#[pyfunction]
fn perfect_closure<'py>(py: Python<'py>, p: u32, vars: Vec<String>, level: u32, gens: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let gs: Vec<&str> = gens.iter().map(String::as_str).collect();
    to_py(py, &constructors::perfect_closure_ops(p, &vars, level, &gs).map_err(err)?)
}

/// Runs the built-in example corpus, optionally filtered by id substrings.
#[pyfunction]
#[pyo3(signature = (select = Vec::new()))]
fn run_corpus<'py>(py: Python<'py>, select: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let items = cmgrade::corpus::select(&select);
    let results = py.detach(|| cmgrade::corpus::run(&items, &Options::default()));
    to_py(py, &results)
}

#[pymodule]
fn cmgrade_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CmgradeError", m.py().get_type::<CmgradeError>())?;
    m.add_class::<Ring>()?;
    m.add_class::<Ideal>()?;
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(cm_check, m)?)?;
    m.add_function(wrap_pyfunction!(implication_audit, m)?)?;
    m.add_function(wrap_pyfunction!(veronese, m)?)?;
    m.add_function(wrap_pyfunction!(valuation_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_closure, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    Ok(())
}
