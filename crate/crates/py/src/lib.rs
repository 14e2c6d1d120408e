//! Python bindings. Tours cross the boundary as lists of 1-based vertex
//! labels, the same convention as tour files.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tspgap::compose::{compose_instances, preservation_search as search, BlockSource};
use tspgap::exact::{self, SolveOptions, Tour};
use tspgap::instances::{self, BoundingBox, Payload};
use tspgap::reduction::{self, Method};
use tspgap::scm;
use tspgap::stochastic;
use tspgap::{Cost, InstanceFile};

create_exception!(tspgaplab, GuardExceededError, PyValueError);

fn err(e: tspgap::Error) -> PyErr {
    match e {
        tspgap::Error::GuardExceeded { .. } => GuardExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[derive(IntoPyObject)]
enum PyCost {
    Int(i64),
    Float(f64),
}

impl From<Cost> for PyCost {
    fn from(c: Cost) -> Self {
        match c {
            Cost::Exact(v) => PyCost::Int(v),
            Cost::Float(v) => PyCost::Float(v),
        }
    }
}

fn opts(force: bool) -> SolveOptions {
    SolveOptions {
        force,
        parallel: true,
    }
}

fn tour(labels: Vec<usize>) -> PyResult<Tour> {
    Tour::from_labels(&labels).map_err(err)
}

/// A GAP cost matrix or a Euclidean point set, as read from an instance file.
#[pyclass(name = "Instance", frozen)]
struct PyInstance {
    inner: InstanceFile,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        instances::parse_instance(text)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn unique(n: usize) -> PyResult<Self> {
        let cm = instances::gen_unique_gap(n).map_err(err)?;
        Ok(Self {
            inner: InstanceFile::gap(cm, format!("unique n={n}")),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, lo = 0.0, hi = 1.0))]
    fn random_gap(n: usize, seed: u64, lo: f64, hi: f64) -> PyResult<Self> {
        let cm = instances::gen_random_gap(n, seed, lo, hi).map_err(err)?;
        Ok(Self {
            inner: InstanceFile::gap(
                cm,
                format!("random-gap n={n} seed={seed} lo={lo:?} hi={hi:?}"),
            ),
        })
    }

    #[staticmethod]
    fn random_points(n: usize, seed: u64) -> PyResult<Self> {
        let ps = instances::gen_random_points(n, seed, BoundingBox::default()).map_err(err)?;
        Ok(Self {
            inner: InstanceFile::e2d(ps, format!("random-e2d n={n} seed={seed} box=unit")),
        })
    }

    /// Euclidean instance from `(x, y)` pairs.
    #[staticmethod]
    fn from_points(coords: Vec<(f64, f64)>) -> PyResult<Self> {
        let ps = tspgap::PointSet::from_coords(&coords).map_err(err)?;
        Ok(Self {
            inner: InstanceFile::e2d(ps, None),
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.payload {
            Payload::Gap(_) => "gap",
            Payload::E2d(_) => "e2d",
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn provenance(&self) -> Option<String> {
        self.inner.provenance.clone()
    }

    fn to_text(&self) -> String {
        instances::serialize_instance(&self.inner)
    }

    /// Rows of the cost matrix with `None` on the diagonal.
    fn costs(&self) -> Vec<Vec<Option<PyCost>>> {
        let cm = self.inner.cost_matrix();
        (0..cm.n())
            .map(|i| {
                (0..cm.n())
                    .map(|j| cm.get(i, j).map(PyCost::from))
                    .collect()
            })
            .collect()
    }

    fn points(&self) -> Option<Vec<(f64, f64)>> {
        self.inner
            .points()
            .map(|ps| ps.points().iter().map(|p| (p.x, p.y)).collect())
    }

    fn tour_cost(&self, labels: Vec<usize>) -> PyResult<PyCost> {
        let t = tour(labels)?;
        exact::tour_cost(&self.inner.cost_matrix(), &t)
            .map(PyCost::from)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Instance(kind={:?}, n={})", self.kind(), self.n())
    }
}

#[pyclass(name = "Solution", frozen)]
struct PySolution {
    inner: exact::Solution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn opt_cost(&self) -> PyCost {
        self.inner.opt_cost.into()
    }

    #[getter]
    fn opt_tours(&self) -> Vec<Vec<usize>> {
        self.inner.opt_tours.iter().map(Tour::labels).collect()
    }

    #[getter]
    fn distinct_costs(&self) -> Option<bool> {
        self.inner.distinct_costs
    }

    #[getter]
    fn cycles_evaluated(&self) -> u64 {
        self.inner.cycles_evaluated
    }

    fn report(&self) -> String {
        self.inner.report()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(opt_cost={}, num_opt_tours={})",
            self.inner.opt_cost,
            self.inner.opt_tours.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (instance, force = false))]
fn solve(py: Python<'_>, instance: &PyInstance, force: bool) -> PyResult<PySolution> {
    let cm = instance.inner.cost_matrix();
    let outcome = py
        .detach(|| exact::solve_exact_with(&cm, None, opts(force)))
        .map_err(err)?;
    let inner = outcome
        .optimal()
        .expect("complete graph always has a cycle");
    Ok(PySolution { inner })
}

#[pyfunction]
#[pyo3(signature = (n, force = false))]
fn cycle_count(n: usize, force: bool) -> PyResult<u64> {
    exact::check_guard(n, force).map_err(err)?;
    Ok(exact::cycle_count(n))
}

#[pyfunction]
#[pyo3(signature = (n, force = false))]
fn max_coincident_edges(n: usize, force: bool) -> PyResult<usize> {
    exact::max_coincident_edges(n, force).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (instance, trials = 10_000, seed = 0))]
fn monotonicity_check<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = exact::monotonicity_check(&instance.inner.cost_matrix(), trials, seed);
    let d = PyDict::new(py);
    d.set_item("exhaustive", r.exhaustive)?;
    d.set_item("pairs_checked", r.pairs_checked)?;
    d.set_item("violations", r.violations)?;
    if let Some(c) = r.first_violation {
        d.set_item("short", c.short.labels())?;
        d.set_item("long", c.long.labels())?;
        d.set_item("short_cost", PyCost::from(c.short_cost))?;
        d.set_item("long_cost", PyCost::from(c.long_cost))?;
    }
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (instance, tolerance = reduction::DEFAULT_AUDIT_TOL))]
fn triangle_audit<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let a = reduction::triangle_audit(&instance.inner.cost_matrix(), tolerance);
    let d = PyDict::new(py);
    d.set_item("triples_checked", a.triples_checked)?;
    d.set_item("violations", a.violations)?;
    d.set_item("worst_ratio", a.worst_ratio)?;
    let witnesses: Vec<(usize, usize, usize)> = a.witnesses.iter().map(|w| w.labels()).collect();
    d.set_item("witnesses", witnesses)?;
    Ok(d)
}

/// Triangulates a Euclidean instance (`"constrained"` around the optimum or
/// `tour`, or `"delaunay"`) and re-solves on its edges.
#[pyfunction]
#[pyo3(signature = (instance, method = "constrained", tour = None, force = false))]
fn reduce<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    method: &str,
    tour: Option<Vec<usize>>,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let ps = instance
        .inner
        .points()
        .ok_or_else(|| PyValueError::new_err("reduce needs a Euclidean instance"))?;
    let method = match method {
        "constrained" => Method::Constrained,
        "delaunay" => Method::Delaunay,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let t = tour.map(self::tour).transpose()?;
    let r = reduction::reduce_instance(ps, method, t.as_ref(), opts(force)).map_err(err)?;
    let d = PyDict::new(py);
    let edges: Vec<(usize, usize)> = r
        .triangulation
        .edges()
        .map(|(a, b)| (a + 1, b + 1))
        .collect();
    d.set_item("edges", edges)?;
    d.set_item("jitter_seed", r.triangulation.jitter())?;
    d.set_item("full_opt_cost", PyCost::from(r.full.opt_cost))?;
    d.set_item("reference_tour", r.reference_tour.labels())?;
    d.set_item("contained", r.contained)?;
    d.set_item(
        "reduced_opt_cost",
        r.reduced.as_optimal().map(|s| PyCost::from(s.opt_cost)),
    )?;
    d.set_item("optimum_preserved", r.preserves_optimum())?;
    d.set_item("report", r.report())?;
    Ok(d)
}

/// Solution frontier in the per-vertex sorted cost matrix.
#[pyfunction]
#[pyo3(signature = (instance, force = false))]
fn frontier<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cm = instance.inner.cost_matrix();
    let sol = exact::solve_exact_with(&cm, None, opts(force))
        .map_err(err)?
        .optimal()
        .expect("complete graph always has a cycle");
    let m = scm::build_scm(&cm, None).map_err(err)?;
    let fr = scm::compute_frontier(&m, &sol.opt_tours[0]).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("tour", sol.opt_tours[0].labels())?;
    d.set_item("ranks", fr.ranks)?;
    d.set_item("elongation", fr.elongation)?;
    d.set_item("mean_rank", fr.mean_rank)?;
    Ok(d)
}

#[pyfunction]
fn sample_cycles(py: Python<'_>, n: usize, k: u64, seed: u64) -> PyResult<Vec<Vec<usize>>> {
    let tours = py
        .detach(|| stochastic::sample_cycles(n, k, seed))
        .map_err(err)?;
    Ok(tours.iter().map(Tour::labels).collect())
}

#[pyfunction]
fn wilson_interval(hits: u64, k: u64) -> (f64, f64) {
    stochastic::wilson_interval(hits, k)
}

#[pyfunction]
#[pyo3(signature = (instance, k, seed, force = false))]
fn estimate_hit_rate<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    k: u64,
    seed: u64,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cm = instance.inner.cost_matrix();
    let e = py
        .detach(|| stochastic::estimate_hit_rate(&cm, k, seed, opts(force)))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("samples", e.samples)?;
    d.set_item("hits", e.hits)?;
    d.set_item("p_hat", e.p_hat)?;
    d.set_item("ci", (e.ci_low, e.ci_high))?;
    d.set_item("theoretical", e.theoretical)?;
    d.set_item("num_optimal", e.num_optimal)?;
    d.set_item("brackets_theory", e.brackets_theory())?;
    d.set_item("seed", e.seed)?;
    Ok(d)
}

/// Exact bound arithmetic; rationals are returned as `"p/q"` strings.
#[pyfunction]
fn bounds_report<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let b = stochastic::bounds_report(n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", b.n)?;
    d.set_item("p_j", b.p_j.to_string())?;
    d.set_item("a_star", b.a_star.to_string())?;
    d.set_item("lower", b.lower.to_string())?;
    d.set_item("complement", b.complement.to_string())?;
    d.set_item("p_j_exceeds_one", b.p_j_exceeds_one)?;
    d.set_item("a_star_in_range", b.a_star_in_range)?;
    d.set_item("lower_bound_holds", b.lower_bound_holds)?;
    d.set_item("upper_claim_holds", b.upper_claim_holds)?;
    Ok(d)
}

fn block(inst: &PyInstance) -> BlockSource {
    match &inst.inner.payload {
        Payload::E2d(ps) => BlockSource::E2d(ps.clone()),
        Payload::Gap(cm) => BlockSource::Gap(cm.clone()),
    }
}

#[pyfunction]
fn compose(a: &PyInstance, b: &PyInstance, seed: u64, lo: f64, hi: f64) -> PyResult<PyInstance> {
    let comp = compose_instances(&block(a), &b.inner.cost_matrix(), seed, lo, hi).map_err(err)?;
    Ok(PyInstance {
        inner: InstanceFile::gap(
            comp.cm,
            format!("compose fill seed={seed} lo={lo:?} hi={hi:?}"),
        ),
    })
}

#[pyfunction]
#[pyo3(signature = (a, b, seeds, lo, hi, force = false))]
fn preservation_search<'py>(
    py: Python<'py>,
    a: &PyInstance,
    b: &PyInstance,
    seeds: Vec<u64>,
    lo: f64,
    hi: f64,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let (ba, bb) = (block(a), b.inner.cost_matrix());
    let s = py
        .detach(|| search(&ba, &bb, &seeds, lo, hi, opts(force)))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("preserved_fraction", s.preserved_fraction)?;
    d.set_item("first_non_preserved", s.first_non_preserved)?;
    d.set_item("first_violating", s.first_violating)?;
    d.set_item("csv", s.csv())?;
    Ok(d)
}

#[pymodule]
fn tspgaplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add(
        "GuardExceededError",
        m.py().get_type::<GuardExceededError>(),
    )?;
    m.add("ENUMERATION_GUARD", exact::ENUMERATION_GUARD)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_count, m)?)?;
    m.add_function(wrap_pyfunction!(max_coincident_edges, m)?)?;
    m.add_function(wrap_pyfunction!(monotonicity_check, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_audit, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(frontier, m)?)?;
    m.add_function(wrap_pyfunction!(sample_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_hit_rate, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_report, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(preservation_search, m)?)?;
    Ok(())
}
