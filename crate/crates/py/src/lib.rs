//! Python bindings. Points are coordinate lists, rationals are
//! `fractions.Fraction`.

use capset_core::{
    self as capset, fmt_rational, parse_rational, IncrementCertificate, LinearEquation, Point,
    Rational, RationalFn, SliceRule, Space,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;

fn err(e: capset::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((fmt_rational(r),))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    rs.iter().map(|r| fraction(py, r)).collect()
}

/// Accepts ints, Fractions and "n/d" strings.
fn to_rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = value.str()?.to_string();
    parse_rational(&text)
        .ok_or_else(|| PyValueError::new_err(format!("not an exact rational: {text}")))
}

fn to_points(space: &Space, coords: &[Vec<u32>]) -> PyResult<Vec<Point>> {
    coords
        .iter()
        .map(|c| space.point_from_indices(c).map_err(err))
        .collect()
}

fn to_coords(space: &Space, p: Point) -> Vec<u32> {
    space.coords(p).iter().map(|c| c.index()).collect()
}

fn to_coord_list(space: &Space, set: &[Point]) -> Vec<Vec<u32>> {
    set.iter().map(|&p| to_coords(space, p)).collect()
}

#[derive(FromPyObject)]
enum EquationArg {
    Preset(String),
    Coeffs(Vec<i64>),
}

impl EquationArg {
    fn resolve(self) -> PyResult<LinearEquation> {
        match self {
            EquationArg::Preset(name) => LinearEquation::preset(&name)
                .ok_or_else(|| PyValueError::new_err(format!("unknown equation preset {name:?}"))),
            EquationArg::Coeffs(c) => LinearEquation::new(c).map_err(err),
        }
    }
}

fn slice_rule(name: &str) -> PyResult<SliceRule> {
    match name {
        "constructive" => Ok(SliceRule::Constructive),
        "global-best" | "global_best" => Ok(SliceRule::GlobalBest),
        _ => Err(PyValueError::new_err(format!(
            "unknown slice rule {name:?}"
        ))),
    }
}

/// The vector space F_q^r.
#[pyclass(name = "Space", module = "capset_increment", frozen)]
struct PySpace {
    inner: Space,
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(q: u64, r: usize) -> PyResult<Self> {
        Ok(PySpace {
            inner: Space::of_order(q, r).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.field().characteristic()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.field().degree()
    }

    #[getter]
    fn size(&self) -> u32 {
        self.inner.size()
    }

    /// Index of a point given by coordinates.
    fn index(&self, coords: Vec<u32>) -> PyResult<u32> {
        Ok(self.inner.point_from_indices(&coords).map_err(err)?.index())
    }

    fn coords(&self, index: u32) -> PyResult<Vec<u32>> {
        let p = self.inner.check(Point::new(index)).map_err(err)?;
        Ok(to_coords(&self.inner, p))
    }

    fn points(&self) -> Vec<Vec<u32>> {
        let all: Vec<Point> = self.inner.points().collect();
        to_coord_list(&self.inner, &all)
    }

    /// Canonical normals, first nonzero coordinate 1.
    fn hyperplanes(&self) -> PyResult<Vec<Vec<u32>>> {
        let hs = self.inner.hyperplanes().map_err(err)?;
        Ok(hs
            .iter()
            .map(|h| to_coords(&self.inner, h.normal()))
            .collect())
    }

    fn parse_set(&self, text: &str) -> PyResult<Vec<Vec<u32>>> {
        let set = self.inner.parse_set(text).map_err(err)?;
        Ok(to_coord_list(&self.inner, &set))
    }

    fn format_set(&self, points: Vec<Vec<u32>>) -> PyResult<String> {
        Ok(self.inner.format_set(&to_points(&self.inner, &points)?))
    }

    fn __len__(&self) -> usize {
        self.inner.size() as usize
    }

    fn __repr__(&self) -> String {
        format!("Space(q={}, r={})", self.inner.q(), self.inner.rank())
    }
}

/// An exact rational-valued function on a space.
#[pyclass(name = "Function", module = "capset_increment", frozen)]
struct PyFunction {
    inner: RationalFn,
}

#[pymethods]
impl PyFunction {
    /// `values` are listed in point-index order.
    #[new]
    fn new(space: &PySpace, values: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let values = values.iter().map(to_rational).collect::<PyResult<_>>()?;
        Ok(PyFunction {
            inner: RationalFn::new(space.inner.clone(), values).map_err(err)?,
        })
    }

    #[staticmethod]
    fn random(space: &PySpace, seed: u64) -> Self {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        PyFunction {
            inner: RationalFn::random(&space.inner, &mut rng),
        }
    }

    #[staticmethod]
    fn indicator(space: &PySpace, points: Vec<Vec<u32>>) -> PyResult<Self> {
        let set = to_points(&space.inner, &points)?;
        Ok(PyFunction {
            inner: RationalFn::indicator(&space.inner, &set).map_err(err)?,
        })
    }

    #[getter]
    fn space(&self) -> PySpace {
        PySpace {
            inner: self.inner.space().clone(),
        }
    }

    fn values<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.inner.values())
    }

    fn value<'py>(&self, py: Python<'py>, coords: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
        let p = self
            .inner
            .space()
            .point_from_indices(&coords)
            .map_err(err)?;
        fraction(py, self.inner.value(p))
    }

    fn mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.mean())
    }

    fn l2_norm_sq<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.l2_norm_sq())
    }

    /// `f - E f`.
    fn balance(&self) -> Self {
        PyFunction {
            inner: self.inner.balance(),
        }
    }

    fn is_constant(&self) -> bool {
        self.inner.is_constant()
    }

    fn __len__(&self) -> usize {
        self.inner.values().len()
    }
}

/// A density-increment certificate for one rank step.
#[pyclass(name = "Certificate", module = "capset_increment", frozen)]
struct PyCertificate {
    #[pyo3(get)]
    rank: usize,
    #[pyo3(get)]
    normal: Vec<u32>,
    #[pyo3(get)]
    level: u32,
    #[pyo3(get)]
    representative: Vec<u32>,
    /// Image of the slice in F_q^(r-1).
    #[pyo3(get)]
    projected: Vec<Vec<u32>>,
    #[pyo3(get)]
    holds: bool,
    alpha: Rational,
    alpha0: Rational,
    bound: Rational,
}

impl PyCertificate {
    fn new(space: &Space, cert: &IncrementCertificate) -> PyResult<Self> {
        let lower = space.with_rank(cert.rank - 1).map_err(err)?;
        Ok(PyCertificate {
            rank: cert.rank,
            normal: to_coords(space, cert.normal().normal()),
            level: cert.level().index(),
            representative: to_coords(space, cert.representative),
            projected: to_coord_list(&lower, &cert.projected),
            holds: cert.holds(),
            alpha: cert.alpha.clone(),
            alpha0: cert.alpha0.clone(),
            bound: cert.bound.clone(),
        })
    }
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn alpha<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.alpha)
    }

    #[getter]
    fn alpha0<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.alpha0)
    }

    #[getter]
    fn bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.bound)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(rank={}, normal={:?}, level={}, alpha={}, alpha0={}, bound={})",
            self.rank,
            self.normal,
            self.level,
            fmt_rational(&self.alpha),
            fmt_rational(&self.alpha0),
            fmt_rational(&self.bound)
        )
    }
}

/// Normalized solution count of the equation weighted by `f`.
#[pyfunction]
fn lambda_value<'py>(
    py: Python<'py>,
    equation: EquationArg,
    f: &PyFunction,
) -> PyResult<Bound<'py, PyAny>> {
    let eq = equation.resolve()?;
    fraction(py, &capset::lambda(&eq, &f.inner).map_err(err)?)
}

/// Same as `lambda_value`, by enumerating every tuple.
#[pyfunction]
fn lambda_naive<'py>(
    py: Python<'py>,
    equation: EquationArg,
    f: &PyFunction,
) -> PyResult<Bound<'py, PyAny>> {
    let eq = equation.resolve()?;
    fraction(py, &capset::lambda_naive(&eq, &f.inner).map_err(err)?)
}

/// `(lhs, rhs)` of the hyperplane-sum identity.
#[pyfunction]
fn hyperplane_identity<'py>(
    py: Python<'py>,
    equation: EquationArg,
    f: &PyFunction,
) -> PyResult<Bound<'py, PyTuple>> {
    let eq = equation.resolve()?;
    let rep = capset::verify_hyperplane_identity(&eq, &f.inner).map_err(err)?;
    PyTuple::new(py, [fraction(py, &rep.lhs)?, fraction(py, &rep.rhs)?])
}

/// `(lhs, rhs)` of the norm analogue.
#[pyfunction]
fn parseval<'py>(py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyTuple>> {
    let rep = capset::parseval_check(&f.inner).map_err(err)?;
    PyTuple::new(py, [fraction(py, &rep.lhs)?, fraction(py, &rep.rhs)?])
}

/// `(lambda of balanced f, lambda of f, (E f)^k)`.
#[pyfunction]
fn mean_subtraction<'py>(
    py: Python<'py>,
    equation: EquationArg,
    f: &PyFunction,
) -> PyResult<Bound<'py, PyTuple>> {
    let eq = equation.resolve()?;
    let alt = capset::lambda_alt_check(&eq, &f.inner).map_err(err)?;
    PyTuple::new(
        py,
        [
            fraction(py, &alt.balanced)?,
            fraction(py, &alt.plain)?,
            fraction(py, &alt.mean_power)?,
        ],
    )
}

/// A triple `(a, b, c)` with `a + c = 2b`, or None.
#[pyfunction]
fn find_progression(space: &PySpace, points: Vec<Vec<u32>>) -> PyResult<Option<[Vec<u32>; 3]>> {
    let s = &space.inner;
    let set = to_points(s, &points)?;
    Ok(capset::find_progression(&set, s)
        .map_err(err)?
        .map(|(a, b, c)| [to_coords(s, a), to_coords(s, b), to_coords(s, c)]))
}

#[pyfunction]
fn is_progression_free(space: &PySpace, points: Vec<Vec<u32>>) -> PyResult<bool> {
    let set = to_points(&space.inner, &points)?;
    capset::is_progression_free(&set, &space.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (space, points, rule = "constructive"))]
fn density_increment(
    space: &PySpace,
    points: Vec<Vec<u32>>,
    rule: &str,
) -> PyResult<PyCertificate> {
    let set = to_points(&space.inner, &points)?;
    let cert = capset::density_increment(&set, &space.inner, slice_rule(rule)?).map_err(err)?;
    PyCertificate::new(&space.inner, &cert)
}

/// Rank descent down to rank 0: a list of `(rank, alpha, certificate)`,
/// with `certificate` None on the last step.
#[pyfunction]
#[pyo3(signature = (space, points, rule = "constructive"))]
fn meshulam_iterate<'py>(
    py: Python<'py>,
    space: &PySpace,
    points: Vec<Vec<u32>>,
    rule: &str,
) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let set = to_points(&space.inner, &points)?;
    let trace = capset::meshulam_iterate(&set, &space.inner, slice_rule(rule)?).map_err(err)?;
    trace
        .steps
        .iter()
        .map(|step| {
            let at_rank = space.inner.with_rank(step.rank).map_err(err)?;
            let cert = match &step.certificate {
                Some(c) => Some(Py::new(py, PyCertificate::new(&at_rank, c)?)?),
                None => None,
            };
            (step.rank, fraction(py, &step.alpha)?, cert).into_pyobject(py)
        })
        .collect()
}

/// `T(0..=r_max)`.
#[pyfunction]
fn bound_recurrence<'py>(
    py: Python<'py>,
    q: u32,
    r_max: usize,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &capset::bound_recurrence(q, r_max))
}

#[pyfunction]
fn random_maximal(space: &PySpace, seed: u64) -> PyResult<Vec<Vec<u32>>> {
    let set = capset::random_maximal(&space.inner, seed).map_err(err)?;
    Ok(to_coord_list(&space.inner, &set))
}

#[pyfunction]
fn greedy_maximal(space: &PySpace) -> PyResult<Vec<Vec<u32>>> {
    let set = capset::search::greedy_maximal(&space.inner).map_err(err)?;
    Ok(to_coord_list(&space.inner, &set))
}

/// Lexicographically first largest progression-free set.
#[pyfunction]
#[pyo3(signature = (space, limit = None))]
fn exhaustive_maximum(space: &PySpace, limit: Option<u64>) -> PyResult<Vec<Vec<u32>>> {
    let (_, set) = capset::exhaustive_maximum(&space.inner, limit).map_err(err)?;
    Ok(to_coord_list(&space.inner, &set))
}

#[pymodule]
fn capset_increment(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(lambda_value, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_naive, m)?)?;
    m.add_function(wrap_pyfunction!(hyperplane_identity, m)?)?;
    m.add_function(wrap_pyfunction!(parseval, m)?)?;
    m.add_function(wrap_pyfunction!(mean_subtraction, m)?)?;
    m.add_function(wrap_pyfunction!(find_progression, m)?)?;
    m.add_function(wrap_pyfunction!(is_progression_free, m)?)?;
    m.add_function(wrap_pyfunction!(density_increment, m)?)?;
    m.add_function(wrap_pyfunction!(meshulam_iterate, m)?)?;
    m.add_function(wrap_pyfunction!(bound_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(random_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_maximum, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let space = PySpace::new(3, 1).unwrap();
            let cert = density_increment(&space, vec![vec![0], vec![1]], "constructive").unwrap();
            assert_eq!(cert.alpha(py).unwrap().str().unwrap().to_string(), "2/3");
            assert!(cert.holds);
            let f = PyFunction::random(&PySpace::new(9, 1).unwrap(), 3);
            let pair = hyperplane_identity(py, EquationArg::Preset("ap".into()), &f).unwrap();
            assert!(pair
                .get_item(0)
                .unwrap()
                .eq(pair.get_item(1).unwrap())
                .unwrap());
            assert!(slice_rule("nearest").is_err());
            assert!(EquationArg::Preset("cubic".into()).resolve().is_err());
        });
    }
}
