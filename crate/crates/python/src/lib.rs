//! Python bindings: groups, groupoids, functors and finite spaces, with the
//! main constructions as methods.

use std::sync::Arc;

use mapstack::cech::{atlas_epimorphism_check, classify_hs, ClassifyBounds, FiniteSpace};
use mapstack::equivalence::{are_equivalent, is_essentially_discrete, DEFAULT_GROUP_BOUND};
use mapstack::fibration::{homotopy_fiber, omega, replace};
use mapstack::format::{self, GroupoidDoc};
use mapstack::group::FiniteGroup;
use mapstack::groupoid::{b_group, discrete, indiscrete, terminal, validate, FiniteGroupoid, ObjId};
use mapstack::homology::{cyclic_group_homology_oracle, homology, DEFAULT_NERVE_BOUND};
use mapstack::loops::{conjugacy, inertia_groupoid, loop_decomposition};
use mapstack::mapping::{exponential_check, functor_groupoid, DEFAULT_FUNCTOR_BOUND};
use mapstack::{Error, GroupoidFunctor};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(mapstack_py, BoundExceeded, PyException, "An enumeration bound was exceeded.");
create_exception!(mapstack_py, VerificationFailed, PyException, "An internal consistency check did not hold.");

fn err(e: Error) -> PyErr {
    if e.is_bound() {
        BoundExceeded::new_err(e.to_string())
    } else if matches!(e, Error::Verification(_)) {
        VerificationFailed::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Group", module = "mapstack_py", frozen)]
#[derive(Clone)]
struct PyGroup {
    inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    /// `trivial`, `Zn`, `Sn`, `An`, `Dn` or `Q8`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        format::named_group(name).map(|inner| PyGroup { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (table, labels=None))]
    fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        FiniteGroup::from_table(table, labels).map(|inner| PyGroup { inner }).map_err(err)
    }

    /// Permutation group generated by cycle-notation strings such as `"(1 2 3)"`.
    #[staticmethod]
    #[pyo3(signature = (generators, degree=None))]
    fn from_cycles(generators: Vec<String>, degree: Option<usize>) -> PyResult<Self> {
        FiniteGroup::from_cycle_notation(&generators, degree).map(|inner| PyGroup { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_group_or_groupoid_group(text).map(|inner| PyGroup { inner }).map_err(err)
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    /// Conjugacy classes as lists of element labels.
    fn conjugacy_classes(&self) -> Vec<Vec<String>> {
        let g = &self.inner;
        conjugacy(g).classes.iter().map(|c| c.iter().map(|&a| g.label(a).to_string()).collect()).collect()
    }

    fn centralizer_orders(&self) -> Vec<usize> {
        conjugacy(&self.inner).centralizer_orders()
    }

    /// One `(representative, class size, centralizer order)` per conjugacy
    /// class, after checking that the inertia groupoid of `BG` splits this way.
    fn decompose(&self) -> PyResult<Vec<(String, usize, usize)>> {
        let d = loop_decomposition(&self.inner).map_err(err)?;
        if !d.witness.verify() {
            return Err(VerificationFailed::new_err("decomposition witness does not verify"));
        }
        let sizes = d.conjugacy.class_sizes();
        Ok(d.summands.iter().zip(sizes).map(|((a, z), s)| (self.inner.label(*a).to_string(), s, z.group.order())).collect())
    }

    /// The one-object groupoid `BG`.
    fn classifying(&self) -> PyGroupoid {
        PyGroupoid::wrap(b_group(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.inner.order())
    }
}

#[pyclass(name = "Groupoid", module = "mapstack_py", frozen)]
#[derive(Clone)]
struct PyGroupoid {
    inner: Arc<FiniteGroupoid>,
}

impl PyGroupoid {
    fn wrap(g: FiniteGroupoid) -> Self {
        PyGroupoid { inner: Arc::new(g) }
    }
}

#[pymethods]
impl PyGroupoid {
    /// A groupoid document, or a group document read as its one-object groupoid.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_groupoid_or_group(text).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    fn terminal() -> Self {
        Self::wrap(terminal())
    }

    #[staticmethod]
    fn discrete(n: usize) -> Self {
        Self::wrap(discrete(n))
    }

    #[staticmethod]
    fn indiscrete(n: usize) -> Self {
        Self::wrap(indiscrete(n))
    }

    fn to_json(&self) -> String {
        format::to_json(&GroupoidDoc::from_groupoid(&self.inner))
    }

    fn object_count(&self) -> usize {
        self.inner.object_count()
    }

    fn morphism_count(&self) -> usize {
        self.inner.morphism_count()
    }

    fn object_labels(&self) -> Vec<String> {
        self.inner.objects().map(|o| self.inner.object_label(o).into_owned()).collect()
    }

    fn component_count(&self) -> usize {
        self.inner.components().len()
    }

    /// Orders of the automorphism groups, one per component.
    fn automorphism_orders(&self) -> Vec<usize> {
        let c = self.inner.components();
        (0..c.len()).map(|k| self.inner.automorphisms(c.representative(k)).group.order()).collect()
    }

    fn is_essentially_discrete(&self) -> bool {
        is_essentially_discrete(&self.inner)
    }

    fn is_equivalent(&self, other: &PyGroupoid) -> PyResult<bool> {
        are_equivalent(&self.inner, &other.inner, DEFAULT_GROUP_BOUND).map(|e| e.is_equivalent()).map_err(err)
    }

    fn inertia(&self) -> PyGroupoid {
        PyGroupoid { inner: inertia_groupoid(&self.inner).groupoid }
    }

    /// Based loops at the object with index `basepoint`, which may be
    /// omitted when there is exactly one object.
    #[pyo3(signature = (basepoint=None))]
    fn omega(&self, basepoint: Option<u32>) -> PyResult<PyGroupoid> {
        let base = match basepoint {
            Some(b) => ObjId(b),
            None if self.inner.object_count() == 1 => ObjId(0),
            None => return Err(PyValueError::new_err("a basepoint is required unless there is exactly one object")),
        };
        omega(&self.inner, base).map(|l| PyGroupoid { inner: l.groupoid().clone() }).map_err(err)
    }

    /// The groupoid of functors `self → target` and natural isomorphisms.
    #[pyo3(signature = (target, bound=DEFAULT_FUNCTOR_BOUND))]
    fn maps_to(&self, target: &PyGroupoid, bound: u64) -> PyResult<PyGroupoid> {
        functor_groupoid(&self.inner, &target.inner, bound).map(|f| PyGroupoid { inner: f.groupoid }).map_err(err)
    }

    /// `(rank, torsion coefficients)` of `H_k` for `k = 0..=kmax`.
    #[pyo3(signature = (kmax=3, bound=DEFAULT_NERVE_BOUND))]
    fn homology(&self, kmax: usize, bound: u64) -> PyResult<Vec<(usize, Vec<u64>)>> {
        let hs = homology(&self.inner, kmax, bound).map_err(err)?;
        Ok(hs.into_iter().map(|h| (h.betti, h.torsion)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Groupoid(objects={}, morphisms={})", self.inner.object_count(), self.inner.morphism_count())
    }
}

#[pyclass(name = "Functor", module = "mapstack_py", frozen)]
#[derive(Clone)]
struct PyFunctor {
    inner: GroupoidFunctor,
}

#[pymethods]
impl PyFunctor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_functor(text).map(|inner| PyFunctor { inner }).map_err(err)
    }

    fn domain(&self) -> PyGroupoid {
        PyGroupoid { inner: self.inner.domain().clone() }
    }

    fn codomain(&self) -> PyGroupoid {
        PyGroupoid { inner: self.inner.codomain().clone() }
    }

    /// Factors through an isofibration; returns the total groupoid after
    /// checking every property of the factorization.
    fn replace(&self) -> PyResult<PyGroupoid> {
        let r = replace(&self.inner).map_err(err)?;
        let strict = r.projection.after(&r.embedding).map(|g| g == self.inner).unwrap_or(false);
        if !(r.projection_is_isofibration() && r.retraction_is_strict() && r.embedding_witness.verify() && strict) {
            return Err(VerificationFailed::new_err("fibration replacement failed a check"));
        }
        Ok(PyGroupoid { inner: r.groupoid().clone() })
    }

    /// Homotopy fiber over the codomain object with index `at`.
    fn homotopy_fiber(&self, at: u32) -> PyResult<PyGroupoid> {
        homotopy_fiber(&self.inner, ObjId(at)).map(|h| PyGroupoid { inner: h.groupoid().clone() }).map_err(err)
    }
}

#[pyclass(name = "FiniteSpace", module = "mapstack_py", frozen)]
#[derive(Clone)]
struct PySpace {
    inner: Arc<FiniteSpace>,
}

#[pymethods]
impl PySpace {
    /// `point`, `pseudo_circle` or `discreteN`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        format::named_space(name).map(|s| PySpace { inner: Arc::new(s) }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_space(text).map(|s| PySpace { inner: Arc::new(s) }).map_err(err)
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn open_set_count(&self) -> PyResult<usize> {
        self.inner.open_sets(1 << 20).map(|o| o.len()).map_err(err)
    }

    /// Number of classes of maps into `target`, using covers by at most
    /// `covers_max` open sets; fails if some class is missed by the atlas.
    #[pyo3(signature = (target, covers_max=3))]
    fn classify(&self, target: &PyGroupoid, covers_max: usize) -> PyResult<usize> {
        let bounds = ClassifyBounds { covers_max, ..ClassifyBounds::default() };
        let c = classify_hs(&self.inner, &target.inner, bounds).map_err(err)?;
        let atlas = atlas_epimorphism_check(&self.inner, &target.inner, bounds).map_err(err)?;
        if !atlas.is_epimorphism {
            return Err(VerificationFailed::new_err("some class is not reached by an enumerated cover"));
        }
        Ok(c.len())
    }
}

/// Violation messages for a groupoid document; empty when it is valid.
#[pyfunction]
fn validate_json(text: &str) -> PyResult<Vec<String>> {
    let doc: GroupoidDoc = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let data = doc.to_data().map_err(err)?;
    Ok(validate(&data).violations.iter().map(ToString::to_string).collect())
}

/// Checks `Map(Z × Y, X) ≃ Map(Z, Map(Y, X))` and returns the number of
/// functors on each side.
#[pyfunction]
#[pyo3(signature = (z, y, x, bound=DEFAULT_FUNCTOR_BOUND))]
fn exponential_law(z: &PyGroupoid, y: &PyGroupoid, x: &PyGroupoid, bound: u64) -> PyResult<(usize, usize)> {
    let law = exponential_check(&z.inner, &y.inner, &x.inner, bound).map_err(err)?;
    if !law.witness.verify() {
        return Err(VerificationFailed::new_err("transpose is not an equivalence"));
    }
    Ok((law.left.functor_count(), law.right.functor_count()))
}

/// Homology of `Z/n` from its periodic resolution, in the format of
/// `Groupoid.homology`.
#[pyfunction]
fn cyclic_homology(n: u64, kmax: usize) -> PyResult<Vec<(usize, Vec<u64>)>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(cyclic_group_homology_oracle(n, kmax).into_iter().map(|h| (h.betti, h.torsion)).collect())
}

#[pymodule]
fn mapstack_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyGroupoid>()?;
    m.add_class::<PyFunctor>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(validate_json, m)?)?;
    m.add_function(wrap_pyfunction!(exponential_law, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_homology, m)?)?;
    m.add("BoundExceeded", m.py().get_type_bound::<BoundExceeded>())?;
    m.add("VerificationFailed", m.py().get_type_bound::<VerificationFailed>())?;
    Ok(())
}
