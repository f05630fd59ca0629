//! Python bindings: groups, censuses, Nielsen orbits, universal covers and
//! the closed forms for `r(G)`.

use std::sync::Arc;

use dessins_core::bsgs::bsgs_order as core_bsgs_order;
use dessins_core::census::{dessin_census, Census as CoreCensus};
use dessins_core::error::DessinError;
use dessins_core::formulas::{
    closed_form_r as core_closed_form_r, r_cyclic, r_l2_even, r_l2_prime, r_suzuki,
    simple_bound_window, ClosedFormTarget,
};
use dessins_core::group::GroupHandle;
use dessins_core::perm::{element_order as core_element_order, Permutation};
use dessins_core::report::{Document, GroupSummary};
use dessins_core::tsystems::{omega_action_order, omega_orbits, OMEGA_ACTION_CAP};
use dessins_core::ucover::{
    closed_form_ucover as core_closed_form_ucover, ucover_record, BlockLayout, UCoverRecord,
};
use dessins_core::zoo::{construct_group, parse_descriptor, GroupDescriptor};
use num_bigint::BigUint;
use num_rational::BigRational;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: DessinError) -> PyErr {
    match e {
        DessinError::Parse(_) | DessinError::Validation(_) | DessinError::InvalidPermutation(_) => {
            PyValueError::new_err(e.to_string())
        }
        DessinError::CapExceeded { .. } | DessinError::DegreeCapExceeded { .. } => {
            PyOverflowError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn permutations(images: Vec<Vec<u32>>) -> PyResult<Vec<Permutation>> {
    images
        .into_iter()
        .map(|i| Permutation::from_images(i).map_err(to_py))
        .collect()
}

/// A finite permutation group built from a descriptor such as `"A5"` or `"PSL2_7"`.
#[pyclass(frozen, module = "dessins")]
struct Group {
    desc: GroupDescriptor,
    inner: Arc<GroupHandle>,
}

#[pymethods]
impl Group {
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        let desc = parse_descriptor(descriptor).map_err(to_py)?;
        let inner = Arc::new(construct_group(&desc).map_err(to_py)?);
        Ok(Group { desc, inner })
    }

    #[getter]
    fn label(&self) -> String {
        self.desc.to_string()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn order(&self) -> BigUint {
        self.inner.order().clone()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<u32>> {
        self.inner
            .generators()
            .iter()
            .map(|g| g.images().to_vec())
            .collect()
    }

    fn contains(&self, images: Vec<u32>) -> PyResult<bool> {
        let p = Permutation::from_images(images).map_err(to_py)?;
        Ok(p.degree() == self.inner.degree() && self.inner.contains(&p))
    }

    /// Full census of regular dessins with this automorphism group.
    fn census(&self) -> PyResult<Census> {
        let inner = dessin_census(self.inner.clone()).map_err(to_py)?;
        Ok(Census {
            desc: self.desc,
            inner,
        })
    }

    fn __repr__(&self) -> String {
        format!("Group('{}', order={})", self.desc, self.inner.order())
    }
}

fn cover_dict<'py>(py: Python<'py>, rec: &UCoverRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("r", rec.r)?;
    d.set_item("degree", rec.degree)?;
    d.set_item("order", rec.order.clone())?;
    d.set_item(
        "type",
        (rec.cover_type[0], rec.cover_type[1], rec.cover_type[2]),
    )?;
    d.set_item("genus", rec.genus.clone())?;
    Ok(d)
}

/// One group's census together with the tables needed by the other computations.
#[pyclass(frozen, module = "dessins")]
struct Census {
    desc: GroupDescriptor,
    inner: CoreCensus,
}

#[pymethods]
impl Census {
    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn moebius_r(&self) -> usize {
        self.inner.report().moebius_r
    }

    #[getter]
    fn phi2(&self) -> BigUint {
        self.inner.report().phi2.clone()
    }

    #[getter]
    fn phi2_moebius(&self) -> BigUint {
        self.inner.report().phi2_moebius.clone()
    }

    #[getter]
    fn aut_order(&self) -> u64 {
        self.inner.aut().order()
    }

    #[getter]
    fn out_order(&self) -> u64 {
        self.inner.aut().out_order()
    }

    #[getter]
    fn subgroup_count(&self) -> usize {
        self.inner.lattice().len()
    }

    /// One dict per class: rep, type, genus, commutator order, reflexible.
    fn classes<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .classes()
            .iter()
            .map(|c| {
                let d = PyDict::new(py);
                d.set_item("class_id", c.class_id)?;
                d.set_item("rep", c.rep)?;
                d.set_item("x", &c.x)?;
                d.set_item("y", &c.y)?;
                d.set_item(
                    "type",
                    (c.dessin_type[0], c.dessin_type[1], c.dessin_type[2]),
                )?;
                d.set_item("genus", c.genus.clone())?;
                d.set_item("commutator_order", c.commutator_order)?;
                d.set_item("reflexible", c.reflexible)?;
                Ok(d)
            })
            .collect()
    }

    /// `{(sorted type, genus): count}`.
    fn histogram<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for b in &self.inner.report().by_type_genus {
            let [l, m, n] = b.sorted_type;
            d.set_item(((l, m, n), b.genus.clone()), b.count)?;
        }
        Ok(d)
    }

    /// Nielsen orbits: `nu`, `orbits` and, for at most 64 classes, the
    /// order of the induced permutation group.
    fn t_systems<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = omega_orbits(&self.inner);
        let d = PyDict::new(py);
        d.set_item("nu", report.nu)?;
        let orbits: Vec<Bound<'py, PyDict>> = report
            .orbits
            .iter()
            .map(|o| {
                let od = PyDict::new(py);
                od.set_item("orbit_id", o.orbit_id)?;
                od.set_item("length", o.length)?;
                od.set_item("classes", o.classes.clone())?;
                od.set_item("commutator_order", o.commutator_order)?;
                Ok(od)
            })
            .collect::<PyResult<_>>()?;
        d.set_item("orbits", orbits)?;
        let order = if self.inner.r() <= OMEGA_ACTION_CAP {
            Some(omega_action_order(&self.inner).map_err(to_py)?)
        } else {
            None
        };
        d.set_item("omega_action_order", order)?;
        Ok(d)
    }

    /// Universal cover of the whole census, or of one Nielsen orbit.
    #[pyo3(signature = (orbit=None, regular=false))]
    fn ucover<'py>(
        &self,
        py: Python<'py>,
        orbit: Option<usize>,
        regular: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let layout = if regular {
            BlockLayout::Regular
        } else {
            BlockLayout::Natural
        };
        let report = omega_orbits(&self.inner);
        let rec = py
            .detach(|| ucover_record(&self.inner, orbit.map(|i| (&report, i)), layout))
            .map_err(to_py)?;
        cover_dict(py, &rec)
    }

    /// `(lower, upper)` as `(numerator, denominator)` pairs.
    fn bound_window(&self) -> PyResult<((BigUint, BigUint), (BigUint, BigUint))> {
        let w = simple_bound_window(&self.inner).map_err(to_py)?;
        let parts = |q: &BigRational| -> (BigUint, BigUint) {
            (
                q.numer().to_biguint().unwrap_or_default(),
                q.denom().to_biguint().unwrap_or_default(),
            )
        };
        Ok((parts(&w.lower), parts(&w.upper)))
    }

    /// The census as the same JSON document the command-line tool emits.
    fn to_json(&self) -> String {
        let g = self.inner.group();
        let mut doc = Document::new(GroupSummary {
            descriptor: self.desc.to_string(),
            degree: g.degree(),
            order: g.order().clone(),
        });
        doc.census = Some(self.inner.report().clone());
        serde_json::to_string(&doc).expect("reports serialize")
    }
}

/// Census of the group named by `descriptor`.
#[pyfunction]
fn census(py: Python<'_>, descriptor: &str) -> PyResult<Census> {
    let desc = parse_descriptor(descriptor).map_err(to_py)?;
    let inner = py
        .detach(|| {
            let g = Arc::new(construct_group(&desc)?);
            dessin_census(g)
        })
        .map_err(to_py)?;
    Ok(Census { desc, inner })
}

/// Closed form for `r(G)`: `"rC"`, `"rD"`, `"rL2p"`, `"rL2_2e"` or `"rSz"`.
#[pyfunction]
fn formula(name: &str, n: u32) -> PyResult<BigUint> {
    match name {
        "rC" if n >= 1 => Ok(r_cyclic(n as u64)),
        "rD" => {
            let desc = GroupDescriptor::Dihedral(n).validate().map_err(to_py)?;
            core_closed_form_r(ClosedFormTarget::Group(desc)).map_err(to_py)
        }
        "rL2p" => r_l2_prime(n as u64).map_err(to_py),
        "rL2_2e" => r_l2_even(n).map_err(to_py),
        "rSz" => r_suzuki(n).map_err(to_py),
        _ => Err(PyValueError::new_err(format!(
            "unknown formula or parameter: {name} {n}"
        ))),
    }
}

/// Closed-form `r(G)` for a group descriptor.
#[pyfunction]
fn closed_form_r(descriptor: &str) -> PyResult<BigUint> {
    let desc = parse_descriptor(descriptor).map_err(to_py)?;
    core_closed_form_r(ClosedFormTarget::Group(desc)).map_err(to_py)
}

/// Universal cover predicted by closed forms alone.
#[pyfunction]
fn closed_form_ucover<'py>(py: Python<'py>, descriptor: &str) -> PyResult<Bound<'py, PyDict>> {
    let desc = parse_descriptor(descriptor).map_err(to_py)?;
    let rec = core_closed_form_ucover(&desc).map_err(to_py)?;
    cover_dict(py, &rec)
}

/// Exact order of the group generated by permutations in one-line notation.
#[pyfunction]
fn bsgs_order(generators: Vec<Vec<u32>>) -> PyResult<BigUint> {
    core_bsgs_order(&permutations(generators)?).map_err(to_py)
}

#[pyfunction]
fn element_order(images: Vec<u32>) -> PyResult<u64> {
    let p = Permutation::from_images(images).map_err(to_py)?;
    Ok(core_element_order(&p))
}

#[pymodule]
fn dessins(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Census>()?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(formula, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_r, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_ucover, m)?)?;
    m.add_function(wrap_pyfunction!(bsgs_order, m)?)?;
    m.add_function(wrap_pyfunction!(element_order, m)?)?;
    Ok(())
}
