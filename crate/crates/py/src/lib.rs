//! Python bindings: load an instance, then query distances, sequences,
//! potentials and the brute-force oracle by orientation name.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use alphaflip::fixture::orientation_to_labels;
use alphaflip::oracle::{self, VerifyOptions};
use alphaflip::{self as af, Embedding, FaceId, Mode, Orientation};

create_exception!(pyalphaflip, AlphaflipError, PyException);

fn err(e: af::Error) -> PyErr {
    let kind = match e.kind() {
        af::ErrorKind::Input => "input",
        af::ErrorKind::Domain => "domain",
        af::ErrorKind::Invariant => "invariant",
    };
    AlphaflipError::new_err(format!("{kind}: {e}"))
}

fn parse_mode(mode: Option<&str>) -> PyResult<Option<Mode>> {
    match mode {
        None => Ok(None),
        Some("plane") => Ok(Some(Mode::Plane)),
        Some("sphere") => Ok(Some(Mode::Sphere)),
        Some(other) => Err(AlphaflipError::new_err(format!(
            "input: unknown mode {other:?}"
        ))),
    }
}

/// An embedded graph with its alpha and named orientations.
#[pyclass(module = "pyalphaflip")]
pub struct Instance {
    inner: af::Instance,
}

impl Instance {
    fn embedding(&self) -> &Embedding {
        &self.inner.embedding
    }

    fn named(&self, name: &str) -> PyResult<&Orientation> {
        self.inner.orientation(name).map_err(err)
    }

    fn pair(&self, from: &str, to: &str) -> PyResult<(&Orientation, &Orientation)> {
        Ok((self.named(from)?, self.named(to)?))
    }

    fn reference(&self, face: Option<usize>) -> PyResult<Option<FaceId>> {
        match face {
            Some(id) => {
                self.embedding().face(FaceId(id)).map_err(err)?;
                Ok(Some(FaceId(id)))
            }
            None => Ok(None),
        }
    }

    fn alpha(&self) -> PyResult<af::AlphaSpec> {
        match (&self.inner.alpha, self.inner.orientations.values().next()) {
            (Some(a), _) => Ok(a.clone()),
            (None, Some(d)) => Ok(af::AlphaSpec::of(d, self.embedding())),
            (None, None) => Err(AlphaflipError::new_err(
                "input: instance has neither alpha nor orientations",
            )),
        }
    }
}

#[pymethods]
impl Instance {
    #[staticmethod]
    #[pyo3(signature = (path, mode=None))]
    fn from_path(path: &str, mode: Option<&str>) -> PyResult<Self> {
        let inner = af::Instance::from_path(path, parse_mode(mode)?).map_err(err)?;
        Ok(Instance { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = af::Instance::from_json(text).map_err(err)?;
        Ok(Instance { inner })
    }

    #[getter]
    fn mode(&self) -> String {
        self.embedding().mode().to_string()
    }

    #[getter]
    fn outer_face(&self) -> Option<usize> {
        self.embedding().outer_face().map(|f| f.0)
    }

    fn face_ids(&self) -> Vec<usize> {
        self.embedding().face_ids().map(|f| f.0).collect()
    }

    fn orientation_names(&self) -> Vec<String> {
        self.inner.orientations.keys().cloned().collect()
    }

    /// Edge id to `(tail, head)` for a named orientation.
    fn orientation(&self, name: &str) -> PyResult<BTreeMap<String, [i64; 2]>> {
        Ok(orientation_to_labels(self.embedding(), self.named(name)?))
    }

    fn flippable_faces(&self, name: &str) -> PyResult<Vec<usize>> {
        let faces = af::flippable_faces(self.named(name)?, self.embedding()).map_err(err)?;
        Ok(faces.into_iter().map(|f| f.0).collect())
    }

    /// Face potential of the difference `from - to`; the reference face only matters on the sphere.
    #[pyo3(signature = (from_, to, reference=None))]
    fn potential(
        &self,
        from_: &str,
        to: &str,
        reference: Option<usize>,
    ) -> PyResult<BTreeMap<usize, i64>> {
        let (dp, d) = self.pair(from_, to)?;
        let e = self.embedding();
        let f = af::difference(dp, d, e).map_err(err)?;
        let p = match e.mode() {
            Mode::Plane => af::plane_potential(&f, e),
            Mode::Sphere => {
                af::sphere_potential(&f, e, self.reference(reference)?.unwrap_or(e.faces()[0].id))
            }
        }
        .map_err(err)?;
        Ok(p.iter().map(|(f, z)| (f.0, z)).collect())
    }

    /// Flip distance, or `None` when the plane orientations are incomparable.
    fn distance(&self, from_: &str, to: &str) -> PyResult<Option<u64>> {
        let (dp, d) = self.pair(from_, to)?;
        let e = self.embedding();
        match e.mode() {
            Mode::Plane => Ok(af::plane_distance(dp, d, e).map_err(err)?.flips()),
            Mode::Sphere => Ok(Some(
                af::sphere_distance(dp, d, e, e.faces()[0].id).map_err(err)?,
            )),
        }
    }

    /// Minimum flip sequence as a list of face ids.
    #[pyo3(signature = (from_, to, reference=None))]
    fn sequence(&self, from_: &str, to: &str, reference: Option<usize>) -> PyResult<Vec<usize>> {
        let (dp, d) = self.pair(from_, to)?;
        let s =
            af::flip_sequence(dp, d, self.embedding(), self.reference(reference)?).map_err(err)?;
        Ok(s.faces.into_iter().map(|f| f.0).collect())
    }

    #[pyo3(signature = (from_, to, reference=None))]
    fn greedy_sequence(
        &self,
        from_: &str,
        to: &str,
        reference: Option<usize>,
    ) -> PyResult<Vec<usize>> {
        let (dp, d) = self.pair(from_, to)?;
        let s = af::greedy_sequence(dp, d, self.embedding(), self.reference(reference)?)
            .map_err(err)?;
        Ok(s.faces.into_iter().map(|f| f.0).collect())
    }

    /// Apply flips to a named orientation and return the result.
    fn apply(&self, name: &str, faces: Vec<usize>) -> PyResult<BTreeMap<String, [i64; 2]>> {
        let e = self.embedding();
        let mut d = self.named(name)?.clone();
        for g in faces {
            d = af::apply_flip(&d, e, FaceId(g)).map_err(err)?;
        }
        Ok(orientation_to_labels(e, &d))
    }

    /// Distance certificate as a JSON string.
    #[pyo3(signature = (from_, to, reference=None, peel_seed=None))]
    fn certificate_json(
        &self,
        from_: &str,
        to: &str,
        reference: Option<usize>,
        peel_seed: Option<u64>,
    ) -> PyResult<String> {
        let (dp, d) = self.pair(from_, to)?;
        let e = self.embedding();
        let cert = af::certificate(dp, d, e, self.reference(reference)?, peel_seed).map_err(err)?;
        Ok(cert.to_json(e).to_string())
    }

    /// Number of alpha-orientations, by exhaustive enumeration.
    #[pyo3(signature = (budget=oracle::DEFAULT_BUDGET))]
    fn count_orientations(&self, budget: u64) -> PyResult<usize> {
        let u =
            oracle::enumerate_with_budget(self.embedding(), &self.alpha()?, budget).map_err(err)?;
        Ok(u.len())
    }

    /// Run the oracle over all pairs; returns `(passed, report_json)`.
    #[pyo3(signature = (budget=oracle::DEFAULT_BUDGET))]
    fn verify(&self, py: Python<'_>, budget: u64) -> PyResult<(bool, String)> {
        let alpha = self.alpha()?;
        let e = self.embedding().clone();
        let opts = VerifyOptions {
            budget,
            ..VerifyOptions::default()
        };
        let report = py
            .detach(move || oracle::verify_instance(&e, &alpha, &opts))
            .map_err(err)?;
        Ok((report.passed(), report.to_json().to_string()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        let e = self.embedding();
        format!(
            "Instance(mode={}, vertices={}, edges={}, faces={}, orientations={:?})",
            e.mode(),
            e.num_vertices(),
            e.num_edges(),
            e.num_faces(),
            self.orientation_names()
        )
    }
}

#[pymodule]
pub fn pyalphaflip(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add("AlphaflipError", m.py().get_type::<AlphaflipError>())?;
    Ok(())
}
