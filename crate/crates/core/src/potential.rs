//! Face potentials of an oriented Eulerian edge set.
//!
//! Crossing an edge of the set into the face on its left raises the potential
//! by one, crossing into the face on its right lowers it by one, and crossing
//! any other edge leaves it unchanged. The reference face sits at zero: the
//! outer face on the plane, a chosen face on the sphere.

use std::collections::{BTreeMap, VecDeque};

use crate::cycles::{CycleSystem, Sense};
use crate::embed::{Embedding, FaceId, Mode};
use crate::error::{Error, Result};
use crate::orient::EulerianDifference;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialMap {
    pub mode: Mode,
    pub reference: FaceId,
    ids: Vec<FaceId>,
    values: Vec<i64>,
}

impl PotentialMap {
    pub fn get(&self, f: FaceId) -> Option<i64> {
        self.ids.binary_search(&f).ok().map(|i| self.values[i])
    }

    /// Values by face position, aligned with [`Embedding::faces`].
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (FaceId, i64)> + '_ {
        self.ids.iter().copied().zip(self.values.iter().copied())
    }

    pub fn to_map(&self) -> BTreeMap<FaceId, i64> {
        self.iter().collect()
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// The same potential measured from a different reference face.
    pub fn rerooted(&self, g: FaceId) -> Result<PotentialMap> {
        let base = self
            .get(g)
            .ok_or_else(|| Error::UnknownFace(g.to_string()))?;
        Ok(PotentialMap {
            mode: self.mode,
            reference: g,
            ids: self.ids.clone(),
            values: self.values.iter().map(|v| v - base).collect(),
        })
    }

    /// Smallest-id face attaining the minimum.
    pub fn argmin(&self) -> FaceId {
        let m = self.min();
        self.iter()
            .find(|&(_, v)| v == m)
            .map(|(f, _)| f)
            .expect("nonempty map")
    }
}

/// Order in which the dual search scans each face's boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    Forward,
    Reverse,
}

pub(crate) fn label_faces(
    f: &EulerianDifference,
    e: &Embedding,
    root: FaceId,
    order: ScanOrder,
) -> Result<Vec<i64>> {
    let root = e
        .face_index(root)
        .ok_or_else(|| Error::UnknownFace(root.to_string()))?;
    let faces = e.faces();
    let mut value: Vec<Option<i64>> = vec![None; faces.len()];
    value[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        let here = value[a].expect("queued faces are labelled");
        let boundary = &faces[a].boundary;
        let scan: Box<dyn Iterator<Item = _>> = match order {
            ScanOrder::Forward => Box::new(boundary.iter()),
            ScanOrder::Reverse => Box::new(boundary.iter().rev()),
        };
        // every dual edge is checked, labelled neighbour or not
        for &k in scan {
            let b = e.left_index(k.twin());
            let step = if f.contains(k) {
                -1
            } else if f.contains(k.twin()) {
                1
            } else {
                0
            };
            match value[b] {
                None => {
                    value[b] = Some(here + step);
                    queue.push_back(b);
                }
                Some(v) if v != here + step => {
                    return Err(Error::Invariant(format!(
                        "potential of face {} is both {} and {}",
                        faces[b].id,
                        v,
                        here + step
                    )))
                }
                Some(_) => {}
            }
        }
    }
    value
        .into_iter()
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| Error::Invariant("dual graph is disconnected".into()))
}

fn build(f: &EulerianDifference, e: &Embedding, root: FaceId, mode: Mode) -> Result<PotentialMap> {
    Ok(PotentialMap {
        mode,
        reference: root,
        ids: e.face_ids().collect(),
        values: label_faces(f, e, root, ScanOrder::Forward)?,
    })
}

/// Potential of `f` on a plane embedding, zero on the outer face.
pub fn plane_potential(f: &EulerianDifference, e: &Embedding) -> Result<PotentialMap> {
    match (e.mode(), e.outer_face()) {
        (Mode::Plane, Some(outer)) => build(f, e, outer, Mode::Plane),
        _ => Err(Error::WrongMode("plane")),
    }
}

/// Potential of `f` on a sphere embedding, zero on `root`.
pub fn sphere_potential(
    f: &EulerianDifference,
    e: &Embedding,
    root: FaceId,
) -> Result<PotentialMap> {
    if e.mode() != Mode::Sphere {
        return Err(Error::WrongMode("sphere"));
    }
    e.face(root)?;
    build(f, e, root, Mode::Sphere)
}

/// Number of ccw cycles enclosing `g` minus the number of cw cycles enclosing it.
pub fn potential_from_cycles(s: &CycleSystem, e: &Embedding, g: FaceId) -> Result<i64> {
    let pos = e
        .face_index(g)
        .ok_or_else(|| Error::UnknownFace(g.to_string()))?;
    s.cycles.iter().try_fold(0, |acc, c| {
        let inside = c.contains_face(pos) as i64;
        match c.sense {
            Some(Sense::Ccw) => Ok(acc + inside),
            Some(Sense::Cw) => Ok(acc - inside),
            None => Err(Error::Invariant("cycle system is not classified".into())),
        }
    })
}

pub fn z_min(p: &PotentialMap) -> i64 {
    p.min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{classify_and_nest, standard_cycle_system};
    use crate::orient::difference;
    use crate::test_fixtures::fixture;

    fn diff(name: &str, a: &str, b: &str) -> (Embedding, EulerianDifference) {
        let inst = fixture(name);
        let d = difference(
            &inst.orientations[a],
            &inst.orientations[b],
            &inst.embedding,
        )
        .unwrap();
        (inst.embedding, d)
    }

    #[test]
    fn empty_difference_is_flat() {
        let (e, f) = diff("kite", "D2", "D2");
        assert!(plane_potential(&f, &e)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0));
        let (s, f) = diff("kite_sphere", "D1", "D1");
        let p = sphere_potential(&f, &s, FaceId(0)).unwrap();
        assert!(p.values().iter().all(|&v| v == 0));
        assert_eq!(z_min(&p), 0);
    }

    #[test]
    fn kite_triangle_potential() {
        let (e, f) = diff("kite", "D1", "D3");
        let p = plane_potential(&f, &e).unwrap();
        assert_eq!(p.get(FaceId(1)), Some(0));
        assert_eq!(p.get(FaceId(4)), Some(1));
        assert_eq!(p.get(FaceId(0)), Some(0));
        let (e, f) = diff("kite", "D3", "D1");
        let p = plane_potential(&f, &e).unwrap();
        assert_eq!(p.get(FaceId(4)), Some(-1));
    }

    #[test]
    fn kite_sphere_potentials_and_min() {
        let (s, f) = diff("kite_sphere", "D1", "D3");
        let p = sphere_potential(&f, &s, FaceId(1)).unwrap();
        assert_eq!(
            p.to_map(),
            BTreeMap::from([(FaceId(0), 0), (FaceId(1), 0), (FaceId(4), 1)])
        );
        assert_eq!(z_min(&p), 0);
        let (s, f) = diff("kite_sphere", "D3", "D1");
        let p = sphere_potential(&f, &s, FaceId(1)).unwrap();
        assert_eq!(
            p.to_map(),
            BTreeMap::from([(FaceId(0), 0), (FaceId(1), 0), (FaceId(4), -1)])
        );
        assert_eq!(z_min(&p), -1);
        let at_min = sphere_potential(&f, &s, p.argmin()).unwrap();
        assert_eq!(z_min(&at_min), 0);
    }

    #[test]
    fn rerooting_telescopes() {
        let (s, f) = diff("kite_sphere", "D3", "D1");
        let base = sphere_potential(&f, &s, FaceId(1)).unwrap();
        for g in s.face_ids() {
            let direct = sphere_potential(&f, &s, g).unwrap();
            assert_eq!(direct, base.rerooted(g).unwrap());
        }
    }

    #[test]
    fn annulus_cycle_counts() {
        let inst = fixture("annulus");
        let e = &inst.embedding;
        let f = difference(&inst.orientations["S"], &inst.orientations["Srev"], e).unwrap();
        let s = classify_and_nest(&standard_cycle_system(&f, e).unwrap(), e, None).unwrap();
        let inner_square = s.cycles.iter().find(|c| c.interior_count() == 1).unwrap();
        let innermost = inner_square.interior_ids(e)[0];
        let ring = e
            .face_ids()
            .find(|&g| g != innermost && Some(g) != e.outer_face())
            .unwrap();
        assert_eq!(
            potential_from_cycles(&s, e, e.outer_face().unwrap()).unwrap(),
            0
        );
        assert_eq!(potential_from_cycles(&s, e, ring).unwrap(), 1);
        assert_eq!(potential_from_cycles(&s, e, innermost).unwrap(), 2);
        // ccw outside, cw inside: the innermost face sees c- = c+ = 1
        let f = difference(&inst.orientations["N"], &inst.orientations["Nrev"], e).unwrap();
        let p = plane_potential(&f, e).unwrap();
        assert_eq!(p.get(innermost), Some(0));
        assert_eq!(p.get(ring), Some(1));
    }

    #[test]
    fn single_ccw_face_has_indicator_potential() {
        let e = fixture("grid3x3").embedding;
        for g in e.flip_candidates() {
            let f = EulerianDifference::new(&e, e.face(g).unwrap().boundary.clone()).unwrap();
            let p = plane_potential(&f, &e).unwrap();
            for (h, v) in p.iter() {
                assert_eq!(v, (h == g) as i64);
            }
        }
    }

    #[test]
    fn scan_order_does_not_matter() {
        let (e, f) = diff("annulus", "N", "Nrev");
        let outer = e.outer_face().unwrap();
        assert_eq!(
            label_faces(&f, &e, outer, ScanOrder::Forward).unwrap(),
            label_faces(&f, &e, outer, ScanOrder::Reverse).unwrap()
        );
    }

    #[test]
    fn mode_is_enforced() {
        let (e, f) = diff("kite", "D1", "D3");
        assert!(matches!(
            sphere_potential(&f, &e, FaceId(0)),
            Err(Error::WrongMode(_))
        ));
        let (s, f) = diff("kite_sphere", "D1", "D3");
        assert!(matches!(plane_potential(&f, &s), Err(Error::WrongMode(_))));
        assert!(matches!(
            sphere_potential(&f, &s, FaceId(3)),
            Err(Error::UnknownFace(_))
        ));
    }
}
