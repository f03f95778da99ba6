//! Standard cycle systems: edge-disjoint, pairwise uncrossed directed cycles
//! partitioning an oriented Eulerian edge set.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::embed::{self, Embedding, FaceId, HalfEdge, Mode};
use crate::error::{Error, Result};
use crate::orient::EulerianDifference;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// Interior on the left of the traversal.
    Ccw,
    /// Interior on the right.
    Cw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Closed directed walk, rotated to start at its smallest half-edge.
    pub arcs: Vec<HalfEdge>,
    pub sense: Option<Sense>,
    /// Face positions (see [`Embedding::faces`]) enclosed by the cycle.
    /// Empty until classified.
    pub interior: Vec<bool>,
    /// Index of the minimal enclosing cycle in the same system.
    pub parent: Option<usize>,
}

impl Cycle {
    fn new(mut arcs: Vec<HalfEdge>) -> Self {
        let start = arcs
            .iter()
            .enumerate()
            .min_by_key(|(_, h)| **h)
            .map(|(i, _)| i)
            .unwrap_or(0);
        arcs.rotate_left(start);
        Cycle {
            arcs,
            sense: None,
            interior: Vec::new(),
            parent: None,
        }
    }

    /// Canonical id: the smallest half-edge on the cycle.
    pub fn id(&self) -> HalfEdge {
        self.arcs[0]
    }

    pub fn edges(&self) -> Vec<usize> {
        self.arcs.iter().map(|h| h.edge()).collect()
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|&&b| b).count()
    }

    pub fn interior_ids(&self, e: &Embedding) -> Vec<FaceId> {
        e.faces()
            .iter()
            .zip(&self.interior)
            .filter(|(_, &b)| b)
            .map(|(f, _)| f.id)
            .collect()
    }

    pub fn contains_face(&self, face_pos: usize) -> bool {
        self.interior.get(face_pos).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleSystem {
    pub cycles: Vec<Cycle>,
}

impl CycleSystem {
    /// Wrap explicit directed cycles. Each must be a closed, vertex-simple walk
    /// and the cycles must be edge-disjoint.
    pub fn from_cycles(e: &Embedding, cycles: Vec<Vec<HalfEdge>>) -> Result<Self> {
        let mut used = vec![false; e.num_edges()];
        let mut out = Vec::with_capacity(cycles.len());
        for arcs in cycles {
            check_closed_walk(e, &arcs)?;
            for h in &arcs {
                if std::mem::replace(&mut used[h.edge()], true) {
                    return Err(Error::NotACycle(format!(
                        "edge {} used by two cycles",
                        e.edge_label(h.edge())
                    )));
                }
            }
            out.push(Cycle::new(arcs));
        }
        Ok(CycleSystem { cycles: out })
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// All arcs of all cycles, sorted.
    pub fn arcs(&self) -> Vec<HalfEdge> {
        let mut all: Vec<HalfEdge> = self.cycles.iter().flat_map(|c| c.arcs.clone()).collect();
        all.sort();
        all
    }

    /// Certificate form: `[{edges: [[edgeId, tail, head], ...], class, parent}]`.
    pub fn to_json(&self, e: &Embedding) -> Value {
        Value::Array(
            self.cycles
                .iter()
                .map(|c| {
                    let edges: Vec<Value> = c
                        .arcs
                        .iter()
                        .map(|&h| {
                            json!([
                                e.edge_label(h.edge()),
                                e.vertex_label(e.tail(h)),
                                e.vertex_label(e.head(h))
                            ])
                        })
                        .collect();
                    json!({"edges": edges, "class": c.sense, "parent": c.parent})
                })
                .collect(),
        )
    }
}

pub(crate) fn check_closed_walk(e: &Embedding, arcs: &[HalfEdge]) -> Result<()> {
    if arcs.is_empty() {
        return Err(Error::NotACycle("empty walk".into()));
    }
    for (i, &h) in arcs.iter().enumerate() {
        if h.edge() >= e.num_edges() {
            return Err(Error::NotACycle(format!("half-edge {} out of range", h.0)));
        }
        let next = arcs[(i + 1) % arcs.len()];
        if e.head(h) != e.tail(next) {
            return Err(Error::NotACycle("consecutive arcs do not connect".into()));
        }
    }
    embed::check_simple_cycle(e, &arcs.iter().map(|h| h.edge()).collect::<Vec<_>>())
}

/// Decompose `f` by repeatedly peeling a directed facial cycle of the
/// sub-embedding spanned by the remaining arcs. Ties go to the facial walk
/// with the smallest half-edge.
pub fn standard_cycle_system(f: &EulerianDifference, e: &Embedding) -> Result<CycleSystem> {
    standard_cycle_system_seeded(f, e, None)
}

/// As [`standard_cycle_system`], but with `Some(seed)` the directed facial walk
/// to peel is drawn at random among all candidates.
pub fn standard_cycle_system_seeded(
    f: &EulerianDifference,
    e: &Embedding,
    seed: Option<u64>,
) -> Result<CycleSystem> {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut active = vec![false; e.num_edges()];
    for h in f.arcs() {
        active[h.edge()] = true;
    }
    let mut remaining = f.len();
    let mut cycles = Vec::new();
    while remaining > 0 {
        let walks = embed::trace_walks(e.rotation_system(), e.edge_ends(), Some(&active));
        let directed: Vec<&Vec<HalfEdge>> = walks
            .iter()
            .filter(|w| w.iter().all(|&h| f.contains(h)))
            .collect();
        if directed.is_empty() {
            return Err(Error::Invariant(
                "no directed facial cycle in a nonempty Eulerian sub-embedding".into(),
            ));
        }
        let pick = match rng.as_mut() {
            Some(r) => directed[r.gen_range(0..directed.len())],
            None => directed[0],
        };
        for cycle in split_closed_walk(e, pick) {
            for h in &cycle {
                active[h.edge()] = false;
                remaining -= 1;
            }
            cycles.push(Cycle::new(cycle));
        }
    }
    Ok(CycleSystem { cycles })
}

/// Split a closed walk into vertex-simple closed walks at repeated vertices.
fn split_closed_walk(e: &Embedding, walk: &[HalfEdge]) -> Vec<Vec<HalfEdge>> {
    let mut out = Vec::new();
    let mut stack: Vec<HalfEdge> = Vec::new();
    // vertex -> stack position of the arc leaving it
    let mut at: HashMap<usize, usize> = HashMap::from([(e.tail(walk[0]), 0)]);
    for &h in walk {
        stack.push(h);
        let v = e.head(h);
        if let Some(&p) = at.get(&v) {
            let cycle: Vec<HalfEdge> = stack.drain(p..).collect();
            for c in &cycle[1..] {
                at.remove(&e.tail(*c));
            }
            out.push(cycle);
        } else {
            at.insert(v, stack.len());
        }
    }
    debug_assert!(stack.is_empty());
    out
}

/// Region enclosed by a closed walk as seen from `reference`: faces not
/// reachable from it without crossing the walk.
pub(crate) fn enclosed(e: &Embedding, arcs: &[HalfEdge], reference: FaceId) -> Vec<bool> {
    let mut blocked = vec![false; e.num_edges()];
    for h in arcs {
        blocked[h.edge()] = true;
    }
    let root = e.face_index(reference).expect("reference face exists");
    embed::dual_reach(e, root, &blocked, None)
        .into_iter()
        .map(|r| !r)
        .collect()
}

/// Mark each cycle ccw or cw and build the nesting forest.
///
/// Interiors are taken relative to `outer`, defaulting to the embedding's
/// outer face; on the sphere a reference face must be supplied.
pub fn classify_and_nest(
    s: &CycleSystem,
    e: &Embedding,
    outer: Option<FaceId>,
) -> Result<CycleSystem> {
    let reference = match (outer, e.mode()) {
        (Some(o), _) => {
            e.face(o)?;
            o
        }
        (None, Mode::Plane) => e.outer_face().ok_or(Error::MissingOuterFace)?,
        (None, Mode::Sphere) => return Err(Error::MissingOuterFace),
    };
    let mut cycles = s.cycles.clone();
    for c in &mut cycles {
        check_closed_walk(e, &c.arcs)?;
        let inside = enclosed(e, &c.arcs, reference);
        let left = c.arcs.iter().all(|&h| inside[e.left_index(h)]);
        let right = c.arcs.iter().all(|&h| inside[e.left_index(h.twin())]);
        c.sense = match (left, right) {
            (true, false) => Some(Sense::Ccw),
            (false, true) => Some(Sense::Cw),
            _ => {
                return Err(Error::Invariant(format!(
                    "cycle at half-edge {} has its interior on both sides",
                    c.id().0
                )))
            }
        };
        c.interior = inside;
    }
    let sizes: Vec<usize> = cycles.iter().map(Cycle::interior_count).collect();
    for i in 0..cycles.len() {
        let parent = (0..cycles.len())
            .filter(|&j| j != i && sizes[j] > sizes[i])
            .filter(|&j| is_subset(&cycles[i].interior, &cycles[j].interior))
            .min_by_key(|&j| (sizes[j], cycles[j].id()));
        cycles[i].parent = parent;
    }
    Ok(CycleSystem { cycles })
}

pub(crate) fn is_subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orient::difference;
    use crate::test_fixtures::fixture;

    fn system(name: &str, from: &str, to: &str) -> (Embedding, CycleSystem) {
        let inst = fixture(name);
        let f = difference(
            &inst.orientations[from],
            &inst.orientations[to],
            &inst.embedding,
        )
        .unwrap();
        let s = standard_cycle_system(&f, &inst.embedding).unwrap();
        let s = classify_and_nest(&s, &inst.embedding, None).unwrap();
        (inst.embedding, s)
    }

    #[test]
    fn empty_difference_gives_empty_system() {
        let (_, s) = system("kite", "D1", "D1");
        assert!(s.is_empty());
    }

    #[test]
    fn kite_square_is_one_ccw_cycle() {
        let (e, s) = system("kite", "D1", "D2");
        assert_eq!(s.len(), 1);
        assert_eq!(s.cycles[0].arcs.len(), 4);
        assert_eq!(s.cycles[0].sense, Some(Sense::Ccw));
        assert_eq!(s.cycles[0].interior_ids(&e), vec![FaceId(0), FaceId(4)]);
        assert_eq!(s.cycles[0].parent, None);
    }

    #[test]
    fn kite_triangle_classification() {
        let (e, s) = system("kite", "D1", "D3");
        assert_eq!(s.len(), 1);
        // A->C, C->D, D->A keeps triangle ACD on its left
        assert_eq!(s.cycles[0].sense, Some(Sense::Ccw));
        assert_eq!(s.cycles[0].interior_ids(&e), vec![FaceId(4)]);
        let (_, back) = system("kite", "D3", "D1");
        assert_eq!(back.cycles[0].sense, Some(Sense::Cw));
    }

    #[test]
    fn annulus_nesting() {
        let (e, s) = system("annulus", "S", "Srev");
        assert_eq!(s.len(), 2);
        let outer = s
            .cycles
            .iter()
            .position(|c| c.interior_count() == 5)
            .unwrap();
        let inner = 1 - outer;
        assert_eq!(s.cycles[inner].interior_count(), 1);
        assert_eq!(s.cycles[inner].parent, Some(outer));
        assert_eq!(s.cycles[outer].parent, None);
        assert!(s.cycles.iter().all(|c| c.sense == Some(Sense::Ccw)));
        let (_, mixed) = system("annulus", "N", "Nrev");
        let senses: Vec<_> = mixed
            .cycles
            .iter()
            .map(|c| (c.interior_count(), c.sense.unwrap()))
            .collect();
        assert!(senses.contains(&(5, Sense::Ccw)));
        assert!(senses.contains(&(1, Sense::Cw)));
        assert_eq!(e.num_faces(), 6);
    }

    #[test]
    fn single_facial_cycle_is_a_root() {
        let e = fixture("grid3x3").embedding;
        for f in e.flip_candidates() {
            let arcs = e.face(f).unwrap().boundary.clone();
            let s = CycleSystem::from_cycles(&e, vec![arcs]).unwrap();
            let s = classify_and_nest(&s, &e, None).unwrap();
            assert_eq!(s.cycles[0].sense, Some(Sense::Ccw));
            assert_eq!(s.cycles[0].parent, None);
        }
    }

    #[test]
    fn sphere_classification_needs_reference() {
        let inst = fixture("kite_sphere");
        let f = difference(
            &inst.orientations["D1"],
            &inst.orientations["D3"],
            &inst.embedding,
        )
        .unwrap();
        let s = standard_cycle_system(&f, &inst.embedding).unwrap();
        assert!(matches!(
            classify_and_nest(&s, &inst.embedding, None),
            Err(Error::MissingOuterFace)
        ));
        let ccw = classify_and_nest(&s, &inst.embedding, Some(FaceId(1))).unwrap();
        assert_eq!(ccw.cycles[0].sense, Some(Sense::Ccw));
        // viewed from inside the triangle the same cycle turns the other way
        let cw = classify_and_nest(&s, &inst.embedding, Some(FaceId(4))).unwrap();
        assert_eq!(cw.cycles[0].sense, Some(Sense::Cw));
    }

    #[test]
    fn figure_eight_walk_splits_into_two_cycles() {
        // wheel: hub 0, rim 1..5; triangles 0-1-2 and 0-3-4 share only the hub
        let e = fixture("wheel5").embedding;
        let arc = |a, b| e.half_edge_between(a, b).unwrap();
        let walk = [
            arc(0, 1),
            arc(1, 2),
            arc(2, 0),
            arc(0, 3),
            arc(3, 4),
            arc(4, 0),
        ];
        let parts = split_closed_walk(&e, &walk);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 3));
    }

    #[test]
    fn from_cycles_rejects_broken_input() {
        let e = fixture("kite").embedding;
        let arc = |a, b| e.half_edge_between(a, b).unwrap();
        assert!(CycleSystem::from_cycles(&e, vec![vec![arc(0, 1), arc(1, 2)]]).is_err());
        let tri = vec![arc(0, 1), arc(1, 2), arc(2, 0)];
        assert!(CycleSystem::from_cycles(&e, vec![tri.clone(), tri]).is_err());
    }
}
