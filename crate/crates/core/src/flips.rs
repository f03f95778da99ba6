//! Flips, flip distances and minimum flip sequences.
//!
//! Every constructive routine here reduces to one primitive, reversing the
//! boundary of a face region `R` whose boundary arcs all keep `R` on their
//! left. Such a region is reversed with exactly one flip per face of `R`: a
//! single face is flipped directly, anything larger is cut along a directed
//! path into a part `R1` whose new boundary also keeps `R1` on the left, `R1`
//! is reversed (which turns the cut path around), and then the rest.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use serde_json::{json, Map, Value};

use crate::cycles::{self, classify_and_nest, standard_cycle_system_seeded, CycleSystem, Sense};
use crate::embed::{self, Embedding, FaceId, HalfEdge, Mode};
use crate::error::{Error, Result};
use crate::orient::{difference, is_strongly_connected, Orientation};
use crate::potential::{plane_potential, sphere_potential, PotentialMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    pub mode: Mode,
    pub faces: Vec<FaceId>,
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Replay the flips on `d`, checking each one is legal when applied.
    pub fn apply(&self, d: &Orientation, e: &Embedding) -> Result<Orientation> {
        let mut cur = d.clone();
        for &g in &self.faces {
            cur = apply_flip(&cur, e, g)?;
        }
        Ok(cur)
    }

    /// Number of flips on each face of `e`, zeros included.
    pub fn per_face_counts(&self, e: &Embedding) -> BTreeMap<FaceId, u64> {
        let mut counts: BTreeMap<FaceId, u64> = e.face_ids().map(|f| (f, 0)).collect();
        for f in &self.faces {
            *counts.entry(*f).or_default() += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Flips(u64),
    Incomparable,
}

impl Distance {
    pub fn flips(self) -> Option<u64> {
        match self {
            Distance::Flips(n) => Some(n),
            Distance::Incomparable => None,
        }
    }
}

fn face_is_flippable(d: &Orientation, e: &Embedding, pos: usize) -> bool {
    e.faces()[pos].boundary.iter().all(|&h| d.agrees(h))
}

fn is_flip_candidate(e: &Embedding, g: FaceId) -> bool {
    e.mode() == Mode::Sphere || Some(g) != e.outer_face()
}

/// Faces whose boundary is a directed cycle running counterclockwise around
/// them. Inner faces only on the plane.
pub fn flippable_faces(d: &Orientation, e: &Embedding) -> Result<Vec<FaceId>> {
    check_edges(d, e)?;
    if !is_strongly_connected(d, e) {
        return Err(Error::NotStronglyConnected);
    }
    Ok(e.flip_candidates()
        .filter(|&g| face_is_flippable(d, e, e.face_index(g).expect("own face")))
        .collect())
}

/// Reverse the boundary of `g`, which must currently be flippable.
pub fn apply_flip(d: &Orientation, e: &Embedding, g: FaceId) -> Result<Orientation> {
    check_edges(d, e)?;
    let pos = e
        .face_index(g)
        .ok_or_else(|| Error::UnknownFace(g.to_string()))?;
    if !is_flip_candidate(e, g) || !face_is_flippable(d, e, pos) {
        return Err(Error::NotFlippable(g));
    }
    let mut out = d.clone();
    for h in &e.faces()[pos].boundary {
        out.reverse_edge(h.edge());
    }
    Ok(out)
}

fn check_edges(d: &Orientation, e: &Embedding) -> Result<()> {
    if d.num_edges() != e.num_edges() {
        return Err(Error::EmbeddingMismatch);
    }
    Ok(())
}

/// Both orientations strongly connected and with equal out-degrees.
fn check_pair(dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<()> {
    check_edges(dp, e)?;
    check_edges(d, e)?;
    if dp.out_degrees(e) != d.out_degrees(e) {
        return Err(Error::AlphaMismatch);
    }
    if !is_strongly_connected(dp, e) || !is_strongly_connected(d, e) {
        return Err(Error::NotStronglyConnected);
    }
    Ok(())
}

fn require_plane(e: &Embedding) -> Result<()> {
    match e.mode() {
        Mode::Plane => Ok(()),
        Mode::Sphere => Err(Error::WrongMode("plane")),
    }
}

fn pair_potential(dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<PotentialMap> {
    require_plane(e)?;
    check_pair(dp, d, e)?;
    plane_potential(&difference(dp, d, e)?, e)
}

/// Whether `d` can be reached from `dp` by flips: the potential of `dp - d`
/// is nonnegative on every face.
pub fn comparable(dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<bool> {
    Ok(pair_potential(dp, d, e)?.min() >= 0)
}

/// Sum of the potential of `dp - d` over all faces, when comparable.
pub fn plane_distance(dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<Distance> {
    let p = pair_potential(dp, d, e)?;
    if p.min() < 0 {
        return Ok(Distance::Incomparable);
    }
    Ok(Distance::Flips(p.sum() as u64))
}

/// Enclosed face counts of the ccw cycles minus those of the cw cycles in a
/// standard cycle system of `dp - d`.
pub fn cycle_count_distance(dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<u64> {
    cycle_count_distance_seeded(dp, d, e, None)
}

pub fn cycle_count_distance_seeded(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    seed: Option<u64>,
) -> Result<u64> {
    if !comparable(dp, d, e)? {
        return Err(Error::Incomparable);
    }
    let f = difference(dp, d, e)?;
    let s = classify_and_nest(&standard_cycle_system_seeded(&f, e, seed)?, e, None)?;
    let total: i64 = s
        .cycles
        .iter()
        .map(|c| match c.sense {
            Some(Sense::Ccw) => c.interior_count() as i64,
            _ => -(c.interior_count() as i64),
        })
        .sum();
    u64::try_from(total)
        .map_err(|_| Error::Invariant(format!("negative cycle-count distance {total}")))
}

fn sphere_pair_potential(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: FaceId,
) -> Result<PotentialMap> {
    if e.mode() != Mode::Sphere {
        return Err(Error::WrongMode("sphere"));
    }
    check_pair(dp, d, e)?;
    sphere_potential(&difference(dp, d, e)?, e, reference)
}

/// Sum over faces of `z(f, g) - z_min(f)`; the same for every reference `f`.
pub fn sphere_distance(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: FaceId,
) -> Result<u64> {
    let p = sphere_pair_potential(dp, d, e, reference)?;
    let m = p.min();
    Ok(p.values().iter().map(|v| (v - m) as u64).sum())
}

/// Working orientation plus the flips applied to it so far.
struct Flipper<'a> {
    e: &'a Embedding,
    d: Orientation,
    flips: Vec<FaceId>,
}

impl<'a> Flipper<'a> {
    fn new(e: &'a Embedding, d: Orientation) -> Self {
        Flipper {
            e,
            d,
            flips: Vec::new(),
        }
    }

    fn flip(&mut self, pos: usize) -> Result<()> {
        let face = &self.e.faces()[pos];
        if !face_is_flippable(&self.d, self.e, pos) || !is_flip_candidate(self.e, face.id) {
            return Err(Error::Invariant(format!(
                "face {} is not flippable when its turn comes",
                face.id
            )));
        }
        for h in &face.boundary {
            self.d.reverse_edge(h.edge());
        }
        self.flips.push(face.id);
        Ok(())
    }

    /// Reverse the boundary of `region` (face positions) with one flip per face.
    /// Every boundary arc of the region must currently keep it on the left.
    fn reverse_region(&mut self, region: &[bool]) -> Result<()> {
        let size = region.iter().filter(|&&b| b).count();
        if size == 0 {
            return Ok(());
        }
        let parts = self.components(region);
        if parts.len() > 1 {
            for part in parts {
                self.reverse_region(&part)?;
            }
            return Ok(());
        }
        if size == 1 {
            return self.flip(region.iter().position(|&b| b).expect("size 1"));
        }
        let first = self.split(region, size)?;
        let rest: Vec<bool> = region.iter().zip(&first).map(|(&r, &a)| r && !a).collect();
        self.reverse_region(&first)?;
        self.reverse_region(&rest)
    }

    fn components(&self, region: &[bool]) -> Vec<Vec<bool>> {
        let no_cut = vec![false; self.e.num_edges()];
        let mut covered = vec![false; region.len()];
        let mut parts = Vec::new();
        for start in 0..region.len() {
            if region[start] && !covered[start] {
                let part = embed::dual_reach(self.e, start, &no_cut, Some(region));
                for (c, &p) in covered.iter_mut().zip(&part) {
                    *c |= p;
                }
                parts.push(part);
            }
        }
        parts
    }

    /// Find a directed path through the region, from boundary vertex to
    /// boundary vertex, whose interior edges cut off a proper part `R1` lying
    /// entirely on their left. Paths may run along boundary arcs, which is how
    /// they get around holes. Candidates are tried shortest first, ties broken
    /// by start vertex and then by edge index through the search order.
    fn split(&self, region: &[bool], size: usize) -> Result<Vec<bool>> {
        let e = self.e;
        let inside = |h: HalfEdge| region[e.left_index(h)];
        let n = e.num_vertices();
        let mut out_arcs: Vec<Vec<(HalfEdge, bool)>> = vec![Vec::new(); n];
        let mut on_boundary = vec![false; n];
        for edge in 0..e.num_edges() {
            let arc = self.d.arc(edge);
            match (inside(arc), inside(arc.twin())) {
                (true, true) => out_arcs[e.tail(arc)].push((arc, true)),
                (true, false) => {
                    out_arcs[e.tail(arc)].push((arc, false));
                    on_boundary[e.tail(arc)] = true;
                    on_boundary[e.head(arc)] = true;
                }
                (false, true) => {
                    return Err(Error::Invariant(format!(
                        "region boundary edge {} points the wrong way",
                        e.edge_label(edge)
                    )))
                }
                (false, false) => {}
            }
        }

        let mut candidates: Vec<Vec<(HalfEdge, bool)>> = Vec::new();
        for s in (0..n).filter(|&v| on_boundary[v]) {
            let via = bfs_tree(e, &out_arcs, s);
            let path_to = |t: usize| {
                let mut path = Vec::new();
                let mut v = t;
                while v != s {
                    let step = via[v].expect("reached");
                    path.push(step);
                    v = e.tail(step.0);
                }
                path.reverse();
                path
            };
            for t in (0..n).filter(|&t| t != s && on_boundary[t] && via[t].is_some()) {
                candidates.push(path_to(t));
            }
            for w in (0..n).filter(|&w| w == s || via[w].is_some()) {
                for &(arc, interior) in &out_arcs[w] {
                    if e.head(arc) == s {
                        let mut closed = path_to(w);
                        closed.push((arc, interior));
                        candidates.push(closed);
                    }
                }
            }
        }
        candidates.retain(|p| p.iter().any(|&(_, interior)| interior));
        candidates.sort_by_key(Vec::len);

        for path in candidates {
            let cut: Vec<HalfEdge> = path.iter().filter(|p| p.1).map(|p| p.0).collect();
            let mut blocked = vec![false; e.num_edges()];
            for h in &cut {
                blocked[h.edge()] = true;
            }
            let part = embed::dual_reach(e, e.left_index(cut[0]), &blocked, Some(region));
            let part_size = part.iter().filter(|&&b| b).count();
            let proper = part_size < size;
            let left_only = cut
                .iter()
                .all(|&h| part[e.left_index(h)] || !part[e.left_index(h.twin())]);
            if proper && left_only {
                return Ok(part);
            }
        }
        Err(Error::Invariant(
            "no directed path splits the region".into(),
        ))
    }
}

/// Breadth-first search tree over the given arcs; `via[v]` is the arc entering `v`.
fn bfs_tree(
    e: &Embedding,
    out_arcs: &[Vec<(HalfEdge, bool)>],
    s: usize,
) -> Vec<Option<(HalfEdge, bool)>> {
    let mut via = vec![None; out_arcs.len()];
    let mut seen = vec![false; out_arcs.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &(arc, interior) in &out_arcs[v] {
            let w = e.head(arc);
            if !seen[w] {
                seen[w] = true;
                via[w] = Some((arc, interior));
                queue.push_back(w);
            }
        }
    }
    via
}

/// Region enclosed by a cycle that is directed in `d`, checked against the
/// expected sense.
fn directed_cycle_region(
    d: &Orientation,
    e: &Embedding,
    arcs: &[HalfEdge],
    sense: Sense,
) -> Result<Vec<bool>> {
    cycles::check_closed_walk(e, arcs)?;
    if let Some(h) = arcs.iter().find(|&&h| !d.agrees(h)) {
        return Err(Error::NotACycle(format!(
            "edge {} is not directed along the cycle",
            e.edge_label(h.edge())
        )));
    }
    let outer = e.outer_face().ok_or(Error::MissingOuterFace)?;
    let inside = cycles::enclosed(e, arcs, outer);
    let ok = match sense {
        Sense::Ccw => arcs.iter().all(|&h| inside[e.left_index(h)]),
        Sense::Cw => arcs.iter().all(|&h| inside[e.left_index(h.twin())]),
    };
    if !ok {
        return Err(Error::WrongSense(format!(
            "cycle at half-edge {} is not {sense:?}",
            arcs.iter().min().expect("nonempty").0
        )));
    }
    Ok(inside)
}

/// Reverse a simple ccw cycle of a strongly connected orientation with one
/// flip per enclosed face, leaving every other edge as it was.
pub fn reverse_ccw_cycle(
    d: &Orientation,
    cycle: &[HalfEdge],
    e: &Embedding,
) -> Result<FlipSequence> {
    require_plane(e)?;
    check_edges(d, e)?;
    if !is_strongly_connected(d, e) {
        return Err(Error::NotStronglyConnected);
    }
    let inside = directed_cycle_region(d, e, cycle, Sense::Ccw)?;
    let mut fl = Flipper::new(e, d.clone());
    fl.reverse_region(&inside)?;
    Ok(FlipSequence {
        mode: Mode::Plane,
        faces: fl.flips,
    })
}

/// Region between a ccw cycle and pairwise exclusive cw cycles inside it.
fn nested_region(
    d: &Orientation,
    e: &Embedding,
    cminus: &[HalfEdge],
    cplus: &[Vec<HalfEdge>],
) -> Result<Vec<bool>> {
    let mut used = vec![false; e.num_edges()];
    for h in cminus.iter().chain(cplus.iter().flatten()) {
        if std::mem::replace(&mut used[h.edge()], true) {
            return Err(Error::Nesting(format!(
                "edge {} is shared by two cycles",
                e.edge_label(h.edge())
            )));
        }
    }
    let mut region = directed_cycle_region(d, e, cminus, Sense::Ccw)?;
    let outer_size = region.iter().filter(|&&b| b).count();
    let mut holes: Vec<Vec<bool>> = Vec::with_capacity(cplus.len());
    for c in cplus {
        let hole = directed_cycle_region(d, e, c, Sense::Cw)?;
        let hole_size = hole.iter().filter(|&&b| b).count();
        if !cycles::is_subset(&hole, &region) || hole_size >= outer_size {
            return Err(Error::Nesting(
                "cw cycle is not inside the ccw cycle".into(),
            ));
        }
        if holes
            .iter()
            .any(|o| o.iter().zip(&hole).any(|(&a, &b)| a && b))
        {
            return Err(Error::Nesting("cw cycles overlap".into()));
        }
        holes.push(hole);
    }
    for hole in &holes {
        for (r, &h) in region.iter_mut().zip(hole) {
            *r &= !h;
        }
    }
    Ok(region)
}

/// Reverse a ccw cycle together with pairwise exclusive cw cycles inside it,
/// flipping each face between them exactly once and nothing else.
pub fn reverse_nested(
    d: &Orientation,
    cminus: &[HalfEdge],
    cplus: &[Vec<HalfEdge>],
    e: &Embedding,
) -> Result<FlipSequence> {
    require_plane(e)?;
    check_edges(d, e)?;
    if !is_strongly_connected(d, e) {
        return Err(Error::NotStronglyConnected);
    }
    let region = nested_region(d, e, cminus, cplus)?;
    let mut fl = Flipper::new(e, d.clone());
    fl.reverse_region(&region)?;
    Ok(FlipSequence {
        mode: Mode::Plane,
        faces: fl.flips,
    })
}

/// Plane construction: while cw cycles remain, take the smallest maximal one,
/// its minimal enclosing ccw cycle and every maximal cw cycle inside that, and
/// reverse them together. Once only ccw cycles remain, reverse each.
fn plane_sequence(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    seed: Option<u64>,
) -> Result<Vec<FaceId>> {
    let f = difference(dp, d, e)?;
    let system = classify_and_nest(&standard_cycle_system_seeded(&f, e, seed)?, e, None)?;
    let mut pending = system.cycles;
    let mut fl = Flipper::new(e, dp.clone());
    let contains = |outer: &cycles::Cycle, inner: &cycles::Cycle| {
        outer.interior_count() > inner.interior_count()
            && cycles::is_subset(&inner.interior, &outer.interior)
    };
    while !pending.is_empty() {
        let maximal_cw: Vec<usize> = (0..pending.len())
            .filter(|&i| pending[i].sense == Some(Sense::Cw))
            .filter(|&i| {
                !pending
                    .iter()
                    .any(|o| o.sense == Some(Sense::Cw) && contains(o, &pending[i]))
            })
            .collect();
        let Some(&first) = maximal_cw.iter().min_by_key(|&&i| pending[i].id()) else {
            pending.sort_by_key(|c| c.id());
            for c in &pending {
                let inside = directed_cycle_region(&fl.d, e, &c.arcs, Sense::Ccw)?;
                fl.reverse_region(&inside)?;
            }
            break;
        };
        let cminus = (0..pending.len())
            .filter(|&j| {
                pending[j].sense == Some(Sense::Ccw) && contains(&pending[j], &pending[first])
            })
            .min_by_key(|&j| (pending[j].interior_count(), pending[j].id()))
            .ok_or(Error::Incomparable)?;
        let group: Vec<usize> = maximal_cw
            .into_iter()
            .filter(|&i| contains(&pending[cminus], &pending[i]))
            .collect();
        let holes: Vec<Vec<HalfEdge>> = group.iter().map(|&i| pending[i].arcs.clone()).collect();
        let region = nested_region(&fl.d, e, &pending[cminus].arcs, &holes)?;
        fl.reverse_region(&region)?;
        let mut done = group;
        done.push(cminus);
        done.sort_unstable();
        for i in done.into_iter().rev() {
            pending.remove(i);
        }
    }
    if fl.d != *d {
        return Err(Error::Invariant(
            "flip construction did not reach the target orientation".into(),
        ));
    }
    Ok(fl.flips)
}

/// A minimum flip sequence from `dp` to `d`.
///
/// On the sphere the potential is rooted at `reference` (the first face when
/// `None`), an argmin face is promoted to outer face, and the plane
/// construction runs on that view; it never flips the new outer face.
pub fn flip_sequence(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: Option<FaceId>,
) -> Result<FlipSequence> {
    flip_sequence_seeded(dp, d, e, reference, None)
}

pub fn flip_sequence_seeded(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: Option<FaceId>,
    seed: Option<u64>,
) -> Result<FlipSequence> {
    match e.mode() {
        Mode::Plane => {
            if !comparable(dp, d, e)? {
                return Err(Error::Incomparable);
            }
            Ok(FlipSequence {
                mode: Mode::Plane,
                faces: plane_sequence(dp, d, e, seed)?,
            })
        }
        Mode::Sphere => {
            let root = reference.unwrap_or(e.faces()[0].id);
            let p = sphere_pair_potential(dp, d, e, root)?;
            let plane = e.rerooted(p.argmin())?;
            Ok(FlipSequence {
                mode: Mode::Sphere,
                faces: plane_sequence(dp, d, &plane, seed)?,
            })
        }
    }
}

/// Per-face flip quotas: the potential on the plane, the potential shifted
/// by its minimum on the sphere.
fn quotas(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: Option<FaceId>,
) -> Result<Vec<i64>> {
    match e.mode() {
        Mode::Plane => {
            let p = pair_potential(dp, d, e)?;
            if p.min() < 0 {
                return Err(Error::Incomparable);
            }
            Ok(p.values().to_vec())
        }
        Mode::Sphere => {
            let root = reference.unwrap_or(e.faces()[0].id);
            let p = sphere_pair_potential(dp, d, e, root)?;
            let m = p.min();
            Ok(p.values().iter().map(|v| v - m).collect())
        }
    }
}

/// Quota-driven alternative: keep flipping the smallest flippable face that
/// still owes flips. A stall comes back as an error carrying the state.
pub fn greedy_sequence(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: Option<FaceId>,
) -> Result<FlipSequence> {
    let mut quota = quotas(dp, d, e, reference)?;
    let mut fl = Flipper::new(e, dp.clone());
    while quota.iter().any(|&q| q > 0) {
        let next = (0..quota.len()).find(|&i| {
            quota[i] > 0 && is_flip_candidate(e, e.faces()[i].id) && face_is_flippable(&fl.d, e, i)
        });
        let Some(i) = next else {
            let owed: Vec<String> = e
                .faces()
                .iter()
                .zip(&quota)
                .filter(|(_, &q)| q > 0)
                .map(|(f, q)| format!("face {}: {q}", f.id))
                .collect();
            let arcs: Vec<String> =
                fl.d.arcs()
                    .map(|h| {
                        format!(
                            "{}->{}",
                            e.vertex_label(e.tail(h)),
                            e.vertex_label(e.head(h))
                        )
                    })
                    .collect();
            return Err(Error::GreedyStall(format!(
                "after {} flips\nremaining quota: {}\norientation: {}",
                fl.flips.len(),
                owed.join(", "),
                arcs.join(" ")
            )));
        };
        fl.flip(i)?;
        quota[i] -= 1;
    }
    if fl.d != *d {
        return Err(Error::Invariant(
            "greedy flips met their quotas but missed the target".into(),
        ));
    }
    Ok(FlipSequence {
        mode: e.mode(),
        faces: fl.flips,
    })
}

/// Distance together with everything needed to re-check it independently.
#[derive(Debug, Clone)]
pub struct DistanceCertificate {
    pub mode: Mode,
    pub distance: Distance,
    pub potential: PotentialMap,
    pub cycles: CycleSystem,
    pub sequence: Option<FlipSequence>,
    pub per_face_counts: BTreeMap<FaceId, u64>,
}

impl DistanceCertificate {
    pub fn to_json(&self, e: &Embedding) -> Value {
        let faces = |m: BTreeMap<FaceId, i64>| -> Value {
            Value::Object(
                m.into_iter()
                    .map(|(f, v)| (f.0.to_string(), json!(v)))
                    .collect::<Map<_, _>>(),
            )
        };
        json!({
            "mode": self.mode,
            "distance": match self.distance {
                Distance::Flips(n) => json!(n),
                Distance::Incomparable => json!("incomparable"),
            },
            "potential": faces(self.potential.to_map()),
            "cycles": self.cycles.to_json(e),
            "sequence": self.sequence.as_ref().map(|s| s.faces.iter().map(|f| f.0).collect::<Vec<_>>()).unwrap_or_default(),
            "per_face_counts": faces(self.per_face_counts.iter().map(|(f, &c)| (*f, c as i64)).collect()),
        })
    }

    /// Replay the sequence and check it against the distance and potential.
    pub fn verify(&self, dp: &Orientation, d: &Orientation, e: &Embedding) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::Invariant(format!(
                "certificate check failed: {what}"
            )))
        };
        let Distance::Flips(n) = self.distance else {
            return if self.potential.min() < 0 {
                Ok(())
            } else {
                fail("incomparable claimed with a nonnegative potential")
            };
        };
        let Some(seq) = &self.sequence else {
            return fail("missing sequence");
        };
        if seq.len() as u64 != n || self.per_face_counts.values().sum::<u64>() != n {
            return fail("length differs from distance");
        }
        if seq.apply(dp, e)? != *d {
            return fail("replay does not reach the target");
        }
        let shift = match self.mode {
            Mode::Plane => 0,
            Mode::Sphere => self.potential.min(),
        };
        for (f, z) in self.potential.iter() {
            if self.per_face_counts.get(&f).copied().unwrap_or(0) as i64 != z - shift {
                return fail("per-face counts differ from the potential");
            }
        }
        Ok(())
    }
}

/// Compute a full distance certificate for `dp -> d`.
pub fn certificate(
    dp: &Orientation,
    d: &Orientation,
    e: &Embedding,
    reference: Option<FaceId>,
    seed: Option<u64>,
) -> Result<DistanceCertificate> {
    let f = difference(dp, d, e)?;
    let (potential, cycle_view) = match e.mode() {
        Mode::Plane => {
            let p = pair_potential(dp, d, e)?;
            (p, e.clone())
        }
        Mode::Sphere => {
            let root = reference.unwrap_or(e.faces()[0].id);
            let p = sphere_pair_potential(dp, d, e, root)?;
            let view = e.rerooted(p.argmin())?;
            (p, view)
        }
    };
    let cycles = classify_and_nest(
        &standard_cycle_system_seeded(&f, e, seed)?,
        &cycle_view,
        cycle_view.outer_face(),
    )?;
    if e.mode() == Mode::Plane && potential.min() < 0 {
        return Ok(DistanceCertificate {
            mode: e.mode(),
            distance: Distance::Incomparable,
            potential,
            cycles,
            sequence: None,
            per_face_counts: BTreeMap::new(),
        });
    }
    let sequence = flip_sequence_seeded(dp, d, e, reference, seed)?;
    Ok(DistanceCertificate {
        mode: e.mode(),
        distance: Distance::Flips(sequence.len() as u64),
        per_face_counts: sequence.per_face_counts(e),
        potential,
        cycles,
        sequence: Some(sequence),
    })
}
