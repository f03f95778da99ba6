//! Combinatorial embeddings of 2-connected genus-0 graphs.
//!
//! An embedding is given as a rotation system: for every vertex, the incident
//! edges in counterclockwise order. Edge `e` (by internal index) owns two
//! half-edges, `2e` running `ends[0] -> ends[1]` and `2e + 1` running back.
//!
//! Face tracing follows `next(u -> v) = (v -> w)` where `vw` is the edge
//! immediately *clockwise* of `vu` in the rotation at `v`. With this rule each
//! boundary walk keeps its face on the left, so a half-edge's left face is the
//! face whose walk contains it. Inner faces of a plane embedding are walked
//! counterclockwise and the outer face clockwise.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixture::RawDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plane,
    Sphere,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Plane => f.write_str("plane"),
            Mode::Sphere => f.write_str("sphere"),
        }
    }
}

/// Directed copy of an edge. `2e` is `ends[0] -> ends[1]`, `2e + 1` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge(pub usize);

impl HalfEdge {
    pub fn new(edge: usize, reversed: bool) -> Self {
        HalfEdge(2 * edge + reversed as usize)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_reversed(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn twin(self) -> Self {
        HalfEdge(self.0 ^ 1)
    }
}

/// Canonical face identifier: the smallest half-edge on the boundary walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub usize);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    /// Boundary walk starting at the canonical half-edge. The face is on the
    /// left of every half-edge listed here.
    pub boundary: Vec<HalfEdge>,
}

/// Left and right faces of every edge relative to its `ends[0] -> ends[1]`
/// reference direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualAdjacency {
    pub sides: Vec<(FaceId, FaceId)>,
}

impl DualAdjacency {
    /// `(left, right)` of the edge traversed along `h`.
    pub fn sides_of(&self, h: HalfEdge) -> (FaceId, FaceId) {
        let (l, r) = self.sides[h.edge()];
        if h.is_reversed() {
            (r, l)
        } else {
            (l, r)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Embedding {
    mode: Mode,
    vertex_labels: Vec<i64>,
    edge_labels: Vec<i64>,
    ends: Vec<[usize; 2]>,
    /// Outgoing half-edges per vertex, counterclockwise.
    rotation: Vec<Vec<HalfEdge>>,
    faces: Vec<Face>,
    /// Half-edge -> position of its left face in `faces`.
    face_of: Vec<usize>,
    outer: Option<FaceId>,
}

/// Parse a JSON fixture document and return its validated embedding.
pub fn parse_embedding(document: &str) -> Result<Embedding> {
    let raw: RawDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    raw.embedding()
}

impl Embedding {
    /// Build and validate an embedding from labelled vertices (with their
    /// counterclockwise edge rotations) and labelled edges.
    ///
    /// `outer` names the outer face by one of its boundary half-edges, given as
    /// `(edge label, tail vertex label)`; it is required in plane mode and
    /// ignored in sphere mode.
    pub fn new(
        mode: Mode,
        vertices: &[(i64, Vec<i64>)],
        edges: &[(i64, [i64; 2])],
        outer: Option<(i64, i64)>,
    ) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        let mut sorted_vertices: Vec<&(i64, Vec<i64>)> = vertices.iter().collect();
        sorted_vertices.sort_by_key(|(id, _)| *id);
        for (i, (id, _)) in sorted_vertices.iter().enumerate() {
            if vertex_index.insert(*id, i).is_some() {
                return Err(Error::Malformed(format!("duplicate vertex id {id}")));
            }
        }
        let mut sorted_edges: Vec<&(i64, [i64; 2])> = edges.iter().collect();
        sorted_edges.sort_by_key(|(id, _)| *id);
        let mut edge_index = HashMap::new();
        let mut ends = Vec::with_capacity(edges.len());
        let mut seen_pairs: HashMap<(usize, usize), i64> = HashMap::new();
        for (i, (id, [a, b])) in sorted_edges.iter().enumerate() {
            if edge_index.insert(*id, i).is_some() {
                return Err(Error::Malformed(format!("duplicate edge id {id}")));
            }
            let lookup = |v: &i64| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::Malformed(format!("edge {id} names unknown vertex {v}")))
            };
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                return Err(Error::Loop(*id));
            }
            let key = (ia.min(ib), ia.max(ib));
            if let Some(other) = seen_pairs.insert(key, *id) {
                return Err(Error::MultiEdge(other, *id));
            }
            ends.push([ia, ib]);
        }

        let mut rotation = Vec::with_capacity(vertices.len());
        let mut appearances = vec![0usize; ends.len()];
        for (v, (vid, rot)) in sorted_vertices.iter().enumerate() {
            let mut local = Vec::with_capacity(rot.len());
            let mut here = HashSet::new();
            for eid in rot {
                let e = *edge_index.get(eid).ok_or_else(|| {
                    Error::Rotation(format!("vertex {vid} lists unknown edge {eid}"))
                })?;
                if !here.insert(e) {
                    return Err(Error::Rotation(format!(
                        "vertex {vid} lists edge {eid} twice"
                    )));
                }
                let h = if ends[e][0] == v {
                    HalfEdge::new(e, false)
                } else if ends[e][1] == v {
                    HalfEdge::new(e, true)
                } else {
                    return Err(Error::Rotation(format!(
                        "vertex {vid} lists edge {eid}, which is not incident to it"
                    )));
                };
                appearances[e] += 1;
                local.push(h);
            }
            rotation.push(local);
        }
        if let Some(e) = appearances.iter().position(|&c| c != 2) {
            return Err(Error::Rotation(format!(
                "edge {} appears {} times across rotations, expected 2",
                sorted_edges[e].0, appearances[e]
            )));
        }

        let vertex_labels: Vec<i64> = sorted_vertices.iter().map(|(id, _)| *id).collect();
        let edge_labels: Vec<i64> = sorted_edges.iter().map(|(id, _)| *id).collect();
        check_biconnected(&vertex_labels, &ends)?;

        let walks = trace_walks(&rotation, &ends, None);
        let n_v = vertex_labels.len();
        let n_e = ends.len();
        if n_v + walks.len() != n_e + 2 {
            return Err(Error::Euler {
                vertices: n_v,
                edges: n_e,
                faces: walks.len(),
            });
        }
        let mut face_of = vec![usize::MAX; 2 * n_e];
        let faces: Vec<Face> = walks
            .into_iter()
            .enumerate()
            .map(|(i, boundary)| {
                for h in &boundary {
                    face_of[h.0] = i;
                }
                Face {
                    id: FaceId(boundary[0].0),
                    boundary,
                }
            })
            .collect();
        for f in &faces {
            let mut verts = HashSet::new();
            for &h in &f.boundary {
                if !verts.insert(ends[h.edge()][h.is_reversed() as usize]) {
                    return Err(Error::NotBiconnected(format!(
                        "face {} has a non-simple boundary",
                        f.id
                    )));
                }
            }
        }

        let mut emb = Embedding {
            mode,
            vertex_labels,
            edge_labels,
            ends,
            rotation,
            faces,
            face_of,
            outer: None,
        };
        if mode == Mode::Plane {
            let (edge, tail) = outer.ok_or(Error::MissingOuterFace)?;
            let h = emb.half_edge_from_labels(edge, tail)?;
            emb.outer = Some(emb.left_face(h));
        }
        Ok(emb)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn outer_face(&self) -> Option<FaceId> {
        self.outer
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_label(&self, v: usize) -> i64 {
        self.vertex_labels[v]
    }

    pub fn edge_label(&self, e: usize) -> i64 {
        self.edge_labels[e]
    }

    pub fn vertex_index(&self, label: i64) -> Option<usize> {
        self.vertex_labels.binary_search(&label).ok()
    }

    pub fn edge_index(&self, label: i64) -> Option<usize> {
        self.edge_labels.binary_search(&label).ok()
    }

    pub fn ends(&self, e: usize) -> [usize; 2] {
        self.ends[e]
    }

    pub fn tail(&self, h: HalfEdge) -> usize {
        self.ends[h.edge()][h.is_reversed() as usize]
    }

    pub fn head(&self, h: HalfEdge) -> usize {
        self.ends[h.edge()][1 - h.is_reversed() as usize]
    }

    /// Outgoing half-edges at `v` in counterclockwise order.
    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotation[v]
    }

    pub fn half_edge_between(&self, tail: usize, head: usize) -> Option<HalfEdge> {
        self.rotation[tail]
            .iter()
            .copied()
            .find(|&h| self.head(h) == head)
    }

    /// Resolve a `(edge label, tail label)` pair to a half-edge.
    pub fn half_edge_from_labels(&self, edge: i64, tail: i64) -> Result<HalfEdge> {
        let e = self
            .edge_index(edge)
            .ok_or_else(|| Error::Malformed(format!("unknown edge {edge}")))?;
        let t = self
            .vertex_index(tail)
            .ok_or_else(|| Error::Malformed(format!("unknown vertex {tail}")))?;
        match self.ends[e] {
            [a, _] if a == t => Ok(HalfEdge::new(e, false)),
            [_, b] if b == t => Ok(HalfEdge::new(e, true)),
            _ => Err(Error::Malformed(format!(
                "vertex {tail} is not an endpoint of edge {edge}"
            ))),
        }
    }

    pub(crate) fn rotation_system(&self) -> &[Vec<HalfEdge>] {
        &self.rotation
    }

    pub(crate) fn edge_ends(&self) -> &[[usize; 2]] {
        &self.ends
    }

    /// Faces sorted by id.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.faces.iter().map(|f| f.id)
    }

    /// Position of a face in [`Embedding::faces`].
    pub fn face_index(&self, id: FaceId) -> Option<usize> {
        self.faces.binary_search_by_key(&id, |f| f.id).ok()
    }

    pub fn face(&self, id: FaceId) -> Result<&Face> {
        self.face_index(id)
            .map(|i| &self.faces[i])
            .ok_or_else(|| Error::UnknownFace(id.to_string()))
    }

    /// Position of the face to the left of `h`.
    pub fn left_index(&self, h: HalfEdge) -> usize {
        self.face_of[h.0]
    }

    pub fn left_face(&self, h: HalfEdge) -> FaceId {
        self.faces[self.face_of[h.0]].id
    }

    pub fn right_face(&self, h: HalfEdge) -> FaceId {
        self.left_face(h.twin())
    }

    /// Faces that may be flipped: every face on the sphere, inner faces on the plane.
    pub fn flip_candidates(&self) -> impl Iterator<Item = FaceId> + '_ {
        let outer = self.outer;
        self.face_ids().filter(move |&f| Some(f) != outer)
    }

    /// The same embedding viewed as a plane graph with `outer` as outer face.
    pub fn rerooted(&self, outer: FaceId) -> Result<Embedding> {
        self.face(outer)?;
        let mut e = self.clone();
        e.mode = Mode::Plane;
        e.outer = Some(outer);
        Ok(e)
    }

    /// The same embedding as a sphere graph.
    pub fn as_sphere(&self) -> Embedding {
        let mut e = self.clone();
        e.mode = Mode::Sphere;
        e.outer = None;
        e
    }

    /// Same rotation system and labels, checked by structure rather than identity.
    pub fn same_graph(&self, other: &Embedding) -> bool {
        self.ends == other.ends && self.rotation == other.rotation
    }
}

pub fn trace_faces(e: &Embedding) -> Vec<Face> {
    e.faces.clone()
}

pub fn dual_adjacency(e: &Embedding) -> DualAdjacency {
    DualAdjacency {
        sides: (0..e.num_edges())
            .map(|i| {
                let h = HalfEdge::new(i, false);
                (e.left_face(h), e.right_face(h))
            })
            .collect(),
    }
}

/// Faces enclosed by a simple cycle, given as a set of edge indices.
///
/// Faces reachable from the outer face in the dual without crossing the cycle
/// are exterior; everything else is interior.
pub fn interior_faces(e: &Embedding, cycle_edges: &[usize]) -> Result<Vec<FaceId>> {
    let outer = match (e.mode, e.outer) {
        (Mode::Plane, Some(o)) => o,
        _ => return Err(Error::WrongMode("plane")),
    };
    check_simple_cycle(e, cycle_edges)?;
    let mut blocked = vec![false; e.num_edges()];
    for &c in cycle_edges {
        blocked[c] = true;
    }
    let reach = dual_reach(e, e.face_index(outer).expect("outer face"), &blocked, None);
    Ok(e.faces
        .iter()
        .zip(&reach)
        .filter(|(_, &r)| !r)
        .map(|(f, _)| f.id)
        .collect())
}

/// Dual breadth-first search from face position `root`, never crossing a
/// `blocked` edge and, when `within` is given, never leaving that face set.
pub(crate) fn dual_reach(
    e: &Embedding,
    root: usize,
    blocked: &[bool],
    within: Option<&[bool]>,
) -> Vec<bool> {
    let mut seen = vec![false; e.faces.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &h in &e.faces[f].boundary {
            if blocked[h.edge()] {
                continue;
            }
            let g = e.left_index(h.twin());
            if seen[g] || within.is_some_and(|w| !w[g]) {
                continue;
            }
            seen[g] = true;
            queue.push_back(g);
        }
    }
    seen
}

pub(crate) fn check_simple_cycle(e: &Embedding, cycle_edges: &[usize]) -> Result<()> {
    if cycle_edges.len() < 3 {
        return Err(Error::NotACycle(format!(
            "{} edges cannot form a cycle in a simple graph",
            cycle_edges.len()
        )));
    }
    let mut degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut distinct = HashSet::new();
    for &c in cycle_edges {
        if c >= e.num_edges() || !distinct.insert(c) {
            return Err(Error::NotACycle(format!("bad or repeated edge index {c}")));
        }
        for v in e.ends[c] {
            degree.entry(v).or_default().push(c);
        }
    }
    if let Some((v, _)) = degree.iter().find(|(_, es)| es.len() != 2) {
        return Err(Error::NotACycle(format!(
            "vertex {} has degree {} in the cycle",
            e.vertex_labels[*v],
            degree[v].len()
        )));
    }
    // a 2-regular edge set is a single simple cycle iff it is connected
    let start = *degree.keys().next().expect("nonempty");
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &c in &degree[&v] {
            let [a, b] = e.ends[c];
            let w = if a == v { b } else { a };
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    if seen.len() != degree.len() {
        return Err(Error::NotACycle(
            "edge set splits into several cycles".into(),
        ));
    }
    Ok(())
}

/// Boundary walks of the rotation system restricted to half-edges whose edge
/// is `active` (all edges when `None`). Each walk starts at its smallest
/// half-edge and walks are returned in ascending order of that half-edge.
pub(crate) fn trace_walks(
    rotation: &[Vec<HalfEdge>],
    ends: &[[usize; 2]],
    active: Option<&[bool]>,
) -> Vec<Vec<HalfEdge>> {
    let n_half = 2 * ends.len();
    let is_active = |h: HalfEdge| active.is_none_or(|a| a[h.edge()]);
    let local: Vec<Vec<HalfEdge>> = rotation
        .iter()
        .map(|r| r.iter().copied().filter(|&h| is_active(h)).collect())
        .collect();
    let mut pos = vec![usize::MAX; n_half];
    for r in &local {
        for (i, h) in r.iter().enumerate() {
            pos[h.0] = i;
        }
    }
    let head = |h: HalfEdge| ends[h.edge()][1 - h.is_reversed() as usize];
    let mut visited = vec![false; n_half];
    let mut walks = Vec::new();
    for start in (0..n_half).map(HalfEdge) {
        if visited[start.0] || !is_active(start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut h = start;
        while !visited[h.0] {
            visited[h.0] = true;
            walk.push(h);
            let around = &local[head(h)];
            let p = pos[h.twin().0];
            h = around[(p + around.len() - 1) % around.len()];
        }
        walks.push(walk);
    }
    walks
}

fn check_biconnected(labels: &[i64], ends: &[[usize; 2]]) -> Result<()> {
    let n = labels.len();
    if n < 3 {
        return Err(Error::NotBiconnected(format!("only {n} vertices")));
    }
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in ends {
        adj[a].push(b);
        adj[b].push(a);
    }
    let connected_without = |skip: Option<usize>| {
        let start = (0..n).find(|&v| Some(v) != skip).expect("n >= 3");
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if Some(w) != skip && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - skip.is_some() as usize
    };
    if !connected_without(None) {
        return Err(Error::Disconnected);
    }
    if let Some(v) = (0..n).find(|&v| !connected_without(Some(v))) {
        return Err(Error::NotBiconnected(format!(
            "vertex {} is a cut vertex",
            labels[v]
        )));
    }
    Ok(())
}
