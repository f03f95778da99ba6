//! Orientations, alpha-orientations and their Eulerian differences.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::embed::{Embedding, HalfEdge};
use crate::error::{Error, Result};

/// A direction for every edge. `reversed[e]` means the edge runs
/// `ends[1] -> ends[0]`. The derived ordering is the canonical
/// edge-indexed bit-vector order used by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    reversed: Vec<bool>,
}

impl Orientation {
    pub fn from_reversed(reversed: Vec<bool>) -> Self {
        Orientation { reversed }
    }

    /// Orientation containing exactly the given half-edges, one per edge.
    pub fn from_half_edges(num_edges: usize, arcs: &[HalfEdge]) -> Result<Self> {
        let mut reversed = vec![None; num_edges];
        for h in arcs {
            match reversed.get_mut(h.edge()) {
                Some(slot @ None) => *slot = Some(h.is_reversed()),
                _ => {
                    return Err(Error::BadOrientation(format!(
                        "edge {} given twice or out of range",
                        h.edge()
                    )))
                }
            }
        }
        reversed
            .into_iter()
            .collect::<Option<Vec<bool>>>()
            .map(Orientation::from_reversed)
            .ok_or_else(|| Error::BadOrientation("some edge has no direction".into()))
    }

    pub fn num_edges(&self) -> usize {
        self.reversed.len()
    }

    pub fn reversed_bits(&self) -> &[bool] {
        &self.reversed
    }

    /// The half-edge carrying edge `e`'s direction.
    pub fn arc(&self, e: usize) -> HalfEdge {
        HalfEdge::new(e, self.reversed[e])
    }

    pub fn arcs(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        (0..self.reversed.len()).map(|e| self.arc(e))
    }

    /// Whether `h` points the way its edge is oriented.
    pub fn agrees(&self, h: HalfEdge) -> bool {
        self.reversed[h.edge()] == h.is_reversed()
    }

    pub fn reverse_edge(&mut self, e: usize) {
        self.reversed[e] = !self.reversed[e];
    }

    pub fn out_degrees(&self, emb: &Embedding) -> Vec<usize> {
        let mut deg = vec![0; emb.num_vertices()];
        for h in self.arcs() {
            deg[emb.tail(h)] += 1;
        }
        deg
    }
}

/// Required out-degree per vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphaSpec(Vec<usize>);

impl AlphaSpec {
    pub fn new(out_degrees: Vec<usize>) -> Self {
        AlphaSpec(out_degrees)
    }

    pub fn of(d: &Orientation, emb: &Embedding) -> Self {
        AlphaSpec(d.out_degrees(emb))
    }

    pub fn out_degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Arcs of D' on which D disagrees, directed as in D'.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianDifference {
    arcs: Vec<HalfEdge>,
    member: Vec<bool>,
}

impl EulerianDifference {
    /// Wrap a set of arcs, checking that in- and out-degrees balance everywhere.
    pub fn new(emb: &Embedding, mut arcs: Vec<HalfEdge>) -> Result<Self> {
        arcs.sort();
        let mut balance = vec![0i64; emb.num_vertices()];
        let mut member = vec![false; 2 * emb.num_edges()];
        for &h in &arcs {
            if member[h.0] || member[h.twin().0] {
                return Err(Error::BadOrientation(format!("edge {} repeated", h.edge())));
            }
            member[h.0] = true;
            balance[emb.tail(h)] += 1;
            balance[emb.head(h)] -= 1;
        }
        if let Some(v) = balance.iter().position(|&b| b != 0) {
            return Err(Error::NotEulerian(emb.vertex_label(v)));
        }
        Ok(EulerianDifference { arcs, member })
    }

    pub fn arcs(&self) -> &[HalfEdge] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains(&self, h: HalfEdge) -> bool {
        self.member[h.0]
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.member[2 * e] || self.member[2 * e + 1]
    }
}

pub fn is_alpha_orientation(d: &Orientation, emb: &Embedding, a: &AlphaSpec) -> Result<bool> {
    if a.0.len() != emb.num_vertices() {
        return Err(Error::VertexMismatch);
    }
    if d.num_edges() != emb.num_edges() {
        return Err(Error::EmbeddingMismatch);
    }
    Ok(d.out_degrees(emb) == a.0)
}

/// Find an alpha-orientation by max-flow on the edge/vertex bipartite network:
/// source -> edge (cap 1) -> either endpoint (cap 1) -> sink (cap alpha(v)).
/// An edge routed to `v` is oriented out of `v`. Augmenting paths are found by
/// BFS with arcs scanned in edge-index order, so the result is deterministic.
pub fn find_alpha_orientation(emb: &Embedding, a: &AlphaSpec) -> Result<Option<Orientation>> {
    let (n, m) = (emb.num_vertices(), emb.num_edges());
    if a.0.len() != n {
        return Err(Error::VertexMismatch);
    }
    if a.total() != m {
        return Err(Error::DegreeSum {
            sum: a.total() as i64,
            edges: m,
        });
    }
    let source = 0;
    let sink = m + n + 1;
    let mut net = FlowNetwork::new(m + n + 2);
    let mut choice = Vec::with_capacity(m);
    for e in 0..m {
        net.add(source, 1 + e, 1);
        let [x, y] = emb.ends(e);
        let to_x = net.add(1 + e, 1 + m + x, 1);
        let to_y = net.add(1 + e, 1 + m + y, 1);
        choice.push((to_x, to_y));
    }
    for v in 0..n {
        net.add(1 + m + v, sink, a.0[v] as i64);
    }
    if net.max_flow(source, sink) < m as i64 {
        return Ok(None);
    }
    let reversed = choice
        .iter()
        .map(|&(to_x, _to_y)| net.flow(to_x) == 0)
        .collect();
    Ok(Some(Orientation::from_reversed(reversed)))
}

struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    initial: Vec<i64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.initial.push(cap);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        self.initial.push(0);
        id
    }

    fn flow(&self, arc: usize) -> i64 {
        self.initial[arc] - self.cap[arc]
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    reached = true;
                    break;
                }
                for &arc in &self.adj[u] {
                    let w = self.to[arc];
                    if self.cap[arc] > 0 && w != s && via[w] == usize::MAX {
                        via[w] = arc;
                        queue.push_back(w);
                    }
                }
            }
            if !reached {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let arc = via[v];
                push = push.min(self.cap[arc]);
                v = self.to[arc ^ 1];
            }
            let mut v = t;
            while v != s {
                let arc = via[v];
                self.cap[arc] -= push;
                self.cap[arc ^ 1] += push;
                v = self.to[arc ^ 1];
            }
            total += push;
        }
    }
}

fn scc_labels(d: &Orientation, emb: &Embedding) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(emb.num_vertices(), emb.num_edges());
    for _ in 0..emb.num_vertices() {
        g.add_node(());
    }
    for h in d.arcs() {
        g.add_edge(NodeIndex::new(emb.tail(h)), NodeIndex::new(emb.head(h)), ());
    }
    let mut label = vec![0; emb.num_vertices()];
    for (i, comp) in tarjan_scc(&g).into_iter().enumerate() {
        for v in comp {
            label[v.index()] = i;
        }
    }
    label
}

pub fn is_strongly_connected(d: &Orientation, emb: &Embedding) -> bool {
    let label = scc_labels(d, emb);
    label.iter().all(|&l| l == label[0])
}

/// Edges with the same direction in every alpha-orientation.
///
/// Two alpha-orientations differ on an oriented Eulerian edge set, which is a
/// union of directed cycles of either one. So an edge can flip between
/// alpha-orientations iff it lies on a directed cycle of `d`, i.e. iff its
/// endpoints share a strongly connected component of `d`.
pub fn rigid_edges(emb: &Embedding, a: &AlphaSpec, d: &Orientation) -> Result<Vec<usize>> {
    if !is_alpha_orientation(d, emb, a)? {
        return Err(Error::NotAlphaOrientation);
    }
    let label = scc_labels(d, emb);
    Ok((0..emb.num_edges())
        .filter(|&e| {
            let [x, y] = emb.ends(e);
            label[x] != label[y]
        })
        .collect())
}

/// The arcs of `dp` that `d` reverses.
pub fn difference(
    dp: &Orientation,
    d: &Orientation,
    emb: &Embedding,
) -> Result<EulerianDifference> {
    if dp.num_edges() != emb.num_edges() || d.num_edges() != emb.num_edges() {
        return Err(Error::EmbeddingMismatch);
    }
    let arcs = (0..emb.num_edges())
        .filter(|&e| dp.reversed[e] != d.reversed[e])
        .map(|e| dp.arc(e))
        .collect();
    EulerianDifference::new(emb, arcs)
}
