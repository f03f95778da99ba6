//! Brute-force ground truth: every alpha-orientation of a small instance, the
//! exact one-flip graph between them, and a full comparison of the formulas
//! and constructions against shortest paths in that graph.
//!
//! Enumeration, flippability and reachability are computed here from the
//! embedding alone; the formula engine is only called to be checked.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cycles::{classify_and_nest, standard_cycle_system_seeded};
use crate::embed::{Embedding, FaceId, HalfEdge, Mode};
use crate::error::{Error, Result};
use crate::fixture::{alpha_to_labels, orientation_to_labels};
use crate::flips::{self, Distance};
use crate::orient::{self, AlphaSpec, Orientation};
use crate::potential::{plane_potential, potential_from_cycles};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Edge count above which [`feasible_alphas`] refuses to run.
pub const MAX_EXHAUSTIVE_EDGES: usize = 24;

/// All alpha-orientations of an instance in canonical order.
#[derive(Debug, Clone)]
pub struct OrientationUniverse {
    pub mode: Mode,
    pub alpha: AlphaSpec,
    pub orientations: Vec<Orientation>,
}

impl OrientationUniverse {
    pub fn len(&self) -> usize {
        self.orientations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orientations.is_empty()
    }

    pub fn index_of(&self, d: &Orientation) -> Option<usize> {
        self.orientations.binary_search(d).ok()
    }

    pub fn to_json(&self, e: &Embedding) -> Value {
        json!({
            "mode": self.mode,
            "alpha": alpha_to_labels(e, &self.alpha),
            "count": self.len(),
            "orientations": self.orientations.iter().map(|d| orientation_to_labels(e, d)).collect::<Vec<_>>(),
        })
    }
}

pub fn enumerate_alpha_orientations(e: &Embedding, a: &AlphaSpec) -> Result<OrientationUniverse> {
    enumerate_with_budget(e, a, DEFAULT_BUDGET)
}

/// Backtracking over edges in index order, forward direction first, pruning
/// any vertex that can no longer reach its out-degree exactly. Forward-first
/// search emits orientations already sorted.
pub fn enumerate_with_budget(
    e: &Embedding,
    a: &AlphaSpec,
    budget: u64,
) -> Result<OrientationUniverse> {
    let alpha = a.out_degrees();
    if alpha.len() != e.num_vertices() {
        return Err(Error::VertexMismatch);
    }
    let mut remaining = vec![0usize; e.num_vertices()];
    for edge in 0..e.num_edges() {
        for v in e.ends(edge) {
            remaining[v] += 1;
        }
    }
    let mut search = Search {
        e,
        alpha,
        out: vec![0; e.num_vertices()],
        remaining,
        bits: Vec::with_capacity(e.num_edges()),
        found: Vec::new(),
        nodes: 0,
        budget,
    };
    if alpha
        .iter()
        .zip(&search.remaining)
        .all(|(&want, &deg)| want <= deg)
    {
        search.run()?;
    }
    Ok(OrientationUniverse {
        mode: e.mode(),
        alpha: a.clone(),
        orientations: search.found,
    })
}

struct Search<'a> {
    e: &'a Embedding,
    alpha: &'a [usize],
    out: Vec<usize>,
    remaining: Vec<usize>,
    bits: Vec<bool>,
    found: Vec<Orientation>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let edge = self.bits.len();
        if edge == self.e.num_edges() {
            self.found
                .push(Orientation::from_reversed(self.bits.clone()));
            return Ok(());
        }
        let [a, b] = self.e.ends(edge);
        self.remaining[a] -= 1;
        self.remaining[b] -= 1;
        for reversed in [false, true] {
            let (tail, head) = if reversed { (b, a) } else { (a, b) };
            self.out[tail] += 1;
            let ok = |v: usize, s: &Self| {
                s.out[v] <= s.alpha[v] && s.out[v] + s.remaining[v] >= s.alpha[v]
            };
            if ok(tail, self) && ok(head, self) {
                self.bits.push(reversed);
                self.run()?;
                self.bits.pop();
            }
            self.out[tail] -= 1;
        }
        self.remaining[a] += 1;
        self.remaining[b] += 1;
        Ok(())
    }
}

/// Every out-degree vector realised by some orientation, found by trying all
/// `2^m` orientations.
pub fn feasible_alphas(e: &Embedding) -> Result<Vec<AlphaSpec>> {
    let m = e.num_edges();
    if m > MAX_EXHAUSTIVE_EDGES {
        return Err(Error::BudgetExceeded(1 << MAX_EXHAUSTIVE_EDGES));
    }
    let set: BTreeSet<Vec<usize>> = (0u64..1 << m)
        .into_par_iter()
        .map(|mask| {
            let mut out = vec![0; e.num_vertices()];
            for edge in 0..m {
                let [a, b] = e.ends(edge);
                out[if mask >> edge & 1 == 1 { b } else { a }] += 1;
            }
            out
        })
        .collect();
    Ok(set.into_iter().map(AlphaSpec::new).collect())
}

/// Reachability from vertex 0 along the orientation, or against it.
fn reaches_all(e: &Embedding, bits: &[bool], backwards: bool) -> bool {
    let n = e.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for (edge, &rev) in bits.iter().enumerate() {
        let [a, b] = e.ends(edge);
        let (tail, head) = if rev ^ backwards { (b, a) } else { (a, b) };
        adj[tail].push(head);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn oracle_strongly_connected(e: &Embedding, d: &Orientation) -> bool {
    reaches_all(e, d.reversed_bits(), false) && reaches_all(e, d.reversed_bits(), true)
}

/// The one-flip relation on a universe: `arcs[i]` lists `(j, g)` when flipping
/// face `g` turns orientation `i` into `j`.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    pub mode: Mode,
    pub arcs: Vec<Vec<(usize, FaceId)>>,
}

fn boundary_agrees(bits: &[bool], boundary: &[HalfEdge]) -> bool {
    boundary.iter().all(|h| bits[h.edge()] == h.is_reversed())
}

pub fn build_flip_graph(u: &OrientationUniverse, e: &Embedding) -> Result<FlipGraph> {
    let faces: Vec<_> = e
        .faces()
        .iter()
        .filter(|f| e.mode() == Mode::Sphere || Some(f.id) != e.outer_face())
        .collect();
    let arcs = u
        .orientations
        .par_iter()
        .map(|d| {
            let bits = d.reversed_bits();
            let mut out = Vec::new();
            for f in &faces {
                if boundary_agrees(bits, &f.boundary) {
                    let mut next = bits.to_vec();
                    for h in &f.boundary {
                        next[h.edge()] = !next[h.edge()];
                    }
                    let j = u
                        .index_of(&Orientation::from_reversed(next))
                        .ok_or_else(|| {
                            Error::Invariant(format!("flipping face {} leaves the universe", f.id))
                        })?;
                    out.push((j, f.id));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FlipGraph {
        mode: e.mode(),
        arcs,
    })
}

impl FlipGraph {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    /// Shortest flip counts from `i` to every node.
    pub fn distances_from(&self, i: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.len()];
        dist[i] = Some(0);
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].map(|d| d + 1);
            for &(w, _) in &self.arcs[v] {
                if dist[w].is_none() {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for (w, _) in self.arcs.iter().flatten() {
            deg[*w] += 1;
        }
        deg
    }

    pub fn is_acyclic(&self) -> bool {
        let mut deg = self.in_degrees();
        let mut ready: Vec<usize> = (0..self.len()).filter(|&v| deg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &(w, _) in &self.arcs[v] {
                deg[w] -= 1;
                if deg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        seen == self.len()
    }

    pub fn sources(&self) -> Vec<usize> {
        let deg = self.in_degrees();
        (0..self.len()).filter(|&v| deg[v] == 0).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.arcs[v].is_empty())
            .collect()
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut reverse = vec![Vec::new(); self.len()];
        for (v, out) in self.arcs.iter().enumerate() {
            for &(w, g) in out {
                reverse[w].push((v, g));
            }
        }
        let back = FlipGraph {
            mode: self.mode,
            arcs: reverse,
        };
        self.distances_from(0).iter().all(Option::is_some)
            && back.distances_from(0).iter().all(Option::is_some)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode,
            "nodes": self.len(),
            "arcs": self
                .arcs
                .iter()
                .enumerate()
                .flat_map(|(i, out)| out.iter().map(move |(j, g)| json!([i, j, g.0])))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn bfs_distance(g: &FlipGraph, i: usize, j: usize) -> Option<u64> {
    g.distances_from(i)[j]
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub budget: u64,
    /// Peeling seeds for the potential-versus-cycles check; `None` is the deterministic pick.
    pub seeds: Vec<Option<u64>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: DEFAULT_BUDGET,
            seeds: std::iter::once(None).chain((0..5).map(Some)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl PropertyCheck {
    fn new(name: &'static str) -> Self {
        PropertyCheck {
            name,
            checked: 0,
            failures: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, failure: Option<String>) {
        self.checked += 1;
        if let Some(msg) = failure {
            self.failures += 1;
            self.counterexample.get_or_insert(msg);
        }
    }
}

pub const EULERIAN: &str = "difference is oriented Eulerian";
pub const REACHABILITY: &str = "comparable iff reachable";
pub const PLANE_DISTANCE: &str = "plane distance equals BFS";
pub const SPHERE_DISTANCE: &str = "sphere distance equals BFS for every reference face";
pub const CYCLE_COUNT: &str = "cycle-count distance equals plane distance";
pub const CYCLE_POTENTIAL: &str = "potential equals cycle nesting count";
pub const SEQUENCES: &str = "flip sequence replays with forced per-face counts";
pub const GREEDY: &str = "greedy sequence matches flip sequence";
pub const LATTICE: &str = "flip graph lattice shape";
pub const RIGID: &str = "rigid edges agree";
pub const STRONGLY_CONNECTED: &str = "alpha-orientations strongly connected";
pub const FEASIBILITY: &str = "max-flow feasibility agrees with enumeration";

#[derive(Debug, Clone)]
pub struct Report {
    pub mode: Mode,
    pub alpha: BTreeMap<String, i64>,
    pub orientations: usize,
    pub flip_arcs: usize,
    pub properties: Vec<PropertyCheck>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyCheck::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode,
            "alpha": self.alpha,
            "orientations": self.orientations,
            "flip_arcs": self.flip_arcs,
            "passed": self.passed(),
            "properties": self.properties.iter().map(|p| json!({
                "name": p.name,
                "passed": p.passed(),
                "checked": p.checked,
                "failures": p.failures,
                "counterexample": p.counterexample,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} mode, {} orientations, {} flip arcs\n",
            self.mode, self.orientations, self.flip_arcs
        );
        for p in &self.properties {
            let status = if p.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(s, "  [{status}] {} ({} checked)", p.name, p.checked);
            if let Some(c) = &p.counterexample {
                let _ = writeln!(s, "         {}", c.replace('\n', "\n         "));
            }
        }
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Failures found for one ordered pair, indexed like the property list.
type PairFailures = Vec<(&'static str, Option<String>)>;

/// Compare every formula and construction against the flip graph for all
/// ordered pairs of alpha-orientations.
pub fn verify_instance(e: &Embedding, a: &AlphaSpec, opts: &VerifyOptions) -> Result<Report> {
    let u = enumerate_with_budget(e, a, opts.budget)?;
    let g = build_flip_graph(&u, e)?;
    let names = |d: &Orientation| -> String {
        orientation_to_labels(e, d)
            .iter()
            .map(|(k, [t, h])| format!("{k}:{t}->{h}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut props: BTreeMap<&'static str, PropertyCheck> = BTreeMap::new();
    let mut record = |name: &'static str, failure: Option<String>| {
        props
            .entry(name)
            .or_insert_with(|| PropertyCheck::new(name))
            .record(failure)
    };

    let found = orient::find_alpha_orientation(e, a)?;
    record(
        FEASIBILITY,
        (found.is_some() == !u.is_empty())
            .then_some(())
            .map_or_else(
                || {
                    Some(format!(
                        "flow says {}, enumeration found {}",
                        found.is_some(),
                        u.len()
                    ))
                },
                |_| None,
            ),
    );

    let sc: Vec<bool> = u
        .orientations
        .iter()
        .map(|d| oracle_strongly_connected(e, d))
        .collect();
    let all_sc = sc.iter().all(|&b| b);
    for (d, &ok) in u.orientations.iter().zip(&sc) {
        record(
            STRONGLY_CONNECTED,
            (!ok).then(|| format!("not strongly connected: {}", names(d))),
        );
    }

    // rigid edges: edges with one direction across the whole universe
    if let Some(first) = u.orientations.first() {
        let fixed: Vec<usize> = (0..e.num_edges())
            .filter(|&edge| {
                u.orientations
                    .iter()
                    .all(|d| d.reversed_bits()[edge] == first.reversed_bits()[edge])
            })
            .collect();
        for d in &u.orientations {
            let engine = orient::rigid_edges(e, a, d)?;
            record(
                RIGID,
                (engine != fixed)
                    .then(|| format!("engine {engine:?}, oracle {fixed:?} at {}", names(d))),
            );
        }
    }

    match e.mode() {
        Mode::Plane => {
            let sources = g.sources();
            let sinks = g.sinks();
            let shape_ok =
                u.is_empty() || (g.is_acyclic() && sources.len() == 1 && sinks.len() == 1);
            record(
                LATTICE,
                (!shape_ok).then(|| {
                    format!(
                        "acyclic {}, sources {sources:?}, sinks {sinks:?}",
                        g.is_acyclic()
                    )
                }),
            );
        }
        Mode::Sphere => {
            record(
                LATTICE,
                (!g.is_strongly_connected())
                    .then(|| "flip graph not strongly connected".to_string()),
            );
        }
    }

    if all_sc && !u.is_empty() {
        let dist: Vec<Vec<Option<u64>>> = (0..u.len())
            .into_par_iter()
            .map(|i| g.distances_from(i))
            .collect();
        let outcomes: Vec<PairFailures> = (0..u.len() * u.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / u.len(), k % u.len());
                check_pair(e, &u.orientations[i], &u.orientations[j], dist[i][j], opts)
                    .into_iter()
                    .map(|(name, f)| {
                        (
                            name,
                            f.map(|msg| {
                                format!(
                                    "from {} to {}: {msg}",
                                    names(&u.orientations[i]),
                                    names(&u.orientations[j])
                                )
                            }),
                        )
                    })
                    .collect()
            })
            .collect();
        for pair in outcomes {
            for (name, failure) in pair {
                record(name, failure);
            }
        }
    }

    let order = [
        FEASIBILITY,
        STRONGLY_CONNECTED,
        RIGID,
        LATTICE,
        EULERIAN,
        REACHABILITY,
        PLANE_DISTANCE,
        SPHERE_DISTANCE,
        CYCLE_COUNT,
        CYCLE_POTENTIAL,
        SEQUENCES,
        GREEDY,
    ];
    Ok(Report {
        mode: e.mode(),
        alpha: alpha_to_labels(e, a),
        orientations: u.len(),
        flip_arcs: g.arc_count(),
        properties: order.iter().filter_map(|n| props.remove(n)).collect(),
    })
}

fn failed<E: std::fmt::Display>(r: std::result::Result<Option<String>, E>) -> Option<String> {
    match r {
        Ok(f) => f,
        Err(err) => Some(format!("error: {err}")),
    }
}

fn check_pair(
    e: &Embedding,
    dp: &Orientation,
    d: &Orientation,
    bfs: Option<u64>,
    opts: &VerifyOptions,
) -> PairFailures {
    let mut out = PairFailures::new();
    out.push((
        EULERIAN,
        failed(orient::difference(dp, d, e).map(|f| {
            let mut balance = vec![0i64; e.num_vertices()];
            for &h in f.arcs() {
                balance[e.tail(h)] += 1;
                balance[e.head(h)] -= 1;
            }
            balance
                .iter()
                .any(|&b| b != 0)
                .then(|| "unbalanced difference".to_string())
        })),
    ));
    match e.mode() {
        Mode::Plane => {
            let formula = flips::plane_distance(dp, d, e);
            out.push((
                REACHABILITY,
                failed(
                    flips::comparable(dp, d, e).map(|c| {
                        (c != bfs.is_some()).then(|| format!("comparable {c}, BFS {bfs:?}"))
                    }),
                ),
            ));
            out.push((
                PLANE_DISTANCE,
                failed(
                    formula.as_ref().map(|&f| {
                        (f.flips() != bfs).then(|| format!("formula {f:?}, BFS {bfs:?}"))
                    }),
                ),
            ));
            if let Some(n) = bfs {
                out.push((
                    CYCLE_COUNT,
                    failed(
                        flips::cycle_count_distance(dp, d, e)
                            .map(|c| (c != n).then(|| format!("cycle count {c}, BFS {n}"))),
                    ),
                ));
            }
            for &seed in &opts.seeds {
                out.push((
                    CYCLE_POTENTIAL,
                    failed(potential_matches_cycles(e, dp, d, seed)),
                ));
            }
        }
        Mode::Sphere => {
            for f in e.face_ids() {
                out.push((
                    SPHERE_DISTANCE,
                    failed(flips::sphere_distance(dp, d, e, f).map(|z| {
                        (Some(z) != bfs).then(|| format!("reference {f}: formula {z}, BFS {bfs:?}"))
                    })),
                ));
            }
        }
    }
    let sequence = flips::certificate(dp, d, e, None, None).and_then(|cert| {
        cert.verify(dp, d, e)?;
        Ok(match cert.distance {
            Distance::Flips(n) if Some(n) != bfs => {
                Some(format!("certificate distance {n}, BFS {bfs:?}"))
            }
            Distance::Incomparable if bfs.is_some() => {
                Some(format!("certificate incomparable, BFS {bfs:?}"))
            }
            _ => None,
        })
    });
    out.push((SEQUENCES, failed(sequence)));
    if let Some(n) = bfs {
        out.push((
            GREEDY,
            failed(flips::greedy_sequence(dp, d, e, None).map(|s| {
                (s.len() as u64 != n).then(|| format!("greedy length {}, BFS {n}", s.len()))
            })),
        ));
    }
    out
}

fn potential_matches_cycles(
    e: &Embedding,
    dp: &Orientation,
    d: &Orientation,
    seed: Option<u64>,
) -> Result<Option<String>> {
    let f = orient::difference(dp, d, e)?;
    let p = plane_potential(&f, e)?;
    let s = classify_and_nest(&standard_cycle_system_seeded(&f, e, seed)?, e, None)?;
    for (g, z) in p.iter() {
        let c = potential_from_cycles(&s, e, g)?;
        if c != z {
            return Ok(Some(format!(
                "seed {seed:?}, face {g}: potential {z}, cycles {c}"
            )));
        }
    }
    Ok(None)
}
