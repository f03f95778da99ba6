//! Acceptance gate: one pass/fail line per criterion.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use alphaflip::embed::interior_faces;
use alphaflip::oracle::{self, Report, VerifyOptions};
use alphaflip::{
    reverse_ccw_cycle, reverse_nested, AlphaSpec, Embedding, Error, HalfEdge, Instance, Orientation,
};

fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"));
    Instance::from_path(path, None).expect("fixture loads")
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

/// Every alpha of the instance whose orientations are strongly connected.
/// Strong connectivity depends only on alpha, so testing one orientation suffices.
fn strongly_connected_alphas(e: &Embedding) -> Vec<AlphaSpec> {
    oracle::feasible_alphas(e)
        .unwrap()
        .into_iter()
        .filter(|a| {
            let u = oracle::enumerate_alpha_orientations(e, a).unwrap();
            u.orientations
                .first()
                .is_some_and(|d| oracle::oracle_strongly_connected(e, d))
        })
        .collect()
}

struct Run {
    name: &'static str,
    reports: Vec<Report>,
    elapsed: Duration,
}

fn run_instances(names: &[&'static str], all_alphas: bool) -> Vec<Run> {
    names
        .iter()
        .map(|&name| {
            let inst = fixture(name);
            let e = inst.embedding.clone();
            let alphas = match (&inst.alpha, all_alphas) {
                (Some(a), false) => vec![a.clone()],
                _ => strongly_connected_alphas(&e),
            };
            let start = Instant::now();
            let reports = alphas
                .iter()
                .map(|a| oracle::verify_instance(&e, a, &VerifyOptions::default()).unwrap())
                .collect();
            Run {
                name,
                reports,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

/// Check the named properties over every report; counts what was checked.
fn properties(runs: &[&Run], names: &[&str]) -> Outcome {
    let mut checked = 0;
    for run in runs {
        for r in &run.reports {
            for &name in names {
                let Some(p) = r.property(name) else { continue };
                checked += p.checked;
                if !p.passed() {
                    return fail(format!(
                        "{}: {name}: {}",
                        run.name,
                        p.counterexample.clone().unwrap_or_default()
                    ));
                }
            }
        }
    }
    if checked == 0 {
        return fail("nothing was checked");
    }
    pass(format!("{checked} checks"))
}

fn timed(outcome: Outcome, runs: &[Run], limit: Duration) -> Outcome {
    let total: Duration = runs.iter().map(|r| r.elapsed).sum();
    let alphas: usize = runs.iter().map(|r| r.reports.len()).sum();
    let pairs: usize = runs
        .iter()
        .flat_map(|r| &r.reports)
        .map(|r| r.orientations * r.orientations)
        .sum();
    if !outcome.ok {
        return outcome;
    }
    let detail = format!(
        "{}, {alphas} alphas, {pairs} ordered pairs, {:.1?}",
        outcome.detail, total
    );
    if total >= limit {
        fail(format!("{detail} exceeds {limit:?}"))
    } else {
        pass(detail)
    }
}

/// Directed simple cycles of `d`, each listed once, rooted at its smallest vertex.
fn directed_cycles(e: &Embedding, d: &Orientation) -> Vec<Vec<HalfEdge>> {
    let mut out_arcs = vec![Vec::new(); e.num_vertices()];
    for h in d.arcs() {
        out_arcs[e.tail(h)].push(h);
    }
    let mut found = Vec::new();
    for s in 0..e.num_vertices() {
        let mut path = Vec::new();
        let mut on_path = vec![false; e.num_vertices()];
        on_path[s] = true;
        extend(e, &out_arcs, s, s, &mut path, &mut on_path, &mut found);
    }
    found
}

fn extend(
    e: &Embedding,
    out_arcs: &[Vec<HalfEdge>],
    s: usize,
    v: usize,
    path: &mut Vec<HalfEdge>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<HalfEdge>>,
) {
    for &h in &out_arcs[v] {
        let w = e.head(h);
        if w == s {
            path.push(h);
            found.push(path.clone());
            path.pop();
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(h);
            extend(e, out_arcs, s, w, path, on_path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}

fn criterion_six() -> Outcome {
    let mut verified = 0;
    let mut distinct = BTreeSet::new();
    for name in ["kite", "grid3x3", "wheel5", "annulus"] {
        let e = fixture(name).embedding;
        for a in strongly_connected_alphas(&e) {
            for d in oracle::enumerate_alpha_orientations(&e, &a)
                .unwrap()
                .orientations
            {
                for cycle in directed_cycles(&e, &d) {
                    let edges: Vec<usize> = cycle.iter().map(|h| h.edge()).collect();
                    let inside = interior_faces(&e, &edges).unwrap();
                    let ccw = inside.contains(&e.left_face(cycle[0]));
                    let result = reverse_ccw_cycle(&d, &cycle, &e);
                    if !ccw {
                        if !matches!(result, Err(Error::WrongSense(_))) {
                            return fail(format!("{name}: cw cycle {edges:?} was not rejected"));
                        }
                        continue;
                    }
                    let seq = match result {
                        Ok(s) => s,
                        Err(err) => return fail(format!("{name}: cycle {edges:?}: {err}")),
                    };
                    if seq.len() != inside.len() {
                        return fail(format!(
                            "{name}: cycle {edges:?}: {} flips for {} faces",
                            seq.len(),
                            inside.len()
                        ));
                    }
                    for (f, c) in seq.per_face_counts(&e) {
                        if c != inside.contains(&f) as u64 {
                            return fail(format!(
                                "{name}: cycle {edges:?}: face {f} flipped {c} times"
                            ));
                        }
                    }
                    let after = seq.apply(&d, &e).unwrap();
                    for edge in 0..e.num_edges() {
                        if (after.arc(edge) != d.arc(edge)) != edges.contains(&edge) {
                            return fail(format!(
                                "{name}: cycle {edges:?}: edge {edge} changed wrongly"
                            ));
                        }
                    }
                    verified += 1;
                    let mut key = edges.clone();
                    key.sort_unstable();
                    distinct.insert((name, key));
                }
            }
        }
    }
    if distinct.len() < 10 {
        return fail(format!("only {} distinct cycles", distinct.len()));
    }
    pass(format!(
        "{verified} reversals of {} distinct ccw cycles",
        distinct.len()
    ))
}

fn criterion_seven() -> Outcome {
    let inst = fixture("annulus");
    let e = &inst.embedding;
    let arc = |a, b| e.half_edge_between(a, b).unwrap();
    let outer = [arc(0, 1), arc(1, 2), arc(2, 3), arc(3, 0)];
    let inner = [arc(4, 7), arc(7, 6), arc(6, 5), arc(5, 4)];
    let edges = |c: &[HalfEdge]| c.iter().map(|h| h.edge()).collect::<Vec<_>>();
    let outer_faces = interior_faces(e, &edges(&outer)).unwrap();
    let inner_faces = interior_faces(e, &edges(&inner)).unwrap();
    let expected = outer_faces.len() - inner_faces.len();

    let mut checked = 0;
    let universes = strongly_connected_alphas(e).into_iter().flat_map(|a| {
        oracle::enumerate_alpha_orientations(e, &a)
            .unwrap()
            .orientations
    });
    for d in universes {
        let directed = outer.iter().chain(&inner).all(|&h| d.agrees(h));
        if !directed {
            continue;
        }
        let seq = match reverse_nested(&d, &outer, &[inner.to_vec()], e) {
            Ok(s) => s,
            Err(err) => return fail(format!("reverse_nested: {err}")),
        };
        if seq.len() != expected {
            return fail(format!("{} flips, expected {expected}", seq.len()));
        }
        for (f, c) in seq.per_face_counts(e) {
            let indicator = outer_faces.contains(&f) && !inner_faces.contains(&f);
            if c != indicator as u64 {
                return fail(format!("face {f} flipped {c} times"));
            }
        }
        let after = seq.apply(&d, e).unwrap();
        for edge in 0..e.num_edges() {
            let on_cycles = edges(&outer).contains(&edge) || edges(&inner).contains(&edge);
            if (after.arc(edge) != d.arc(edge)) != on_cycles {
                return fail(format!("edge {edge} changed wrongly"));
            }
        }
        checked += 1;
    }
    let n = &inst.orientations["N"];
    let named = reverse_nested(n, &outer, &[inner.to_vec()], e)
        .and_then(|s| s.apply(n, e))
        .map(|after| after == inst.orientations["Nrev"]);
    match named {
        Ok(true) if checked > 0 => pass(format!(
            "{checked} orientations, {expected} flips = {} - {} faces each",
            outer_faces.len(),
            inner_faces.len()
        )),
        Ok(_) => fail("N did not reach Nrev"),
        Err(err) => fail(err.to_string()),
    }
}

fn euler_on_fixtures() -> Outcome {
    let names = [
        "kite",
        "kite_sphere",
        "cycle4",
        "grid3x3",
        "wheel5",
        "annulus",
        "octahedron",
    ];
    for name in names {
        let e = fixture(name).embedding;
        let chi = e.num_vertices() as i64 - e.num_edges() as i64 + e.num_faces() as i64;
        if chi != 2 {
            return fail(format!("{name}: V - E + F = {chi}"));
        }
    }
    pass(format!("{} fixtures", names.len()))
}

fn main() {
    let plane = run_instances(&["kite", "grid3x3", "wheel5", "annulus"], true);
    let sphere = run_instances(&["cycle4", "kite_sphere", "octahedron"], false);
    let plane_refs: Vec<&Run> = plane.iter().collect();
    let sphere_refs: Vec<&Run> = sphere.iter().collect();
    let all: Vec<&Run> = plane.iter().chain(&sphere).collect();

    let structural = {
        let euler = euler_on_fixtures();
        let props = properties(
            &all,
            &[
                oracle::EULERIAN,
                oracle::LATTICE,
                oracle::RIGID,
                oracle::FEASIBILITY,
            ],
        );
        match (euler.ok, props.ok) {
            (true, true) => pass(format!("Euler on {}; {}", euler.detail, props.detail)),
            (false, _) => euler,
            _ => props,
        }
    };

    let results = [
        (
            "plane formula equals flip-graph oracle",
            timed(
                properties(&plane_refs, &[oracle::REACHABILITY, oracle::PLANE_DISTANCE]),
                &plane,
                Duration::from_secs(60),
            ),
        ),
        (
            "sphere formula equals flip-graph oracle",
            timed(
                properties(&sphere_refs, &[oracle::SPHERE_DISTANCE]),
                &sphere,
                Duration::from_secs(120),
            ),
        ),
        (
            "flip sequences replay with forced counts",
            properties(&all, &[oracle::SEQUENCES]),
        ),
        (
            "potential equals cycle nesting count over peel seeds",
            properties(&plane_refs, &[oracle::CYCLE_POTENTIAL]),
        ),
        (
            "cycle-count distance equals plane distance",
            properties(&plane_refs, &[oracle::CYCLE_COUNT]),
        ),
        (
            "ccw cycle reversal flips each interior face once",
            criterion_six(),
        ),
        ("nested reversal on the annulus", criterion_seven()),
        ("structural checks", structural),
        (
            "greedy flipping agrees without stalling",
            properties(&all, &[oracle::GREEDY]),
        ),
    ];

    let mut failed = 0;
    for (i, (title, outcome)) in results.iter().enumerate() {
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status}: {title} ({})",
            i + 1,
            outcome.detail
        );
        failed += !outcome.ok as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
