use std::path::PathBuf;
use std::process::{Command, Output};

use alphaflip::fixture::orientation_to_labels;
use alphaflip::Instance;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphaflip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn distance_depends_on_order() {
    let kite = path("kite");
    let out = run(&["distance", "--from", "D1", "--to", "D3", &kite]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["distance"], 1);
    assert_eq!(v["sequence"], serde_json::json!([4]));
    assert_eq!(v["potential"]["4"], 1);

    let out = run(&["distance", "--from", "D3", "--to", "D1", &kite]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["distance"], "incomparable");
}

#[test]
fn sphere_distance_and_reference_face() {
    let kite = path("kite_sphere");
    for r in ["0", "1", "4"] {
        let out = run(&[
            "distance",
            "--from",
            "D3",
            "--to",
            "D1",
            "--ref-face",
            r,
            &kite,
        ]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["distance"], 2);
        assert_eq!(v["potential"][r], 0);
    }
    let out = run(&[
        "distance",
        "--from",
        "D3",
        "--to",
        "D1",
        "--ref-face",
        "7",
        &kite,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mode_override() {
    let out = run(&[
        "distance",
        "--from",
        "D3",
        "--to",
        "D1",
        "--mode",
        "sphere",
        &path("kite"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"], "sphere");
}

#[test]
fn potential_of_identical_orientations_is_zero() {
    let out = run(&["potential", "--from", "D2", "--to", "D2", &path("kite")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let values: Vec<i64> = v
        .as_object()
        .unwrap()
        .values()
        .map(|z| z.as_i64().unwrap())
        .collect();
    assert_eq!(values, vec![0, 0, 0]);
}

#[test]
fn sequence_replay_matches_target_serialization() {
    let annulus = path("annulus");
    let out = run(&[
        "sequence", "--replay", "--from", "N", "--to", "Nrev", &annulus,
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["sequence"].as_array().unwrap().len(), 4);
    let inst = Instance::from_path(fixture("annulus"), None).unwrap();
    let target = orientation_to_labels(&inst.embedding, &inst.orientations["Nrev"]);
    assert_eq!(
        serde_json::to_string(&v["replay"]).unwrap(),
        serde_json::to_string(&target).unwrap()
    );
}

#[test]
fn json_output_round_trips() {
    for args in [
        vec!["distance", "--from", "S", "--to", "Srev"],
        vec!["faces"],
        vec!["check"],
        vec!["enumerate", "--alpha-of", "N"],
    ] {
        let mut all = args.clone();
        let p = path("annulus");
        all.push(&p);
        let out = run(&all);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn verify_octahedron_passes() {
    let out = run(&["verify", "--format", "text", &path("octahedron")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_budget_is_a_domain_error() {
    let out = run(&["verify", "--budget", "5", &path("octahedron")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_kite() {
    let out = run(&["enumerate", &path("kite")]);
    let v = json(&out);
    assert_eq!(v["count"], 3);
    assert_eq!(v["flip_graph"]["arcs"].as_array().unwrap().len(), 2);
}

#[test]
fn find_orientation_and_infeasibility() {
    let out = run(&["find-orientation", &path("octahedron")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_object().unwrap().len(), 12);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("kite")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["alpha"] = serde_json::json!({"0": 0, "1": 3, "2": 0, "3": 2});
    let file = dir.path().join("infeasible.json");
    std::fs::write(&file, doc.to_string()).unwrap();
    let out = run(&["find-orientation", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("kite")).unwrap();
    let scrambled = dir.path().join("scrambled.json");
    std::fs::write(&scrambled, text.replacen("[1, 2, 4]", "[1, 4, 2]", 1)).unwrap();
    let out = run(&["check", scrambled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Euler"));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["faces", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["distance", "--from", "D1", "--to", "nope", &path("kite")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["faces", "--format", "dot", &path("kite")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dot_export() {
    let out = run(&[
        "export-dot",
        "--orientation",
        "D3",
        "--from",
        "D1",
        &path("kite"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("potential 1"));
    let out = run(&[
        "distance",
        "--from",
        "D1",
        "--to",
        "D2",
        "--format",
        "dot",
        &path("kite"),
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("// face 0"));
}

#[test]
fn peel_seed_does_not_change_the_certificate_totals() {
    let annulus = path("annulus");
    let base = json(&run(&["distance", "--from", "S", "--to", "Srev", &annulus]));
    for seed in ["0", "1", "17", "123456789"] {
        let v = json(&run(&[
            "distance",
            "--from",
            "S",
            "--to",
            "Srev",
            "--peel-seed",
            seed,
            &annulus,
        ]));
        assert_eq!(v["distance"], base["distance"]);
        assert_eq!(v["potential"], base["potential"]);
        assert_eq!(v["per_face_counts"], base["per_face_counts"]);
    }
}
