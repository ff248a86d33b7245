use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use admcover_core::constructions::{GluingMode, GluingSpec};
use admcover_core::curve_graph::DualGraph;
use admcover_core::graph_cover::GraphCover;
use admcover_core::ids::LegId;
use admcover_core::smooth_cover::{BranchDatum, Fiber, Preimage};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn admcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admcover"))
        .args(args)
        .env_remove("ADMCOVER_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_json(dir: &tempfile::TempDir, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Degree 2 map of a genus 2 curve onto P^1 with two marked preimages of one point.
fn hyperelliptic_with_pair() -> GraphCover {
    let mut fibers: Vec<Fiber> = (0..6)
        .map(|i| Fiber::new(format!("w{i}"), vec![Preimage::unlabeled(2)]))
        .collect();
    fibers.push(Fiber::new(
        "q",
        vec![Preimage::labeled("a", 1), Preimage::labeled("b", 1)],
    ));
    let source = DualGraph::new(
        [("c".into(), 2)],
        [],
        [("a".into(), "c".into()), ("b".into(), "c".into())],
    )
    .unwrap();
    let target = DualGraph::smooth("t", 0);
    GraphCover::new(
        source,
        target,
        2,
        BTreeMap::from([("c".into(), "t".into())]),
        BTreeMap::from([("c".into(), BranchDatum::new(2, 2, 0, fibers))]),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap()
}

#[test]
fn cycle_of_four_has_genus_one() {
    let out = admcover(&["validate-curve", path(&fixture("cycle4.json"))]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["stable"], false);
}

#[test]
fn one_node_genus_two_is_bielliptic() {
    let out = admcover(&[
        "decide",
        "--d",
        "2",
        "--h",
        "1",
        path(&fixture("onenode-g2.json")),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["decision"], "certified_yes");
    assert!(v["certificate"].is_object());
}

#[test]
fn exceptional_degree_four_datum_fails_on_monodromy() {
    let out = admcover(&["hurwitz-exists", path(&fixture("d4-exceptional.json"))]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["realizable"], false);
    assert_eq!(v["reason"], "monodromy");
}

#[test]
fn riemann_hurwitz_failure_is_reported_as_rh() {
    let dir = tempfile::tempdir().unwrap();
    let datum = BranchDatum::new(2, 0, 0, vec![Fiber::new("p", vec![Preimage::unlabeled(2)])]);
    let file = write_json(&dir, "odd.json", &datum);
    let out = admcover(&["hurwitz-exists", &file]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["reason"], "rh");
}

#[test]
fn realizable_datum_returns_witness() {
    let dir = tempfile::tempdir().unwrap();
    let fibers = (0..4)
        .map(|i| Fiber::new(format!("p{i}"), vec![Preimage::unlabeled(2)]))
        .collect();
    let file = write_json(&dir, "ell.json", &BranchDatum::new(2, 1, 0, fibers));
    let out = admcover(&["hurwitz-exists", &file]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["witness"].is_object());
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        "{\n  \"vertices\": [\n    { \"id\": \"v\" \"genus\": 0 }\n  ]\n}\n",
    )
    .unwrap();
    let out = admcover(&["validate-curve", path(&file)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
}

#[test]
fn structurally_invalid_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dangling.json");
    std::fs::write(
        &file,
        r#"{"vertices":[{"id":"v","genus":0}],"edges":[{"id":"e","ends":["v","w"]}]}"#,
    )
    .unwrap();
    let out = admcover(&["validate-curve", path(&file)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(
        code(&admcover(&["validate-curve", "/nonexistent/x.json"])),
        2
    );
}

#[test]
fn degree_above_bounds_exits_three() {
    let out = admcover(&[
        "--bounds",
        "d=3",
        "hurwitz-exists",
        path(&fixture("d4-exceptional.json")),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn decide_beyond_bounds_exits_three() {
    let out = admcover(&[
        "--bounds",
        "d=2",
        "decide",
        "--d",
        "3",
        "--h",
        "1",
        path(&fixture("onenode-g2.json")),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn decided_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let curve = fixture("onenode-g2.json");
    let out = admcover(&["decide", "--d", "2", "--h", "1", path(&curve)]);
    let cert = write_json(&dir, "cert.json", &json(&out)["certificate"]);
    let out = admcover(&["verify-cert", path(&curve), &cert, "--d", "2", "--h", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);
    // The same certificate claims nothing about (3,1).
    let out = admcover(&["verify-cert", path(&curve), &cert, "--d", "3", "--h", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn both_routes_certify_the_one_node_curve() {
    for route in ["shared-fiber", "totally-ramified"] {
        let out = admcover(&[
            "decide",
            "--d",
            "2",
            "--h",
            "1",
            "--route",
            route,
            path(&fixture("onenode-g2.json")),
        ]);
        assert_eq!(code(&out), 0, "{route}");
    }
}

#[test]
fn decide_with_map_judges_that_map() {
    let dir = tempfile::tempdir().unwrap();
    // A bielliptic involution with the two branches exchanged over one point.
    let fibers = vec![
        Fiber::new(
            "q",
            vec![Preimage::labeled("n.1", 1), Preimage::labeled("n.2", 1)],
        ),
        Fiber::new("b0", vec![Preimage::unlabeled(2)]),
        Fiber::new("b1", vec![Preimage::unlabeled(2)]),
    ];
    let map = write_json(&dir, "map.json", &BranchDatum::new(2, 2, 1, fibers));
    let out = admcover(&[
        "decide",
        "--d",
        "2",
        "--h",
        "1",
        "--map",
        &map,
        path(&fixture("onenode-g2.json")),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    // Without a node over a shared fiber the map proves nothing.
    let fibers = vec![
        Fiber::new(
            "q",
            vec![Preimage::labeled("n.1", 1), Preimage::unlabeled(1)],
        ),
        Fiber::new(
            "r",
            vec![Preimage::labeled("n.2", 1), Preimage::unlabeled(1)],
        ),
        Fiber::new("b0", vec![Preimage::unlabeled(2)]),
        Fiber::new("b1", vec![Preimage::unlabeled(2)]),
    ];
    let map = write_json(&dir, "map2.json", &BranchDatum::new(2, 2, 1, fibers));
    let out = admcover(&[
        "decide",
        "--d",
        "2",
        "--h",
        "1",
        "--map",
        &map,
        path(&fixture("onenode-g2.json")),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn hyperelliptic_classification() {
    let out = admcover(&[
        "classify-hyperelliptic",
        "--genus",
        "3",
        "--relation",
        "conjugate-pair",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["class"], "hyperelliptic");
    let out = admcover(&[
        "--format",
        "text",
        "classify-hyperelliptic",
        "--genus",
        "3",
        "--relation",
        "two-weierstrass",
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "bielliptic");
    let out = admcover(&[
        "classify-hyperelliptic",
        "--genus",
        "1",
        "--relation",
        "two-weierstrass",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn glue_then_convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GluingSpec {
        cover: hyperelliptic_with_pair(),
        pairs: vec![(LegId::new("a"), LegId::new("b"))],
        mode: GluingMode::EqualImages,
    };
    let spec_file = write_json(&dir, "spec.json", &spec);
    let out = admcover(&["glue", "--mode", "equal-images", &spec_file]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let glued: GraphCover = serde_json::from_slice(&out.stdout).expect("output parses as a cover");
    assert_eq!(glued.source().arithmetic_genus(), 3);
    let glued_file = write_json(&dir, "glued.json", &glued);

    assert_eq!(
        code(&admcover(&[
            "validate-cover",
            "--mode",
            "pseudo",
            &glued_file
        ])),
        0
    );
    // Marked by its seven branch points, the rational target is stable.
    assert_eq!(code(&admcover(&["validate-cover", &glued_file])), 0);

    let out = admcover(&["glue", "--mode", "genus-raise", &spec_file]);
    assert_eq!(code(&out), 2);
}

#[test]
fn pseudo_and_admissible_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut fibers: Vec<Fiber> = (0..4)
        .map(|i| Fiber::new(format!("w{i}"), vec![Preimage::unlabeled(2)]))
        .collect();
    fibers.push(Fiber::new(
        "q1",
        vec![Preimage::labeled("a1", 1), Preimage::labeled("a2", 1)],
    ));
    fibers.push(Fiber::new(
        "q2",
        vec![Preimage::labeled("b1", 1), Preimage::labeled("b2", 1)],
    ));
    let source = DualGraph::new(
        [("c".into(), 1)],
        [],
        ["a1", "a2", "b1", "b2"].map(|l| (l.into(), "c".into())),
    )
    .unwrap();
    let smooth = GraphCover::new(
        source,
        DualGraph::smooth("t", 0),
        2,
        BTreeMap::from([("c".into(), "t".into())]),
        BTreeMap::from([("c".into(), BranchDatum::new(2, 1, 0, fibers))]),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    let spec = GluingSpec {
        cover: smooth,
        pairs: vec![
            (LegId::new("a1"), LegId::new("b1")),
            (LegId::new("a2"), LegId::new("b2")),
        ],
        mode: GluingMode::GenusRaise {
            q1: "q1".into(),
            q2: "q2".into(),
        },
    };
    let out = admcover(&[
        "glue",
        "--mode",
        "genus-raise",
        &write_json(&dir, "spec.json", &spec),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let pseudo: GraphCover = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(pseudo.target().arithmetic_genus(), 1);
    let pseudo_file = write_json(&dir, "pseudo.json", &pseudo);

    let out = admcover(&["to-admissible", &pseudo_file]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let conversion = json(&out);
    let adm: GraphCover = serde_json::from_value(conversion["cover"].clone()).unwrap();
    assert_eq!(adm.target().arithmetic_genus(), 1);
    assert_eq!(adm.target().vertex_count(), 1);
    let adm_file = write_json(&dir, "adm.json", &adm);
    assert_eq!(code(&admcover(&["validate-cover", &adm_file])), 0);

    let out = admcover(&["to-pseudo", &adm_file]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let back: GraphCover = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        back.source().arithmetic_genus(),
        pseudo.source().arithmetic_genus()
    );
    assert_eq!(back.target().loops().count(), 0);

    // to-pseudo wants an admissible cover.
    assert_eq!(code(&admcover(&["to-pseudo", &pseudo_file])), 2);
}

#[test]
fn dot_output() {
    let out = admcover(&["export-dot", path(&fixture("cycle4.json"))]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("graph curve {"));

    let dir = tempfile::tempdir().unwrap();
    let cover = write_json(&dir, "cover.json", &hyperelliptic_with_pair());
    let out = admcover(&["export-dot", &cover]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("graph cover {"));

    let out = admcover(&[
        "--format",
        "dot",
        "validate-curve",
        path(&fixture("cycle4.json")),
    ]);
    assert_eq!(code(&out), 0);
    let out = admcover(&[
        "--format",
        "dot",
        "hurwitz-exists",
        path(&fixture("d4-exceptional.json")),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic() {
    let curve = fixture("onenode-g2.json");
    let args = ["decide", "--d", "3", "--h", "1", path(&curve)];
    let first = admcover(&args);
    for threads in ["1", "4"] {
        let again = Command::new(env!("CARGO_BIN_EXE_admcover"))
            .args(args)
            .env("ADMCOVER_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(again.stdout, first.stdout);
        assert_eq!(again.status.code(), first.status.code());
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_admcover"))
        .args(["validate-curve", path(&fixture("cycle4.json"))])
        .env("ADMCOVER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decide_help_states_scope() {
    let out = admcover(&["decide", "--help"]);
    let help = String::from_utf8_lossy(&out.stdout);
    assert!(help.contains("--map"));
    assert!(help.contains("cannot tell apart curves"));
}
