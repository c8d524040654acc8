use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn bframes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bframes")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_block_system_is_a_localization() {
    let o = bframes(&["verdict", path(&data("mo2_system.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("is_localization: true"));
}

#[test]
fn single_block_system_is_not_covering() {
    let o = bframes(&["verdict", path(&data("mo2_one_block.json"))]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("is_localization: false"));
    assert!(out.contains("covering: false"));
    assert!(out.contains("uncovered: b"));
}

#[test]
fn corrupted_algebra_cites_the_axiom() {
    let o = bframes(&["validate", path(&data("mo2_corrupted.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[c]"));
}

#[test]
fn corrupted_copy_in_a_temp_dir_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("mo2.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    // Make `b` its own complement.
    doc["ortho"]["b"] = Value::from("b");
    doc["ortho"]["b*"] = Value::from("b*");
    let file = dir.path().join("broken.json");
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = bframes(&["validate", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[c]: b ∨"));
}

#[test]
fn malformed_input_exits_with_two_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"elements": ["0", "1"], "leq": [["0", "1"]], "ortho": {"0": 3}}"#).unwrap();
    let o = bframes(&["validate", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ortho.0"), "{}", stderr(&o));
}

#[test]
fn exceeded_bound_exits_with_two_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("big.json");
    std::fs::write(&file, r#"{"target": {"catalog": "MO2"}, "model": {"powerset": 9}, "maximal": true}"#).unwrap();
    let o = bframes(&["verdict", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model atom count"), "{}", stderr(&o));
}

#[test]
fn valid_documents_of_every_kind_pass() {
    for name in [
        "mo2.json",
        "two_blocks.json",
        "plane_rays.json",
        "mo2_system.json",
        "representable.json",
        "spin_observable.json",
        "flip.json",
    ] {
        let o = bframes(&["validate", path(&data(name))]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn blocks_of_the_plane() {
    let o = bframes(&["blocks", path(&data("plane_rays.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("blocks: 2\n"));
}

#[test]
fn counit_lists_six_classes() {
    let o = bframes(&["counit", "--format", "structured", path(&data("mo2_system.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 6);
    assert_eq!(v["is_localization"], Value::Bool(true));
}

#[test]
fn tensor_of_a_representable_has_one_class_per_element() {
    let o = bframes(&["tensor", path(&data("representable.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("classes: 4\n"));
}

#[test]
fn ks_exit_code_follows_the_obstruction() {
    let o = bframes(&["ks", path(&data("mo2.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("obstructed: true"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cube.json");
    std::fs::write(&file, r#"{"catalog": "2^3"}"#).unwrap();
    let o = bframes(&["ks", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("surjective_chart: 2^3"));
}

#[test]
fn observable_action_swaps_the_values() {
    let o = bframes(&["observable", path(&data("spin_observable.json")), "--apply", path(&data("flip.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let acted = out.split("Ξ∙f").nth(1).unwrap();
    assert!(acted.contains("Ξ((-∞,0]) = a\n"));
}

#[test]
fn output_flag_writes_the_file_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let input = data("disjoint_triples_maximal.json");
    for out in [&first, &second] {
        let o = bframes(&["counit", "--format", "structured", "--output", path(out), path(&input)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn dot_outputs_graphs() {
    let o = bframes(&["dot", path(&data("mo2.json"))]);
    assert!(stdout(&o).starts_with("digraph hasse"));
    let o = bframes(&["dot", path(&data("mo2_system.json"))]);
    assert!(stdout(&o).starts_with("digraph elements"));
    let o = bframes(&["dot", "--graph", "counit", path(&data("mo2_system.json"))]);
    assert_eq!(stdout(&o).matches(" -> l").count(), 6);
    let o = bframes(&["dot", "--graph", "counit", path(&data("mo2.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_structured_round_trips_the_algebra() {
    let o = bframes(&["validate", "--format", "structured", path(&data("mo2.json"))]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("canonical.json");
    std::fs::write(&file, serde_json::to_string(&v["document"]).unwrap()).unwrap();
    let again = bframes(&["validate", "--format", "structured", path(&file)]);
    assert_eq!(again.status.code(), Some(0));
    let w: Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(v["document"], w["document"]);
}
