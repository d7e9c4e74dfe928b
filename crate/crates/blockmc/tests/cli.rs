//! End-to-end tests of the command-line interface: exit codes (0 holds,
//! 1 fails, 2 input error), file formats, and report shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_blockmc")
}

fn run(args: &[&str]) -> Output {
    Command::new(exe())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockmc-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const BMC_SPEC: &str = r#"{
    "alphabet": 2,
    "tree": {"vertices": ["a", "b", "c"], "edges": [["a","b"],["a","c"]], "root": "a"},
    "initial": {"0": "1/3", "1": "2/3"},
    "kernels": [
        {"vertex": "a", "rows": {
            "0": [
                {"config": {"b": 0, "c": 0}, "p": "1/4"},
                {"config": {"b": 0, "c": 1}, "p": "1/4"},
                {"config": {"b": 1, "c": 0}, "p": "1/4"},
                {"config": {"b": 1, "c": 1}, "p": "1/4"}
            ],
            "1": [
                {"config": {"b": 0, "c": 0}, "p": "1/2"},
                {"config": {"b": 0, "c": 1}, "p": "0/1"},
                {"config": {"b": 1, "c": 0}, "p": "0/1"},
                {"config": {"b": 1, "c": 1}, "p": "1/2"}
            ]
        }}
    ]
}"#;

#[test]
fn counterexample_emits_the_four_constants() {
    let out = run(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["bmc_lhs"], "1/6");
    assert_eq!(v["bmc_rhs"], "1/4");
    assert_eq!(v["mc_lhs"], "1/2");
    assert_eq!(v["mc_rhs"], "3/4");
    assert_eq!(v["tree"]["root"], "(0,-1)");
}

#[test]
fn classify_counterexample_exits_one_with_full_report() {
    let out = run(&["classify", "--fixture", "counterexample"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["roots"]["(0,-1)"]["holds"], true);
    assert_eq!(v["roots"]["(0,0)"]["holds"], true);
    assert_eq!(v["roots"]["(0,1)"]["holds"], false);
    assert_eq!(v["roots"]["(1,0)"]["holds"], false);
    assert_eq!(v["roots"]["(2,0)"]["holds"], false);
    assert_eq!(v["is_bmc_all_roots"], false);
    assert_eq!(v["mc"]["holds"], false);
    assert_eq!(v["mc"]["witness"]["lhs"], "1/2");
    assert_eq!(v["mc"]["witness"]["rhs"], "3/4");
    assert_eq!(v["mrf"]["witness"]["kind"], "positivity");
    assert_eq!(v["positivity"], false);
    assert_eq!(v["inclusion_chain_ok"], true);
}

#[test]
fn classify_positive_fixtures_exit_zero() {
    for fixture in ["path3", "binary2"] {
        let out = run(&["classify", "--fixture", fixture]);
        assert_eq!(out.status.code(), Some(0), "fixture {fixture}");
        let v = json_of(&out);
        assert_eq!(v["is_bmc_all_roots"], true);
        assert_eq!(v["mc"]["holds"], true);
        assert_eq!(v["mrf"]["holds"], true);
        assert_eq!(v["positivity"], true);
    }
}

#[test]
fn check_respects_the_root_flag() {
    let ok = run(&["check", "--fixture", "counterexample"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json_of(&ok);
    assert_eq!(v["root"], "(0,-1)");
    assert_eq!(v["verdict"]["holds"], true);

    let bad = run(&["check", "--fixture", "counterexample", "--root", "(0,1)"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json_of(&bad);
    assert_eq!(v["verdict"]["holds"], false);
    assert_eq!(v["verdict"]["witness"]["vertex"], "(0,0)");
    assert_eq!(v["verdict"]["witness"]["lhs"], "1/6");
    assert_eq!(v["verdict"]["witness"]["rhs"], "1/4");
}

#[test]
fn realize_then_classify_round_trips_through_files() {
    let dir = tmp_dir("realize");
    let spec_path = dir.join("spec.json");
    std::fs::write(&spec_path, BMC_SPEC).unwrap();

    let measure_path = dir.join("measure.json");
    let out = run(&[
        "realize",
        "--bmc",
        spec_path.to_str().unwrap(),
        "--out",
        measure_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let measure: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&measure_path).unwrap()).unwrap();
    assert_eq!(measure["alphabet"], 2);
    assert_eq!(measure["table"].as_array().unwrap().len(), 8);

    // A realized spec passes its own root check (exit 0).
    let check = run(&["check", "--bmc", spec_path.to_str().unwrap(), "--root", "a"]);
    assert_eq!(check.status.code(), Some(0));

    // The sibling-correlated row makes children dependence visible but the
    // measure is still a block Markov chain from its root.
    let classify = run(&["classify", "--measure", measure_path.to_str().unwrap()]);
    let v = json_of(&classify);
    assert_eq!(v["roots"]["a"]["holds"], true);
    assert_eq!(v["cond_indep"]["holds"], false);
    assert_eq!(classify.status.code(), Some(1));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn chain_embed_builds_a_measure_file() {
    let dir = tmp_dir("embed");
    let chain_path = dir.join("chain.json");
    let tree_path = dir.join("tree.json");
    let map_path = dir.join("map.json");
    std::fs::write(
        &chain_path,
        r#"{"alphabet": 2, "initial": {"0": "1/2", "1": "1/2"},
            "P": [["1/2", "1/2"], ["1/1", "0/1"]]}"#,
    )
    .unwrap();
    std::fs::write(
        &tree_path,
        r#"{"vertices": ["x0", "x1", "x2"], "edges": [["x0","x1"],["x1","x2"]], "root": "x0"}"#,
    )
    .unwrap();
    std::fs::write(&map_path, r#"{"time_map": {"x0": 0, "x1": 1, "x2": 2}}"#).unwrap();

    let out = run(&[
        "chain-embed",
        "--chain",
        chain_path.to_str().unwrap(),
        "--tree",
        tree_path.to_str().unwrap(),
        "--time-map",
        map_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    // P[X0=1, X1=1, X2=anything] = 0 under this chain.
    let zero_rows: Vec<_> = v["table"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["config"]["x0"] == 1 && e["config"]["x1"] == 1)
        .collect();
    assert_eq!(zero_rows.len(), 2);
    assert!(zero_rows.iter().all(|e| e["p"] == "0/1"));

    // Without a map anywhere: input error.
    let missing = run(&[
        "chain-embed",
        "--chain",
        chain_path.to_str().unwrap(),
        "--tree",
        tree_path.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    // Missing file.
    let out = run(&["classify", "--measure", "/nonexistent/measure.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/measure.json"));

    // Unknown fixture.
    let out = run(&["classify", "--fixture", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown root label.
    let out = run(&["check", "--fixture", "path3", "--root", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));

    // Malformed JSON names the file and the problem.
    let dir = tmp_dir("badjson");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"alphabet": 2}"#).unwrap();
    let out = run(&["classify", "--measure", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("bad.json"), "{err}");

    // A probability literal that is not an exact rational.
    let float = dir.join("float.json");
    std::fs::write(
        &float,
        r#"{"alphabet": 2,
            "tree": {"vertices": ["a"], "edges": [], "root": "a"},
            "table": [
                {"config": {"a": 0}, "p": "0.5"},
                {"config": {"a": 1}, "p": "1/2"}
            ]}"#,
    )
    .unwrap();
    let out = run(&["classify", "--measure", float.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-rational"));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn self_test_passes() {
    let out = run(&["self-test"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("ok: ")), "{text}");
}

#[test]
fn max_subtree_size_flag_caps_the_sweep() {
    // With subsets capped at 2 the counter-example's Markov chain failure
    // (a 3-vertex subtree) is out of range, so mc reports holds.
    let out = run(&[
        "classify",
        "--fixture",
        "counterexample",
        "--max-subtree-size",
        "2",
    ]);
    let v = json_of(&out);
    assert_eq!(v["mc"]["holds"], true);
    // Other failures still make the exit code 1.
    assert_eq!(out.status.code(), Some(1));
}
