use std::path::PathBuf;
use std::process::{Command, Output};

use lcadag::format::DagDocument;
use lcadag_core::fixtures;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn lcadag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcadag"))
        .args(args)
        .env_remove("LCADAG_MAX_SUBSETS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn check_reports_lca_properties() {
    let o = lcadag(&["check", &fixture("h4.json"), "--sizes", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lca_property"], false);
    assert_eq!(v["lca_property_witness"], serde_json::json!(["b", "c"]));
    assert_eq!(v["lca_relevant"], true);
    assert_eq!(v["shape"]["pcc"], true);
    let v = json(&lcadag(&["check", &fixture("h4.json"), "--sizes", "1,3"]));
    assert_eq!(v["lca_property"], true);
}

#[test]
fn simplify_diff_and_verify() {
    let v = json(&lcadag(&["simplify", &fixture("b3.json"), "--sizes", "1,2", "--emit", "diff"]));
    assert_eq!(v["removed"], serde_json::json!([6]));
    assert_eq!(v["lost_clusters"], serde_json::json!([["a", "b", "c"]]));

    let dir = std::env::temp_dir().join(format!("lcadag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let reduced = dir.join("reduced.json");
    let o = lcadag(&["simplify", &fixture("b3.json"), "--sizes", "1,2"]);
    std::fs::write(&reduced, &o.stdout).unwrap();
    let o = lcadag(&["verify", &fixture("b3.json"), reduced.to_str().unwrap(), "--sizes", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Removing ab changes lca({a, b}).
    let bad = dir.join("bad.json");
    let o = lcadag(&["ominus", &fixture("b3.json"), "--remove", "3"]);
    std::fs::write(&bad, &o.stdout).unwrap();
    let o = lcadag(&["verify", &fixture("b3.json"), bad.to_str().unwrap(), "--sizes", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["s4"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn ominus_by_name() {
    let o = lcadag(&["ominus", &fixture("t3.txt"), "--remove", "u"]);
    assert_eq!(o.status.code(), Some(0));
    let g = DagDocument::from_json(&stdout(&o)).unwrap().to_dag().unwrap();
    assert_eq!(g.vertex_count(), 4);
    assert_eq!(g.children(lcadag_core::VertexId(0)).unwrap().len(), 3);
    let o = lcadag(&["ominus", &fixture("t3.txt"), "--remove", "nobody"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hasse_realization_exit_codes() {
    let o = lcadag(&["hasse", &fixture("c4.json")]);
    let g = DagDocument::from_json(&stdout(&o)).unwrap().to_dag().unwrap();
    assert_eq!(g, fixtures::h4());
    let o = lcadag(&["hasse", &fixture("c4.json"), "--realize", "property", "--sizes", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lcadag(&["hasse", &fixture("c4.json"), "--realize", "property", "--sizes", "1,4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lcadag(&["hasse", &fixture("pow3.json"), "--realize", "ary", "--sizes", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shape_and_clusters() {
    let v = json(&lcadag(&["shape", &fixture("gt.txt")]));
    assert_eq!(v["galled_tree"], true);
    assert_eq!(v["tree"], false);
    let v = json(&lcadag(&["clusters", &fixture("t3.txt")]));
    assert_eq!(v["vertices"][1]["name"], "u");
    assert_eq!(v["vertices"][1]["cluster"], serde_json::json!(["a", "b"]));
    assert_eq!(v["system"]["sets"].as_array().unwrap().len(), 5);
}

#[test]
fn dot_options() {
    let o = lcadag(&["dot", &fixture("s1.txt"), "--dashed-shortcuts"]);
    assert!(stdout(&o).contains("0 -> 2 [style=dashed];"));
    let o = lcadag(&["dot", &fixture("b3.json"), "--highlight-w", "--sizes", "1,2"]);
    assert!(stdout(&o).contains("6 [label=\"6\", style=filled, fillcolor=lightblue];"));
    let o = lcadag(&["dot", &fixture("b3.json"), "--highlight-w"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("lcadag-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"format_version\": 1,\n  \"vertices\": [,]\n}\n").unwrap();
    let o = lcadag(&["shape", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(lcadag(&["shape", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(lcadag(&["check", &fixture("t3.txt"), "--sizes", "x"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn subset_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lcadag"))
        .args(["check", &fixture("h4.json"), "--sizes", "1-4"])
        .env("LCADAG_MAX_SUBSETS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--laws", "ominus_order,hierarchy_shapes", "--trials", "30", "--seed", "9"];
    let a = lcadag(&args);
    let b = lcadag(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["laws"][0]["passed"], 30);
    assert_eq!(lcadag(&["fuzz", "--laws", "no_such_law"]).status.code(), Some(2));
}
