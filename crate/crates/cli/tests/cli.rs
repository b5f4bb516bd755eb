use std::process::{Command, Output};

use serde_json::Value;

fn kgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = kgraph(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(v["schema"], "kgraph-report/1");
    (v, out.status.code().unwrap())
}

fn status<'a>(r: &'a Value, name: &str) -> &'a str {
    r["verdicts"].as_array().unwrap().iter().find(|v| v["name"] == name).unwrap()["status"].as_str().unwrap()
}

#[test]
fn paper_example_is_not_locally_convex() {
    let (r, code) = report(&["check", "paper-ex", "--window", "4,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["locally_convex"], false);
    assert_eq!(r["data"]["row_finite"], true);
    assert_eq!(r["data"]["convexity_witness"]["vertex"], "v_0");
    assert_eq!(r["data"]["convexity_witness"]["edges"], serde_json::json!(["omega_0", "f_0"]));
    assert_eq!(r["verdicts"][0]["exact"], false);
    assert_eq!(r["verdicts"][0]["bound"], serde_json::json!([4, 2]));
}

#[test]
fn omega_is_locally_convex() {
    let (r, code) = report(&["check", "omega:2,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["graph"]["vertices"], 9);
    assert_eq!(r["data"]["locally_convex"], true);
    assert_eq!(r["data"]["sources"].as_array().unwrap().len(), 6);
}

#[test]
fn src1_representation() {
    let (r, code) = report(&["rep", "src1", "--verify", "ck,diag,spectrum,diagram"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["characters"], 2);
    assert_eq!(r["data"]["dimension"], 2);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["status"] == "pass"));
}

#[test]
fn queries() {
    let (r, code) = report(&["mce", "omega:2,2", "(0,0)-(1,0)", "(0,0)-(0,1)"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["mce"].as_array().unwrap().len(), 1);

    let (r, code) = report(&["fe", "src1", "--vertex", "v"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["sets"], serde_json::json!([["e"], ["v"]]));

    let (r, code) = report(&["boundary", "src1", "e"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "boundary"), "pass");

    let (r, code) = report(&["boundary", "src1", "v"]);
    assert_eq!(code, 1);
    assert_eq!(status(&r, "boundary"), "fail");
    assert_eq!(status(&r, "leq_infty"), "fail");
}

#[test]
fn topology() {
    let (r, code) = report(&["topology", "refine", "src1", "--path", "e", "--mu", "v"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "contains_path"), "pass");

    let (r, code) = report(&["topology", "separate", "src1", "e", "v"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "separated"), "pass");

    let (r, code) = report(&["topology", "converge", "loop:1", "--seq", "v,f_1,v|f_1", "--target", "v|f_1"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn desource_reports_the_count_identity() {
    let (r, code) = report(&["desource", "src1", "--window", "3", "--check"]);
    assert_eq!(code, 0);
    assert_eq!(r["graph"]["vertices"], 5);
    assert_eq!(r["graph"]["edges"], 4);

    let (r, code) = report(&["desource", "paper-ex", "--window", "3,1", "--check"]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["status"] == "fail")
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["desource.mce_count_identity"]);
    assert_eq!(status(&r, "desource.mce_count_bound"), "pass");

    let (r, code) = report(&["desource", "chain:3", "--window", "4", "--iso-heads"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "heads_isomorphism"), "pass");
}

#[test]
fn output_is_deterministic() {
    let a = kgraph(&["desource", "paper-ex", "--window", "2,1"]);
    let b = kgraph(&["desource", "paper-ex", "--window", "2,1"]);
    assert_eq!(a.stdout, b.stdout);
    let a = kgraph(&["fixtures", "random", "--seed", "7", "--twist"]);
    let b = kgraph(&["fixtures", "random", "--seed", "7", "--twist"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(kgraph(&["check", "no-such-graph.kg"]).status.code(), Some(2));
    assert_eq!(kgraph(&["mce", "src1", "e", "zz"]).status.code(), Some(2));
    assert_eq!(kgraph(&["check", "src1", "--window", "1,1"]).status.code(), Some(2));
    assert_eq!(kgraph(&["rep", "src1", "--verify", "nope"]).status.code(), Some(2));
    assert_eq!(kgraph(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn kg_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("kgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.kg");
    let out = kgraph(&["fixtures", "random", "--seed", "3", "--size", "3"]);
    std::fs::write(&path, &out.stdout).unwrap();
    let (r, code) = report(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["graph"]["rank"], 2);

    let kg = dir.join("w.kg");
    let (_, code) = report(&["desource", "src1", "--kg-out", kg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (r, _) = report(&["check", kg.to_str().unwrap()]);
    assert_eq!(r["data"]["sources"].as_array().unwrap().len(), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
