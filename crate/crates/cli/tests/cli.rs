use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqpoints"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn count_twisted_cubic() {
    let out = run(&["count", "--variety", &data("twisted_cubic.var")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["count"], 3);
    assert_eq!(v["method"], "enumeration");
}

#[test]
fn count_with_chart_splits() {
    let out = run(&["count", "--variety", &data("conic_gf4.var"), "--chart", "x2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let c = &v["chart"];
    assert_eq!(
        v["count"].as_u64().unwrap(),
        c["section_count"].as_u64().unwrap() + c["affine_count"].as_u64().unwrap()
    );
}

#[test]
fn bound_from_sequence() {
    let out = run(&["bound", "--kind", "thm31", "--components", "1:3", "--n", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["total"], 9);
    assert_eq!(v["kind"], "projective_thm31");
    assert_eq!(v["per_component"][0]["term"], 9);
}

#[test]
fn bound_csv_schema() {
    let out = run(&["bound", "--kind", "projective_thm31", "--variety", &data("twisted_cubic.var"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,n,q,dims,degs,bound,count,tight,hypotheses"));
    assert!(lines.next().unwrap().starts_with("projective_thm31,3,2,1,3,9,3,false,"));
}

#[test]
fn question1_is_marked_conjectural() {
    let out = run(&["bound", "--kind", "question1", "--components", "2:1,1:1", "--n", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["conjectural"], true);
}

#[test]
fn construct_flower_emits_variety_and_certificate() {
    let out = run(&["construct", "flower", "--n", "4", "--d", "2", "--r", "3", "--q", "2", "--emit", "var"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = String::from_utf8(out.stdout).unwrap();
    assert!(doc.starts_with("field p=2"));
    assert_eq!(doc.matches("component").count(), 3);
    let cert: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(cert["enumerated"], 19);
    assert_eq!(cert["agrees"], true);

    // the emitted file counts back to 19
    let path = std::env::temp_dir().join(format!("fqpoints-flower-{}.var", std::process::id()));
    std::fs::write(&path, doc).unwrap();
    let out = run(&["count", "--variety", path.to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["count"], 19);
    let _ = std::fs::remove_file(path);
}

#[test]
fn construct_json_spread() {
    let out = run(&["construct", "spread", "--n", "3", "--d", "1", "--r", "5", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["members"].as_array().unwrap().len(), 5);
    assert_eq!(v["certificate"]["formula"], 15);
}

#[test]
fn infeasible_construction_is_a_usage_error() {
    let out = run(&["construct", "spread", "--n", "3", "--d", "1", "--r", "6", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reached 5"));
}

#[test]
fn census_trace_and_json() {
    let out = run(&["census", "--variety", &data("twisted_cubic.var")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["edge_count"], 6);
    assert_eq!(v["v2_size"], 7);
    let out = run(&["census", "--variety", &data("twisted_cubic.var"), "--trace", "--seed", "7"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("|E| = 6 = 2 x 3 : ok"));
    let out = run(&["census", "--variety", &data("line_and_cubic.var"), "--linear", "L"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["v2_size"], 4);
}

#[test]
fn sweeps_pass_and_are_reproducible() {
    let a = run(&["sweep", "hypersurfaces", "--n", "2", "--q", "2", "--degree", "3"]);
    let b = run(&["sweep", "hypersurfaces", "--n", "2", "--q", "2", "--degree", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 1024);
    let out = run(&["sweep", "identity-grid", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["violations"], 0);
}

#[test]
fn sweep_over_budget() {
    let out = run(&["sweep", "hypersurfaces", "--n", "3", "--q", "2", "--degree", "2", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--variety", "/nonexistent.var"]).status.code(), Some(2));
    let out = run(&["bound", "--kind", "thm31", "--variety", &data("redundant.var")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("irredundant"));
}

#[test]
fn hilbert_lex_and_grevlex_agree() {
    let g = stdout_json(&run(&["hilbert", "--variety", &data("twisted_cubic.var")]));
    let l = stdout_json(&run(&["hilbert", "--variety", &data("twisted_cubic.var"), "--order", "lex"]));
    assert_eq!(g[0]["dim"], 1);
    assert_eq!(g[0]["degree"], 3);
    assert_eq!(g[0]["hilbert"], l[0]["hilbert"]);
}
