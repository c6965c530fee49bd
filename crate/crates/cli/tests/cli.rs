use std::path::PathBuf;
use std::process::Command;

use limcolim::json::{self, ESetJson};
use limcolim_cli::{run, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("limcolim").chain(args.iter().copied()))
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut v: Vec<&str> = args.to_vec();
    v.push("--json");
    let out = cli(&v);
    assert!(out.stderr.is_empty() || out.code == 2, "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn critical_on_two_bottom_chain() {
    let (code, v) = cli_json(&["poset", "critical", "--gallery", "two_bottom_chain", "--param", "k=3"]);
    assert_eq!(code, 0);
    assert_eq!(v["findings"], serde_json::json!({"critical": ["1"]}));
    let (_, f) = cli_json(&["poset", "critical", "--file", &fixture("two_bottoms.json")]);
    assert_eq!(f["findings"], v["findings"]);
}

#[test]
fn one_stage_system_is_bijective() {
    let (code, v) = cli_json(&["dirsys", "iota", "--system", &fixture("one_stage.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["findings"]["bijective"], true);
    assert_eq!(v["verdicts"]["injective"]["outcome"], "proven");
}

#[test]
fn collapse_system_colimit_is_a_point() {
    let (code, v) = cli_json(&["dirsys", "iota", "--system", &fixture("collapse.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["findings"]["codomain"].as_array().unwrap().len(), 1);
    assert_eq!(v["findings"]["domain"].as_array().unwrap().len(), 1);
}

#[test]
fn refutations_exit_one() {
    let out = cli(&["dirsys", "iota", "--gallery", "pinje", "--param", "h=4", "--horizon", "4"]);
    assert_eq!(out.code, 1);
    let out = cli(&["dirsys", "iota", "--gallery", "dyadic", "--param", "h=3", "--horizon", "3"]);
    assert_eq!(out.code, 1);
    let out = cli(&["dirsys", "iota", "--gallery", "cyclic_tower", "--horizon", "6"]);
    assert_eq!(out.code, 0);
}

#[test]
fn input_errors_exit_two_with_location() {
    let out = cli(&["poset", "analyze", "--file", &fixture("malformed.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
    let out = cli(&["monoid", "battery", "--file", &fixture("bad_arity.json")]);
    assert_eq!(out.code, 2);
    let out = cli(&["poset", "analyze"]);
    assert_eq!(out.code, 2);
    let out = cli(&["gallery", "run", "nope"]);
    assert_eq!(out.code, 2);
    let out = cli(&["no-such-group"]);
    assert_eq!(out.code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_limcolim");
    let st = Command::new(bin).args(["gallery", "list"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = Command::new(bin)
        .args(["dirsys", "iota", "--gallery", "pinje", "--param", "variant=empty", "--horizon", "6"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    let st = Command::new(bin).args(["eset", "limit", "--file", "/nonexistent.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn every_gallery_item_passes() {
    let (_, list) = cli_json(&["gallery", "list"]);
    for item in list["findings"]["items"].as_array().unwrap() {
        let name = item["name"].as_str().unwrap();
        let (code, v) = cli_json(&["gallery", "run", name]);
        assert_eq!(code, 0, "{name}: {v}");
        assert_eq!(v["findings"]["passed"], true);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["congruence", "minimal-gens", "--file", &fixture("c2_eset.json"), "--json"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("timing"));
}

#[test]
fn quotient_round_trips() {
    let (code, v) = cli_json(&["eset", "quotient", "--file", &fixture("c2_eset.json"), "--relation", &fixture("c2_relation.json")]);
    assert_eq!(code, 0);
    let classes = v["findings"]["congruence"]["classes"]["*"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    let emitted: ESetJson = serde_json::from_value(v["findings"]["quotient"].clone()).unwrap();
    let x = emitted.build().unwrap();
    assert_eq!(ESetJson::from_eset(&x), emitted);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, json::emit(&emitted)).unwrap();
    let (code, lim) = cli_json(&["eset", "limit", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(lim["findings"]["size"], 0);
}

#[test]
fn closure_reports_accounting() {
    let (code, v) = cli_json(&["congruence", "close", "--file", &fixture("c2_eset.json"), "--relation", &fixture("c2_relation.json")]);
    assert_eq!(code, 0);
    let f = &v["findings"];
    assert_eq!(f["merges"], 2);
    assert_eq!(f["initial_classes"], 4);
    assert_eq!(f["final_classes"], 2);
}

#[test]
fn bench_accounting_is_exact() {
    let (code, v) = cli_json(&["bench", "closure", "--elements", "10000", "--pairs", "3000", "--seed", "3"]);
    assert_eq!(code, 0);
    let f = &v["findings"];
    let (m, i, fin) = (f["merges"].as_u64().unwrap(), f["initial_classes"].as_u64().unwrap(), f["final_classes"].as_u64().unwrap());
    assert_eq!(m, i - fin);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn monoid_commands() {
    let (_, v) = cli_json(&["monoid", "congruences", "--file", &fixture("maxchain3.json")]);
    assert_eq!(v["findings"]["count"], 8);
    let (_, v) = cli_json(&["monoid", "multdiv", "--gallery", "maxchain_monoid", "--param", "k=3", "--min"]);
    assert_eq!(v["findings"]["multdiv"]["found"], serde_json::json!(["3"]));
    let (_, v) = cli_json(&["monoid", "battery", "--gallery", "rightzero_opposite", "--param", "s=2", "--opposite"]);
    assert_eq!(v["findings"]["right_zeros"], serde_json::json!(["z1", "z2"]));
    let (_, v) = cli_json(&["category", "emultdiv", "--file", &fixture("c2_category.json")]);
    assert!(v["findings"]["emultdiv"]["found"].is_array());
}

#[test]
fn human_rendering_carries_the_json_values() {
    let args = ["poset", "analyze", "--gallery", "diamond"];
    let (_, v) = cli_json(&args);
    let text = cli(&args).stdout;
    for key in ["critical", "minimal", "minimal_gathering_set"] {
        for name in v["findings"][key].as_array().unwrap() {
            assert!(text.contains(name.as_str().unwrap()));
        }
    }
    assert!(text.contains("critical: [m1, m2]"));
}

#[test]
fn dot_export() {
    let out = cli(&["poset", "dot", "--gallery", "diamond", "--dot"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("digraph"));
}

#[test]
fn stabilize_dyadic() {
    let (code, v) = cli_json(&["dirsys", "stabilize", "--gallery", "dyadic", "--gens", "1/2", "--element", "3/8", "--horizon", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["stabilization"], serde_json::json!({"outcome": "proven", "stage": 1}));
}

#[test]
fn category_validate_reports_presentation() {
    let (code, v) = cli_json(&["category", "validate", "--gallery", "two_bottom_chain", "--param", "k=2"]);
    assert_eq!(code, 0);
    assert_eq!(v["findings"]["trivial_eset_presentation"]["relations"]["size"], 1);
    assert_eq!(v["findings"]["conditions"]["b_gathers_a_everywhere"], true);
}
