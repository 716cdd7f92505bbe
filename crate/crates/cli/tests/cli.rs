use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn dgtan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgtan")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn workspace(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn t_hom_rows_for_the_rp2_model() {
    let o = dgtan(&["t-hom", "--cdga", "M", "--source", "1", "--target", "1", "--emit", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "# Hom(1, 1) over M\ndegree,algebra,cochain,cohomology\n\
         0,1,1,1\n1,0,0,0\n2,1,0,0\n3,1,1,0\n4,1,1,0\n5,1,0,0\n6,1,0,0\n7,1,1,0\n"
    );
    let o = dgtan(&["t-hom", "--cdga", "M", "--source", "1", "--target", "sign", "--emit", "json"]);
    let v = json(&o);
    assert_eq!(v["result"]["hom"]["cochain_dims"], serde_json::json!([0, 0, 1, 0, 0, 1, 1, 0]));
    assert_eq!(v["result"]["hom"]["cohomology"], serde_json::json!([0, 0, 1, 0, 0, 0, 0, 0]));
    assert_eq!(v["result"]["algebra_dims"], serde_json::json!([1, 0, 1, 1, 1, 1, 1, 1]));
}

#[test]
fn trivial_t_hom() {
    let v = json(&dgtan(&["t-hom", "--cdga", "Q", "--source", "1", "--target", "1", "--degree-bound", "3", "--emit", "json"]));
    assert_eq!(v["result"]["hom"]["cohomology"], serde_json::json!([1, 0, 0, 0]));
}

#[test]
fn cohomology_commands() {
    let v = json(&dgtan(&["cohomology", "--space", "rp2-6", "--group", "Z2", "--coeff", "sign", "--emit", "json"]));
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["report"]["cohomology"], serde_json::json!([0, 0, 1]));
    let v = json(&dgtan(&["cohomology", "--space", "simplex2", "--emit", "json"]));
    assert_eq!(v["result"]["report"]["cohomology"], serde_json::json!([1, 0, 0]));
    let o = dgtan(&["cohomology", "--space", "boundary2", "--weight-cap", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not stabilized up to weight cap 0"));
    let v = json(&dgtan(&["tdr-hom", "--space", "rp2-6", "--group", "Z2", "--source", "sign", "--target", "sign", "--emit", "json"]));
    assert_eq!(v["result"]["report"]["cohomology"], serde_json::json!([1, 0, 0]));
}

#[test]
fn tannaka_and_structural_checks() {
    let v = json(&dgtan(&["tannaka", "--group", "Z2", "--emit", "json"]));
    assert_eq!((v["status"].as_str(), v["result"]["reconstructed_order"].as_u64()), (Some("pass"), Some(2)));
    let o = dgtan(&["verify", "--check", "regular-iso", "--cdga", "M", "--degree-bound", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = dgtan(&["verify", "--check", "pushout", "--cdga", "Q-Z2", "--degree-bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = dgtan(&["verify", "--check", "phi", "--space", "rp2-1", "--group", "Z2", "--target", "sign", "--degree-bound", "2", "--weight-cap", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // the universal cover of a circle is infinite
    let o = dgtan(&["verify", "--check", "phi", "--space", "boundary2", "--group", "Z2", "--degree-bound", "1", "--weight-cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

const HOMOTOPY_WS: &str = r#"{
  "cdgas": {
    "X": {"group": "Z1", "generators": [{"name": "x", "degree": 2}]},
    "Y": {"group": "Z1", "generators": [{"name": "y", "degree": 2}]}
  },
  "homotopies": {
    "constant": {
      "source": "X", "target": "Y",
      "f1": {"group_map": {"e": "e"}, "generators": {"x": [{"coeff": "1", "monomial": [["y", 1]]}]}},
      "f2": {"group_map": {"e": "e"}, "generators": {"x": [{"coeff": "1", "monomial": [["y", 1]]}]}},
      "homotopy": {"x": [{"coeff": "1", "monomial": [["y", 1]]}]}
    },
    "corrupted": {
      "source": "X", "target": "Y",
      "f1": {"group_map": {"e": "e"}, "generators": {}},
      "f2": {"group_map": {"e": "e"}, "generators": {"x": [{"coeff": "1", "monomial": [["y", 1]]}]}},
      "homotopy": {}
    }
  }
}"#;

#[test]
fn homotopy_verdicts() {
    let ws = workspace(HOMOTOPY_WS);
    let path = ws.path().to_str().unwrap();
    let o = dgtan(&["--workspace", path, "verify", "--check", "homotopy", "--candidate", "constant"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dgtan(&["--workspace", path, "verify", "--check", "homotopy", "--candidate", "corrupted", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failures = v["result"]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().contains("(x)")), "{failures:?}");
}

#[test]
fn workspace_objects() {
    let ws = workspace(
        r#"{
      "groups": {"C2": {"elements": ["1", "a"], "table": [[0, 1], [1, 0]]}},
      "representations": {"alt": {"group": "C2", "dim": 1, "matrices": {"1": [["1"]], "a": [["-1"]]}}},
      "spaces": {"loop": {"dim": 1, "simplices": [["v"], ["l"]], "faces": {"l": [{"degeneracies": [], "target": "v"}, {"degeneracies": [], "target": "v"}]}, "base": "v"}},
      "labelings": {"wrap": {"space": "loop", "group": "C2", "edges": {"l": "a"}}}
    }"#,
    );
    let path = ws.path().to_str().unwrap();
    let args = ["--workspace", path, "cohomology", "--space", "loop", "--group", "C2", "--labeling", "wrap", "--coeff", "alt", "--emit", "json"];
    let v = json(&dgtan(&args));
    assert_eq!(v["result"]["report"]["cohomology"], serde_json::json!([0, 0]));
    let args = ["--workspace", path, "cohomology", "--space", "loop", "--group", "C2", "--coeff", "trivial", "--emit", "json"];
    assert_eq!(json(&dgtan(&args))["result"]["report"]["cohomology"], serde_json::json!([1, 1]));
    let o = dgtan(&["--workspace", path, "fixtures", "--kind", "labeling"]);
    assert!(stdout(&o).contains("wrap"));

    let broken = workspace(r#"{"labelings": {"w": {"space": "nowhere", "group": "Z2", "edges": {}}}}"#);
    let o = dgtan(&["--workspace", broken.path().to_str().unwrap(), "fixtures"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere"));
}

#[test]
fn exit_codes_for_bad_input_and_budgets() {
    assert_eq!(dgtan(&["cohomology", "--space", "nope"]).status.code(), Some(2));
    assert_eq!(dgtan(&["t-hom", "--cdga", "M", "--source", "tensor(1", "--target", "1"]).status.code(), Some(2));
    assert_eq!(dgtan(&["cohomology", "--space", "simplex2", "--group", "Z2", "--coeff", "sign"]).status.code(), Some(2));
    assert_eq!(dgtan(&["verify", "--check", "regular-iso"]).status.code(), Some(2));
    assert_eq!(dgtan(&["words", "--alphabet", "a", "--depth", "3"]).status.code(), Some(3));
    assert_eq!(dgtan(&["--workspace", "/nonexistent.json", "fixtures"]).status.code(), Some(2));
}

#[test]
fn words_listing() {
    let v = json(&dgtan(&["words", "--alphabet", "a", "--depth", "1", "--emit", "json"]));
    let words = v["result"]["words"].as_array().unwrap();
    assert_eq!(words.len(), 30);
    assert_eq!(words[3], "tensor(a,a)");
}

#[test]
fn output_is_deterministic() {
    for emit in ["json", "csv", "pretty"] {
        let args = ["verify", "--check", "pushout", "--cdga", "M", "--degree-bound", "3", "--emit", emit];
        assert_eq!(dgtan(&args).stdout, dgtan(&args).stdout);
    }
}
