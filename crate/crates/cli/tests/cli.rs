use std::path::PathBuf;
use std::process::{Command, Output};

fn qplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qplane")).args(args).output().expect("run qplane")
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qplane-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_small_run_passes() {
    let o = qplane(&["verify", "--suite", "qmul,koszul", "--trunc", "4", "--max-degree", "2", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(!v["cells"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--q", "1"][..],
        &["verify", "--q", "2", "--suite", "topology"],
        &["verify", "--backend", "float"],
        &["verify", "--suite", "nonsense"],
        &["verify", "--trunc", "1"],
        &["verify", "--bogus"],
        &["example8", "--q", "3"],
    ] {
        let o = qplane(args);
        assert_eq!(o.status.code(), Some(2), "{:?}", args);
    }
}

#[test]
fn malformed_and_invalid_modules_exit_2() {
    let broken = tmp("broken.json", "{ not json");
    let o = qplane(&["spectrum", "--module", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = tmp("bad.json", r#"{"q": "1/2", "T": [["0", "0"], ["1", "0"]], "S": [["1", "0"], ["0", "1"]]}"#);
    let o = qplane(&["spectrum", "--module", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TS = q⁻¹ST"));

    let o = qplane(&["spectrum", "--module", "/nonexistent/module.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn example8_reports_equality() {
    let o = qplane(&["example8", "--q", "(1+i)/4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "region equality: true");
}

#[test]
fn zero_module_spectrum_is_the_origin() {
    let m = tmp("zero.json", r#"{"q": "1/3", "T": [["0"]], "S": [["0"]]}"#);
    let o = qplane(&["spectrum", "--module", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let taylor = v["taylor"].as_array().unwrap();
    assert_eq!(taylor.len(), 1);
    assert_eq!(taylor[0]["value"]["re"], "0/1");
    assert_eq!(taylor[0]["value"]["im"], "0/1");
    assert_eq!(v["putinar"]["origin"], true);
}

#[test]
fn decompose_unit_has_one_component() {
    let o = qplane(&["decompose", "--q", "1/2", "--trunc", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["sum_matches"], true);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["d"], 0);
}

#[test]
fn qclosure_of_a_point_is_its_backward_orbit() {
    let r = tmp("region.json", r#"{"q": "1/2", "origin": false, "x": [{"kind": "finite_point_set", "points": ["3"]}], "y": []}"#);
    let o = qplane(&["qclosure", "--region", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["origin"], false);
    assert_eq!(v["x"], serde_json::json!([{"kind": "backward_orbit", "base": {"re": "3/1", "im": "0/1"}}]));
    assert_eq!(v["y"], serde_json::json!([]));
}

#[test]
fn qclosure_with_origin_is_everything() {
    let r = tmp("origin.json", r#"{"q": "1/2", "origin": true, "x": [], "y": []}"#);
    let o = qplane(&["qclosure", "--region", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["x"], serde_json::json!([{"kind": "full_axis"}]));
    assert_eq!(v["y"], serde_json::json!([{"kind": "full_axis"}]));
}

#[test]
fn plot_writes_svg() {
    let m = tmp("shift.json", r#"{"q": "1/2", "T": [["0", "0"], ["1", "0"]], "S": [["1", "0"], ["0", "1/2"]]}"#);
    let out = m.with_file_name("shift.svg");
    let o = qplane(&["plot", "--module", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
    assert!(svg.contains("polyline"));
}

#[test]
fn negative_q_is_a_value_not_a_flag() {
    let o = qplane(&["verify", "--q", "-1/2", "--suite", "qmul", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["q"]["re"], "-1/2");
}
