use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn eo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eo-theta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn strata_csv_for_n5_p7() {
    let o = eo(&["--format", "csv", "strata", "--n", "5", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,p,r,w_r,length"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].contains("8 7 7 7"), "{}", rows[0]);
}

#[test]
fn classify_fixtures() {
    for name in ["standard_3_2.json", "conjugate_3_2_f4.json"] {
        let o = eo(&["classify", fixture(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["class"]["r"], 2, "{name}");
        let checks = v["bt1"]["checks"].as_array().unwrap();
        assert!(checks.iter().all(|c| c["passed"] == true), "{name}");
        assert_eq!(v["w_r"], "[1 3 2]", "{name}");
    }
}

#[test]
fn malformed_input_exits_with_schema_code() {
    let dir = std::env::temp_dir().join(format!("eo-theta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"p": 2, "k": 1, "n": 3}"#).unwrap();
    assert_eq!(eo(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(eo(&["classify", dir.join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(eo(&["strata", "--n", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn theta_apply_on_igusa_coordinate() {
    let o = eo(&["theta-apply", fixture("section_igusa_t1.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], serde_json::json!([3, 2]));
    assert_eq!(v["w"], -1);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn hasse_invariant_is_killed() {
    let o = eo(&["theta-apply", fixture("section_hasse_4_2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn theta_check_and_filt_dims() {
    let o = eo(&["theta-check", "--n", "3", "--r", "2", "--p", "3", "--trunc", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = eo(&["filt-dims", "--spec", fixture("filt_request.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_ok());
}

#[test]
fn verify_all_small_grid_is_reproducible() {
    let args = ["--seed", "9", "verify-all", "--n", "3", "--p", "2,3"];
    let (a, b) = (eo(&args), eo(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
