use std::path::PathBuf;
use std::process::{Command, Output};

fn manifests() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("manifests")
}

fn manifest(name: &str) -> String {
    manifests().join(name).to_string_lossy().into_owned()
}

fn berger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berger"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_shipped_manifests() {
    for name in [
        "flat2.json",
        "flat4.json",
        "warped4.json",
        "flat2-killing.json",
    ] {
        let o = berger(&["validate", &manifest(name), "--samples", "60"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
    let o = berger(&[
        "validate",
        &manifest("tilted-alpha.json"),
        "--samples",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fv-alpha"));
}

#[test]
fn theorem_commands_refuse_invalid_charts_unless_forced() {
    let m = manifest("tilted-alpha.json");
    let o = berger(&[
        "harmonic",
        &m,
        "--direction",
        "to-deformed",
        "--samples",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--force"), "{}", stderr(&o));

    let o = berger(&[
        "harmonic",
        &m,
        "--direction",
        "to-deformed",
        "--samples",
        "20",
        "--force",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["forced"], true);
    assert_eq!(v["validation_failures"][0], "fv-alpha");
}

#[test]
fn compare_with_killing_manifest_runs_reduced_forms() {
    let o = berger(&[
        "compare",
        &manifest("flat2-killing.json"),
        "--samples",
        "40",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 18);
    assert!(v["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn map_tension_manifests() {
    for name in ["curve-into-flat2.json", "warped4-onto-plane.json"] {
        let o = berger(&["map-tension", &manifest(name), "--samples", "40", "--json"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}{}",
            stdout(&o),
            stderr(&o)
        );
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["command"], "map-tension");
        assert_eq!(v["results"][0]["pass"], true);
    }
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_dim = dir.path().join("bad-dim.json");
    std::fs::write(
        &bad_dim,
        r#"{"dimension": 4, "coordinates": ["a","b","c"],
            "metric": [["1","0","0"],["0","1","0"],["0","0","1"]],
            "domain": [[0,1],[0,1],[0,1]]}"#,
    )
    .unwrap();
    let o = berger(&["validate", bad_dim.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dimension mismatch"), "{}", stderr(&o));

    let bad_alpha = dir.path().join("bad-alpha.json");
    let text = std::fs::read_to_string(manifest("flat2.json"))
        .unwrap()
        .replace("1 + x^2", "x +");
    std::fs::write(&bad_alpha, text).unwrap();
    let o = berger(&["validate", bad_alpha.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("alpha: syntax error at offset 3"),
        "{}",
        stderr(&o)
    );

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(
        berger(&["validate", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let o = berger(&["report", "flat2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn report_json_carries_point_and_quantities() {
    let o = berger(&[
        "report",
        "flat2",
        "--point",
        "1,0",
        "--json",
        "--samples",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["point"], serde_json::json!([1.0, 0.0]));
    assert_eq!(v["quantities"]["alpha"], 2.0);
    let scalar = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["formula"] == "scalar")
        .unwrap();
    assert_eq!(scalar["closed_value"][0], 0.0);
}

#[test]
fn json_output_is_reproducible() {
    let args = [
        "compare",
        "flat2",
        "--seed",
        "3",
        "--samples",
        "30",
        "--json",
    ];
    let a = berger(&args);
    let b = berger(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = berger(&[
        "compare",
        "flat2",
        "--seed",
        "4",
        "--samples",
        "30",
        "--json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}
