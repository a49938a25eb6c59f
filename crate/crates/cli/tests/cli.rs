use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn toda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda"))
        .args(args)
        .env_remove("TODA_CACHE_DIR")
        .output()
        .expect("spawn toda")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli-tests")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn verify_a2_default_exits_zero() {
    let dir = scratch("verify-a2");
    let out = dir.join("report.json");
    let o = toda(&[
        "verify",
        "--type",
        "A2",
        "--chamber",
        "1,4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = json(&out);
    let payload = &report["payload"];
    assert_eq!(payload["all_matched"], Value::Bool(true));
    assert_eq!(payload["elements"].as_array().unwrap().len(), 6);
    let s1 = payload["elements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["word_string"] == "s1")
        .unwrap();
    let exact: Vec<&str> = s1["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["exact"].as_str().unwrap())
        .collect();
    assert_eq!(exact, ["1", "0"]);
}

#[test]
fn corrupted_q_fails_but_still_writes_report() {
    let dir = scratch("corrupt");
    let out = dir.join("report.json");
    let o = toda(&[
        "verify",
        "--type",
        "A2",
        "--tau",
        "s1",
        "--corrupt-q",
        "1.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&out)["payload"]["all_matched"], Value::Bool(false));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["verify", "--type", "Q3"],
        vec!["verify", "--type", "A2", "--gammas", "-1,0"],
        vec!["verify", "--type", "A2", "--tau", "s5"],
        vec!["atlas", "--type", "A2", "--chamber", "1,-2"],
        vec!["profile", "--type", "A2"],
        vec![
            "profile", "--type", "A2", "--tau", "s1", "--gammas", "0.5,0", "--blowup",
        ],
        vec!["verify", "--bogus"],
    ] {
        assert_eq!(toda(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn atlas_is_byte_identical_across_runs() {
    let dir = scratch("atlas");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let o = toda(&[
            "atlas",
            "--type",
            "B2",
            "--gammas",
            "1/3,0",
            "--reproducible",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = dir.join("c.json");
    assert!(toda(&[
        "atlas",
        "--type",
        "B2",
        "--gammas",
        "1/3,0",
        "--out",
        c.to_str().unwrap()
    ])
    .status
    .success());
    let (ja, jc) = (json(&a), json(&c));
    assert!(jc["header"]["generated_unix"].is_u64());
    assert!(ja["header"].get("generated_unix").is_none());
    assert_eq!(ja["payload"], jc["payload"]);
}

#[test]
fn atlas_a2_and_a1_entries() {
    let dir = scratch("atlas-entries");
    let a2 = dir.join("a2.json");
    assert!(
        toda(&["atlas", "--type", "A2", "--out", a2.to_str().unwrap()])
            .status
            .success()
    );
    let elements = json(&a2)["payload"]["elements"].as_array().unwrap().clone();
    assert_eq!(elements.len(), 6);
    let lengths: Vec<u64> = elements
        .iter()
        .map(|e| e["length"].as_u64().unwrap())
        .collect();
    assert_eq!(lengths, [0, 1, 1, 2, 2, 3]);
    let s1 = elements.iter().find(|e| e["word_string"] == "s1").unwrap();
    assert_eq!(s1["mass_vector"], serde_json::json!(["1", "0"]));

    let a1 = dir.join("a1.json");
    assert!(toda(&[
        "atlas",
        "--type",
        "A1",
        "--gammas",
        "3/10",
        "--out",
        a1.to_str().unwrap()
    ])
    .status
    .success());
    let masses: Vec<Value> = json(&a1)["payload"]["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["mass_vector"][0].clone())
        .collect();
    assert_eq!(masses, [Value::from("0"), Value::from("13/10")]);
}

#[test]
fn rep_info_reports_dimensions() {
    let dir = scratch("rep-info");
    let out = dir.join("a2.json");
    assert!(
        toda(&["rep-info", "--type", "A2", "--out", out.to_str().unwrap()])
            .status
            .success()
    );
    let reps = json(&out)["payload"]["representations"]
        .as_array()
        .unwrap()
        .clone();
    let dims: Vec<(u64, u64)> = reps
        .iter()
        .map(|r| (r["dim"].as_u64().unwrap(), r["weyl_dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(dims, [(3, 3), (3, 3)]);
    assert!(reps.iter().all(|r| r["relations_ok"] == Value::Bool(true)));
}

#[test]
fn section4_profile_matches_closed_form() {
    let o = toda(&[
        "profile",
        "--type",
        "A2",
        "--tau",
        "s1",
        "--chamber",
        "1,4",
        "--k-values",
        "100",
        "--radii",
        "1",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let header = &rows[0];
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let row: Vec<f64> = rows[1].iter().map(|v| v.parse().unwrap()).collect();
    let k: f64 = 100.0;
    let u = -(k + k * k + 1.0 / (4.0 * k.powi(3))).ln();
    let v = -(k.powi(3) + 1.0 / (k * k) + 1.0 / (4.0 * k)).ln();
    assert!((row[col("U_1")] - u).abs() <= 1e-12 * u.abs());
    assert!((row[col("U_2")] - v).abs() <= 1e-12 * v.abs());
}

#[test]
fn profile_residuals_stay_small() {
    let o = toda(&[
        "profile", "--type", "B2", "--tau", "s1 s2", "--gammas", "1/2,-1/3", "--format", "csv",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let res: Vec<usize> = rows[0]
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("residual_"))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(rows.len(), 1 + 3 * 25);
    for row in &rows[1..] {
        for &c in &res {
            assert!(row[c].parse::<f64>().unwrap().abs() <= 1e-8, "{row:?}");
        }
    }
}

#[test]
fn config_file_round_trip_gives_identical_payload() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    let first = dir.join("first.json");
    let second = dir.join("second.json");
    let o = toda(&[
        "verify",
        "--type",
        "B2",
        "--gammas=-1/4,1/2",
        "--tau",
        "s2 s1",
        "--radius",
        "0.05",
        "--reproducible",
        "--save-config",
        cfg.to_str().unwrap(),
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = toda(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn flags_override_config_file() {
    let dir = scratch("override");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "type=A2\nformat=json\n# comment\n").unwrap();
    let o = toda(&[
        "atlas",
        "--config",
        cfg.to_str().unwrap(),
        "--type",
        "A1",
        "--format",
        "csv",
        "--reproducible",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 3);
    std::fs::write(&cfg, "type=A2\nshape=round\n").unwrap();
    assert_eq!(
        toda(&["atlas", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cache_is_written_reused_and_repaired() {
    let dir = scratch("cache");
    let out = dir.join("info.json");
    let args = [
        "rep-info",
        "--type",
        "G2",
        "--reproducible",
        "--cache-dir",
        dir.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    assert!(toda(&args).status.success());
    let first = std::fs::read(&out).unwrap();
    let entry = dir.join("G2-omega2.json");
    assert!(entry.exists());
    assert!(toda(&args).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let text = std::fs::read_to_string(&entry)
        .unwrap()
        .replacen("\"dim\":14", "\"dim\":13", 1);
    std::fs::write(&entry, text).unwrap();
    let o = toda(&args);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("discarding cache entry"));
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let env_dir = scratch("cache-env");
    let o = Command::new(env!("CARGO_BIN_EXE_toda"))
        .args(["rep-info", "--type", "A3", "--out", out.to_str().unwrap()])
        .env("TODA_CACHE_DIR", &env_dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(env_dir.join("A3-omega2.json").exists());
}
