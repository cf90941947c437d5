use std::process::{Command, Output};

fn cell24(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cell24"))
        .args(args)
        .env_remove("CELL24_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = cell24(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn energy_of_d4() {
    let o = cell24(&["energy", "--code", "d4", "--potential", "riesz:1"]);
    assert_eq!(o.status.code(), Some(0));
    let e: f64 = stdout(&o).trim().parse().unwrap();
    assert!((e - 668.0).abs() < 1e-9);
    let v = json(&["energy", "--code", "d4", "--potential", "pow1:8"]);
    assert!((v["energy"].as_f64().unwrap() - 5065.5).abs() < 1e-9);
}

#[test]
fn hex_design_strength() {
    let v = json(&["design-strength", "--code", "hex:0.11,0.57,0.93"]);
    assert_eq!(v["strength"], 5);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cell24(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cell24(&["energy", "--code", "cube", "--potential", "riesz:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cell24(&["energy", "--code", "d4", "--potential", "riesz:-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cell24(&["energy", "--code", "ctheta:0", "--potential", "riesz:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cell24(&["proposition", "--k-min", "5", "--k-max", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verification_commands_pass() {
    for args in [
        vec!["k3-identity"],
        vec!["three-design"],
        vec!["tail-criterion"],
        vec!["genfun-check", "--theta", "0.3", "1.7"],
        vec!["hessian-table", "--potential", "riesz:1", "pow1:6", "exp:6"],
        vec!["lemma", "--k-min", "0", "--k-max", "12"],
        vec!["proposition", "--k-min", "0", "--k-max", "14"],
    ] {
        let o = cell24(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn proposition_partial_range() {
    let v = json(&["proposition", "--k-min", "7", "--k-max", "9"]);
    let flags: Vec<bool> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["attains_positive"].as_bool().unwrap())
        .collect();
    assert_eq!(flags, vec![false, true, true]);
}

#[test]
fn out_file_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = cell24(&[
        "scan-theta",
        "--potential",
        "pow1:8",
        "--grid",
        "2000",
        "--csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let body = std::fs::read_to_string(&out).unwrap();
    assert!(body.starts_with("theta,energy\n"));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("scan.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "scan-theta");
    assert_eq!(manifest["exit_code"], 0);
    use sha2::Digest;
    let digest: String = sha2::Sha256::digest(body.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(manifest["outputs"][0]["sha256"], digest);
}

#[test]
fn seeded_runs_are_reproducible() {
    let a = cell24(&[
        "basin",
        "--potential",
        "riesz:1",
        "--trials",
        "4",
        "--seed",
        "9",
        "--json",
    ]);
    let b = cell24(&[
        "basin",
        "--potential",
        "riesz:1",
        "--trials",
        "4",
        "--seed",
        "9",
        "--json",
        "--threads",
        "1",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let m: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&a.stderr).trim()).unwrap();
    assert_eq!(m["seeds"], serde_json::json!([9]));
    let g1 = cell24(&["gen", "--code", "random:24:5", "--json"]);
    let g2 = cell24(&["gen", "--code", "random:24:5", "--json"]);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn file_codes_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let o = cell24(&[
        "gen",
        "--code",
        "ctheta:2.5",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let spec = format!("file:{}", path.display());
    let a = json(&["energy", "--code", &spec, "--potential", "pow1:8"]);
    let b = json(&["energy", "--code", "ctheta:2.5", "--potential", "pow1:8"]);
    assert_eq!(a["energy"], b["energy"]);
}

#[test]
fn dynamics_commands() {
    let v = json(&["critical-points", "--potential", "riesz:1"]);
    let negs: Vec<u64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["negative_count"].as_u64().unwrap())
        .collect();
    assert!(negs.contains(&0) && negs.contains(&22) && negs.contains(&36));
    let r = json(&[
        "gradient-residual",
        "--potential",
        "pow1:8",
        "--theta",
        "1.0",
        "2.0",
    ]);
    assert!(r
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["residual"].as_f64().unwrap() < 1e-8));
    let d = json(&["descend", "--code", "ctheta:2.5", "--potential", "pow1:8"]);
    assert!(d["energy"].as_f64().unwrap() <= 5064.96);
    let h = json(&["hessian", "--code", "d4", "--potential", "pow1:6"]);
    assert_eq!(h["zero_count"], 6);
}

#[test]
fn hexagon_claim_and_hopf() {
    let v = json(&["hexagon-claim"]);
    assert_eq!(v["hexagon_count"], 16);
    assert_eq!(v["automorphism_count"], 1152);
    assert_eq!(v["claim"]["holds"], true);
    let h = json(&["hopf", "--code", "hex:0.3,1.1,2.0"]);
    assert_eq!(h["regular_tetrahedron"], true);
}
