use assert_cmd::Command;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::cargo_bin("p3pstrat").unwrap();
    c.env_remove("P3PSTRAT_TOLERANCES");
    c
}

fn stdout_json(args: &[&str]) -> Value {
    let out = bin().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn unknown_suite_is_a_usage_error() {
    bin().args(["verify", "--suite", "bogus"]).assert().code(2);
}

#[test]
fn cylinder_point_has_a_double_root() {
    let v = stdout_json(&["solve", "--triangle", "5,4,3", "--center", "4,2,1"]);
    let mus: Vec<u64> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mus.iter().sum::<u64>(), 4);
    assert!(mus.contains(&2), "{mus:?}");
    let c = stdout_json(&["classify", "--triangle", "5,4,3", "--center", "4,2,1", "--json"]);
    assert_eq!(c["label"], "DangerCylinder");
    assert_eq!(c["exact"], true);
}

#[test]
fn cosines_and_scene_inputs() {
    let v = stdout_json(&["solve", "--triangle", "sqrt(2),1,1", "--cosines", "0.1,0.2,1/3"]);
    assert_eq!(v["continuum"], false);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    std::fs::write(
        &path,
        r#"{"triangle": {"s12": 7, "s13": 6, "s23": 5}, "centers": [{"x": 1, "y": 2, "z": 3}, {"x": 2, "y": 1, "z": "1/2"}]}"#,
    )
    .unwrap();
    let v = stdout_json(&["solve", "--scene", path.to_str().unwrap()]);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn bad_input_names_the_field() {
    let out = bin()
        .args(["solve", "--triangle", "1,1,3", "--center", "0,0,1"])
        .assert()
        .failure()
        .get_output()
        .stderr
        .clone();
    assert!(String::from_utf8_lossy(&out).contains("triangle"));
}

#[test]
fn sweep_writes_csv_header() {
    let out = bin()
        .args(["sweep", "--triangle", "7,6,5", "--theta-samples", "8", "--height-samples", "4"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,h,Ox,Oy,Oz,mu,branch_index,e1p,e2p,e3p,Opx,Opy,Opz,on_generatrix"
    );
    assert!(lines.all(|l| l.split(',').count() == 14));
}

#[test]
fn solver_suite_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    bin()
        .args(["verify", "--suite", "solver", "--report", path.to_str().unwrap()])
        .assert()
        .success();
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["suite"], "solver");
    assert_eq!(r["failed"], 0);
}

#[test]
fn broken_tolerance_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tol.json");
    std::fs::write(&path, "{\"tau_rank\": \"x\"}").unwrap();
    bin()
        .env("P3PSTRAT_TOLERANCES", &path)
        .args(["morley", "--triangle", "7,6,5"])
        .assert()
        .failure();
}
