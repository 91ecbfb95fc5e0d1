use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn inertia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inertia")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const C3XC5: &str = r#"{"ell": 5, "precision": 16, "rep": {"builder": "c3xc5"}}"#;

#[test]
fn embed_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", C3XC5);
    let cert = dir.path().join("cert.json");
    let out = inertia(&["embed", &input, "--seed", "3", "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&cert).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["dim"], 6);
    let out = inertia(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS homomorphism"));
}

#[test]
fn embed_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", r#"{"ell": 5, "rep": {"builder": "c11sd5"}}"#);
    let a = inertia(&["embed", &input, "--seed", "9"]);
    let b = inertia(&["embed", &input, "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tampered_and_truncated_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", C3XC5);
    let out = inertia(&["embed", &input]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();

    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &mut json["images"][1][0][0][0];
    *entry = serde_json::json!(entry.as_u64().unwrap() ^ 1);
    let tampered = write(dir.path(), "tampered.json", &json.to_string());
    let out = inertia(&["verify", &tampered]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let truncated = write(dir.path(), "truncated.json", &text[..text.len() / 2]);
    assert_eq!(code(&inertia(&["verify", &truncated])), 2);
}

#[test]
fn ell_three_requires_force() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", r#"{"ell": 3, "rep": {"builder": "ell3-budget-probe"}}"#);
    assert_eq!(code(&inertia(&["embed", &input])), 5);
    // With --force the probe runs into the dimension budget.
    assert_eq!(code(&inertia(&["embed", &input, "--force"])), 4);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", r#"{"ell": 5, "rep": "#);
    assert_eq!(code(&inertia(&["embed", &input])), 2);
}

#[test]
fn non_inertia_group_exits_three() {
    // In D5 at ell = 5 the elements of order prime to 5 are the reflections,
    // which do not form a subgroup.
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "in.json",
        r#"{"ell": 5, "group": {"family": {"kind": "dihedral", "n": 5}},
            "rep": {"dim": 2, "generator_images": []}}"#,
    );
    let out = inertia(&["embed", &input]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn demo_families() {
    let out = inertia(&["demo", "--family", "c41sd5"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("#iota(L) = 5"));
    let out = inertia(&["demo", "--family", "q8", "--ell", "7"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Sp_2"));
    assert_eq!(code(&inertia(&["demo", "--family", "c7"])), 2);
}

#[test]
fn selftest_small_corpus() {
    let out = inertia(&["selftest", "--seed", "2", "--corpus-size", "2", "--arithmetic-samples", "200"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn documented_examples_embed() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    for name in ["c3xc5.json", "c6-table.json"] {
        let path = dir.join(name);
        let out = inertia(&["embed", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
