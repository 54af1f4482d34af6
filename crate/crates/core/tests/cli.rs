use std::path::Path;
use std::process::{Command, Output};

fn qsf(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsf"))
        .args(args)
        .current_dir(dir)
        .env_remove("QSF_SEED")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_validate_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = qsf(&["generate", "G_1q_XY_XZ_N1N6_D", "--num-ex", "2", "--M", "64", "--K", "5", "--out", "out"], d);
    assert_eq!(code(&g), 0, "{}", String::from_utf8_lossy(&g.stderr));
    let zip = d.join("out/G_1q_XY_XZ_N1N6_D.zip");
    assert!(zip.is_file());
    assert!(!d.join("out/G_1q_XY_XZ_N1N6_D.partial").exists());

    let v = qsf(&["validate", "--json", zip.to_str().unwrap()], d);
    assert_eq!(code(&v), 0);
    let reports: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert!(reports[0]["checks"].as_array().unwrap().len() >= 8);

    let i = qsf(&["inspect", zip.to_str().unwrap(), "--index", "1"], d);
    assert_eq!(code(&i), 0);
    assert!(String::from_utf8_lossy(&i.stdout).contains("E_O"));

    let dump = qsf(&["inspect", zip.to_str().unwrap(), "--dump"], d);
    let doc: serde_json::Value = serde_json::from_slice(&dump.stdout).unwrap();
    assert_eq!(doc["fields"]["noise"]["shape"], serde_json::json!([1, 64, 5, 2]));

    let again = qsf(&["generate", "G_1q_XY_XZ_N1N6_D", "--num-ex", "2", "--M", "64", "--K", "5", "--out", "out", "--validate-only"], d);
    assert_eq!(code(&again), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&qsf(&[], d)), 1);
    assert_eq!(code(&qsf(&["frobnicate"], d)), 1);
    assert_eq!(code(&qsf(&["--help"], d)), 0);
    assert_eq!(code(&qsf(&["generate", "G_3q_X", "--out", "o"], d)), 1);
    assert_eq!(code(&qsf(&["generate", "G_1q_X", "--M", "abc"], d)), 1);
    assert_eq!(code(&qsf(&["validate", "missing.zip"], d)), 3);

    let g = qsf(&["generate", "G_1q_X", "--num-ex", "1", "--M", "16", "--K", "2", "--out", "o"], d);
    assert_eq!(code(&g), 0);
    assert_eq!(code(&qsf(&["inspect", "o/G_1q_X.zip", "--index", "3"], d)), 1);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |out: &str, seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qsf"));
        c.args(["generate", "G_1q_X_Z_N3", "--num-ex", "1", "--M", "32", "--K", "3", "--out", out]).current_dir(d);
        match seed {
            Some(s) => c.env("QSF_SEED", s),
            None => c.env_remove("QSF_SEED"),
        };
        assert!(c.output().unwrap().status.success());
        std::fs::read(d.join(out).join("G_1q_X_Z_N3.zip")).unwrap()
    };
    let a = run("a", Some("77"));
    let b = run("b", Some("77"));
    let z = run("z", None);
    assert_eq!(a, b);
    assert_ne!(a, z);
}
