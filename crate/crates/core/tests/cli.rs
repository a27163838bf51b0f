mod common;

use std::process::Command;

use common::fixture_path;

fn loday(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_loday")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_system_planar() {
    let (code, stdout, stderr) = loday(&["verify-system", "--kind", "planar", "--max-total", "5"]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("1,3,11,45,197"));
    assert!(stderr.contains("elapsed:"));
}

#[test]
fn compare_differentials_trias() {
    let (code, stdout, _) = loday(&["--format", "machine", "compare-differentials", &fixture_path("trias_dim1.alg"), "--max-degree", "3"]);
    assert_eq!(code, 0, "{stdout}");
    for n in 1..=3 {
        assert!(stdout.contains(&format!("CHECK comparison-{n} PASS")));
    }
}

#[test]
fn broken_axiom_exit_code_and_citation() {
    let (code, stdout, _) = loday(&["verify-algebra", &fixture_path("broken_trias_axiom7.alg")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("[FAIL] axiom-7: (x ⊥ y) ⊣ z = x ⊥ (y ⊣ z)"), "{stdout}");
}

#[test]
fn machine_report_shape() {
    let (code, stdout, stderr) = loday(&["--format", "machine", "cohomology", &fixture_path("dias_dim2.alg"), "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().all(|l| l.starts_with("# ") || l.starts_with("CHECK ")));
    assert!(stdout.contains("# note = cochains start in degree 1"));
    assert!(stdout.contains("# table.cohomology.row = 1 4 2 2 0 2\n"));
    assert!(!stdout.contains("elapsed"));
    assert!(!stderr.contains("warning"));
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("loday-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "type = \"dias\"\nfield = \"Fp:6\"\ndim = 1\n").unwrap();
    let (code, stdout, stderr) = loday(&["verify-algebra", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("modulus not prime: 6"), "{stderr}");

    let (code, _, stderr) = loday(&["cohomology", &fixture_path("broken_trias_axiom1.alg")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("pi o pi"), "{stderr}");

    assert_eq!(loday(&["gerstenhaber"]).0, 2);
    assert_eq!(loday(&["--threads", "0", "verify-system", "--kind", "linear"]).0, 2);
}

#[test]
fn missing_operation_warns_on_stderr() {
    let dir = std::env::temp_dir().join(format!("loday-cli-warn-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("trias.alg");
    std::fs::write(&file, "type = \"trias\"\nfield = \"Q\"\ndim = 1\n\n[ops]\nleft = [[0, 0, 0, 1]]\nright = [[0, 0, 0, 1]]\n").unwrap();
    let (code, stdout, stderr) = loday(&["verify-algebra", file.to_str().unwrap()]);
    assert!(stderr.contains("warning: operation `middle` missing"), "{stderr}");
    assert!(!stdout.contains("warning"));
    // e1 ⊥ e1 = 0 breaks the axioms that mix ⊥ with the other products
    assert_eq!(code, 1);
}

#[test]
fn matrix_dump_and_seeded_identities() {
    let dir = std::env::temp_dir().join(format!("loday-cli-dump-{}", std::process::id()));
    let (code, _, _) = loday(&["cohomology", &fixture_path("trias_dim2.alg"), "--max-degree", "2", "--dump-matrices", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let d1 = std::fs::read_to_string(dir.join("d1.triplets")).unwrap();
    assert!(d1.starts_with("24 4 "), "{d1}");

    let run = |seed: &str| loday(&["--format", "machine", "identities", &fixture_path("tricub_dim1.alg"), "--samples", "20", "--seed", seed]);
    let (a, b) = (run("3"), run("3"));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.contains("# command = identities"));
    assert!(a.1.contains("--seed 3"));
}
