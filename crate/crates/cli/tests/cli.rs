use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apmagic"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .env_remove("APMAGIC_JOBS")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn verify_lo_shu() {
    assert!(stdout(&["verify", "fixtures/loshu.txt"]).starts_with("magic, K=15\n"));
}

#[test]
fn verify_parker_json() {
    let line = stdout(&["verify", "--roots", "fixtures/parker.txt", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["classification"], "semi-magic");
    assert_eq!(v["constants"], serde_json::json!([3051, 4107]));
}

#[test]
fn pairs_for_840() {
    let out = stdout(&["pairs", "--sum", "840", "--json"]);
    let rows: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["offsets"], serde_json::json!([2, 58, 80]));
    assert_eq!(rows[1]["kappa"], "7/5");
}

#[test]
fn triples_for_24() {
    assert_eq!(stdout(&["triples", "--sum", "24"]), "1² 5² 7²\n");
}

#[test]
fn kappa_roots() {
    let out = stdout(&["kappa", "--alpha", "6/1"]);
    assert!(out.contains("kappa = 2\n"));
    assert!(out.contains("kappa = 3 (first offset negative)\n"));
}

#[test]
fn decompose_generated_grid() {
    let dir = std::env::temp_dir().join(format!("apmagic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.txt");
    std::fs::write(&path, "3\n2 7 6\n9 5 1\n4 3 8\n").unwrap();
    let out = stdout(&["decompose", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["magic_constant"], 15);
    assert_eq!(v["center"], 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scan_is_identical_across_job_counts() {
    let one = stdout(&["scan", "--max-root", "3000", "--min-reps", "2", "--json", "--jobs", "1"]);
    let two = stdout(&["scan", "--max-root", "3000", "--min-reps", "2", "--json", "--jobs", "2"]);
    assert_eq!(one, two);
    assert!(one.lines().count() > 0);
}

#[test]
fn audit_by_sum() {
    let out = stdout(&["audit", "--sum", "840", "--json"]);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["pairs"]).status.code(), Some(1));
    assert_eq!(
        run(&["audit", "--sum", "840", "--max-root", "10"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["kappa", "--alpha", "0/1"]).status.code(), Some(1));
}

#[test]
fn missing_file_exits_2_and_names_it() {
    let out = run(&["verify", "no/such/grid.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/grid.txt"));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
