use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nclcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nclcs")).args(args).env_remove("NCLCS_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn cell_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = match fs::read_dir(dir) {
        Ok(rd) => rd.map(|e| e.unwrap().file_name().into_string().unwrap()).filter(|n| n.ends_with(".cell")).collect(),
        Err(_) => Vec::new(),
    };
    names.sort();
    names
}

#[test]
fn text_table_layout() {
    let o = nclcs(&["hilbert", "--n", "2", "--max-len", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("H_2(u,t) =\n  (u)\n+ (2u)t\n+ (3u + u^2)t^2\n"));
    assert!(text.contains("+ (6u + 3u^2 + 4u^3 + 3u^4)t^4\n"));
    assert!(text.ends_with("+ O(t^5)\n"));
}

#[test]
fn commutative_table() {
    let o = nclcs(&["hilbert", "--n", "1", "--max-len", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    for row in rows {
        let cols: Vec<u64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[2], u64::from(cols[1] == 1), "{row}");
    }
}

#[test]
fn k_max_truncates_columns() {
    let o = nclcs(&["hilbert", "--n", "2", "--max-len", "6", "--k-max", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("6,1,14\n6,2,5\n"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&nclcs(&["verify", "no-such-suite"])), 64);
    assert_eq!(code(&nclcs(&["hilbert", "--n", "2"])), 64);
    assert_eq!(code(&nclcs(&["hilbert", "--n", "2", "--max-len", "3", "--threads", "0"])), 64);
    assert_eq!(code(&nclcs(&["hilbert", "--n", "2", "--max-len", "3", "--prime", "7"])), 64);
    assert_eq!(
        code(&nclcs(&["hilbert", "--n", "2", "--max-len", "3", "--field", "rational", "--prime", "2147483647"])),
        64
    );
    assert_eq!(code(&nclcs(&["verify", "theorem-1-3", "--n", "3"])), 64);
    assert_eq!(code(&nclcs(&["chars", "--n", "2", "--k", "1", "--max-len", "3"])), 64);
    assert_eq!(code(&nclcs(&["--help"])), 0);
}

#[test]
fn budget_exceeded_exits_2() {
    let o = nclcs(&["hilbert", "--n", "3", "--max-len", "6", "--budget", "100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn suites_pass_at_default_scale() {
    for suite in ["theorem-1-3", "theorem-1-4", "theorem-2-2", "identities", "star-assoc", "lambda2", "oracles"] {
        let o = nclcs(&["verify", suite, "--format", "json"]);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
        let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(report["version"], 1);
        assert_eq!(report["suite"], suite);
        assert_eq!(report["passed"], true);
        assert!(!report["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn seeded_output_is_byte_identical() {
    for args in [
        &["verify", "star-assoc", "--seed", "5", "--format", "json", "--cases", "20"][..],
        &["hilbert", "--n", "3", "--max-len", "5", "--field", "two-prime", "--seed", "5", "--format", "json"][..],
        &["chars", "--n", "3", "--k", "4", "--max-len", "6", "--format", "json", "--threads", "2"][..],
    ] {
        let a = nclcs(args);
        let b = nclcs(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let one = nclcs(&["hilbert", "--n", "3", "--max-len", "6", "--threads", "1"]);
    let four = nclcs(&["hilbert", "--n", "3", "--max-len", "6", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn field_modes_agree() {
    let prime = nclcs(&["hilbert", "--n", "2", "--max-len", "6", "--format", "csv"]);
    let rational = nclcs(&["hilbert", "--n", "2", "--max-len", "6", "--format", "csv", "--field", "rational"]);
    let two = nclcs(&["hilbert", "--n", "2", "--max-len", "6", "--format", "csv", "--field", "two-prime"]);
    assert_eq!(prime.stdout, rational.stdout);
    assert_eq!(prime.stdout, two.stdout);
}

#[test]
fn chars_examples() {
    let o = nclcs(&["chars", "--n", "3", "--k", "3", "--max-len", "6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["dimension_fit"]["layers"], serde_json::json!([{"dim": 8, "level": 3}]));
    let o = nclcs(&["chars", "--n", "2", "--k", "4", "--max-len", "9", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["dimension_fit"]["layers"], serde_json::json!([{"dim": 3, "level": 4}, {"dim": 2, "level": 5}]));
    let o = nclcs(&["chars", "--n", "1", "--k", "2", "--max-len", "4", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["dimension_fit"]["layers"], serde_json::json!([]));
    assert!(r["levels"].as_array().unwrap().iter().all(|l| l["dim"] == 0));
}

#[test]
fn cache_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_nclcs"))
            .args(["hilbert", "--n", "2", "--max-len", "4"])
            .args(extra)
            .env("NCLCS_CACHE_DIR", env_dir.path())
            .output()
            .unwrap()
    };
    let flag = flag_dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["--cache-dir", flag])), 0);
    assert!(cell_files(env_dir.path()).is_empty());
    assert!(!cell_files(flag_dir.path()).is_empty());
    assert_eq!(code(&run(&[])), 0);
    assert_eq!(cell_files(env_dir.path()), cell_files(flag_dir.path()));
}

#[test]
fn cached_rerun_matches_and_corruption_exits_65() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["hilbert", "--n", "2", "--max-len", "5", "--cache-dir", d];
    let first = nclcs(&args);
    let second = nclcs(&args);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);

    let victim = dir.path().join("n2_k2_l5_p2147483647.cell");
    let mut bytes = fs::read(&victim).unwrap();
    bytes[0] ^= 0xff;
    fs::write(&victim, bytes).unwrap();
    let o = nclcs(&args);
    assert_eq!(code(&o), 65);
    assert!(String::from_utf8_lossy(&o.stderr).contains(victim.to_str().unwrap()));
}
