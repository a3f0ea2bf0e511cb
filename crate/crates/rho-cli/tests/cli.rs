//! End-to-end behavior of the `rho` binary: output shapes, exit codes,
//! determinism, and fault detection by the differential suites.

use std::process::{Command, Output};

fn rho() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rho"));
    c.env_remove("RHO_FAULT_INJECT");
    c.env_remove("RHO_EXACT_LIMIT_BITS");
    c
}

fn run(args: &[&str]) -> Output {
    rho().args(args).output().expect("spawn rho")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_small_value() {
    let out = run(&["compute", "--k", "2", "--lambda", "1", "--n", "20"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "32");
}

#[test]
fn compute_trivial_modulus() {
    let out = run(&["compute", "--k", "3", "--lambda", "0", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn compute_reduces_lambda() {
    let a = run(&["compute", "--k", "2", "--lambda", "21", "--n", "20"]);
    let b = run(&["compute", "--k", "2", "--lambda", "1", "--n", "20"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn compute_json_record_parses_and_is_consistent() {
    let out = run(&[
        "compute", "--k", "4", "--lambda", "9", "--n", "2^3*5^2", "--mod", "97", "--json",
    ]);
    assert!(out.status.success());
    let rec: rho_cli::output::OutputRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rec.engine, "closed");
    assert_eq!(rec.n, "2^3*5^2");
    let exact: num_bigint::BigUint = rec.exact.as_deref().unwrap().parse().unwrap();
    let m97: num_bigint::BigUint = rec.mod_evals["97"].parse().unwrap();
    assert_eq!(exact % 97u32, m97);
    // all six engines agree on this instance
    for engine in ["recursive", "bruteforce", "gauss", "toth"] {
        let alt = run(&[
            "compute", "--k", "4", "--lambda", "9", "--n", "2^3*5^2", "--engine", engine,
        ]);
        assert!(alt.status.success(), "{engine}");
        assert_eq!(stdout(&alt).trim(), rec.exact.as_deref().unwrap(), "{engine}");
    }
}

#[test]
fn engines_agree_via_cli_on_matrix_range() {
    let base = run(&["compute", "--k", "5", "--lambda", "3", "--n", "49"]);
    for engine in ["recursive", "matrix", "bruteforce"] {
        let alt = run(&["compute", "--k", "5", "--lambda", "3", "--n", "49", "--engine", engine]);
        assert_eq!(stdout(&alt), stdout(&base), "{engine}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["compute", "--k", "2", "--lambda", "1"]).status.code(), Some(2)); // missing --n
    assert_eq!(
        run(&["compute", "--k", "2", "--lambda", "1", "--n", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["compute", "--k", "2", "--lambda", "x", "--n", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["compute", "--k", "2", "--lambda", "1", "--n", "10", "--engine", "warp"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["bench", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn budget_refusals_exit_3() {
    // exact rendering of a ~6.3e6-digit value is fine, but a tiny override
    // of the guard must refuse with the digit estimate
    let out = rho()
        .args(["compute", "--k", "10", "--lambda", "0", "--n", "5^1000000", "--exact"])
        .env("RHO_EXACT_LIMIT_BITS", "4096")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("digits"), "{err}");

    // brute force far beyond its enumeration budget
    let out = run(&[
        "compute", "--k", "10", "--lambda", "0", "--n", "1000003", "--engine", "bruteforce",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_small_passes() {
    let out = run(&["verify", "--max-n", "16", "--max-k", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.starts_with("PASS ("), "{text}");
}

#[test]
fn verify_random_large_is_deterministic() {
    let a = run(&["verify", "--max-n", "4", "--max-k", "2", "--random-large", "8", "--seed", "7"]);
    let b = run(&["verify", "--max-n", "4", "--max-k", "2", "--random-large", "8", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn selftest_passes_clean() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("SELFTEST PASS"));
    // repeated runs are bit-identical
    let again = run(&["selftest"]);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn injected_table_fault_is_caught_by_selftest() {
    let out = rho().args(["selftest"]).env("RHO_FAULT_INJECT", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("SELFTEST FAIL"), "{text}");
    assert!(text.contains("t=2") && text.contains("lambda=1") && text.contains("k mod 8"), "{text}");
}

#[test]
fn injected_table_fault_is_caught_by_verify_at_small_n() {
    let out = rho()
        .args(["verify", "--max-n", "8", "--max-k", "3"])
        .env("RHO_FAULT_INJECT", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"), "{text}");
    // minimal counterexample lives at n = 4 (the corrupted mod-4 table row)
    assert!(text.contains("p=2, s=2"), "{text}");
}

#[test]
fn bench_out_writes_file_and_keeps_stdout_quiet() {
    let dir = std::env::temp_dir().join(format!("rho-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("engines.csv");
    let out = run(&["bench", "--suite", "engines", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("engine,p,s,k,ops,ns\n"));
    assert!(csv.lines().count() > 10);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_scaling_shows_flat_closed_ops() {
    let out = run(&["bench", "--suite", "scaling"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let closed_ops: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("closed,"))
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert_eq!(closed_ops.len(), 4);
    assert!(closed_ops.windows(2).all(|w| w[0] == w[1]), "{text}");
}
