//! End-to-end checks of the `hsets` binary: subcommands, file outputs,
//! determinism, CSV import, and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hsets"))
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("hsets_cli_tests").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn small_args(out: &Path) -> Vec<String> {
    [
        "--centers",
        "6",
        "--seed",
        "5",
        "--grid",
        "7",
        "--eval-grid",
        "13",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain(["--out-dir".to_string(), out.display().to_string()])
    .collect()
}

#[test]
fn approx_writes_reports() {
    let dir = tmp_dir("approx");
    let out = bin().arg("approx").args(small_args(&dir)).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "approx_report.json",
        "centers.csv",
        "residuals_t.csv",
        "error_eval.csv",
    ] {
        assert!(dir.join(name).exists(), "missing {name}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("approx_report.json")).unwrap()).unwrap();
    assert_eq!(report["n_centers"], 6);
    assert!(report["eta_star_on_t"].as_f64().unwrap() > 0.0);
    assert!(
        report["sup_error_on_eval_grid"].as_f64().unwrap()
            >= report["eta_star_on_t"].as_f64().unwrap() - 1e-9
    );
}

#[test]
fn repro_is_deterministic_across_invocations() {
    let dir1 = tmp_dir("repro_a");
    let dir2 = tmp_dir("repro_b");
    for dir in [&dir1, &dir2] {
        let out = bin().arg("repro").args(small_args(dir)).output().unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for name in ["repro_report.json", "residuals_t.csv", "centers.csv"] {
        assert_eq!(
            fs::read(dir1.join(name)).unwrap(),
            fs::read(dir2.join(name)).unwrap(),
            "{name} must be byte-identical"
        );
    }
}

#[test]
fn maps_and_greedy_write_expected_files() {
    let dir = tmp_dir("maps");
    let out = bin().arg("maps").args(small_args(&dir)).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "maps_report.json",
        "lagrangian_zeros.csv",
        "divdiff_map.csv",
        "error_zeros.csv",
    ] {
        assert!(dir.join(name).exists(), "missing {name}");
    }

    let dir = tmp_dir("greedy");
    let out = bin()
        .arg("greedy")
        .args(small_args(&dir))
        .args(["--count", "3", "--rule", "error"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("greedy_report.json").exists());
    assert!(dir.join("greedy_selection.csv").exists());
}

#[test]
fn hset_test_expectation_exit_codes() {
    // residual threshold 0 selects all of T: a certified H-set -> exit 0
    let dir = tmp_dir("hset_ok");
    let out = bin()
        .arg("hset-test")
        .args(small_args(&dir))
        .args(["--mu", "0", "--expect-hset"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // an imported one-point candidate with positive sign can never be an
    // H-set for a strictly positive kernel -> exit 2 under --expect-hset
    let dir = tmp_dir("hset_neg");
    let csv = dir.join("candidate.csv");
    fs::write(&csv, "x,y,sign\n0.5,0.5,1\n").unwrap();
    let out = bin()
        .arg("hset-test")
        .args(small_args(&dir))
        .args(["--points".as_ref(), csv.as_os_str()])
        .arg("--expect-hset")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(dir.join("hset_certificate.json").exists());

    // bad flags -> exit 1 family (clap uses 2 for usage errors; errors from
    // the run itself map to 1)
    let out = bin()
        .arg("hset-test")
        .args(small_args(&tmp_dir("hset_err")))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_runs_the_flagship_flow() {
    let dir = tmp_dir("reduce");
    let out = bin().arg("reduce").args(small_args(&dir)).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("reduce_report.json")).unwrap()).unwrap();
    assert_eq!(report["recertified"], true);
    assert!(report["size_after"].as_u64().unwrap() <= report["size_before"].as_u64().unwrap());
}

#[test]
fn custom_kernel_expansion_target_is_exactly_representable() {
    // target = expansion over the same seeded centers the run will draw:
    // the minimax error on T must be ~0
    let dir = tmp_dir("custom_target");
    let out = bin().arg("approx").args(small_args(&dir)).output().unwrap();
    assert!(out.status.success());
    let centers = fs::read_to_string(dir.join("centers.csv")).unwrap();
    let mut target_csv = String::from("x,y,coef\n");
    for line in centers.lines().skip(1) {
        target_csv.push_str(&format!("{line},0.75\n"));
    }
    let target_path = dir.join("target.csv");
    fs::write(&target_path, target_csv).unwrap();

    let out = bin()
        .arg("approx")
        .args([
            "--centers",
            "6",
            "--seed",
            "5",
            "--grid",
            "7",
            "--eval-grid",
            "13",
            "--target",
        ])
        .arg(&target_path)
        .args(["--out-dir".as_ref(), dir.as_os_str()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("approx_report.json")).unwrap()).unwrap();
    assert!(report["eta_star_on_t"].as_f64().unwrap() <= 1e-8);
}
