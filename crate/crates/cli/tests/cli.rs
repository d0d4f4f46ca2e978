//! End-to-end driver tests against the compiled binary: exit-code contract,
//! record determinism, sweep resume.

use std::path::Path;
use std::process::Command;

fn kpnw() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kpnw"))
}

/// Small, fast solve arguments (32^2 grid, feasible mass, loose tolerance).
fn small_solve_args(out: &Path) -> Vec<String> {
    [
        "solve", "--grid", "32x32", "--box", "40x40", "--q", "3", "--a", "8", "--tol", "5e-2",
        "--max-iters", "400", "--seed", "11",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain(["--out".to_string(), out.display().to_string()])
    .collect()
}

fn read_records(path: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn strip_timing(v: &mut serde_json::Value) {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time_s");
    }
}

#[test]
fn solve_writes_field_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let status = kpnw().args(small_solve_args(dir.path())).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let records = read_records(&dir.path().join("solve.jsonl"));
    assert_eq!(records.len(), 1);
    let rec = &records[0];
    assert_eq!(rec["key"], "a=8,q=3");
    assert!(rec["result"]["converged"].as_bool().unwrap());
    let field = dir.path().join(rec["field_file"].as_str().unwrap());
    assert!(field.exists());

    // The written solution passes its own check.
    let status = kpnw()
        .args(["check", "--q", "3", "--tol", "5e-2"])
        .arg(&field)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // And the fiber report finds the subcritical minimum near t = 0.
    let out = kpnw()
        .args(["fiber", "--q", "3"])
        .arg(&field)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["t_star"].as_f64().unwrap().abs() < 0.2);
}

#[test]
fn malformed_config_key_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "q = 3\nbogus_key = 1\n").unwrap();
    let out_dir = dir.path().join("out");
    let status = kpnw()
        .args(["solve", "--config"])
        .arg(&cfg)
        .args(["--a", "1", "--out"])
        .arg(&out_dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!out_dir.join("solve.jsonl").exists());
}

#[test]
fn non_convergence_exits_3_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let status = kpnw()
        .args([
            "solve", "--grid", "32x32", "--q", "3", "--a", "8", "--max-iters", "3",
            "--tol", "1e-9",
        ])
        .args(["--out".as_ref(), dir.path().as_os_str()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let records = read_records(&dir.path().join("solve.jsonl"));
    assert_eq!(records.len(), 1);
    assert!(!records[0]["result"]["converged"].as_bool().unwrap());
}

#[test]
fn solve_rerun_is_deterministic_modulo_wall_time() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(
        kpnw().args(small_solve_args(d1.path())).status().unwrap().code(),
        Some(0)
    );
    assert_eq!(
        kpnw().args(small_solve_args(d2.path())).status().unwrap().code(),
        Some(0)
    );
    let mut r1 = read_records(&d1.path().join("solve.jsonl"));
    let mut r2 = read_records(&d2.path().join("solve.jsonl"));
    for v in r1.iter_mut().chain(r2.iter_mut()) {
        strip_timing(v);
        // The echoed output directory differs between tempdirs by design.
        v["config"].as_object_mut().unwrap().remove("out");
    }
    assert_eq!(r1, r2);

    // Field files are bit-identical.
    let f1 = std::fs::read(d1.path().join("field_a8_q3.kpnw")).unwrap();
    let f2 = std::fs::read(d2.path().join("field_a8_q3.kpnw")).unwrap();
    assert_eq!(f1, f2);
}

#[test]
fn check_flags_perturbed_solutions() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        kpnw().args(small_solve_args(dir.path())).status().unwrap().code(),
        Some(0)
    );
    let field_path = dir.path().join("field_a8_q3.kpnw");

    // Admissibly perturb by 1%: scale one Fourier-clean bump into the values.
    let field = kpnw_cli::fieldfile::read_field(&field_path).unwrap();
    let noise = kpnw_core::spectral::random_band_limited(field.grid(), 5, 0.4);
    let amp = 0.01 * field.amax() / noise.amax();
    let perturbed = field.add_scaled(amp, &noise);
    let noisy_path = dir.path().join("noisy.kpnw");
    kpnw_cli::fieldfile::write_field(&noisy_path, &perturbed).unwrap();

    let status = kpnw()
        .args(["check", "--q", "3", "--tol", "5e-2"])
        .arg(&noisy_path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // Corrupt the magic bytes: exit 2.
    let mut bytes = std::fs::read(&field_path).unwrap();
    bytes[1] = b'Z';
    let bad = dir.path().join("bad.kpnw");
    std::fs::write(&bad, &bytes).unwrap();
    let status = kpnw()
        .args(["check", "--q", "3"])
        .arg(&bad)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn fiber_zero_field_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let grid = kpnw_core::Grid::new(16, 16, 10.0, 10.0).unwrap();
    let zero = kpnw_core::Field::zeros(grid);
    let path = dir.path().join("zero.kpnw");
    kpnw_cli::fieldfile::write_field(&path, &zero).unwrap();
    let status = kpnw().args(["fiber", "--q", "4"]).arg(&path).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn thresholds_missing_constants_exit_2() {
    let status = kpnw()
        .args(["thresholds", "--q", "3", "--p", "4", "--mu", "1", "--a", "0.5"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn gn_estimate_degenerate_exponent() {
    let out = kpnw()
        .args(["gn-estimate", "--grid", "16x16", "--box", "10x10", "--q", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cq"].as_f64().unwrap(), 1.0);
}

fn sweep_config(dir: &Path, a_list: &str) -> std::path::PathBuf {
    let cfg = dir.join("sweep.cfg");
    std::fs::write(
        &cfg,
        format!(
            "grid = 32x32\nbox = 40x40\nq = 3\na_list = {a_list}\nmax_iters = 150\ntol = 5e-2\nseed = 3\n"
        ),
    )
    .unwrap();
    cfg
}

#[test]
fn sweep_empty_range_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.cfg");
    std::fs::write(&cfg, "grid = 32x32\nq = 3\n").unwrap();
    let status = kpnw()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--out".as_ref(), dir.path().as_os_str()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(read_records(&dir.path().join("sweep.jsonl")).len(), 0);
}

#[test]
fn sweep_resume_matches_uninterrupted_run() {
    let full = tempfile::tempdir().unwrap();
    let resumed = tempfile::tempdir().unwrap();

    // Uninterrupted reference run over both masses.
    let cfg = sweep_config(full.path(), "7.5, 8");
    let status = kpnw()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--out".as_ref(), full.path().as_os_str()])
        .args(["--workers", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // "Interrupted" run: first mass only, then resume with the full range.
    let cfg1 = sweep_config(resumed.path(), "7.5");
    assert_eq!(
        kpnw()
            .args(["sweep", "--config"])
            .arg(&cfg1)
            .args(["--out".as_ref(), resumed.path().as_os_str()])
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    let cfg2 = sweep_config(resumed.path(), "7.5, 8");
    assert_eq!(
        kpnw()
            .args(["sweep", "--config"])
            .arg(&cfg2)
            .args(["--out".as_ref(), resumed.path().as_os_str()])
            .status()
            .unwrap()
            .code(),
        Some(0)
    );

    let mut a = read_records(&full.path().join("sweep.jsonl"));
    let mut b = read_records(&resumed.path().join("sweep.jsonl"));
    assert_eq!(a.len(), 2);
    assert_eq!(b.len(), 2);
    for v in a.iter_mut().chain(b.iter_mut()) {
        strip_timing(v);
        let cfg = v["config"].as_object_mut().unwrap();
        cfg.remove("out");
        // The resumed run's echoed a_list differs on the first record.
        cfg.remove("a_list");
    }
    assert_eq!(a, b);
}
