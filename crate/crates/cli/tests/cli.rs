//! End-to-end subprocess tests of the `mwl` binary: artifact formats,
//! determinism, and the exit-code contract.

use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mwl() -> PathBuf {
    // target/<profile>/mwl next to the test binary's directory.
    let mut p = std::env::current_exe().unwrap();
    p.pop();
    p.pop();
    p.push("mwl");
    p
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(mwl())
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("spawning mwl")
}

fn sha(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    format!("{:x}", Sha256::digest(&bytes))
}

fn config_with(dir: &Path, name: &str, tolerances: &str, extra: &str) -> PathBuf {
    let path = dir.join(name);
    let body = format!(
        r#"{{
            "fixture": "monofractal",
            "tree_depth": 10,
            "grid_depth": 10,
            "cover_level": 6,
            "scales": [4, 8],
            "energy_cover_level": 8,
            "avoidance_depth": 4,
            "q_list": [0.0],
            "tolerances": {tolerances}
            {extra}
        }}"#
    );
    std::fs::write(&path, body).unwrap();
    path
}

/// Shallow trees undercount graph boxes more than the defaults; the small
/// test config says so explicitly in its tolerances.
fn small_config(dir: &Path, extra: &str) -> PathBuf {
    config_with(
        dir,
        "config.json",
        r#"{"h": 0.1, "xi_star": 0.15, "dim_graph": 0.25, "dim_range": 0.1}"#,
        extra,
    )
}

#[test]
fn synth_is_deterministic_by_sha() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    // Identical config (including the output directory) twice: byte-identical
    // artifacts.
    let out = tmp.path().join("a");
    let r = run(&["synth", "--config", cfg.to_str().unwrap(), "--seed", "1234"], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let first_dump = sha(&out.join("series.mwl1"));
    let first_csv = sha(&out.join("series.csv"));
    let r = run(&["synth", "--config", cfg.to_str().unwrap(), "--seed", "1234"], &out);
    assert!(r.status.success());
    assert_eq!(first_dump, sha(&out.join("series.mwl1")));
    assert_eq!(first_csv, sha(&out.join("series.csv")));
    // Different seed, different bytes.
    let out2 = tmp.path().join("b");
    let r = run(&["synth", "--config", cfg.to_str().unwrap(), "--seed", "99"], &out2);
    assert!(r.status.success());
    assert_ne!(first_dump, sha(&out2.join("series.mwl1")));
}

#[test]
fn dump_header_matches_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let out = tmp.path().join("o");
    let r = run(&["synth", "--config", cfg.to_str().unwrap()], &out);
    assert!(r.status.success());
    let bytes = std::fs::read(out.join("series.mwl1")).unwrap();
    assert_eq!(&bytes[0..4], b"MWL1");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 10); // grid depth
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 10); // tree depth
    assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 7); // seed
    let count = u64::from_le_bytes(bytes[20..28].try_into().unwrap());
    assert_eq!(count, (1 << 10) + 1);
    assert_eq!(bytes.len(), 28 + 8 * count as usize);
}

#[test]
fn verify_exit_codes_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let out = tmp.path().join("v");
    let r = run(&["verify", "--config", cfg.to_str().unwrap()], &out);
    assert!(
        r.status.success(),
        "verify failed: {}{}",
        String::from_utf8_lossy(&r.stdout),
        String::from_utf8_lossy(&r.stderr)
    );
    let first_json = sha(&out.join("verify_report.json"));
    let first_csv = sha(&out.join("verify_report.csv"));
    let r = run(&["verify", "--config", cfg.to_str().unwrap()], &out);
    assert!(r.status.success());
    assert_eq!(first_json, sha(&out.join("verify_report.json")));
    assert_eq!(first_csv, sha(&out.join("verify_report.csv")));

    // Deliberately tight tolerances force a nonzero exit with gap listing.
    let tight = config_with(
        tmp.path(),
        "tight.json",
        r#"{"h": 0.001, "xi_star": 0.001, "dim_graph": 0.001, "dim_range": 0.001}"#,
        "",
    );
    let out3 = tmp.path().join("v3");
    let r = run(&["verify", "--config", tight.to_str().unwrap()], &out3);
    assert!(!r.status.success());
    let stdout = String::from_utf8_lossy(&r.stdout);
    assert!(stdout.contains("OUT OF TOLERANCE"), "stdout: {stdout}");
}

#[test]
fn pressure_emits_convergence_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), r#", "k_sweep": [3, 5], "zeros": [0.5]"#);
    let out = tmp.path().join("p");
    let r = run(&["pressure", "--config", cfg.to_str().unwrap()], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let conv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    let mut lines = conv.lines();
    assert!(lines.next().unwrap().starts_with("# config:"));
    assert_eq!(lines.next().unwrap(), "k,q,pressure_full,pressure_avoid,gap,d0");
    // Gaps are nonnegative in every row.
    for line in lines {
        let gap: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(gap >= -1e-12, "negative gap in {line}");
    }
    let tau = std::fs::read_to_string(out.join("tau_full.csv")).unwrap();
    assert!(tau.lines().nth(1).unwrap().starts_with("grid,value,kind"));
    // Uniform potential: tau(q) = q - 1 rows.
    for line in tau.lines().skip(2) {
        let mut parts = line.split(',');
        let q: f64 = parts.next().unwrap().parse().unwrap();
        let v: f64 = parts.next().unwrap().parse().unwrap();
        assert!((v - (q - 1.0)).abs() < 1e-10);
    }
}

#[test]
fn spectrum_and_dims_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let out = tmp.path().join("s");
    let r = run(&["spectrum", "--config", cfg.to_str().unwrap()], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let scaling = std::fs::read_to_string(out.join("scaling.csv")).unwrap();
    assert!(scaling.lines().nth(1).unwrap().starts_with("q,xi_hat,stderr,r2"));
    let spec = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(spec.lines().nth(1).unwrap().starts_with("h,xi_star"));

    let r = run(&["dims", "--config", cfg.to_str().unwrap()], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let dims: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("dims.json")).unwrap()).unwrap();
    assert_eq!(dims["schema"], 1);
    assert!(dims["graph_dim"].as_f64().unwrap() > 1.0);
    assert!(dims["config_echo"]["fixture"] == "monofractal");
}

#[test]
fn bad_config_is_a_line_precise_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.json");
    std::fs::write(&path, r#"{"s0": 0.2, "p0": 4.0}"#).unwrap();
    let out = tmp.path().join("x");
    let r = run(&["pressure", "--config", path.to_str().unwrap()], &out);
    assert!(!r.status.success());
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("s0"), "stderr: {err}");
}
