//! Command-level behavior: exit codes (0 pass / 1 property failure /
//! 2 usage or config error), byte-identical reruns, and the voxel mask
//! round trip through the solve command.

use std::path::{Path, PathBuf};
use std::process::Command;

use nuclab::core::RankOneTensor;
use nuclab::field_solver::{dense_oracle, Grid};
use nuclab::geometry::VoxelMask;
use rand::{Rng, SeedableRng};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_nuclab"))
        .args(args)
        .output()
        .expect("failed to launch nuclab");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    let (code, _, err) = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {err}");
}

#[test]
fn unknown_config_keys_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("extra.json");
    std::fs::write(
        &cfg,
        r#"{"d":2,"nu":[0.0,1.0],"a":[1.0,0.0],"mu_min":1e2,"mu_max":1e4,"points":5,
            "method":"closed-form","tolerance":0.05,"surprise":1}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("surprise"), "stderr: {err}");
}

#[test]
fn missing_config_file_exits_2() {
    let (code, _, _) = run(&["sweep", "--config", "/nonexistent/nope.json"]);
    assert_eq!(code, 2);
}

#[test]
fn fit_miss_exits_1() {
    // an absurdly tight tolerance turns a healthy sweep into a fit miss
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, stdout, _) = run(&[
        "sweep",
        "--config",
        config("d2_normal.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--tolerance",
        "1e-9",
    ]);
    assert_eq!(code, 1, "stdout: {stdout}");
}

#[test]
fn dichotomy_single_point_path_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.json");
    std::fs::write(
        &cfg,
        r#"{"d":2,"a":[1.0,0.0],"mu":1e5,"nu1_start":0.3,"nu1_end":0.3,"points":1}"#,
    )
    .unwrap();
    let (code, _, _) = run(&["dichotomy", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let (code, _, _) = run(&[
            "sweep",
            "--config",
            config("d2_generic.json").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    for file in ["rows.csv", "summary.json", "plot.svg"] {
        let a = std::fs::read(out_a.join(file)).unwrap();
        let b = std::fs::read(out_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between reruns");
    }
}

fn write_solve_config(dir: &Path, mask_name: &str, nu: [f64; 2]) -> PathBuf {
    let cfg = dir.join("solve.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"mask":"{mask_name}","nu":[{},{}],"a":[1.0,0.0],"tol":1e-12,"max_iter":50000}}"#,
            nu[0], nu[1]
        ),
    )
    .unwrap();
    cfg
}

#[test]
fn solve_compatible_slab_exits_0_with_tiny_energy() {
    let dir = tempfile::tempdir().unwrap();
    let mut mask = VoxelMask::new(0.25, vec![0.0, 0.0], vec![16, 16]).unwrap();
    for i in 0..16 {
        for j in 0..5 {
            mask.set(&[i, j], true);
        }
    }
    mask.write_binary(&dir.path().join("slab.bin")).unwrap();
    let cfg = write_solve_config(dir.path(), "slab.bin", [0.0, 1.0]);
    let out = dir.path().join("out");
    let (code, _, _) = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("solve.json")).unwrap()).unwrap();
    assert!(summary["report"]["energy"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn solve_with_oracle_matches_direct_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut mask = VoxelMask::new(0.25, vec![0.0, 0.0], vec![16, 16]).unwrap();
    for flat in 0..mask.len() {
        if rng.gen_bool(0.35) {
            mask.set_flat(flat, true);
        }
    }
    mask.write_binary(&dir.path().join("random.bin")).unwrap();
    let nu = nuclab::linalg::normalized(&[-0.6, 0.8]).unwrap();
    let cfg = write_solve_config(dir.path(), "random.bin", [nu[0], nu[1]]);
    let out = dir.path().join("out");
    let (code, _, _) = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(code, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("solve.json")).unwrap()).unwrap();
    let gap = summary["oracle_gap"].as_f64().unwrap();
    assert!(gap <= 1e-8, "oracle gap {gap}");

    // the reported oracle energy matches an in-process dense solve
    let g = RankOneTensor::new(vec![1.0, 0.0], nu).unwrap();
    let grid = Grid::from_mask(&mask).unwrap();
    let expected = dense_oracle(&mask, &g, &grid).unwrap();
    let reported = summary["oracle_energy"].as_f64().unwrap();
    assert!((expected - reported).abs() <= 1e-12 * expected.abs().max(1.0));
}

#[test]
fn solve_oversized_oracle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mask = VoxelMask::new(0.1, vec![0.0, 0.0], vec![40, 40]).unwrap();
    mask.write_binary(&dir.path().join("big.bin")).unwrap();
    let cfg = write_solve_config(dir.path(), "big.bin", [0.0, 1.0]);
    let (code, _, _) = run(&["solve", "--config", cfg.to_str().unwrap(), "--oracle"]);
    assert_eq!(code, 2);
}

#[test]
fn solve_missing_mask_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_solve_config(dir.path(), "absent.bin", [0.0, 1.0]);
    let (code, _, _) = run(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn reflect_and_probe_commands_pass_on_bundled_configs() {
    for (cmd, cfg) in [("reflect", "reflect_lens_d3.json"), ("probe", "probe_d2.json")] {
        let dir = tempfile::tempdir().unwrap();
        let (code, stdout, err) = run(&[
            cmd,
            "--config",
            config(cfg).to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{cmd} failed: {stdout} {err}");
    }
}

#[test]
fn threads_flag_keeps_results_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let cfg = config("d2_normal.json");
    for (out, threads) in [(&out_a, "1"), (&out_b, "4")] {
        let (code, _, _) = run(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(
        std::fs::read(out_a.join("rows.csv")).unwrap(),
        std::fs::read(out_b.join("rows.csv")).unwrap()
    );
}
