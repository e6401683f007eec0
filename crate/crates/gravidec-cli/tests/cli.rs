//! End-to-end CLI checks: exit codes, overrides, config files, the catalog
//! environment variable, and golden-file schema stability (outputs are
//! byte-compared against checked-in fixtures).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run_in(dir: &Path, envs: &[(&str, &str)], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gravidec"));
    cmd.current_dir(dir).args(args);
    cmd.env_remove("GRAVIDEC_CATALOG");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let dir = std::env::temp_dir();
    run_in(&dir, &[], args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn golden(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()))
}

#[test]
fn golden_rates_json() {
    let out = run(&["rates", "--scenario", "moon", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("rates_moon.json"));
}

#[test]
fn golden_rates_csv() {
    let out = run(&["rates", "--scenario", "moon", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("rates_moon.csv"));
}

#[test]
fn golden_spectrum_csv() {
    let out = run(&[
        "spectrum",
        "--chh",
        "1e-34",
        "--omega",
        "5.330562e-6",
        "--omega",
        "1e-5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("spectrum.csv"));
}

#[test]
fn golden_catalog_csv() {
    let out = run(&["catalog", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("catalog.csv"));
}

#[test]
fn golden_sweep_csv() {
    let out = run(&[
        "sweep",
        "--sweep",
        "t_em:1:100:3:log",
        "--scenario",
        "moon",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("sweep_tem.csv"));
}

#[test]
fn golden_simulate_stats_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stats.csv");
    let out = run_in(
        dir.path(),
        &[],
        &[
            "simulate",
            "--scenario",
            "moon",
            "--ensemble",
            "48",
            "--samples",
            "512",
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
        ],
    );
    // This small deterministic run sits just outside the diffusion band.
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("D_fit/D_analytic"));
    assert_eq!(std::fs::read(&path).unwrap(), golden("simulate_stats.csv"));
}

#[test]
fn json_round_trips() {
    let out = run(&["rates", "--scenario", "spheres", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(re.as_bytes(), &out.stdout[..]);
}

#[test]
fn unknown_scenario_exits_2() {
    let out = run(&["rates", "--scenario", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("moon"), "{err}");
}

#[test]
fn unknown_set_key_exits_2() {
    let out = run(&["rates", "--scenario", "moon", "--set", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn degenerate_sweep_exits_2() {
    let out = run(&["sweep", "--sweep", "t_em:5:5:3:lin"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn sweep_without_spec_exits_2() {
    let out = run(&["sweep"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_without_omega_exits_2() {
    let out = run(&["spectrum", "--chh", "1e-34"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_table_out_of_domain_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("bg.csv");
    std::fs::write(&table, "(1e-6, 1e-34)\n(1e-5, 1e-35)\n").unwrap();
    let ok = run_in(
        dir.path(),
        &[],
        &[
            "spectrum",
            "--spectrum-file",
            table.to_str().unwrap(),
            "--omega",
            "5e-6",
        ],
    );
    assert_eq!(ok.status.code(), Some(0));
    let out = run_in(
        dir.path(),
        &[],
        &[
            "spectrum",
            "--spectrum-file",
            table.to_str().unwrap(),
            "--omega",
            "1e-3",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn inertial_override_zeroes_gravitational_channel() {
    let out = run(&[
        "rates",
        "--scenario",
        "moon",
        "--set",
        "a=0",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "gamma_gr",
        "d_gr",
        "lambda_gr",
        "ratio_direct",
        "ratio_dimensionless",
    ] {
        assert_eq!(v[key].as_f64().unwrap(), 0.0, "{key} should be zero");
    }
    assert!(v["t_dec_planck_length"].is_null());
    // The electromagnetic channel is untouched.
    assert!(v["gamma_em"].as_f64().unwrap() > 0.0);
}

#[test]
fn single_point_sweep_matches_rates() {
    let rates = run(&["rates", "--scenario", "moon", "--format", "csv"]);
    let sweep = run(&[
        "sweep",
        "--sweep",
        "t_em:2.7:2.7:1:lin",
        "--scenario",
        "moon",
        "--format",
        "csv",
    ]);
    let rates_line = stdout(&rates).lines().nth(1).unwrap().to_string();
    let sweep_line = stdout(&sweep).lines().nth(1).unwrap().to_string();
    // Sweep rows carry the axis columns in front of the identical report.
    let suffix = sweep_line
        .splitn(3, ',')
        .nth(2)
        .expect("axis columns present")
        .to_string();
    assert_eq!(suffix, rates_line);
}

#[test]
fn tem_sweep_scales_lambda_em_as_fifth_power() {
    let out = run(&[
        "sweep",
        "--sweep",
        "t_em:1:100:3:log",
        "--scenario",
        "moon",
        "--format",
        "json",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    let l: Vec<f64> = rows
        .iter()
        .map(|r| r["lambda_em"].as_f64().unwrap())
        .collect();
    // Each decade in T_em multiplies Lambda_em by 1e5 (Gamma_em ~ T^4
    // times the bath energy k_B T).
    for w in l.windows(2) {
        let factor = w[1] / w[0];
        assert!(
            (factor / 1e5 - 1.0).abs() < 1e-6,
            "Lambda_em decade factor {factor:e}"
        );
    }
    // Axis ordering is preserved ascending.
    let t: Vec<f64> = rows
        .iter()
        .map(|r| r["axis_value"].as_f64().unwrap())
        .collect();
    assert!(t.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn m_total_sweep_uses_touching_spheres() {
    let out = run(&[
        "sweep",
        "--sweep",
        "m_total:1e3:1e3:1:log",
        "--scenario",
        "spheres",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let row = &rows[0];
    let rho = row["rho"].as_f64().unwrap();
    let r = row["r"].as_f64().unwrap();
    assert!((rho / r - 2.0).abs() < 1e-12);
    assert!((row["m"].as_f64().unwrap() - 250.0).abs() < 1e-9);
}

#[test]
fn catalog_env_extends_presets() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("extra.cat");
    std::fs::write(
        &file,
        "# user presets\n[binary]\nm_a = 1.4e30\nm_b = 1.4e30\nrho = 1e9\nr = 1e4\nt_em = 2.7\nchh = 1e-34\n",
    )
    .unwrap();
    let env = [("GRAVIDEC_CATALOG", file.to_str().unwrap())];
    let out = run_in(
        dir.path(),
        &env,
        &["rates", "--scenario", "binary", "--format", "json"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scenario"].as_str().unwrap(), "binary");

    // Malformed file: unknown key reported with its line number.
    std::fs::write(&file, "[x]\nm_a = 1\nwhat = 2\n").unwrap();
    let bad = run_in(dir.path(), &env, &["catalog"]);
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains(":3"), "{err}");

    // Names colliding with builtins are rejected.
    std::fs::write(
        &file,
        "[moon]\nm_a = 1\nm_b = 1\nrho = 1\nr = 1\nt_em = 1\nchh = 1e-34\n",
    )
    .unwrap();
    let clash = run_in(dir.path(), &env, &["catalog"]);
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "[rates]\nscenario = spheres\nformat = json\nset = t_em=5\n",
    )
    .unwrap();
    let from_cfg = run_in(
        dir.path(),
        &[],
        &["--config", cfg.to_str().unwrap(), "rates"],
    );
    assert_eq!(from_cfg.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&from_cfg.stdout).unwrap();
    assert_eq!(v["scenario"].as_str().unwrap(), "spheres");
    assert_eq!(v["t_em"].as_f64().unwrap(), 5.0);

    // A command-line --set overrides the config's.
    let overridden = run_in(
        dir.path(),
        &[],
        &[
            "--config",
            cfg.to_str().unwrap(),
            "rates",
            "--set",
            "t_em=9",
        ],
    );
    let v: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(v["t_em"].as_f64().unwrap(), 9.0);

    // Unknown config keys are rejected at parse time with a line number.
    std::fs::write(&cfg, "[rates]\nnonsense = 1\n").unwrap();
    let bad = run_in(
        dir.path(),
        &[],
        &["--config", cfg.to_str().unwrap(), "rates"],
    );
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains(":2"));
}

#[test]
fn zero_spectrum_simulate_is_silent_and_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    let out = run_in(
        dir.path(),
        &[],
        &[
            "simulate",
            "--scenario",
            "moon",
            "--set",
            "chh=0",
            "--ensemble",
            "8",
            "--samples",
            "512",
            "--output",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1].parse::<f64>().unwrap(), 0.0); // p_var
        assert_eq!(fields[3].parse::<f64>().unwrap(), 1.0); // dephasing_re
    }
}

#[test]
fn simulate_statistics_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (name, threads) in [("par.csv", "4"), ("ser.csv", "1")] {
        let path = dir.path().join(name);
        let out = run_in(
            dir.path(),
            &[("RAYON_NUM_THREADS", threads)],
            &[
                "simulate",
                "--ensemble",
                "32",
                "--samples",
                "512",
                "--seed",
                "11",
                "--output",
                path.to_str().unwrap(),
            ],
        );
        assert!(matches!(out.status.code(), Some(0) | Some(3)));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn simulate_dump_noise_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("s.csv");
    let noise = dir.path().join("h.csv");
    let out = run_in(
        dir.path(),
        &[],
        &[
            "simulate",
            "--ensemble",
            "8",
            "--samples",
            "512",
            "--output",
            stats.to_str().unwrap(),
            "--dump-noise",
            noise.to_str().unwrap(),
        ],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
    let text = std::fs::read_to_string(&noise).unwrap();
    assert!(text.starts_with("t,h_re,h_im\n"));
    assert_eq!(text.lines().count(), 513);
}
