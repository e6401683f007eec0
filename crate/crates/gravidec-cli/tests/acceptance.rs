//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `-- --nocapture` to see every line). Tolerances are pinned in
//! code next to each check.
//!
//! Fixed inputs throughout: the Earth-Moon scenario of the built-in catalog,
//! the conservative flat background level 1e-34 Hz^-1, a 2.7 K photon bath,
//! and ensemble runs with 1000 realizations at seed 0.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use gravidec::background::{chh_to_temperature, graviton_number, GwSpectrum};
use gravidec::noise::{estimate_psd, excess_kurtosis, synthesize, RealizationSeed, SamplingGrid};
use gravidec::rates::{
    crossover_mass, decoherence_time, em_damping_rate, grav_damping_rate, grav_diffusion,
    ratio_dimensionless, EmChannel, GravChannel, ScenarioInputs,
};
use gravidec::sim::{default_grid, run_ensemble, EnsembleStatistics, SimConfig};
use gravidec::{Catalog, PhysicalConstants};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SI: PhysicalConstants = PhysicalConstants::si();

fn criterion(number: u8, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {number:02} {name}: {verdict} ({detail})");
    println!("{line}");
    assert!(pass, "{line}");
}

fn moon() -> ScenarioInputs {
    let catalog = Catalog::builtin();
    ScenarioInputs::from_preset(catalog.get("moon").unwrap(), &SI).unwrap()
}

fn in_range(v: f64, lo: f64, hi: f64) -> bool {
    v >= lo && v <= hi
}

#[test]
fn c01_effective_temperature() {
    let t_gr = chh_to_temperature(1e-34, &SI).unwrap();
    criterion(
        1,
        "effective temperature",
        in_range(t_gr, 5e40, 2e41),
        &format!("T_gr(1e-34 Hz^-1) = {t_gr:.4e} K, required [5e40, 2e41]"),
    );
}

#[test]
fn c02_graviton_number() {
    let n = graviton_number(1e-34, 2.0 * moon().omega, &SI).unwrap();
    criterion(
        2,
        "graviton number",
        in_range(n, 1e57, 4e57),
        &format!("n_gr(1e-34, 2 Omega_moon) = {n:.4e}, required [1e57, 4e57]"),
    );
}

#[test]
fn c03_gravitational_damping() {
    let i = moon();
    let gamma = grav_damping_rate(i.m, i.a, &SI).unwrap();
    criterion(
        3,
        "gravitational damping",
        in_range(gamma, 5e-35, 2e-34),
        &format!("Gamma_gr(moon) = {gamma:.4e} 1/s, required [5e-35, 2e-34]"),
    );
}

#[test]
fn c04_electromagnetic_damping() {
    let i = moon();
    let gamma_em = em_damping_rate(i.m, i.r, i.t_em, &SI).unwrap();
    let gamma_gr = grav_damping_rate(i.m, i.a, &SI).unwrap();
    let factor = gamma_em / gamma_gr;
    let pass = in_range(gamma_em, 1e-32, 4e-32) && in_range(factor, 100.0, 400.0);
    criterion(
        4,
        "electromagnetic damping",
        pass,
        &format!(
            "Gamma_em(moon, 2.7 K) = {gamma_em:.4e} 1/s (required [1e-32, 4e-32]), \
             Gamma_em/Gamma_gr = {factor:.1} (required [100, 400])"
        ),
    );
}

#[test]
fn c05_decoherence_rate() {
    let i = moon();
    let grav = GravChannel::from_physics(i.m, i.a, i.chh_at_2omega, &SI).unwrap();
    criterion(
        5,
        "decoherence rate",
        in_range(grav.lambda_gr, 2e74, 2e75),
        &format!(
            "Lambda_gr(moon) = {:.4e} 1/(s m^2), required [2e74, 2e75]",
            grav.lambda_gr
        ),
    );
}

#[test]
fn c06_planck_length_decoherence_time() {
    let i = moon();
    let grav = GravChannel::from_physics(i.m, i.a, i.chh_at_2omega, &SI).unwrap();
    let t = decoherence_time(grav.lambda_gr, SI.planck_length()).unwrap();
    criterion(
        6,
        "Planck-length decoherence time",
        in_range(t, 1e-6, 3e-5),
        &format!("t_dec = {t:.4e} s, required [1e-6, 3e-5]"),
    );
}

#[test]
fn c07_channel_ratio() {
    let i = moon();
    let grav = GravChannel::from_physics(i.m, i.a, i.chh_at_2omega, &SI).unwrap();
    let em = EmChannel::from_physics(i.m, i.r, i.t_em, &SI).unwrap();
    let ratio = grav.lambda_gr / em.lambda_em;
    criterion(
        7,
        "channel ratio",
        in_range(ratio, 1e37, 1e39),
        &format!("Lambda_gr/Lambda_em(moon) = {ratio:.4e}, required [1e37, 1e39]"),
    );
}

#[test]
fn c08_crossover_mass() {
    // Touching equal spheres of density 8000 kg/m^3 in a 2.7 K photon bath,
    // with the flat 1e-34 Hz^-1 background level applied at the system's
    // own 2 Omega (1.5e-3 rad/s). With these pinned inputs the channel
    // ratio is 7.465e-4 (m_total/kg)^2 and crosses one near 37 kg; the
    // quoted 1e3 kg scale corresponds to the much lower real background
    // level (~1e-37 Hz^-1) at that frequency, so this criterion fails as
    // stated. Analysis in the project notes.
    let spectrum = GwSpectrum::flat_band(1e-34, 1e-8, 1.0).unwrap();
    let m = crossover_mass(8000.0, 2.7, &spectrum, &SI).unwrap();
    criterion(
        8,
        "crossover mass",
        in_range(m, 1e2, 1e4),
        &format!("crossover_mass = {m:.4e} kg, required [1e2, 1e4]"),
    );
}

#[test]
fn c09_algebraic_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260808);
    let draws = 10_000;
    let mut worst_einstein = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for _ in 0..draws {
        // Einstein-relation closure.
        let m = 10f64.powf(rng.gen_range(-10.0..30.0));
        let a = 10f64.powf(rng.gen_range(-15.0..5.0));
        let chh = 10f64.powf(rng.gen_range(-40.0..-10.0));
        let d = grav_diffusion(m, a, chh).unwrap();
        let gamma = grav_damping_rate(m, a, &SI).unwrap();
        let t_gr = chh_to_temperature(chh, &SI).unwrap();
        let einstein = ((d - m * gamma * SI.k_b * t_gr) / d).abs();
        worst_einstein = worst_einstein.max(einstein);

        // Ratio-form equivalence on a Kepler-consistent scenario.
        let m2 = 10f64.powf(rng.gen_range(0.0..25.0));
        let rho = 10f64.powf(rng.gen_range(0.0..10.0));
        let r = rho * 10f64.powf(rng.gen_range(-4.0..0.0));
        let omega = 10f64.powf(rng.gen_range(-8.0..0.0));
        let t_em = rng.gen_range(1.0..300.0);
        let chh2 = 10f64.powf(rng.gen_range(-40.0..-20.0));
        let a2 = rho * omega * omega;
        let grav = GravChannel::from_physics(m2, a2, chh2, &SI).unwrap();
        let em = EmChannel::from_physics(m2, r, t_em, &SI).unwrap();
        let direct = (grav.gamma_gr / em.gamma_em) * (grav.t_gr / em.t_em);
        let dimless = ratio_dimensionless(m2, rho, r, omega, t_em, grav.t_gr, &SI).unwrap();
        let gap = ((direct - dimless) / dimless).abs();
        worst_ratio = worst_ratio.max(gap);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_einstein < 1e-10 && worst_ratio < 1e-10 && elapsed < 5.0;
    criterion(
        9,
        "algebraic identities",
        pass,
        &format!(
            "{draws} random scenarios: worst Einstein closure {worst_einstein:.2e}, \
             worst ratio-form gap {worst_ratio:.2e} (required < 1e-10), {elapsed:.2} s (< 5 s)"
        ),
    );
}

struct TimedStats {
    stats: EnsembleStatistics,
    seconds: f64,
}

/// The shared N = 1000 ensemble of criteria 10 and 11: band-limited flat
/// spectrum around 2 Omega, 64 correlation times of data, seed 0.
fn ensemble_1000() -> &'static TimedStats {
    static STATS: OnceLock<TimedStats> = OnceLock::new();
    STATS.get_or_init(|| {
        let config = SimConfig::validation(1e-4, default_grid(), 1000, 0).unwrap();
        assert!(config.grid.duration() >= 50.0 * config.correlation_time());
        let start = Instant::now();
        let stats = run_ensemble(&config).unwrap();
        TimedStats {
            stats,
            seconds: start.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn c10_monte_carlo_diffusion() {
    let timed = ensemble_1000();
    let ratio = timed.stats.diffusion_ratio().unwrap();
    let pass = in_range(ratio, 0.9, 1.1) && timed.seconds < 60.0;
    criterion(
        10,
        "Monte Carlo diffusion",
        pass,
        &format!(
            "D_fit/D_analytic = {ratio:.4} (required [0.9, 1.1]), N = 1000, \
             run took {:.1} s (< 60 s)",
            timed.seconds
        ),
    );
}

#[test]
fn c11_monte_carlo_dephasing() {
    // First clause: pointwise 5% relative agreement with exp(-Lambda dx^2 t)
    // wherever the prediction lies in [0.1, 0.9]. At N = 1000 the
    // magnitude estimator has an absolute noise floor near 0.022, i.e.
    // over 20% relative at the 0.1 end of the window, so this tolerance
    // sits far below the estimator noise and fails for any seed; the
    // systematic agreement (see the tracking check in the library tests)
    // is at the percent level. Analysis in the project notes.
    let stats = &ensemble_1000().stats;
    let max_dev = stats.max_dephasing_deviation().unwrap();
    let gauss_ok = stats.gauss_identity_within(3.0);
    println!(
        "criterion 11 dephasing-vs-analytic: {} (max relative deviation {max_dev:.4} where \
         prediction in [0.1, 0.9], required < 0.05)",
        if max_dev < 0.05 { "PASS" } else { "FAIL" }
    );
    println!(
        "criterion 11 gaussian identity:     {} (|<e^(i dS/hbar)>| vs exp(-<dS^2>/2 hbar^2) \
         within 3 sigma at every checkpoint)",
        if gauss_ok { "PASS" } else { "FAIL" }
    );
    criterion(
        11,
        "Monte Carlo dephasing",
        max_dev < 0.05 && gauss_ok,
        &format!(
            "max deviation {max_dev:.4} (required < 0.05), gauss identity 3 sigma: {gauss_ok}"
        ),
    );
}

#[test]
fn c12_noise_fidelity() {
    // Wide flat band so 200 rectangular segments resolve it.
    let level = 3.0e-2;
    let (lo, hi) = (0.5, 4.0);
    let spectrum = GwSpectrum::flat_band(level, lo, hi).unwrap();
    let grid = SamplingGrid::new(65536, 0.5).unwrap();
    let r = synthesize(&spectrum, grid, RealizationSeed::new(17)).unwrap();
    let psd = estimate_psd(r.samples(), grid.dt(), 200).unwrap();
    let seg_len = grid.n() / 200;
    let seg_res = 2.0 * std::f64::consts::PI / (seg_len as f64 * grid.dt());
    let avg = psd.band_average(lo + seg_res, hi - seg_res).unwrap();
    let psd_dev = ((avg - level) / level).abs();

    let mut pooled = Vec::new();
    let kurt_grid = SamplingGrid::new(16384, 0.5).unwrap();
    for i in 0..40 {
        let k = synthesize(&spectrum, kurt_grid, RealizationSeed::derive(33, i)).unwrap();
        pooled.extend(k.samples().iter().map(|z| z.re));
        pooled.extend(k.samples().iter().map(|z| z.im));
    }
    let kurt = excess_kurtosis(&pooled);
    let pass = psd_dev < 0.05 && pooled.len() >= 1_000_000 && kurt.abs() < 0.1;
    criterion(
        12,
        "noise fidelity",
        pass,
        &format!(
            "PSD band-average off target by {:.2}% (required < 5%), pooled excess kurtosis \
             {kurt:.4} over {} samples (required |k| < 0.1)",
            100.0 * psd_dev,
            pooled.len()
        ),
    );
}

fn run_cli(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gravidec"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn c13_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    let mut detail = String::new();
    let cases: [(&str, Vec<&str>); 3] = [
        (
            "rates.json",
            vec!["rates", "--scenario", "moon", "--format", "json"],
        ),
        (
            "sweep.csv",
            vec![
                "sweep",
                "--sweep",
                "t_em:1:100:5:log",
                "--scenario",
                "moon",
                "--format",
                "csv",
            ],
        ),
        (
            "stats.csv",
            vec![
                "simulate",
                "--scenario",
                "moon",
                "--ensemble",
                "48",
                "--samples",
                "512",
                "--seed",
                "7",
            ],
        ),
    ];
    for (name, args) in cases {
        let mut outputs = Vec::new();
        for pass in 0..2 {
            let path = dir.path().join(format!("{pass}_{name}"));
            let mut full = args.clone();
            full.push("--output");
            let path_str = path.display().to_string();
            full.push(&path_str);
            let out = run_cli(dir.path(), &full);
            // Small simulate runs may trip the statistical gate (exit 3);
            // the files must still be written and identical.
            assert!(
                matches!(out.status.code(), Some(0) | Some(3)),
                "command {args:?} exited {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(std::fs::read(&path).unwrap());
        }
        let same = outputs[0] == outputs[1];
        identical &= same;
        detail.push_str(&format!(
            "{name}: {} bytes, identical = {same}; ",
            outputs[0].len()
        ));
    }
    criterion(13, "determinism", identical, detail.trim_end());
}
