use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use euler_voigt::harness::{Evidence, SweepAnalysis};
use euler_voigt::io::checkpoint::read_checkpoint;
use euler_voigt::io::files::{read_json, read_series};
use euler_voigt::io::summary::SweepSummary;
use euler_voigt::integrate::RunSummary;

const SHEAR: &str = r#"
[grid]
n = 16
[ic]
kind = "shear"
[voigt]
alphas = [0.2, 0.1, 0.05, 0.025]
[time]
dt = 0.01
t_final = 0.3
sample_stride = 5
[fit]
time_grid_points = 4
"#;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euler-voigt"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .env_remove("VOIGT_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn setup(config: &str) -> tempfile::TempDir {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("c.toml"), config).unwrap();
    tmp
}

#[test]
fn shear_sweep_vanishes_with_unit_exponent_and_analyze_agrees() {
    let tmp = setup(SHEAR);
    let out = bin(&["sweep", "--config", "c.toml", "--output", "sw"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("sw");
    let summary: SweepSummary = read_json(&dir.join("sweep_summary.json")).unwrap();
    let v = &summary.analysis.verdict;
    assert_eq!(v.new_criterion_evidence, Evidence::Vanishes);
    let fit = v.fit_new.unwrap();
    assert!((fit.beta - 1.0).abs() <= 1e-6, "{}", fit.beta);
    assert_eq!(summary.runs.len(), 4);
    for (i, run) in summary.runs.iter().enumerate() {
        assert_eq!(run.series.as_deref(), Some(format!("run_{i:02}/series.csv").as_str()));
        let series = read_series(&dir.join(run.series.as_ref().unwrap())).unwrap();
        assert!(series.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(series.last().unwrap().t, 0.3);
    }

    let before = fs::read(dir.join("sweep_summary.json")).unwrap();
    let out = bin(&["analyze", "sw"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let analysis: SweepAnalysis = read_json(&dir.join("analysis.json")).unwrap();
    assert_eq!(analysis, summary.analysis);
    let first = fs::read(dir.join("analysis.json")).unwrap();
    assert_eq!(bin(&["analyze", "sw"], tmp.path()).status.code(), Some(0));
    assert_eq!(fs::read(dir.join("analysis.json")).unwrap(), first);
    assert_eq!(fs::read(dir.join("sweep_summary.json")).unwrap(), before);
}

#[test]
fn run_writes_series_summary_and_checkpoint() {
    let tmp = setup(SHEAR);
    let out = bin(&["run", "--config", "c.toml", "--alpha", "0.1", "--output", "r"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("r");
    let s: RunSummary = read_json(&dir.join("summary.json")).unwrap();
    assert_eq!(s.alpha, 0.1);
    let text = fs::read_to_string(dir.join("summary.json")).unwrap();
    for key in ["\"alpha\"", "\"n\"", "\"t_final\"", "\"M\"", "\"t_argmax\"", "\"q_final\"", "\"drift\"", "\"status\""] {
        assert!(text.contains(key), "{key}");
    }
    let csv = fs::read_to_string(dir.join("series.csv")).unwrap();
    assert!(csv.starts_with("t,energy,enstrophy,alpha_energy,q,dt\n"));
    let ck = read_checkpoint(&dir.join("final.evck"), Some(16)).unwrap();
    assert_eq!(ck.t, 0.3);
    assert!(read_checkpoint(&dir.join("final.evck"), Some(32)).is_err());

    // several alphas and no --alpha: ambiguous
    assert_eq!(bin(&["run", "--config", "c.toml"], tmp.path()).status.code(), Some(1));
}

#[test]
fn ic_checkpoint_and_seed_override() {
    let cfg = SHEAR.replace("kind = \"shear\"", "kind = \"random-solenoidal\"\nk0 = 3.0");
    let tmp = setup(&cfg);
    for (seed, dir) in [("5", "a"), ("5", "b"), ("6", "c")] {
        let out = bin(&["ic", "--config", "c.toml", "--seed", seed, "--output", dir], tmp.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let read = |d: &str| fs::read(tmp.path().join(d).join("ic.evck")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
    assert_eq!(&read("a")[..4], b"EVCK");
}

#[test]
fn output_directory_precedence() {
    let with_dir = format!("{SHEAR}\n[output]\ndir = \"from_config\"\n");
    let tmp = setup(&with_dir);
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_euler-voigt"));
        cmd.args(["ic", "--config", "c.toml"]).args(extra).current_dir(tmp.path()).env("RUST_LOG", "warn");
        match env {
            Some(v) => cmd.env("VOIGT_OUTPUT_DIR", v),
            None => cmd.env_remove("VOIGT_OUTPUT_DIR"),
        };
        assert_eq!(cmd.status().unwrap().code(), Some(0));
    };
    run(&["--output", "from_flag"], Some("from_env"));
    assert!(tmp.path().join("from_flag/ic.evck").exists());
    run(&[], Some("from_env"));
    assert!(tmp.path().join("from_config/ic.evck").exists());
    assert!(!tmp.path().join("from_env").exists());

    let tmp2 = setup(SHEAR);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_euler-voigt"));
    cmd.args(["ic", "--config", "c.toml"]).current_dir(tmp2.path()).env("VOIGT_OUTPUT_DIR", "from_env");
    assert_eq!(cmd.status().unwrap().code(), Some(0));
    assert!(tmp2.path().join("from_env/ic.evck").exists());
}

#[test]
fn exit_codes() {
    let tmp = setup(SHEAR);
    assert_eq!(bin(&[], tmp.path()).status.code(), Some(1));
    assert_eq!(bin(&["--help"], tmp.path()).status.code(), Some(0));
    assert_eq!(bin(&["--version"], tmp.path()).status.code(), Some(0));
    assert_eq!(bin(&["sweep", "--config", "missing.toml"], tmp.path()).status.code(), Some(1));
    assert_eq!(bin(&["analyze", "nowhere"], tmp.path()).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--suite", "bogus"], tmp.path()).status.code(), Some(1));

    fs::write(tmp.path().join("bad.toml"), format!("{SHEAR}\ncolour = 3\n")).unwrap();
    assert_eq!(bin(&["sweep", "--config", "bad.toml"], tmp.path()).status.code(), Some(1));
    fs::write(tmp.path().join("seed.toml"), SHEAR).unwrap();
    assert_eq!(bin(&["ic", "--config", "seed.toml", "--seed", "3"], tmp.path()).status.code(), Some(1));

    // a drift gate no run can meet ends the run INVALID
    let strict = SHEAR
        .replace("kind = \"shear\"", "kind = \"taylor-green\"")
        .replace("dt = 0.01", "dt = 0.05")
        + "\n[run]\ndrift_abort_tol = 1e-300\n";
    fs::write(tmp.path().join("strict.toml"), strict).unwrap();
    let out = bin(&["run", "--config", "strict.toml", "--alpha", "0.1", "--output", "s"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("INVALID"));
}

#[test]
fn verify_shear_suite_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin(&["verify", "--suite", "shear"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failed"), "{text}");
}
