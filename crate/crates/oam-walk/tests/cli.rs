//! Black-box tests of the compiled binary: flags, config files, output
//! determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_oam-walk");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn ideal_run_writes_expected_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("spectra.csv");
    let out = run(&[
        "run",
        "--mode",
        "ideal",
        "--steps",
        "2",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "iteration,ell,probability_or_power");
    // Step 1 of the symmetric walk: P(±1) = 1/2.
    for (line, ell) in [(lines[1], "-1"), (lines[2], "1")] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(&fields[..2], &["1", ell]);
        assert!((fields[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    }
    // Step 2: P(−2) = 1/4, P(0) = 1/2, P(2) = 1/4.
    assert_eq!(lines.len(), 6);
    let p0: f64 = lines[4].split(',').nth(2).unwrap().parse().unwrap();
    assert!((p0 - 0.5).abs() < 1e-12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "run",
            "--mode",
            "ring",
            "--steps",
            "40",
            "--mu",
            "0.3",
            "--coin",
            "random",
            "--seed",
            "17",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hom.json");
    let out = run(&[
        "run",
        "--mode",
        "hom",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let report = &value["hom"];
    assert_eq!(report["input_ell"], 0);
    assert_eq!(report["coincidence_amplitude"], 0.0);
    assert!(report["terms"].as_array().unwrap().len() >= 2);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("coherent.csv");
    let config_path = dir.path().join("run.json");
    let config = serde_json::json!({
        "mode": "coherent",
        "steps": 5,
        "alpha": [2.0, 0.0],
        "output": out_path,
        "format": "csv",
    });
    fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();

    let out = run(&["run", "--config", config_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    // First iteration: mean photon number |α|²/2 = 2 at ℓ = ±1.
    let first: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((first - 2.0).abs() < 1e-12);
}

#[test]
fn invalid_configuration_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.csv");
    let out_arg = out_path.to_str().unwrap();

    // Ring mode without --mu.
    let out = run(&["run", "--mode", "ring", "--steps", "3", "--output", out_arg]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("mu"));

    // Unknown mode.
    let out = run(&["run", "--mode", "sideways", "--steps", "3", "--output", out_arg]);
    assert_eq!(code(&out), 1);

    // Non-half-integer charge.
    let out = run(&[
        "run", "--mode", "ideal", "--steps", "3", "--q", "0.3", "--output", out_arg,
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("half integer"));

    // HOM demands JSON.
    let out = run(&["run", "--mode", "hom", "--format", "csv", "--output", out_arg]);
    assert_eq!(code(&out), 1);

    // --config and --mode together.
    let out = run(&[
        "run", "--config", "whatever.json", "--mode", "ideal", "--output", out_arg,
    ]);
    assert_eq!(code(&out), 1);

    // Nothing was ever written.
    assert!(!out_path.exists());
}

#[test]
fn io_failure_exits_2() {
    // Unwritable output location.
    let out = run(&[
        "run",
        "--mode",
        "ideal",
        "--steps",
        "2",
        "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("writing"));

    // Missing config file.
    let out = run(&["run", "--config", "/nonexistent-dir/run.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("reading"));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("run"));
    assert!(text.contains("sweep"));
}

fn sweep_entry(mode: &str, steps: u32, output: &Path) -> serde_json::Value {
    let mut entry = serde_json::json!({
        "mode": mode,
        "steps": steps,
        "output": output,
    });
    if mode == "ring" {
        entry["mu"] = serde_json::json!(0.5);
    }
    entry
}

#[test]
fn sweep_runs_every_config() {
    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<_> = (0..4).map(|i| dir.path().join(format!("out{i}.csv"))).collect();
    let configs: Vec<_> = outputs
        .iter()
        .zip(["ideal", "jones", "ring", "ideal"])
        .enumerate()
        .map(|(i, (path, mode))| sweep_entry(mode, 5 + i as u32, path))
        .collect();
    let configs_path = dir.path().join("sweep.json");
    fs::write(&configs_path, serde_json::to_string(&configs).unwrap()).unwrap();

    let out = run(&["sweep", "--configs", configs_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for path in &outputs {
        assert!(path.exists(), "{} missing", path.display());
    }

    let first = fs::read_to_string(&outputs[0]).unwrap();
    assert!(first.starts_with("iteration,ell,probability_or_power\n"));
    let ring = fs::read_to_string(&outputs[2]).unwrap();
    assert!(ring.starts_with("iteration,ell,probability_or_power,detected_power,clipped_power\n"));
}

#[test]
fn sweep_validates_before_writing_anything() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    let configs = serde_json::json!([
        sweep_entry("ideal", 3, &good),
        { "mode": "ring", "steps": 3, "output": dir.path().join("bad.csv") }, // no mu
    ]);
    let configs_path = dir.path().join("sweep.json");
    fs::write(&configs_path, serde_json::to_string(&configs).unwrap()).unwrap();

    let out = run(&["sweep", "--configs", configs_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("config #1"));
    assert!(!good.exists(), "no output may be written when any config is invalid");
}
