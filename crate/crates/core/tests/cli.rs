use std::path::Path;

use catenoid_flow::cli::{run, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

fn catflow(args: &[&str]) -> i32 {
    run(std::iter::once("catflow").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const SMALL_RUN: &str = "dr = 0.1\n[data]\nlambda = 10.0\namplitude = 1e-4\n[run]\nt_end = 3.0\n";

#[test]
fn zero_data_gives_zero_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "zero.toml", "dr = 0.1\n[data]\nlambda = 10.0\n[run]\nt_end = 2.0\n");
    let out = dir.path().join("out");
    assert_eq!(catflow(&["evolve", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_OK);
    let csv = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    for line in csv.lines().skip(1) {
        for (h, v) in header.iter().zip(line.split(',')) {
            match *h {
                "t" | "hyperbolicity_slack" | "support_lo" | "support_hi" => {}
                _ => assert_eq!(v.parse::<f64>().unwrap(), 0.0, "{h}"),
            }
        }
    }
    let m = manifest(&out);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["data"]["lambda"], 10.0);
}

#[test]
fn identical_configs_give_identical_csv_and_the_manifest_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_RUN);
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    assert_eq!(catflow(&["evolve", "--config", &cfg, "--out", a.to_str().unwrap()]), EXIT_OK);
    assert_eq!(catflow(&["evolve", "--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "1"]), EXIT_OK);
    let echoed = a.join("config.toml");
    assert_eq!(catflow(&["evolve", "--config", echoed.to_str().unwrap(), "--out", c.to_str().unwrap()]), EXIT_OK);
    let csv = |d: &Path| std::fs::read(d.join("diagnostics.csv")).unwrap();
    assert_eq!(csv(&a), csv(&b));
    assert_eq!(csv(&a), csv(&c));
    assert_eq!(manifest(&a)["config"], manifest(&c)["config"]);
}

#[test]
fn overrides_win_over_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_RUN);
    let out = dir.path().join("o");
    let code = catflow(&["evolve", "--config", &cfg, "--set", "run.t_end=1.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(manifest(&out)["config"]["run"]["t_end"], 1.5);
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    assert_eq!(catflow(&["nonsense"]), EXIT_USAGE);
    assert_eq!(catflow(&["evolve", "--out", o, "--set", "no_such_key=1"]), EXIT_USAGE);
    let bad = write(dir.path(), "bad.toml", "dr = \"wide\"\n");
    assert_eq!(catflow(&["evolve", "--config", &bad, "--out", o]), EXIT_USAGE);
    assert!(out.join("error.json").exists());
    assert_eq!(manifest(&out)["exit_code"], EXIT_USAGE);
}

#[test]
fn numerical_termination_exits_with_three_and_its_tag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_RUN);
    let out = dir.path().join("o");
    let code = catflow(&["evolve", "--config", &cfg, "--set", "run.blowup_factor=0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_NUMERICAL);
    assert_eq!(manifest(&out)["status"], "norm_blowup");
}

#[test]
fn missing_files_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let missing = dir.path().join("nope.toml");
    assert_eq!(catflow(&["evolve", "--config", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_IO);
    let empty = dir.path().join("empty");
    std::fs::create_dir_all(&empty).unwrap();
    assert_eq!(catflow(&["audit", "--trajectory", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_IO);
}

#[test]
fn audit_reads_a_stored_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_RUN);
    let run_dir = dir.path().join("run");
    assert_eq!(catflow(&["evolve", "--config", &cfg, "--out", run_dir.to_str().unwrap()]), EXIT_OK);
    let code = catflow(&["audit", "--trajectory", run_dir.to_str().unwrap(), "--set", "cone.x0=15.0", "--set", "cone.R=6.0"]);
    assert_eq!(code, EXIT_OK);
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("audit/audit.json")).unwrap()).unwrap();
    assert_eq!(a["nullform_pass"], true);
    assert!(a["energy_balance_max_relative"].as_f64().unwrap() < 0.1);
    assert!(run_dir.join("audit/energy_audit.csv").exists());
}

#[test]
fn other_modes_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).display().to_string();
    assert_eq!(catflow(&["picard", "--out", &d("p"), "--set", "dr=0.05"]), EXIT_OK);
    assert!(dir.path().join("p/picard.csv").exists());
    assert_eq!(catflow(&["evolve-cyl", "--out", &d("c"), "--set", "run.t_end=1.0"]), EXIT_OK);
    assert!(dir.path().join("c/cyl.csv").exists());
    assert_eq!(catflow(&["converge", "--out", &d("v"), "--set", "levels=2", "--set", "t_end=1.0"]), EXIT_OK);
    assert!(dir.path().join("v/convergence.csv").exists());
    let sweep = ["sweep", "--out", &d("s"), "--set", "lambdas=[8.0]", "--set", "window.dr=0.1", "--set", "window.c1=4.0"];
    assert_eq!(catflow(&sweep), EXIT_OK);
    let csv = std::fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",completed,"));
}
