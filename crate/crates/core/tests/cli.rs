use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use noma_lab::harness::{
    emit_csv, read_csv, replay_row, run_scenario, ResultTable, Scenario, BUILTIN_SCENARIOS,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noma-lab"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn validate_shipped_configs() {
    for name in ["default.conf", "oracle.conf", "cj-sigma2.conf"] {
        let out = run(&["validate", config(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", text(&out.stderr));
    }
}

#[test]
fn validate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "M = 4\nalpha1 = 1.5\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("alpha1"));

    std::fs::write(&path, "M = four\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("`M`"), "{}", text(&out.stderr));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["run", "nosuch"]);
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    for name in BUILTIN_SCENARIOS {
        assert!(err.contains(name), "{err}");
    }
    assert_eq!(run(&["run", "fig2", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["run", "fig2", "--set", "nonsense=1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["run", "fig2", "--trials", "many"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn list_scenarios_names_all_builtins() {
    let out = run(&["list-scenarios"]);
    assert_eq!(out.status.code(), Some(0));
    let listed: Vec<String> = text(&out.stdout)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(listed, BUILTIN_SCENARIOS);
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2.csv");
    let out = bin()
        .args(["run", "fig2", "--trials", "2", "--set", "M=4", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let data = std::fs::read_to_string(&csv).unwrap();
    let mut lines = data.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,scheme,sweep_param,sweep_value,trial,seed,total_r_sec_bps,ee_bps_per_w,match_ops,solver_iters,converged"
    );
    let table = read_csv(&csv).unwrap();
    // `--set M=4` changes the base, the sweep still sets M per point
    assert_eq!(table.rows.len(), 4 * 2);
    assert!(table.rows.iter().any(|r| r.match_ops > 0));

    let summary: Vec<String> = text(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    assert_eq!(summary.len(), 4);
    for line in summary {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 5, "{line}");
        assert_eq!(fields[0], "SSPA-1");
        let (mean, lo, hi): (f64, f64, f64) = (
            fields[1].parse().unwrap(),
            fields[2].parse().unwrap(),
            fields[3].parse().unwrap(),
        );
        assert!(lo <= mean && mean <= hi);
        assert_eq!(fields[4], "2");
    }
}

#[test]
fn infeasible_scenario_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let out = bin()
        .args([
            "run",
            "fig4",
            "--trials",
            "2",
            "--set",
            "R_min=1e12",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));
    // the infeasible trials are still recorded
    let table = read_csv(&csv).unwrap();
    assert!(table.rows.iter().any(|r| !r.converged));
}

#[test]
fn seed_and_threads_determine_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let go = |seed: &str, threads: &str, name: &str| {
        let path = dir.path().join(name);
        let out = bin()
            .env("NOMA_LAB_THREADS", threads)
            .args(["run", "fig6", "--trials", "3", "--seed", seed, "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let a = go("42", "1", "a.csv");
    let b = go("42", "0", "b.csv");
    let c = go("43", "1", "c.csv");
    assert_eq!(a, b);
    assert_ne!(a, c);

    let out = bin()
        .env("NOMA_LAB_THREADS", "lots")
        .args(["run", "fig6", "--trials", "1", "--out"])
        .arg(dir.path().join("d.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_on_small_instance() {
    let out = run(&[
        "oracle",
        config("oracle.conf").to_str().unwrap(),
        "--trials",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let rows: Vec<Vec<f64>> = text(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r.len(), 8);
        // SCAS-2 reaches the exhaustive optimum on 2×2; Dinkelbach is at
        // least as good as the grid up to its resolution
        assert!(r[4].abs() < 1e-9, "{r:?}");
        assert!(r[7] < 1e-2, "{r:?}");
    }

    let out = run(&["oracle", config("default.conf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scenario_file_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cj.csv");
    let out = bin()
        .args([
            "run",
            config("cj-sigma2.conf").to_str().unwrap(),
            "--trials",
            "1",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let table = read_csv(&csv).unwrap();
    assert_eq!(table.rows.len(), 5 * 3);
    assert!(table.rows.iter().all(|r| r.scenario == "cj-sigma2"));
}

#[test]
fn rows_replay_in_isolation() {
    let mut sc = Scenario::builtin("fig7").unwrap();
    sc.trials = 2;
    sc.sweep.values.truncate(2);
    let table = run_scenario(&sc).unwrap();
    assert_eq!(table.rows.len(), 2 * 2 * 3);
    for row in &table.rows {
        let again = replay_row(&sc, row.scheme, row.sweep_value, row.trial).unwrap();
        assert_eq!(&again, row);
    }
}

#[test]
fn single_row_and_empty_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    emit_csv(&ResultTable::default(), &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);

    let mut sc = Scenario::builtin("fig4").unwrap();
    sc.trials = 1;
    sc.schemes.truncate(1);
    let table = run_scenario(&sc).unwrap();
    assert_eq!(table.rows.len(), 1);
    emit_csv(&table, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
    assert_eq!(read_csv(&path).unwrap(), table);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("t.csv");
    let err = emit_csv(&ResultTable::default(), &path).unwrap_err();
    assert!(err.to_string().contains("missing"), "{err}");
}
