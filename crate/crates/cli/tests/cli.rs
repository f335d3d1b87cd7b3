use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wentzell(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wentzell"))
        .args(args)
        .current_dir(dir)
        .env("WENTZELL_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn modes_writes_cache_and_reuses_it() {
    let dir = tempfile::tempdir().unwrap();
    let first = wentzell(dir.path(), &["modes", "--S", "1", "--c", "1", "--mu", "1", "--max", "200", "--out", "table.csv"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(stdout(&first).contains("cache written"));
    let cached: Vec<_> = fs::read_dir(dir.path().join("cache")).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let path = cached[0].as_ref().unwrap().path();
    let bytes = fs::read(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(doc["entries"].as_array().unwrap().len(), 201);
    for key in ["S", "c", "mu", "residual_tol"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    let csv = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    assert!(csv.starts_with("# S = 1\n# c = 1\n# mu = 1\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 202);

    let second = wentzell(dir.path(), &["modes", "--max", "200", "--out", "table2.csv"]);
    assert_eq!(second.status.code(), Some(0));
    assert!(stdout(&second).contains("cache hit"));
    assert_eq!(fs::read(&path).unwrap(), bytes);
    // a reloaded table reproduces the freshly built one exactly
    assert_eq!(fs::read_to_string(dir.path().join("table2.csv")).unwrap(), csv);
}

#[test]
fn negative_coupling_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["modes", "--c", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wentzell(dir.path(), &["evolve", "--cfl", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wentzell(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reflection_scenario_reports_small_residual() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["evolve", "--scenario", "reflection", "--out", "r.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let sup = csv
        .lines()
        .find_map(|l| l.strip_prefix("# sup_error = "))
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap();
    assert!(sup < 0.1);
    let max_residual = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| l.split(',').nth(3).unwrap().parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    assert_eq!(max_residual, sup);
}

#[test]
fn zero_data_gives_zero_series_and_energy_is_conserved() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["evolve", "--scenario", "zero", "--grid-n", "128", "--rows", "5"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().filter(|l| !l.starts_with('#') && !l.starts_with('t')) {
        assert!(line.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }
    let o = wentzell(dir.path(), &["evolve", "--scenario", "pulse", "--grid-n", "1024", "--rows", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let energies: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    let e0 = energies[0];
    assert!(energies.iter().all(|e| ((e - e0) / e0).abs() < 1e-3));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--scenario", "standing", "--grid-n", "128", "--t-end", "1", "--rows", "4", "--snapshots", "2"];
    let a = wentzell(dir.path(), &args);
    let b = wentzell(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn halfspace_weight_normalization_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["twopoint", "--geometry", "halfspace", "--mu", "1", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let norm: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("# weight_normalization = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 1.0).abs() < 1e-8);
}

#[test]
fn massless_d1_two_point_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["twopoint", "--mu", "0", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn holo_fig2_lists_bursts() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["holo", "--fig2", "--out", "fig2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let centers: Vec<f64> = stdout(&o)
        .lines()
        .filter_map(|l| l.strip_prefix("burst at t = "))
        .map(|l| l.split(',').next().unwrap().trim().parse().unwrap())
        .collect();
    assert_eq!(centers.len(), 6);
    for (t, want) in centers.iter().zip([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]) {
        assert!((t - want).abs() <= 0.2);
    }
    for f in ["fhat.csv", "fprime.csv", "meta.json"] {
        assert!(dir.path().join("fig2").join(f).exists(), "{f}");
    }
    let meta: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("fig2/meta.json")).unwrap()).unwrap();
    assert_eq!(meta["mu"], 0.0);
}

#[test]
fn verify_subset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = wentzell(dir.path(), &["verify", "--criterion", "1", "--criterion", "12", "--out", "report.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(doc["passed"], 2);
    assert_eq!(doc["criteria"].as_array().unwrap().len(), 2);
    let o = wentzell(dir.path(), &["verify", "--criterion", "13"]);
    assert_eq!(o.status.code(), Some(1));
}
