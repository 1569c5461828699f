use std::path::Path;
use std::process::{Command, Output};

use qtl_cli::plot::{risk_curve_svg, shift_sweep_svg};
use qtl_cli::table::parse_csv;

fn qtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtl")).args(args).env_remove("QTL_THREADS").output().unwrap()
}

fn small_config(dir: &Path, edits: &[(&str, serde_json::Value)], preset: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(qtl_cli::config::preset(preset).unwrap()).unwrap();
    v["grid_resolution"] = 4.into();
    v["mc_grid_resolution"] = 3.into();
    v["replications"] = 6.into();
    v["bound"]["estimator"] = serde_json::json!({ "outer": 3, "sigma_draws": 8 });
    for (k, val) in edits {
        v[*k] = val.clone();
    }
    let path = dir.join("config.json");
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn rerun_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), &[("n_source", serde_json::json!([0, 10])), ("n_target", serde_json::json!([2, 4]))], "fig2");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(qtl(&["risk-curve", "--config", &cfg, "--out", a.to_str().unwrap(), "--threads", "1"]).status.success());
    assert!(qtl(&["risk-curve", "--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "3"]).status.success());
    for f in ["risk_curve.csv", "risk_curve.svg"] {
        assert_eq!(read(a.join(f)), read(b.join(f)), "{f}");
    }
    let csv = read(a.join("risk_curve.csv"));
    assert!(csv.starts_with(
        "n_source,n_target,replications,median,q25,q75,excess_raw_mean,bound_value,complexity_term,confidence_term,\
         target_complexity_term,target_confidence_term,dissimilarity_term,source_complexity_term,source_confidence_term\r\n"
    ));
    assert_eq!(risk_curve_svg(&csv).unwrap(), read(a.join("risk_curve.svg")));
}

#[test]
fn seed_flag_changes_draws() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), &[("n_source", serde_json::json!([0])), ("n_target", serde_json::json!([3]))], "fig2");
    let run = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        assert!(qtl(&["risk-curve", "--config", &cfg, "--seed", seed, "--out", out.to_str().unwrap()]).status.success());
        read(out.join("risk_curve.csv"))
    };
    assert_ne!(run("1", "s1"), run("2", "s2"));
}

#[test]
fn single_replication_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(
        dir.path(),
        &[("replications", 1.into()), ("n_source", serde_json::json!([10])), ("n_target", serde_json::json!([4]))],
        "fig2",
    );
    let out = dir.path().join("o");
    assert!(qtl(&["risk-curve", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let t = parse_csv(&read(out.join("risk_curve.csv"))).unwrap();
    assert_eq!(t.rows.len(), 1);
    let col = |n| t.rows[0][t.column(n).unwrap()].unwrap();
    assert_eq!(col("q25"), col("median"));
    assert_eq!(col("q75"), col("median"));
    assert_eq!(col("replications"), 1.0);
}

#[test]
fn zero_shift_has_zero_dissimilarity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), &[("shifts", serde_json::json!([0.0]))], "fig3");
    let out = dir.path().join("o");
    assert!(qtl(&["shift-sweep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let csv = read(out.join("shift_sweep.csv"));
    assert!(csv.starts_with("shift,median,q25,q75,bound_value,dst_trace,dst_tv\r\n"));
    let t = parse_csv(&csv).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!(t.rows[0][t.column("dst_trace").unwrap()].unwrap().abs() < 1e-12);
    assert!(t.rows[0][t.column("dst_tv").unwrap()].unwrap().abs() < 1e-12);
    assert_eq!(shift_sweep_svg(&csv).unwrap(), read(out.join("shift_sweep.svg")));
}

#[test]
fn shift_rows_ascend() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), &[("shifts", serde_json::json!([0.5, -0.5, 0.0, 0.25, -0.25]))], "fig3");
    let out = dir.path().join("o");
    assert!(qtl(&["shift-sweep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let t = parse_csv(&read(out.join("shift_sweep.csv"))).unwrap();
    let shifts: Vec<f64> = t.rows.iter().map(|r| r[0].unwrap()).collect();
    assert_eq!(shifts, vec![-0.5, -0.25, 0.0, 0.25, 0.5]);
}

#[test]
fn bounds_table_for_identical_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let target = serde_json::json!({ "mu0": 1.0, "mu1": -1.0, "sigma2": 0.11 });
    let cfg = small_config(
        dir.path(),
        &[("target", target), ("n_source", serde_json::json!([10, 100, 1000])), ("n_target", serde_json::json!([4]))],
        "fig2",
    );
    let out = dir.path().join("o");
    assert!(qtl(&["bounds", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let t = parse_csv(&read(out.join("bounds.csv"))).unwrap();
    let col = |n: &str| -> Vec<f64> { t.rows.iter().map(|r| r[t.column(n).unwrap()].unwrap()).collect() };
    assert!(col("dst_trace").iter().all(|d| d.abs() < 1e-12));
    let bt = col("bound_transfer");
    assert!(bt.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), &[("replications", 0.into())], "fig2");
    let o = qtl(&["risk-curve", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("replications"));

    let cfg = small_config(dir.path(), &[("unexpected", 1.into())], "fig2");
    let o = qtl(&["bounds", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unexpected"));

    let o = qtl(&["shift-sweep", "--config", "no-such-config.json"]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = small_config(dir.path(), &[], "fig2");
    let o = qtl(&["shift-sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_source"));
}

#[test]
fn validate_exit_codes() {
    let o = qtl(&["validate", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 8);

    let o = qtl(&["validate", "--quick", "--corrupt-helstrom"]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL helstrom_optimality")));
}
