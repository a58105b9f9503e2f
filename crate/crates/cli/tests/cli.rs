use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn maxcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxcorr"))
        .args(args)
        .env_remove("MAXCORR_THREADS")
        .output()
        .expect("binary runs")
}

/// Deterministic 100-point series with a header.
fn write_series(dir: &Path, name: &str, f: impl Fn(usize) -> f64) -> String {
    let mut text = String::from("value\n");
    for t in 0..100 {
        text.push_str(&format!("{}\n", f(t)));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn noise(t: usize) -> f64 {
    let x = (t as f64 * 12.9898).sin() * 43_758.545_3;
    x - x.floor() - 0.5
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn proportional_lag_on_100_points_gives_ten() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "y.csv", noise);
    let out = maxcorr(&[
        "test", &file, "--filter", "mean", "--test", "maxcorr", "--bootstrap", "dwb", "--lag",
        "prop:0.5", "--M", "500", "--seed", "7", "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lag"], 10);
    assert_eq!(v["reference"]["draws"], 500);
    assert_eq!(v["reference"]["block_len"], 10);
    assert_eq!(v["correlogram"].as_array().unwrap().len(), 10);
    let p = v["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(v["reject"], p < 0.05);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "y.csv", noise);
    let args = ["test", &file, "--filter", "ar:1", "--lag", "prop:1", "--seed", "3"];
    let a = maxcorr(&args);
    let b = maxcorr(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("L = 21"));
    assert!(text.contains("p-value"));
}

#[test]
fn unfiltered_zero_mean_series() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "y.csv", |t| if t % 2 == 0 { 1.0 } else { -1.0 } * (1.0 + noise(t)));
    let out = maxcorr(&["test", &file, "--filter", "none", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["theta"].as_array().unwrap().len(), 0);
    assert_eq!(v["residuals"], 100);
}

#[test]
fn competing_tests_run() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "y.csv", noise);
    for args in [
        vec!["--test", "hong", "--bootstrap", "asymptotic"],
        vec!["--test", "ljungbox", "--bootstrap", "wb"],
        vec!["--test", "cvm", "--bootstrap", "brwb", "--M", "49"],
        vec!["--test", "dv", "--bootstrap", "chi2", "--lrv", "identity"],
        vec!["--test", "dv:bartlett:dwb", "--M", "49"],
    ] {
        let mut full = vec!["test", file.as_str()];
        full.extend(args.iter());
        let out = maxcorr(&full);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn input_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(maxcorr(&["test", missing.to_str().unwrap()]).status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "y\n1\n2\nabc\n").unwrap();
    assert_eq!(maxcorr(&["test", bad.to_str().unwrap()]).status.code(), Some(2));

    let gap = dir.path().join("gap.csv");
    fs::write(&gap, "1\n2\nNA\n4\n").unwrap();
    assert_eq!(maxcorr(&["test", gap.to_str().unwrap()]).status.code(), Some(2));

    let short = dir.path().join("short.csv");
    fs::write(&short, "1\n2\n3\n").unwrap();
    assert_eq!(
        maxcorr(&["test", short.to_str().unwrap(), "--filter", "garch"]).status.code(),
        Some(2)
    );
}

#[test]
fn constant_series_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "c.csv", |_| 2.5);
    assert_eq!(maxcorr(&["test", &file]).status.code(), Some(3));
}

#[test]
fn zero_replications_rejected() {
    let out = maxcorr(&["simulate", "--preset", "table2", "--reps", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn preset_smoke_and_thread_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    let run = |threads: &str, out: &Path| {
        maxcorr(&[
            "simulate", "--preset", "table2", "--reps", "20", "--draws", "49", "--threads", threads,
            "--out", out.to_str().unwrap(),
        ])
    };
    let a = run("1", &one);
    let b = run("4", &four);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(b.status.success());
    let csv1 = fs::read_to_string(one.join("table.csv")).unwrap();
    let csv4 = fs::read_to_string(four.join("table.csv")).unwrap();
    assert_eq!(csv1, csv4);
    assert_eq!(
        fs::read(one.join("table.json")).unwrap(),
        fs::read(four.join("table.json")).unwrap()
    );
    assert!(csv1.starts_with("# manifest: manifest.json\n"));
    assert_eq!(csv1.lines().count(), 2 + 24);
    assert!(csv1.lines().nth(1).unwrap().contains("se_5pct"));

    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(four.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["threads"], 4);
    assert_eq!(m["seed"], 1);
    assert_eq!(m["cells"].as_array().unwrap().len(), 24);
    assert!(m["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_file_runs_and_rejects_bad_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    fs::write(
        &good,
        r#"replications = 10
seed = 4

[[cell]]
process = "bilinear"
error = "iid"
n = 80
filter = "mean"
test = "portmanteau:dwb"
lag = ["fixed:3", "prop:0.5"]
draws = 49
"#,
    )
    .unwrap();
    let out = maxcorr(&["simulate", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().count(), 3);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "replications = 10\n[[cell]]\nprocess = \"simple\"\nerorr = \"iid\"\n").unwrap();
    assert_eq!(maxcorr(&["simulate", bad.to_str().unwrap()]).status.code(), Some(2));

    let infeasible = dir.path().join("inf.toml");
    fs::write(
        &infeasible,
        "[[cell]]\nprocess = \"simple\"\nerror = \"iid\"\nn = 20\nfilter = \"mean\"\ntest = \"maxcorr\"\nlag = \"fixed:30\"\n",
    )
    .unwrap();
    assert_eq!(maxcorr(&["simulate", infeasible.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn env_var_sets_threads() {
    let out = Command::new(env!("CARGO_BIN_EXE_maxcorr"))
        .args(["simulate", "--preset", "table2", "--reps", "0"])
        .env("MAXCORR_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threads"));
}
