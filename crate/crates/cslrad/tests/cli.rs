use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn cslrad(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cslrad"));
    cmd.current_dir(dir).args(args).env_remove("CSLRAD_THREADS");
    if let Some(t) = threads {
        cmd.env("CSLRAD_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn free_config(out: &str) -> String {
    format!(
        r#"{{"system": {{"type": "free_electron"}},
            "noise": {{"type": "white", "lambda": 2.2e-17}},
            "correlation": {{"type": "gaussian", "r_c": 1e-5}},
            "grid": {{"e_min_kev": 1, "e_max_kev": 100, "n_points": 25}},
            "output": {{"format": "csv", "path": "{out}"}}}}"#
    )
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn spectrum_writes_csv_and_plot() {
    let d = TempDir::new().unwrap();
    write(d.path(), "run.json", &free_config("out.csv"));
    let o = cslrad(d.path(), &["spectrum", "--config", "run.json", "--plot"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(d.path().join("out.csv")).unwrap();
    assert!(csv.starts_with("# cslrad"));
    assert!(csv.contains("# config_sha256 "));
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 26);
    let svg = std::fs::read_to_string(d.path().join("out.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn thread_count_does_not_change_output() {
    let mut outs = Vec::new();
    for t in ["1", "4", "16"] {
        let d = TempDir::new().unwrap();
        write(d.path(), "run.json", &free_config("out.csv"));
        let o = cslrad(d.path(), &["spectrum", "--config", "run.json"], Some(t));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outs.push(std::fs::read(d.path().join("out.csv")).unwrap());
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn unknown_key_is_a_config_error() {
    let d = TempDir::new().unwrap();
    let body = free_config("out.csv").replace(r#""lambda": 2.2e-17"#, r#""lambda": 2.2e-17, "lamda": 1"#);
    write(d.path(), "run.json", &body);
    let o = cslrad(d.path(), &["spectrum", "--config", "run.json"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lamda"), "{}", stderr(&o));
}

#[test]
fn missing_config_and_bad_usage_exit_1() {
    let d = TempDir::new().unwrap();
    assert_eq!(cslrad(d.path(), &["spectrum", "--config", "nope.json"], None).status.code(), Some(1));
    assert_eq!(cslrad(d.path(), &["frobnicate"], None).status.code(), Some(1));
    assert_eq!(cslrad(d.path(), &["--help"], None).status.code(), Some(0));
}

#[test]
fn bad_thread_variable_is_a_config_error() {
    let d = TempDir::new().unwrap();
    write(d.path(), "run.json", &free_config("out.csv"));
    let o = cslrad(d.path(), &["spectrum", "--config", "run.json"], Some("zero"));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn unresolvable_integral_exits_2() {
    // a kernel table with 20000 kinks exhausts the adaptive segment budget
    let d = TempDir::new().unwrap();
    let points: Vec<String> = (0..20000).map(|i| format!("[{}, {}]", i as f64 * 0.01, 1.0 - (i % 2) as f64 * 0.5)).collect();
    let body = free_config("out.csv").replace(
        r#"{"type": "gaussian", "r_c": 1e-5}"#,
        &format!(r#"{{"type": "table", "length_cm": 1e-5, "points": [{}]}}"#, points.join(",")),
    );
    write(d.path(), "run.json", &body);
    let o = cslrad(d.path(), &["spectrum", "--config", "run.json"], None);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("tolerance"));
}

#[test]
fn unsupported_model_combination_exits_1() {
    let d = TempDir::new().unwrap();
    let body = free_config("out.csv")
        .replace(r#"{"type": "free_electron"}"#, r#"{"type": "hydrogen", "regime": "small_p"}"#)
        .replace(r#"{"type": "gaussian", "r_c": 1e-5}"#, r#"{"type": "table", "length_cm": 1e-5, "points": [[0, 1], [1, 0.5], [2, 0]]}"#);
    write(d.path(), "run.json", &body);
    let o = cslrad(d.path(), &["spectrum", "--config", "run.json"], None);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn bound_uses_bundled_limits() {
    let d = TempDir::new().unwrap();
    write(d.path(), "run.json", &free_config("out.csv"));
    let o = cslrad(d.path(), &["bound", "--config", "run.json", "--limit", "germanium_11kev"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("x100"), "{text}");

    let o = cslrad(d.path(), &["bound", "--config", "run.json", "--limit", "nowhere"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("germanium_11kev"));
}

#[test]
fn sweep_two_axes() {
    let d = TempDir::new().unwrap();
    write(d.path(), "run.json", &free_config("out.csv"));
    let o = cslrad(
        d.path(),
        &["sweep", "--config", "run.json", "--axis", "lambda=1e-20:1e-8:10:log", "--axis", "r_c=1e-7:1e-3:10:log"],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(d.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert!(lines.next().unwrap().starts_with("lambda_s_inv,r_c_cm"));
    assert_eq!(lines.count(), 100);

    let o = cslrad(d.path(), &["sweep", "--config", "run.json", "--axis", "lambda=1e-20:1e-8:0:log"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_writes_json_report() {
    let d = TempDir::new().unwrap();
    let o = cslrad(d.path(), &["verify", "--json", "report.json"], None);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 12);
}
