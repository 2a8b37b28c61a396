use std::path::Path;
use std::process::{Command, Output};

const FAST: &str = r#"
[scenario]
kind = "two-atom-direct"

[physics]
kappa = 0.2

[motion]
velocity = 5.0

[output]
timeseries = "ts.csv"
stride = 50
"#;

fn dapsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dapsim")).args(args).output().expect("binary runs")
}

/// Writes `body` plus an output section pointing at `out` and returns the config path.
fn config(dir: &Path, name: &str, body: &str, out: &Path) -> String {
    let text = if body.contains("[output]") {
        body.replace("[output]", &format!("[output]\ndir = {:?}", out.display().to_string()))
    } else {
        format!("{body}\n[output]\ndir = {:?}\n", out.display().to_string())
    };
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn run_writes_identical_csv_twice() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let cfg = config(dir.path(), "fast.toml", FAST, out);
        let o = dapsim(&["run", &cfg]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("F = "));
    }
    for file in ["summary.csv", "ts.csv"] {
        let x = std::fs::read(a.join(file)).unwrap();
        let y = std::fs::read(b.join(file)).unwrap();
        assert_eq!(x, y, "{file} differs between runs");
    }

    let mut r = csv::Reader::from_path(a.join("summary.csv")).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["param_name", "param_value", "fidelity", "p0", "duration_T", "dt_used", "converged"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let f: f64 = rows[0][2].parse().unwrap();
    let p0: f64 = rows[0][3].parse().unwrap();
    assert!((0.0..=1.0).contains(&f) && (0.0..=1.0).contains(&p0));
    assert_eq!(&rows[0][6], "true");

    let mut ts = csv::Reader::from_path(a.join("ts.csv")).unwrap();
    let cols: Vec<String> = ts.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(cols, ["t", "x1", "x2", "norm_sq", "pop_target", "pop_initial", "pop_cavity_photon"]);
    let t: Vec<f64> = ts.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert!(t.len() > 2 && t.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[scenario]\nsweep = \"kappa\"\nvalues = [0.0, 0.1, 0.2]\n[motion]\nvelocity = 5.0\n";
    let cfg = config(dir.path(), "sweep.toml", body, dir.path());
    let o = dapsim(&["--threads", "1", "run", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let kappas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(kappas, [0.0, 0.1, 0.2]);
    assert!(rows.iter().all(|r| &r[0] == "kappa"));
    let p0: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!((p0[0] - 1.0).abs() <= 1e-9);
    assert!(p0[1] > p0[2]);
}

#[test]
fn negative_rate_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "bad.toml", "[scenario]\n[physics]\nkappa = -1.0\n", dir.path());
    let o = dapsim(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
    assert!(!dir.path().join("summary.csv").exists());
}

#[test]
fn unknown_key_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "bad.toml", "[scenario]\n[physics]\nkapa = 0.1\n", dir.path());
    assert_eq!(dapsim(&["run", &cfg]).status.code(), Some(4));
}

#[test]
fn exhausted_refinement_reports_residual() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[scenario]\n[physics]\nkappa = 0.2\n[motion]\nvelocity = 5.0\n\
                [integrator]\ndt = 0.2\ntolerance = 1e-13\nmax_halvings = 0\n";
    let cfg = config(dir.path(), "stiff.toml", body, dir.path());
    let o = dapsim(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
}

#[test]
fn unknown_figure_and_missing_config() {
    assert_eq!(dapsim(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(dapsim(&["run", "/nonexistent/dapsim.toml"]).status.code(), Some(3));
    assert_eq!(dapsim(&["validate", "--eigenvalue-perturbation", "1e-6"]).status.code(), Some(6));
}
