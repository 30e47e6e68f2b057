use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use circletons::cli::circle_fit_residual;
use circletons::Su2Vector;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circletons"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn out_path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn gen_csv_single_circleton() {
    let dir = TempDir::new().unwrap();
    let path = out_path(&dir, "c12.csv");
    let o = run(&["gen", "--omega", "2", "--k", "1", "--out", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4097);
    assert_eq!(text.lines().next().unwrap(), "t,x,y,z,kappa,tau");
    assert!(!text.contains('\r'));
    let summary = stdout(&o);
    assert!(summary.contains("12.566"), "{summary}");
    let rows = csv_rows(&text);
    assert!(rows.iter().all(|r| r.len() == 6));
    assert!((rows[0][4] - 1.0).abs() < 1e-6);
}

#[test]
fn gen_json_and_obj() {
    let dir = TempDir::new().unwrap();
    let json = out_path(&dir, "c.json");
    let o = run(&["gen", "--omega", "3", "--ks", "1,2", "--samples", "1024", "--format", "json", "--out", &json]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let meta = &v["metadata"];
    assert_eq!(meta["omega"], 3);
    assert_eq!(meta["ks"], serde_json::json!([1, 2]));
    assert_eq!(meta["samples"], 1024);
    assert_eq!(meta["alpha_list"].as_array().unwrap().len(), 2);
    assert!(meta["closure_error"].as_f64().unwrap() < 1e-7);
    assert!((meta["bending_energy"].as_f64().unwrap() - 6.0 * std::f64::consts::PI).abs() < 1e-4);
    for key in ["t", "x", "y", "z", "kappa", "tau"] {
        assert_eq!(v[key].as_array().unwrap().len(), 1024, "{key}");
    }

    let obj = out_path(&dir, "d.obj");
    let o = run(&["gen", "--omega", "3", "--ks", "1,2", "--samples", "1024", "--format", "obj", "--out", &obj]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 1024);
    let poly = text.lines().last().unwrap();
    let idx: Vec<usize> = poly[2..].split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(idx.len(), 1025);
    assert_eq!(idx[0], 1);
    assert_eq!(idx[1023], 1024);
    assert_eq!(idx[1024], 1);
}

#[test]
fn gen_to_stdout() {
    let o = run(&["gen", "--omega", "2", "--k", "1", "--samples", "256"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 257);
    assert!(stderr(&o).contains("ω = 2") || stderr(&o).contains("omega"), "{}", stderr(&o));
}

#[test]
fn gen_rejects_once_wrapped_circle() {
    let o = run(&["gen", "--omega", "1", "--k", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("exactly ω − 1 simple factors"), "{}", stderr(&o));
}

#[test]
fn gen_invalid_flags_exit_2() {
    for args in [
        &["gen", "--omega", "3", "--ks", "2,1"][..],
        &["gen", "--omega", "3", "--k", "3"],
        &["gen", "--omega", "2", "--k", "1", "--format", "png"],
        &["gen", "--k", "1"],
        &["gen", "--omega", "2", "--k", "1", "--samples", "10"],
        &["bogus"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn gen_closure_tolerance_exit_3() {
    let o = run(&["gen", "--omega", "2", "--k", "1", "--samples", "256", "--closure-tol", "1e-300"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("closure error"), "{}", stderr(&o));
}

#[test]
fn gen_unwritable_output_exit_1() {
    let dir = TempDir::new().unwrap();
    let path = out_path(&dir, "missing/sub/c.csv");
    let o = run(&["gen", "--omega", "2", "--k", "1", "--samples", "256", "--out", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("cannot write"), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for format in ["csv", "json", "obj"] {
        let a = out_path(&dir, &format!("a.{format}"));
        let b = out_path(&dir, &format!("b.{format}"));
        for p in [&a, &b] {
            let o = run(&["gen", "--omega", "4", "--ks", "1,3", "--samples", "2048", "--format", format, "--out", p]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{format}");
    }
    let g0 = data("g0.json");
    let g0 = g0.to_str().unwrap();
    let args = ["oracle", "--potential", g0, "--tmax", "3", "--samples", "32"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let s1 = run(&["oracle", "--selftest", "--seed", "5"]);
    let s2 = run(&["oracle", "--selftest", "--seed", "5"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn verify_passes_and_fails() {
    let o = run(&["verify", "--omega", "2", "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let table = stdout(&o);
    for name in ["closure", "energy", "bounds", "peaks", "residue", "oracle"] {
        assert!(table.contains(name), "{name} missing:\n{table}");
    }
    assert!(!table.contains("FAIL"));

    let o = run(&["verify", "--omega", "4", "--ks", "1,3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = run(&["verify", "--omega", "2", "--k", "1", "--tol", "1e-15"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
    assert!(stdout(&o).contains("1e-15"));

    assert_eq!(code(&run(&["verify", "--omega", "2", "--k", "1", "--tol", "-1"])), 2);
    assert_eq!(code(&run(&["verify", "--omega", "1", "--k", "1"])), 2);
}

#[test]
fn enumerate_lists_specs() {
    let o = run(&["enumerate", "--omega", "5", "--size", "2"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["(1,2;5)", "(1,3;5)", "(1,4;5)", "(2,3;5)", "(2,4;5)", "(3,4;5)"]);

    let o = run(&["enumerate", "--omega", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["(;2)", "(1;2)"]);
    let counts = stderr(&o);
    assert!(counts.contains("size 0: 1") && counts.contains("size 1: 1"), "{counts}");

    let o = run(&["enumerate", "--omega", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["(;1)"]);

    assert_eq!(code(&run(&["enumerate", "--omega", "3", "--size", "3"])), 2);
    assert_eq!(code(&run(&["enumerate", "--omega", "0"])), 2);
}

#[test]
fn curvature_data() {
    let dir = TempDir::new().unwrap();
    let path = out_path(&dir, "k12.csv");
    let o = run(&["curvature", "--omega", "2", "--k", "1", "--samples", "4096", "--out", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,kappa");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4096);
    let kappa: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert!(kappa.iter().all(|&k| k > -1.0 && k < 3.0));
    assert!((kappa[0] - 1.0).abs() < 1e-9);
    assert!(rows.last().unwrap()[0] < 4.0 * std::f64::consts::PI);

    let o = run(&["curvature", "--omega", "3", "--k", "2", "--samples", "4096"]);
    assert_eq!(code(&o), 0);
    let kappa: Vec<f64> = csv_rows(&stdout(&o)).iter().map(|r| r[1]).collect();
    let n = kappa.len();
    let maxima = (0..n)
        .filter(|&i| kappa[i] > kappa[(i + n - 1) % n] && kappa[i] >= kappa[(i + 1) % n])
        .count();
    assert_eq!(maxima, 2);

    assert_eq!(code(&run(&["curvature", "--omega", "2", "--k", "2"])), 2);
    assert_eq!(code(&run(&["curvature", "--omega", "2"])), 2);
}

#[test]
fn oracle_selftest_reports_residual() {
    let o = run(&["oracle", "--selftest", "--seed", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = stdout(&o);
    let line = report.lines().find(|l| l.contains("max recomposition residual")).unwrap();
    let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    assert!(value < 1e-8);
    assert!(report.contains("selftest passed"));
}

fn symes_points(dir: &TempDir, tmax: &str) -> Vec<Su2Vector> {
    let path = out_path(dir, "g0.csv");
    let g0 = data("g0.json");
    let o = run(&["oracle", "--potential", g0.to_str().unwrap(), "--tmax", tmax, "--samples", "512", "--out", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("circle fit residual"), "{}", stdout(&o));
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 512);
    rows.iter().map(|r| Su2Vector::new(r[1], r[2], r[3])).collect()
}

#[test]
fn oracle_potential_traces_a_circle() {
    let dir = TempDir::new().unwrap();
    let points = symes_points(&dir, "6.2832");
    assert!(circle_fit_residual(&points).unwrap() < 1e-6);

    let points = symes_points(&dir, &std::f64::consts::TAU.to_string());
    let n = points.len() as f64;
    let mean = points.iter().fold(Su2Vector::new(0.0, 0.0, 0.0), |a, p| a + *p).scale(1.0 / n);
    let (lo, hi) = points
        .iter()
        .map(|p| p.dist(&mean))
        .fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r), b.max(r)));
    assert!(hi - lo < 1e-6, "radii in [{lo}, {hi}]");
    assert!(lo > 0.1);
}

#[test]
fn oracle_potential_errors() {
    let bad = data("bad.json");
    let o = run(&["oracle", "--potential", bad.to_str().unwrap(), "--tmax", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ξ_1 = ½σ₃"), "{}", stderr(&o));

    let dir = TempDir::new().unwrap();
    let missing = out_path(&dir, "none.json");
    assert_eq!(code(&run(&["oracle", "--potential", &missing, "--tmax", "1"])), 1);

    let garbage = out_path(&dir, "garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(code(&run(&["oracle", "--potential", &garbage, "--tmax", "1"])), 2);

    let g0 = data("g0.json");
    let g0 = g0.to_str().unwrap();
    assert_eq!(code(&run(&["oracle", "--potential", g0])), 2);
    assert_eq!(code(&run(&["oracle", "--potential", g0, "--tmax", "1", "--radius", "0"])), 2);
    assert_eq!(code(&run(&["oracle"])), 2);
    assert_eq!(code(&run(&["oracle", "--selftest", "--potential", g0])), 2);

    let o = run(&["oracle", "--potential", g0, "--tmax", "60", "--samples", "8", "--radius", "8"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("hint"));
}
