use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn wavenorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavenorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const N3_GAUSSIAN: &str = "
model = free_wave
[free_wave]
n = 3
v1 = gaussian(1)
[run]
band_low = 1.944
band_high = 2.024
";

#[test]
fn sweep_writes_stable_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "n3.ini", N3_GAUSSIAN);
    let out = wavenorm(&["sweep", "--config", &cfg, "--quiet"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,M,D,ratio,err,segments"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 25);
    assert_eq!(rows[0][0], 1e2);
    assert_eq!(rows[24][0], 1e6);
    for r in &rows {
        assert_eq!(r[2], 1.0);
        assert!(r[3] > 1.944 && r[3] < 2.024, "ratio {}", r[3]);
    }
}

#[test]
fn rerun_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "mgt.ini",
        "model = mgt\n[mgt]\nn = 1\ntau = 1\npsi0 = gaussian(1)\npsi1 = bump(2)\npsi2 = 0.5*monomial_gauss(1, 2)\n[grid]\nt_max = 1e4\ncount = 9\n",
    );
    for cmd in ["sweep", "fit", "classify"] {
        let a = dir.path().join(format!("{cmd}-a"));
        let b = dir.path().join(format!("{cmd}-b"));
        for d in [&a, &b] {
            let out = wavenorm(&[cmd, "--config", &cfg, "--out", d.to_str().unwrap(), "--quiet"]);
            assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        }
        let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for name in names {
            assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{cmd} {name:?}");
        }
    }
}

#[test]
fn zero_data_gives_zero_norm() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "zero.ini",
        "model = free_wave\n[free_wave]\nn = 2\nv1 = zero\n[grid]\ncount = 5\n",
    );
    let out = wavenorm(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let m: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(m, 0.0);
    }
}

#[test]
fn blowup_regime_is_refused() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "blowup.ini",
        "model = free_wave\n[free_wave]\nn = 2\ns = 1\nv1 = gaussian(1)\n",
    );
    let out = wavenorm(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FiniteTimeBlowup"), "{err}");
    assert!(err.contains("Divergent"), "{err}");
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("model = free_wave\n[free_wave]\nn = 2\ns = 1\nv1 = gaussian(1)\n", "FiniteTimeBlowup"),
        ("model = free_wave\n[free_wave]\nn = 2\nv1 = gaussian(1)\n", "LogGrowth"),
        ("model = free_wave\n[free_wave]\nn = 1\nv1 = monomial_gauss(1, 1)\n", "Bounded"),
        (
            "model = kernel\n[kernel]\nn = 2\nsigma = 2\nphi1 = monomial_gauss(1, 1)\n",
            "CriticalLogGrowth",
        ),
        ("model = free_wave\n[free_wave]\nn = 1\nv1 = gaussian(1)\n", "PolynomialGrowth"),
    ];
    for (i, (text, tag)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("c{i}.ini"), text);
        let out = wavenorm(&["classify", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["tag"], *tag, "{text}");
        assert!(!v["inequality"].as_str().unwrap().is_empty());
    }
    let cfg = write_config(dir.path(), "rate.ini", cases[4].0);
    let v = json(&wavenorm(&["classify", "--config", &cfg]));
    assert_eq!(v["rate"], 0.5);
    assert_eq!(v["data_order"], 0.0);
}

fn synthetic_csv(dir: &Path, name: &str, law: impl Fn(f64) -> f64) -> String {
    let mut text = String::from("t,M\n");
    for t in wavenorm_core::asymptotics::log_spaced(1e2, 1e6, 25) {
        text.push_str(&format!("{t:e},{:e}\n", law(t)));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn fit_examples_from_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "fit.ini", "model = free_wave\n[free_wave]\nn = 1\nv1 = gaussian(1)\n");

    let csv = synthetic_csv(dir.path(), "pow.csv", |t| 2.0 * t.sqrt());
    let v = json(&wavenorm(&["fit", "--config", &cfg, "--input", &csv]));
    assert_eq!(v["selected"]["name"], "PowerLaw");
    assert!((v["selected"]["exponent"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((v["selected"]["c"].as_f64().unwrap() - 2.0).abs() < 1e-6);

    let csv = synthetic_csv(dir.path(), "const.csv", |_| 7.0);
    let v = json(&wavenorm(&["fit", "--config", &cfg, "--input", &csv]));
    assert_eq!(v["selected"]["name"], "Constant");
    assert!((v["selected"]["c"].as_f64().unwrap() - 7.0).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-14);

    let csv = synthetic_csv(dir.path(), "log.csv", |t| t.ln().sqrt());
    let out_dir = dir.path().join("log-out");
    let out = wavenorm(&["fit", "--config", &cfg, "--input", &csv, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("fit.json")).unwrap()).unwrap();
    assert_eq!(v["selected"]["name"], "SqrtLog");
    assert!((v["selected"]["c"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    let script = fs::read_to_string(out_dir.join("fit.gp")).unwrap();
    assert!(script.contains(&csv));
    assert!(!script.contains("using 1:3"), "input has no envelope column");

    let csv = synthetic_csv(dir.path(), "short.csv", |t| t);
    let out = wavenorm(&["fit", "--config", &cfg, "--input", &csv, "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let short = dir.path().join("few.csv");
    fs::write(&short, "t,M\n1e2,1\n1e3,2\n").unwrap();
    let out = wavenorm(&["fit", "--config", &cfg, "--input", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("insufficient"));
}

#[test]
fn inline_fit_writes_plot_with_envelope() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "fw1.ini",
        "model = free_wave\n[free_wave]\nn = 1\nv1 = gaussian(1)\n[grid]\nt_max = 1e4\ncount = 12\n",
    );
    let out_dir = dir.path().join("out");
    let out = wavenorm(&["fit", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["sweep.csv", "fit.json", "fit.gp"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let script = fs::read_to_string(out_dir.join("fit.gp")).unwrap();
    assert!(script.contains("'sweep.csv' using 1:3"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("fit.json")).unwrap()).unwrap();
    assert_eq!(v["selected"]["name"], "PowerLaw");
}

#[test]
fn verify_subset_passes() {
    let out = wavenorm(&["verify", "--only", "4,14"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert!(text.contains("2/2 criteria passed"));
}

#[test]
fn corrupted_envelope_fails_verify() {
    let out = wavenorm(&["verify", "--only", "3", "--corrupt-envelope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]  3"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(dir.path(), "bad.ini", "model = free_wave\n[free_wave]\nn = 1\nv1 = gaussian(1)\nbogus = 1\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["sweep", "--config", &bad],
        vec!["sweep"],
        vec!["sweep", "--config", "/nonexistent/path.ini"],
        vec!["frobnicate"],
        vec!["verify", "--only", "99"],
        vec!["classify", "--config", &bad, "--tol", "0.5"],
    ];
    for args in cases {
        let out = wavenorm(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(wavenorm(&["--help"]).status.code(), Some(0));
    assert_eq!(wavenorm(&["--version"]).status.code(), Some(0));
}

#[test]
fn tol_flag_is_validated() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ok.ini", "model = free_wave\n[free_wave]\nn = 3\nv1 = gaussian(1)\n[grid]\ncount = 3\n");
    assert_eq!(wavenorm(&["sweep", "--config", &cfg, "--tol", "1e-20"]).status.code(), Some(1));
    assert_eq!(wavenorm(&["sweep", "--config", &cfg, "--tol", "1e-4", "--quiet"]).status.code(), Some(0));
}
