use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use volrad::imgio::{save_pgm, GrayImage};

fn volrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volrad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a CSV written by the CLI, after checking the provenance comment and header.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# volrad "), "missing provenance in {}", path.display());
    lines.next().expect("header");
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn signature_lengths_follow_grid_size() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("flat.pgm");
    save_pgm(&GrayImage::filled(200, 200, 128).unwrap(), &img).unwrap();

    let out = tmp.path().join("default");
    let o = volrad(&["signature", s(&img), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&out.join("signatures.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "flat.pgm");
    assert_eq!(rows[0][2], "10");
    assert_eq!(rows[0].len() - 3, 33);

    let out = tmp.path().join("r10");
    let o = volrad(&["signature", s(&img), "--r-max", "10", "--m", "10", "--curves", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&out.join("signatures.csv"))[0].len() - 3, 8);
    assert_eq!(csv_rows(&out.join("flat.curve.csv")).len(), 85);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("flat.curve.json")).unwrap()).unwrap();
    assert_eq!(meta["n_centers"], 4000);
    assert_eq!(meta["r_max"], 10);
}

#[test]
fn baseline_features_through_signature_command() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("g.pgm");
    save_pgm(&GrayImage::from_fn(32, 32, |x, y| (x * 5 + y * 3) as u8).unwrap(), &img).unwrap();
    let o = volrad(&["signature", s(&img), "--method", "fourier,glcm,gabor", "--out", s(tmp.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    for (method, d) in [("fourier", 99), ("glcm", 16), ("gabor", 16)] {
        let rows = csv_rows(&tmp.path().join(format!("features_{method}.csv")));
        assert_eq!(rows[0][2], method);
        assert_eq!(rows[0].len() - 3, d);
    }
}

#[test]
fn input_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.pgm");
    let o = volrad(&["signature", s(&missing), "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.pgm"));

    let o = volrad(&["dimension"]);
    assert_eq!(o.status.code(), Some(2));

    let img = tmp.path().join("t.pgm");
    save_pgm(&GrayImage::filled(8, 8, 0).unwrap(), &img).unwrap();
    let o = volrad(&["signature", s(&img), "--m", "1", "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = volrad(&["signature", s(&img), "--r-max", "1", "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2), "P = 1 < m = 10");
}

#[test]
fn dimension_and_stability_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("flat.pgm");
    save_pgm(&GrayImage::filled(200, 200, 10).unwrap(), &img).unwrap();

    let o = volrad(&["dimension", s(&img), "--repeats", "1", "--out", s(tmp.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("std 0.000000"), "{}", stdout(&o));
    assert_eq!(csv_rows(&tmp.path().join("dimension.csv")).len(), 1);

    let o = volrad(&["dimension", s(&img), "--repeats", "5", "--seed", "3", "--out", s(tmp.path())]);
    assert!(o.status.success());
    let rows = csv_rows(&tmp.path().join("dimension.csv"));
    let seeds: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(seeds, vec!["3", "4", "5", "6", "7"]);
    for r in &rows {
        let d: f64 = r[2].parse().unwrap();
        assert!((1.90..=2.05).contains(&d), "{d}");
    }

    let small = tmp.path().join("small.pgm");
    save_pgm(&GrayImage::from_fn(40, 40, |x, y| ((x * x + 7 * y) % 256) as u8).unwrap(), &small).unwrap();
    let o = volrad(&["stability", s(&small), "--repeats", "4", "--out", s(tmp.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&tmp.path().join("stability.csv"));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][0], "0.1");
    assert_eq!(rows[2][1], "160");

    let o = volrad(&["stability", s(&small), "--fractions", "1.0,1.0", "--repeats", "3", "--out", s(tmp.path())]);
    assert!(o.status.success());
    let rows = csv_rows(&tmp.path().join("stability.csv"));
    assert_eq!(rows[0][2], rows[1][2]);
    assert_eq!(rows[0][3], "0");
    assert_eq!(rows[1][3], "0");
}

#[test]
fn classify_and_sweep_on_synthetic_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("data");
    let o = volrad(&["synth", s(&root), "--size", "48", "--samples", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let out = tmp.path().join("out");
    let o = volrad(&["classify", s(&root), "--method", "all", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 5, "{table}");
    assert!(table.starts_with("Method"));
    let rows = csv_rows(&out.join("comparison.csv"));
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let correct: f64 = r[1].parse().unwrap();
        let total: f64 = r[2].parse().unwrap();
        assert_eq!(total, 25.0);
        assert_eq!(r[3], format!("{:.2}", 100.0 * correct / total));
    }
    let confusion = csv_rows(&out.join("confusion_vrfd.csv"));
    assert_eq!(confusion.len(), 5);
    for row in &confusion {
        let sum: u32 = row[1..].iter().map(|v| v.parse::<u32>().unwrap()).sum();
        assert_eq!(sum, 5);
    }

    let o = volrad(&["sweep-m", s(&root), "--m-list", "5,10,15,20", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&out.join("sweep_m.csv"));
    assert_eq!(rows.len(), 4);
    let ks: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ks, vec!["67", "33", "22", "16"]);
    for r in &rows {
        let acc: f64 = r[4].parse().unwrap();
        assert!((0.0..=100.0).contains(&acc));
    }
}

#[test]
fn one_sample_class_is_rejected_by_name() {
    let tmp = tempfile::tempdir().unwrap();
    for (class, n) in [("bark", 3), ("sand", 1)] {
        let dir = tmp.path().join(class);
        fs::create_dir_all(&dir).unwrap();
        for i in 0..n {
            save_pgm(&GrayImage::filled(16, 16, i as u8).unwrap(), dir.join(format!("{i}.pgm"))).unwrap();
        }
    }
    let o = volrad(&["classify", s(tmp.path()), "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'sand'"), "{}", stderr(&o));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("t.pgm");
    save_pgm(&GrayImage::from_fn(30, 30, |x, y| (x * y) as u8).unwrap(), &img).unwrap();
    let cfg = tmp.path().join("run.json");
    fs::write(&cfg, r#"{"r_max": 10, "m": 10, "n_centers": 50, "seed": 2}"#).unwrap();

    let o = volrad(&["signature", s(&img), "--config", s(&cfg), "--m", "5", "--out", s(tmp.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("signatures.csv")).unwrap();
    let prov = text.lines().next().unwrap();
    assert!(prov.contains(r#""r_max":10"#) && prov.contains(r#""m":5"#) && prov.contains(r#""n_centers":50"#), "{prov}");
    assert_eq!(csv_rows(&tmp.path().join("signatures.csv"))[0].len() - 3, 17);

    fs::write(&cfg, r#"{"radius": 3}"#).unwrap();
    let o = volrad(&["signature", s(&img), "--config", s(&cfg), "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
}
