use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn focalis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focalis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = focalis(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    focalis(args).status.code().expect("exit code")
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.unwrap().iter().map(String::from).collect())
            .collect();
        Csv { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"))
    }

    fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn frame_of_helix() {
    let t = Csv::parse(&ok(&["frame", "--builtin", "helix", "--samples", "4"]));
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.header[..2], ["theta", "s"]);
    for r in 0..4 {
        assert!((t.num(r, "kappa1") - 0.5).abs() < 1e-12);
        assert!((t.num(r, "kappa2") - 0.5).abs() < 1e-12);
        // Unit-speed multiple: |γ'| = √2.
        assert!((t.num(r, "s") - 2f64.sqrt() * t.num(r, "theta")).abs() < 1e-10);
    }
}

#[test]
fn frame_of_circle_has_unit_curvature() {
    let t = Csv::parse(&ok(&["frame", "--builtin", "unit_circle", "--samples", "64"]));
    assert_eq!(t.rows.len(), 64);
    for r in 0..64 {
        assert!((t.num(r, "kappa1") - 1.0).abs() < 1e-12);
    }
}

#[test]
fn focal_curves_of_fixtures() {
    let t = Csv::parse(&ok(&["focal", "--builtin", "helix", "--samples", "50"]));
    for r in 0..t.rows.len() {
        let th = t.num(r, "theta");
        assert!((t.num(r, "C_1") + th.cos()).abs() < 1e-10);
        assert!((t.num(r, "C_2") + th.sin()).abs() < 1e-10);
        assert!((t.num(r, "C_3") - th).abs() < 1e-10);
    }

    let t = Csv::parse(&ok(&["focal", "--builtin", "unit_circle", "--samples", "40"]));
    for r in 0..t.rows.len() {
        assert!((t.num(r, "c1") - 1.0).abs() < 1e-12);
        assert!(t.num(r, "C_1").abs() < 1e-12 && t.num(r, "C_2").abs() < 1e-12);
    }

    let t = Csv::parse(&ok(&["focal", "--builtin", "sphere_curve_r3", "--samples", "64"]));
    let marker = t.col("at_infinity");
    let mut flattenings = 0;
    for r in 0..t.rows.len() {
        if t.rows[r][marker] == "true" {
            flattenings += 1;
            assert!(t.rows[r][t.col("C_1")].is_empty());
            continue;
        }
        for c in ["C_1", "C_2", "C_3"] {
            assert!(t.num(r, c).abs() < 1e-9, "row {r}");
        }
    }
    // κ_2 vanishes at θ = π/4 + kπ/2, all of which are grid points.
    assert_eq!(flattenings, 4);
}

#[test]
fn events_reports() {
    let r = json(&ok(&["events", "--builtin", "ellipse_2_1"]));
    let vertices = r["events"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["kind"]["channel"] == "vertex")
        .count();
    assert_eq!(vertices, 4);
    assert_eq!(r["counts"]["vertices"], 4);
    assert_eq!(r["counts"]["pseudo_vertices"], 0);
    assert_eq!(r["counts"]["flattenings"], 0);

    let r = json(&ok(&["events", "--builtin", "trefoil_like"]));
    assert_eq!(r["inequalities_hold"], true);

    let r = json(&ok(&["events", "--builtin", "helix"]));
    assert!(r["events"].as_array().unwrap().is_empty());
    assert!(!r["identically_zero"].as_array().unwrap().is_empty());
    assert!(r["counts"].is_null());

    let t = Csv::parse(&ok(&["events", "--builtin", "ellipse_2_1", "--format", "csv"]));
    let kind = t.col("kind");
    assert_eq!(t.rows.iter().filter(|r| r[kind] == "vertex").count(), 4);
}

#[test]
fn verify_reports() {
    let r = json(&ok(&["verify", "--builtin", "sphere_curve_r4", "--samples", "100"]));
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["spherical"]["is_spherical"], true);

    let r = json(&ok(&["verify", "--builtin", "twisted_cubic", "--samples", "100"]));
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["spherical"]["is_spherical"], false);

    let r = json(&ok(&["verify", "--builtin", "helix", "--samples", "100"]));
    assert_eq!(r["spherical"]["is_spherical"], false);
    assert!(r["spherical"]["note"].as_str().unwrap().contains("not spherical"));
}

#[test]
fn mesh_of_helix_matches_focal_table() {
    let obj = ok(&["mesh", "--builtin", "helix", "--samples", "20"]);
    for line in obj.lines() {
        assert!(matches!(&line[..2], "v " | "f " | "l "), "{line}");
    }
    let vertices: Vec<Vec<f64>> = obj
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 19);
    let polylines: Vec<Vec<usize>> = obj
        .lines()
        .filter_map(|l| l.strip_prefix("l "))
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(polylines.len(), 1);
    let focal = Csv::parse(&ok(&["focal", "--builtin", "helix", "--samples", "20"]));
    assert_eq!(polylines[0].len(), focal.rows.len());
    for (r, &i) in polylines[0].iter().enumerate() {
        for (k, c) in ["C_1", "C_2", "C_3"].iter().enumerate() {
            assert_eq!(vertices[i - 1][k], focal.num(r, c));
        }
    }
    // Strip ends lie 2 max R_2 = 4 from the axis of curvature centres.
    let (a, b) = (&vertices[0], &vertices[1]);
    let width: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    assert!((width - 8.0).abs() < 1e-9);
}

#[test]
fn mesh_needs_a_space_curve() {
    assert_eq!(code(&["mesh", "--builtin", "random_poly_r4"]), 3);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["focal", "--builtin", "trefoil_like", "--samples", "128"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let csv = Csv::parse(&a);
    let js = json(&ok(&[&args[..], &["--format", "json"]].concat()));
    let rows = js["rows"].as_array().unwrap();
    assert_eq!(rows.len(), csv.rows.len());
    for (r, row) in rows.iter().enumerate() {
        for (c, cell) in row.as_array().unwrap().iter().enumerate() {
            let text = &csv.rows[r][c];
            match cell {
                Value::Number(n) => assert_eq!(n.as_f64().unwrap(), text.parse::<f64>().unwrap()),
                Value::Bool(b) => assert_eq!(b.to_string(), *text),
                Value::Null => assert!(text.is_empty()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn files_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("cubic.curve");
    std::fs::write(&good, "# twisted cubic\nx = t; y = t^2; z = t^3;\ndomain [-1, 1];\n").unwrap();
    let out = dir.path().join("frame.csv");
    let path = |p: &Path| p.to_str().unwrap().to_string();
    assert_eq!(
        code(&["frame", "--input", &path(&good), "--samples", "10", "--output", &path(&out)]),
        0
    );
    assert_eq!(Csv::parse(&std::fs::read_to_string(&out).unwrap()).rows.len(), 10);

    let bad = dir.path().join("bad.curve");
    std::fs::write(&bad, "x = t;\ny = 2 * ;\ndomain [0, 1];\n").unwrap();
    let o = focalis(&["frame", "--input", &path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));

    let flat = dir.path().join("degenerate.curve");
    std::fs::write(&flat, "x = t; y = t^3; z = t^4; domain [-1, 1];").unwrap();
    let o = focalis(&["frame", "--input", &path(&flat), "--samples", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theta = 0"));

    let missing = dir.path().join("missing.curve");
    assert_eq!(code(&["frame", "--input", &path(&missing)]), 4);
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(code(&["frame", "--builtin", "helix", "--output", &path(&unwritable)]), 4);
    assert_eq!(code(&["frame", "--builtin", "no_such_curve"]), 2);
    assert_eq!(code(&["frame", "--builtin", "helix", "--samples", "1"]), 2);
    assert_eq!(code(&["frame"]), 2);
}

#[test]
fn builtins_are_listed() {
    let names: Vec<String> = serde_json::from_str(&ok(&["builtins", "--format", "json"])).unwrap();
    assert!(names.iter().any(|n| n == "trefoil_like"));
    assert_eq!(Csv::parse(&ok(&["builtins"])).rows.len(), names.len());
}
