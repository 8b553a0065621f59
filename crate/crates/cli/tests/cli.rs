use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_in(args, None)
}

fn run_in(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_anchoring"));
    cmd.args(args).env_remove("ANCHORING_OUT");
    if let Some(d) = out_env {
        cmd.env("ANCHORING_OUT", d);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn torus_energy_at_the_pole() {
    let o = run(&[
        "energy", "--shape", "torus", "--R", "2", "--r", "1", "--n", "0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["value"].as_f64().unwrap() - 63.504403).abs() < 1e-5);
    assert!(v.get("engine").is_some() && v.get("est_error").is_some());
}

#[test]
fn sphere_engines_agree() {
    for engine in ["closed", "revolution", "mesh"] {
        let o = run(&[
            "energy", "--shape", "sphere", "--R", "1", "--n", "1,2,3", "--engine", engine,
        ]);
        assert_eq!(o.status.code(), Some(0), "{engine}");
        assert!((json(&o)["value"].as_f64().unwrap() - 5.968925).abs() < 1e-2);
    }
}

#[test]
fn capsule_scan_matches_the_figure_ends() {
    let o = run(&[
        "scan",
        "--shape",
        "spherocylinder",
        "--R",
        "1",
        "--L",
        "2",
        "--grid",
        "n1:-0.99:0.99:48",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["param1", "param2", "n1", "n2", "n3", "E0"]);
    assert_eq!(rows.len(), 48);
    for row in [&rows[0], &rows[47]] {
        assert!((num(&row[5]) - 15.571745).abs() < 1e-3);
        assert!(row[1].is_empty());
    }
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(
        run(&["energy", "--shape", "sphere", "--n", "0,0,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["energy", "--shape", "sphere", "--R", "1", "--n", "0,0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["energy", "--shape", "blob", "--R", "1", "--n", "0,0,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["energy", "--bogus-flag"]).status.code(), Some(1));
    // The boundary field needs a C^{1,1} surface.
    assert_eq!(
        run(&["defects", "--shape", "cube", "--R", "1", "--n", "0,0,1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn numerical_failures_exit_with_two() {
    let o = run(&["approx", "--delta", "1e-12"]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn help_is_available_everywhere() {
    for sub in [
        "energy", "scan", "optimize", "defects", "profile", "approx", "validate", "figures",
    ] {
        let o = run(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("Usage"));
    }
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[shape]\nshape = \"torus\"\nR = 2.0\nr = 1.0\n\n[energy]\nn = \"0,0,1\"\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["energy", "--config", c]);
    assert_eq!(o.status.code(), Some(0));
    assert!((json(&o)["value"].as_f64().unwrap() - 63.504403).abs() < 1e-5);
    let o = run(&["energy", "--config", c, "--n", "1,0,0"]);
    assert!((json(&o)["value"].as_f64().unwrap() - 27.602923).abs() < 1e-5);

    std::fs::write(&cfg, "[energy]\nn = \"0,0,1\"\nresolutoin = 3\n").unwrap();
    let o = run(&["energy", "--config", c]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("resolutoin") && err.contains("line 3"),
        "{err}"
    );
}

#[test]
fn output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        &[
            "profile", "--phi0", "1.0", "--H", "4", "--points", "5", "--output", "p.csv",
        ],
        Some(dir.path()),
    );
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&std::fs::read_to_string(dir.path().join("p.csv")).unwrap());
    assert_eq!(header, ["r_tilde", "phi", "n1", "n3", "energy_density"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(num(&rows[0][1]), 1.0);
    assert!(num(&rows[4][1]) < num(&rows[3][1]));
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&[
            "figures",
            "--out",
            d.path().to_str().unwrap(),
            "--heatmap-points",
            "41",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    for f in ["capsule.csv", "torus.csv", "cube-heatmap.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let read = |f: &str| csv_rows(&std::fs::read_to_string(a.path().join(f)).unwrap()).1;
    let capsule = read("capsule.csv");
    assert_eq!(capsule.len(), 47);
    let at = capsule.iter().find(|r| r[0] == "0.5").unwrap();
    assert!((num(&at[1]) - 7.798653).abs() < 1e-3);
    let torus = read("torus.csv");
    for r in torus.iter().filter(|r| num(&r[0]).abs() == 1.0) {
        assert!((num(&r[1]) - 63.504403).abs() < 1e-5);
    }
    let heat = read("cube-heatmap.csv");
    let best = heat
        .iter()
        .min_by(|x, y| num(&x[2]).total_cmp(&num(&y[2])))
        .unwrap();
    let s = 1.0 / 3f64.sqrt();
    assert!((num(&best[0]).abs() - s).abs() < 0.06 && (num(&best[1]).abs() - s).abs() < 0.06);
}

#[test]
fn optimize_reports_the_cube_census() {
    let o = run(&[
        "optimize",
        "--shape",
        "cube",
        "--R",
        "1",
        "--tolerance",
        "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let pts = v["critical_points"].as_array().unwrap();
    let count = |c: &str| pts.iter().filter(|p| p["classification"] == c).count();
    // Each antipodal pair is reported once.
    assert_eq!(
        (count("minimum"), count("maximum"), count("saddle")),
        (4, 3, 6)
    );
    assert_eq!(v["tolerance"].as_f64(), Some(1e-9));
}

#[test]
fn defects_on_the_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("field.csv");
    let o = run(&[
        "defects",
        "--shape",
        "sphere",
        "--R",
        "1",
        "--n",
        "0,0,1",
        "--resolution",
        "32",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total_degree"], 2);
    assert_eq!(v["euler_characteristic"], 2);
    assert_eq!(v["defects"].as_array().unwrap().len(), 2);
    for r in v["regions"].as_array().unwrap() {
        assert_eq!(r["loop_degree"], 1);
        assert_eq!(r["n_defects"], 1);
    }
    assert!(v["field_energy"].as_f64().unwrap() > 5.9);
    let (header, rows) = csv_rows(&std::fs::read_to_string(dump).unwrap());
    assert_eq!(header, ["x", "y", "z", "v1", "v2", "v3"]);
    for r in rows {
        let x: Vec<f64> = r.iter().map(|c| num(c)).collect();
        let dot = x[0] * x[3] + x[1] * x[4] + x[2] * x[5];
        assert!(dot.abs() < 1e-8);
    }
}

#[test]
fn validate_passes() {
    let o = run(&["validate"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}
