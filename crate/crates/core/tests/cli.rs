use std::process::{Command, Output};

use serde_json::Value;

fn oscket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn eprb_sweep_rows() {
    let out = oscket(&[
        "eprb",
        "--theta-start-deg",
        "0",
        "--theta-stop-deg",
        "180",
        "--theta-step-deg",
        "90",
    ]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        ["theta_deg", "p_standard", "p_discrete", "p_continuous", "correlation"]
    );
    let p: Vec<f64> = rows.iter().map(|r| num(&r[2])).collect();
    assert_eq!(p.len(), 3);
    assert!(p[0].abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12 && (p[2] - 1.0).abs() < 1e-12);
}

#[test]
fn eprb_discrete_column_ignores_tick() {
    let column = |n: &str| {
        let (_, rows) = csv_rows(&oscket(&["eprb", "--n", n]));
        rows.into_iter().map(|r| num(&r[2])).collect::<Vec<_>>()
    };
    let (a, b) = (column("0"), column("3"));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn eprb_continuous_law_in_radians() {
    let v = json(&oscket(&[
        "--format",
        "json",
        "eprb",
        "--t",
        "0.5",
        "--omega",
        "6.283185307",
        "--theta-deg",
        "0",
    ]));
    let p = v["rows"][0]["p_continuous"].as_f64().unwrap();
    assert!((p - 1.0).abs() < 1e-9);
}

#[test]
fn chsh_reports() {
    let (_, rows) = csv_rows(&oscket(&["chsh"]));
    assert!((num(&rows[0][4]) - 2.8284271247).abs() < 1e-9);
    assert_eq!(rows[0][7], "true");

    let (_, rows) = csv_rows(&oscket(&["chsh", "--scan", "--step-deg", "22.5"]));
    assert!((num(&rows[0][4]) - 2.0 * 2f64.sqrt()).abs() < 1e-9);

    let (_, rows) = csv_rows(&oscket(&[
        "chsh",
        "--a-deg",
        "10",
        "--a-prime-deg",
        "10",
        "--b-deg",
        "10",
        "--b-prime-deg",
        "10",
    ]));
    assert_eq!(num(&rows[0][4]), 2.0);
    assert_eq!(rows[0][7], "false");
    // no Monte Carlo requested: optional columns are empty
    assert_eq!(rows[0][9], "");
}

#[test]
fn bell_reports() {
    let row = |deg: &str| json(&oscket(&["--format", "json", "bell", "--theta-deg", deg]))["rows"][0].clone();
    let r = row("120");
    assert!((r["lhs"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((r["rhs"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(r["violated"], true);
    let r = row("180");
    assert!((r["lhs"].as_f64().unwrap() - r["rhs"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(r["violated"], false);
    let r = row("0");
    assert_eq!(r["lhs"].as_f64().unwrap(), 0.0);
    assert_eq!(r["violated"], false);
}

#[test]
fn cat_curves() {
    let (_, rows) = csv_rows(&oscket(&[
        "cat",
        "--omega-pi",
        "1",
        "--phi-pi",
        "0.25",
        "--ticks",
        "10",
        "--runs",
        "0",
    ]));
    assert_eq!(rows.len(), 11);
    assert!((num(&rows[10][1]) - 2f64.powi(-10)).abs() < 1e-12);

    let (_, rows) = csv_rows(&oscket(&["cat", "--omega-pi", "2", "--phi-pi", "0", "--runs", "100"]));
    assert!(rows.iter().all(|r| num(&r[1]) == 1.0 && num(&r[2]) == 1.0));

    let (_, rows) = csv_rows(&oscket(&["cat", "--ticks", "0"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0][1]), 1.0);
}

#[test]
fn position_rows_and_slope() {
    let v = json(&oscket(&[
        "--format",
        "json",
        "position",
        "--delta-min",
        "0.001",
        "--delta-max",
        "0.1",
    ]));
    let slope = v["meta"]["summary"]["loglog_slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");

    let (_, rows) = csv_rows(&oscket(&["position", "--delta", "0,256"]));
    assert_eq!(num(&rows[0][1]), 0.0);
    let whole_period = num(&rows[1][1]);
    assert!(whole_period.is_finite() && whole_period > 1.0);
}

#[test]
fn hidden_samples_stay_in_aperture() {
    let (_, rows) = csv_rows(&oscket(&[
        "hidden",
        "--x-center",
        "2",
        "--delta-cap",
        "0.5",
        "--samples",
        "500",
    ]));
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|r| r[4] == "true"));
}

#[test]
fn json_echoes_the_configuration() {
    let v = json(&oscket(&[
        "--format", "json", "cat", "--ticks", "3", "--seed", "9", "--runs", "10",
    ]));
    assert_eq!(v["meta"]["command"], "cat");
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config"]["command"]["cat"]["seed"], 9);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(oscket(&["--help"]).status.code(), Some(0));
    assert_eq!(oscket(&["eprb", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(oscket(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(oscket(&["eprb", "--n", "minus-one"]).status.code(), Some(1));

    let domain = oscket(&["bell", "--theta-deg", "200"]);
    assert_eq!(domain.status.code(), Some(2));
    assert!(domain.stdout.is_empty());
    assert!(!domain.stderr.is_empty());
    assert_eq!(oscket(&["chsh", "--scan", "--step-deg", "0"]).status.code(), Some(2));
    assert_eq!(oscket(&["hidden", "--delta-cap=-1"]).status.code(), Some(2));
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = std::env::temp_dir().join(format!("oscket-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# three-axis run\ntheta_deg = 120\nn = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = json(&oscket(&["--format", "json", "--config", cfg, "bell"]));
    assert_eq!(from_file["rows"][0]["theta_deg"], 120.0);
    assert_eq!(from_file["meta"]["config"]["command"]["bell"]["n"], 4);

    let overridden = json(&oscket(&[
        "--format",
        "json",
        "--config",
        cfg,
        "bell",
        "--theta-deg",
        "60",
    ]));
    assert_eq!(overridden["rows"][0]["theta_deg"], 60.0);

    let out_path = dir.join("bell.csv");
    let status = oscket(&["--config", cfg, "-o", out_path.to_str().unwrap(), "bell"]);
    assert!(status.status.success() && status.stdout.is_empty());
    assert!(std::fs::read_to_string(&out_path).unwrap().starts_with("theta_deg,"));

    std::fs::write(dir.join("bad.cfg"), "theta_deg 120\n").unwrap();
    let bad = oscket(&["--config", dir.join("bad.cfg").to_str().unwrap(), "bell"]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
