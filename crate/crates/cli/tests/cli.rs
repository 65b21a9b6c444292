use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use levysim_cli::output::SERIES_HEADER;

fn levysim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levysim"))
        .args(args)
        .env_remove("LEVY_SIM_WORKERS")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = levysim(args);
    assert!(
        out.status.success(),
        "levysim {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL_QKR: [&str; 14] = [
    "run",
    "--system",
    "qkr",
    "--alpha",
    "1",
    "--steps",
    "300",
    "--trajectories",
    "6",
    "--p",
    "1",
    "--q",
    "3",
    "--omit-runtime",
];

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = run_ok(
        &[
            &SMALL_QKR[..],
            &[
                "--out",
                out,
                "--kappa1",
                "1",
                "--kappa2",
                "-1",
                "--dump-sequence",
            ],
        ]
        .concat(),
    );
    assert!(stdout.starts_with("c = "));

    let csv = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(SERIES_HEADER));
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last.len(), 7);
    assert_eq!(last[0], "300");

    let raw = fs::read_to_string(dir.path().join("summary.json")).unwrap();
    let keys = [
        "\"config\"",
        "\"fit\"",
        "\"runtime_seconds\"",
        "\"versions\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| raw.find(k).unwrap()).collect();
    assert!(
        positions.windows(2).all(|w| w[0] < w[1]),
        "key order {positions:?}"
    );

    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["config"]["system"]["kind"], "qkr");
    assert_eq!(summary["config"]["system"]["kappa2"], -1.0);
    assert_eq!(
        summary["config"]["fit_window"],
        serde_json::json!([37, 300])
    );
    assert!(summary["runtime_seconds"].is_null());
    assert!(summary["fit"]["c"].as_f64().unwrap() > 0.3);

    let plot = fs::read_to_string(dir.path().join("plot.gp")).unwrap();
    assert!(plot.contains("set logscale xy") && plot.contains("'series.csv'"));
    let seq = fs::read_to_string(dir.path().join("sequence.txt")).unwrap();
    assert_eq!(seq.trim_end().len(), 300);
    assert!(seq.trim_end().chars().all(|c| c == '0' || c == '1'));
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, workers) in [(&a, "1"), (&b, "4")] {
        let out = dir.path().to_str().unwrap();
        run_ok(&[&SMALL_QKR[..], &["--out", out, "--workers", workers]].concat());
    }
    for name in ["series.csv", "summary.json", "plot.gp"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn workers_fall_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_levysim"))
        .args(SMALL_QKR)
        .args(["--out", dir.path().to_str().unwrap()])
        .env("LEVY_SIM_WORKERS", "0x")
        .output()
        .unwrap();
    assert!(!out.status.success(), "malformed worker count accepted");
}

#[test]
fn identity_coin_is_ballistic() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "run",
        "--system",
        "qw",
        "--theta1",
        "0",
        "--theta2",
        "0",
        "--alpha",
        "1",
        "--steps",
        "1000",
        "--trajectories",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let c = json(&dir.path().join("summary.json"))["fit"]["c"]
        .as_f64()
        .unwrap();
    assert!((c - 1.0).abs() <= 0.01, "c = {c}");
}

#[test]
fn symbolic_angles_match_radians() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let common = [
        "run",
        "--system",
        "qw",
        "--alpha",
        "2",
        "--steps",
        "200",
        "--trajectories",
        "4",
        "--omit-runtime",
    ];
    run_ok(
        &[
            &common[..],
            &[
                "--theta1",
                "pi/3",
                "--theta2",
                "-pi/6",
                "--out",
                a.path().to_str().unwrap(),
            ],
        ]
        .concat(),
    );
    let s = json(&a.path().join("summary.json"));
    assert_eq!(
        s["config"]["system"]["theta1"].as_f64(),
        Some(std::f64::consts::FRAC_PI_3)
    );
    assert_eq!(
        s["config"]["system"]["theta2"].as_f64(),
        Some(-std::f64::consts::FRAC_PI_6)
    );
    run_ok(
        &[
            &common[..],
            &[
                "--theta1",
                "1.0471975511965979",
                "--theta2",
                "-0.5235987755982989",
                "--out",
                b.path().to_str().unwrap(),
            ],
        ]
        .concat(),
    );
    assert_eq!(
        fs::read(a.path().join("series.csv")).unwrap(),
        fs::read(b.path().join("series.csv")).unwrap()
    );
}

#[test]
fn invalid_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases: [&[&str]; 8] = [
        &["run", "--system", "qkr", "--alpha", "2.5", "--out", out],
        &["run", "--system", "qkr", "--alpha", "0", "--out", out],
        &[
            "run", "--system", "qkr", "--p", "2", "--q", "4", "--out", out,
        ],
        &["run", "--system", "qw", "--theta1", "pie", "--out", out],
        &["run", "--system", "rotor", "--out", out],
        &[
            "run",
            "--system",
            "qkr",
            "--steps",
            "50",
            "--trajectories",
            "2",
            "--fit-window",
            "60:40",
            "--out",
            out,
        ],
        &["run", "--system", "qkr", "--steps", "0", "--out", out],
        &[
            "sweep",
            "--system",
            "qkr",
            "--sweep",
            "theta=pi/8",
            "--out",
            out,
        ],
    ];
    for args in cases {
        let result = levysim(args);
        assert!(!result.status.success(), "accepted {args:?}");
        assert!(!result.stderr.is_empty());
    }
}

#[test]
fn fit_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    // A window past the last step holds no points.
    let result = levysim(&[
        "run",
        "--system",
        "qkr",
        "--steps",
        "40",
        "--trajectories",
        "2",
        "--fit-window",
        "100:200",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    assert!(String::from_utf8_lossy(&result.stderr).contains("fit"));
}

#[test]
fn alpha_sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = run_ok(&[
        "sweep",
        "--system",
        "qw",
        "--sweep",
        "alpha=0.5:1.5:0.5",
        "--steps",
        "400",
        "--trajectories",
        "4",
        "--omit-runtime",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(stdout.contains("alpha"));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "value,c,c_stderr,r_squared");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.5,") && lines[3].starts_with("1.5,"));
    for k in 0..3 {
        assert!(dir.path().join(format!("series_{k:03}.csv")).exists());
    }
    assert!(dir.path().join("sweep.gp").exists());
    let summary = json(&dir.path().join("sweep.json"));
    assert_eq!(summary["sweep"]["parameter"], "alpha");
    assert_eq!(summary["points"].as_array().unwrap().len(), 3);
}

#[test]
fn theta_sweep_negates_second_angle() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "sweep",
        "--system",
        "qw",
        "--chirality",
        "symmetric",
        "--sweep",
        "theta=pi/8,3*pi/8",
        "--steps",
        "400",
        "--trajectories",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let s = json(&dir.path().join("series_001.json"));
    let t1 = s["config"]["system"]["theta1"].as_f64().unwrap();
    let t2 = s["config"]["system"]["theta2"].as_f64().unwrap();
    assert!((t1 - 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
    assert_eq!(t2, -t1);
}

#[test]
fn failing_sweep_point_becomes_nan() {
    let dir = tempfile::tempdir().unwrap();
    let out = levysim(&[
        "sweep",
        "--system",
        "qkr",
        "--sweep",
        "pq=1/3,2/4,2/3",
        "--steps",
        "200",
        "--trajectories",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows[1].starts_with("2/4,NaN,"), "{}", rows[1]);
    let c13: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    let c23: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((c13 - c23).abs() < 1e-9, "{c13} vs {c23}");
    let summary = json(&dir.path().join("sweep.json"));
    assert!(summary["points"][1]["c"].is_null());
}

#[test]
fn library_entry_points_return_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        levysim_cli::run_experiment_command([
            "--system",
            "qw",
            "--steps",
            "100",
            "--trajectories",
            "2",
            "--out",
            out
        ]),
        0
    );
    assert_ne!(
        levysim_cli::run_sweep_command(["--system", "qw", "--sweep", "gamma=1", "--out", out]),
        0
    );
}
