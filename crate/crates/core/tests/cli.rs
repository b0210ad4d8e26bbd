use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilaton-gme"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sweep_succeeds_and_is_deterministic() {
    let args = [
        "sweep",
        "--n-horizon",
        "5",
        "--accessible",
        "--steps",
        "101",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let last: f64 = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert!((last - 0.176_776_695_296_636_9).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sweep", "--n-horizon", "4", "--p", "3", "--q", "3"][..],
        &["sweep", "--n-horizon", "4", "--accessible", "--d-max", "2"],
        &["sweep", "--n-horizon", "20", "--accessible", "--oracle"],
        &["sweep", "--bogus"],
        &[
            "state",
            "--n-parties",
            "14",
            "--n-horizon",
            "12",
            "--p",
            "12",
            "--q",
            "0",
        ],
        &[
            "state",
            "--n-parties",
            "3",
            "--n-horizon",
            "1",
            "--p",
            "1",
            "--q",
            "0",
            "--dilaton",
            "1",
            "--charge",
            "1",
        ],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn oracle_sweep_passes() {
    let out = run(&[
        "sweep",
        "--n-horizon",
        "4",
        "--p",
        "3",
        "--q",
        "1",
        "--n-parties",
        "6",
        "--steps",
        "5",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("D,alpha,beta,E_analytic,E_oracle\n"));
}

#[test]
fn verify_small_passes_and_reports_json() {
    let out = run(&["verify", "--grid", "small"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report.as_array().unwrap();
    assert!(checks.len() >= 4);
    for c in checks {
        for key in [
            "name",
            "grid-size",
            "max-abs-error",
            "tolerance",
            "status",
            "worst-case-inputs",
        ] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert_eq!(c["status"], "pass");
    }
    assert_eq!(run(&["verify", "--grid", "small"]).stdout, out.stdout);
}

#[test]
fn injected_fault_is_reported() {
    let out = run(&["verify", "--grid", "small", "--inject-fault", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&serde_json::Value> = report
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "oracle-vs-closed-form");
    let inputs = failed[0]["worst-case-inputs"].as_object().unwrap();
    for key in [
        "n_parties",
        "n_horizon",
        "p",
        "q",
        "theta",
        "mass",
        "dilaton",
        "omega",
    ] {
        assert!(inputs.contains_key(key), "missing {key}");
    }
}

#[test]
fn state_dump_matches_hand_trace() {
    let out = run(&[
        "state",
        "--n-parties",
        "2",
        "--n-horizon",
        "1",
        "--p",
        "1",
        "--q",
        "0",
        "--dilaton",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<(String, String, f64)> = text
        .lines()
        .skip(2)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].to_string(), f[2].parse().unwrap())
        })
        .collect();
    let expect = [
        ("00", "00", 0.25),
        ("00", "11", 0.5 * std::f64::consts::FRAC_1_SQRT_2),
        ("01", "01", 0.25),
        ("11", "11", 0.5),
    ];
    assert_eq!(rows.len(), expect.len());
    for (r, c, v) in expect {
        let got = rows.iter().find(|x| x.0 == r && x.1 == c).unwrap().2;
        assert!((got - v).abs() < 1e-15, "{r},{c}");
    }
}

#[test]
fn figures_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = run(&["figures", "--out-dir", path, "--steps", "51", "--svg"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "fig1.csv", "fig2.csv", "fig3.csv", "fig1.svg", "fig2.svg", "fig3.svg",
    ] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let first = std::fs::read(dir.path().join("fig3.csv")).unwrap();
    run(&["figures", "--out-dir", path, "--steps", "51"]);
    assert_eq!(std::fs::read(dir.path().join("fig3.csv")).unwrap(), first);
}

#[test]
fn figures_report_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = run(&[
        "figures",
        "--out-dir",
        blocker.to_str().unwrap(),
        "--steps",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file"));
}
