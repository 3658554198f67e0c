use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nhkitaev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhkitaev"))
        .args(args)
        .env_remove("KITAEV_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const EP_POINT: [&str; 4] = ["--delta", "1.7320508075688772", "--mu", "2"];

#[test]
fn oracle_check_exit_codes() {
    let ok = nhkitaev(&[&["oracle-check", "--sites", "6", "--t", "1"], &EP_POINT[..]].concat());
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));

    let corrupt = nhkitaev(
        &[
            &["oracle-check", "--sites", "6", "--corrupt-sign"],
            &EP_POINT[..],
        ]
        .concat(),
    );
    assert_eq!(code(&corrupt), 2);

    let big = nhkitaev(&[&["oracle-check", "--sites", "14"], &EP_POINT[..]].concat());
    assert_eq!(code(&big), 1);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["phase-diagram", "--mu", "3:-3:0.1", "--delta", "0"],
        vec!["phase-diagram", "--mu", "-3:3:0", "--delta", "0"],
        vec!["dispersion", "--mu", "2"],
        vec!["dispersion", "--mu", "abc", "--delta", "1"],
        vec!["overlap", "--mu", "1", "--delta", "1"],
        vec![
            "pair-dynamics",
            "--mu",
            "2",
            "--delta",
            "1",
            "--workers",
            "0",
        ],
        vec!["no-such-command"],
        vec!["dispersion", "--bogus"],
    ] {
        let o = nhkitaev(&args);
        assert_eq!(
            code(&o),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(code(&nhkitaev(&["--help"])), 0);
}

#[test]
fn numeric_range_exits_two() {
    // |Im ε| t far beyond the overflow guard
    let o = nhkitaev(&[
        "pair-dynamics",
        "--delta",
        "2",
        "--mu",
        "1",
        "--times",
        "1000",
        "--sites",
        "8",
    ]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn stdout_tables_without_out() {
    let o = nhkitaev(&[
        "phase-diagram",
        "--mu",
        "2",
        "--delta",
        "1.7320508075688772",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# phase_diagram");
    assert_eq!(lines[1], "mu,delta,label,k_c,broken_fraction");
    assert!(lines[2].contains(",exceptional,1.04719755"));
}

#[test]
fn csv_identical_across_worker_counts() {
    let base = [
        "pair-dynamics",
        "--delta",
        "1.7320508075688772",
        "--mu",
        "2",
        "--times",
        "0:20:0.5",
        "--sites",
        "40",
    ];
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (dir, workers) in dirs.iter().zip(["1", "3", "8"]) {
        let out = dir.path().to_str().unwrap();
        let o = nhkitaev(&[&base[..], &["--workers", workers, "--out", out]].concat());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["nk_t.csv", "nbar_k.csv", "nbar_t.csv"] {
        let first = read(dirs[0].path(), name);
        assert!(first.lines().count() > 10);
        for d in &dirs[1..] {
            assert_eq!(read(d.path(), name), first, "{name}");
        }
    }
}

#[test]
fn env_workers_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nhkitaev"))
        .args([
            "phase-diagram",
            "--mu",
            "-1:1:0.5",
            "--delta",
            "0.5",
            "--out",
            out,
        ])
        .env("KITAEV_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(read(dir.path(), "config.json").contains("\"workers\": 3"));

    let o = Command::new(env!("CARGO_BIN_EXE_nhkitaev"))
        .args([
            "phase-diagram",
            "--mu",
            "-1:1:0.5",
            "--delta",
            "0.5",
            "--workers",
            "2",
            "--out",
            out,
        ])
        .env("KITAEV_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(read(dir.path(), "config.json").contains("\"workers\": 2"));

    let o = Command::new(env!("CARGO_BIN_EXE_nhkitaev"))
        .args(["phase-diagram", "--mu", "0", "--delta", "0"])
        .env("KITAEV_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_reproduces_run() {
    let first = tempfile::tempdir().unwrap();
    let out = first.path().to_str().unwrap();
    let o = nhkitaev(&[
        "overlap",
        "--delta",
        "1",
        "--mu",
        "1.4142135623730951",
        "--mu-h",
        "-0.5",
        "--times",
        "0,50,100",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_str(&read(first.path(), "meta.json")).unwrap();
    assert_eq!(meta["config"]["mu-h"], -0.5);
    assert!(meta["timestamp_unix"].as_u64().unwrap() > 0);

    let second = tempfile::tempdir().unwrap();
    let cfg_path = first.path().join("config.json");
    let o = nhkitaev(&[
        "overlap",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        second.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["overlap_k.csv", "overlap_t.csv"] {
        assert_eq!(read(first.path(), name), read(second.path(), name));
    }
    let mut a: serde_json::Value =
        serde_json::from_str(&read(first.path(), "config.json")).unwrap();
    let mut b: serde_json::Value =
        serde_json::from_str(&read(second.path(), "config.json")).unwrap();
    a["out"] = serde_json::Value::Null;
    b["out"] = serde_json::Value::Null;
    assert_eq!(a, b);
}

#[test]
fn overlap_reference_values() {
    let o = nhkitaev(&[
        "overlap",
        "--delta",
        "1",
        "--mu",
        "1.4142135623730951",
        "--mu-h",
        "0.9",
        "--times",
        "50,100",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let totals: Vec<f64> = text
        .split("# overlap_t")
        .nth(1)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(
        (totals[0] - 0.936).abs() < 0.02 && (totals[1] - 0.939).abs() < 0.02,
        "{totals:?}"
    );
}
