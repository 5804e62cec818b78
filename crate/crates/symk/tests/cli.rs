use std::path::Path;
use std::process::{Command as Proc, Output};

use clap::Parser;
use symk::{compute, json, render, run, Args, Format, RunConfig};

fn symk(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_symk"))
        .args(args)
        .env_remove("SYMK_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn config(line: &str) -> RunConfig {
    let args =
        Args::try_parse_from(std::iter::once("symk").chain(line.split_whitespace())).unwrap();
    RunConfig::from_args(&args).unwrap()
}

#[test]
fn exit_codes() {
    let ok = symk(&[
        "orbits",
        "--n",
        "2",
        "--field",
        "R",
        "--involution",
        "antidiag",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("total: 4"));

    let bad_field = symk(&[
        "orbits",
        "--n",
        "2",
        "--field",
        "Qp:6",
        "--involution",
        "antidiag",
    ]);
    assert_eq!(bad_field.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_field.stderr).contains('^'));
    assert_eq!(
        symk(&["orbits", "--n", "2", "--field", "R"]).status.code(),
        Some(1)
    );
    assert_eq!(symk(&["--help"]).status.code(), Some(0));

    let unsupported = symk(&[
        "tori",
        "--n",
        "3",
        "--field",
        "Q",
        "--involution",
        "blockJ:n=3,i=1",
    ]);
    assert_eq!(unsupported.status.code(), Some(2));
    let dot = symk(&[
        "weyl",
        "--n",
        "2",
        "--q",
        "5",
        "--involution",
        "antidiag",
        "--format",
        "dot",
    ]);
    assert_eq!(dot.status.code(), Some(2));

    let budget = symk(&[
        "orbits",
        "--n",
        "4",
        "--q",
        "3",
        "--involution",
        "transpose-inverse",
    ]);
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn budget_from_environment() {
    let args = ["orbits", "--n", "2", "--q", "5", "--involution", "antidiag"];
    let small = Proc::new(env!("CARGO_BIN_EXE_symk"))
        .args(args)
        .env("SYMK_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(small.status.code(), Some(3));
    let flag = Proc::new(env!("CARGO_BIN_EXE_symk"))
        .args(args)
        .args(["--budget", "100000"])
        .env("SYMK_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.dot");
    let o = symk(&[
        "complexify",
        "--n",
        "2",
        "--field",
        "R",
        "--involution",
        "antidiag",
        "--format",
        "dot",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        golden("complexify_r_antidiag.dot")
    );

    let missing = dir.path().join("no/such/dir/x.json");
    let o = symk(&[
        "ranks",
        "--n",
        "2",
        "--field",
        "R",
        "--involution",
        "antidiag",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    for args in [
        [
            "weyl",
            "--n",
            "2",
            "--q",
            "9",
            "--involution",
            "symplectic",
            "--format",
            "json",
        ],
        [
            "complexify",
            "--n",
            "2",
            "--field",
            "Qp:5",
            "--involution",
            "antidiag",
            "--format",
            "text",
        ],
        [
            "tori",
            "--n",
            "3",
            "--q",
            "3",
            "--involution",
            "transpose-inverse",
            "--format",
            "json",
        ],
    ] {
        let a = symk(&args);
        let b = symk(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn binary_is_a_thin_veneer() {
    for line in [
        "orbits --n 2 --field Q --involution antidiag --format json",
        "complexify --n 2 --field R --involution symplectic --format json",
        "poset --n 2 --q 7 --involution antidiag --format json",
        "oracle --n 2 --q 5 --involution symplectic --format json",
    ] {
        let cfg = config(line);
        let expected = format!("{:#}\n", json::render(&cfg, &compute(&cfg).unwrap()));
        assert_eq!(run(&cfg).unwrap(), expected, "{line}");
        assert_eq!(
            stdout(&symk(&line.split_whitespace().collect::<Vec<_>>())),
            expected,
            "{line}"
        );
    }
    let cfg = config("orbits --n 2 --field R --involution antidiag");
    assert_eq!(cfg.format, Format::Text);
    assert_eq!(
        run(&cfg).unwrap(),
        render(&cfg, &compute(&cfg).unwrap()).unwrap()
    );
}

#[test]
fn golden_dot() {
    let poset = symk(&[
        "poset",
        "--n",
        "2",
        "--field",
        "Qp:5",
        "--involution",
        "antidiag",
        "--format",
        "dot",
    ]);
    assert_eq!(stdout(&poset), golden("poset_qp5_antidiag.dot"));
    let orbits = symk(&[
        "orbits",
        "--group",
        "sl:2",
        "--field",
        "Qp:5",
        "--involution",
        "antidiag",
        "--format",
        "dot",
    ]);
    assert_eq!(stdout(&orbits), golden("orbits_qp5_antidiag.dot"));
    for (field, inv, file) in [
        ("R", "antidiag", "complexify_r_antidiag.dot"),
        ("R", "symplectic", "complexify_r_symplectic.dot"),
        ("Q", "antidiag", "complexify_q_antidiag.dot"),
    ] {
        let o = symk(&[
            "complexify",
            "--n",
            "2",
            "--field",
            field,
            "--involution",
            inv,
            "--format",
            "dot",
        ]);
        assert_eq!(stdout(&o), golden(file), "{field} {inv}");
    }
}

#[test]
fn json_counts() {
    let o = symk(&[
        "orbits",
        "--n",
        "2",
        "--field",
        "Q",
        "--involution",
        "antidiag",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], "inf");
    assert_eq!(v["open_family"], serde_json::json!([0, 1]));
    let o = symk(&[
        "complexify",
        "--n",
        "2",
        "--q",
        "7",
        "--involution",
        "symplectic",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["surjective"], false);
    assert_eq!(v["surjective_by_cokernel"], false);
    assert_eq!(v["rank"], serde_json::json!([1, 0]));
}
