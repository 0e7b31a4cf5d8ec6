//! Help text and exit statuses of the `polymix` binary.

use std::process::{Command, Output};

const GLOBAL: &[&str] = &[
    "--seed",
    "--samples",
    "--format",
    "--output",
    "--threads",
    "--strict",
    "--side",
];

const SUBCOMMANDS: &[(&str, &[&str])] = &[
    ("validate", &[]),
    ("angles", &[]),
    ("check-partition", &[]),
    ("enumerate", &["--limit"]),
    ("monochromatic", &[]),
    (
        "search",
        &[
            "--family",
            "--budget",
            "--min-points",
            "--max-points",
            "--levels",
            "--r-min",
            "--r-max",
            "--min-notches",
            "--max-notches",
        ],
    ),
    (
        "rellich",
        &["--vertex", "--inner", "--outer", "--functions", "--estimator"],
    ),
    (
        "sector-blowup",
        &[
            "--alpha",
            "--eps",
            "--crease-distance",
            "--cone-aperture",
            "--truncation",
        ],
    ),
    (
        "trace-energy",
        &[
            "--case",
            "--partition",
            "--data",
            "--levels",
            "--fan-rotation",
            "--dirichlet-vertices",
            "--export-off",
        ],
    ),
    ("fixtures", &[]),
];

fn polymix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymix")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn top_level_help_lists_every_subcommand() {
    let out = polymix(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for (name, _) in SUBCOMMANDS {
        assert!(text.contains(name), "missing {name}");
    }
    assert!(text.contains("Exit codes"));
}

#[test]
fn subcommand_help_lists_its_flags() {
    for (name, flags) in SUBCOMMANDS {
        let out = polymix(&[name, "--help"]);
        assert_eq!(code(&out), 0, "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        for flag in GLOBAL.iter().chain(flags.iter()) {
            assert!(text.contains(flag), "{name} --help lacks {flag}");
        }
    }
}

#[test]
fn success_is_zero() {
    assert_eq!(code(&polymix(&["validate", "fixture:cube", "--strict"])), 0);
    assert_eq!(code(&polymix(&["enumerate", "fixture:cube", "--format", "csv"])), 0);
}

#[test]
fn strict_failure_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.off");
    let open_box = "OFF\n8 5 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n\
                    4 0 3 2 1\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";
    std::fs::write(&path, open_box).unwrap();
    let path = path.to_str().unwrap();
    let lenient = polymix(&["validate", path]);
    assert_eq!(code(&lenient), 0);
    assert!(String::from_utf8(lenient.stdout).unwrap().contains("boundary_edge"));
    assert_eq!(code(&polymix(&["validate", path, "--strict"])), 1);
}

#[test]
fn input_errors_are_two() {
    assert_eq!(code(&polymix(&["validate", "no-such-file.off"])), 2);
    assert_eq!(code(&polymix(&["validate", "fixture:no-such-fixture"])), 2);
    assert_eq!(code(&polymix(&["rellich", "fixture:cube", "--bogus"])), 2);
    assert_eq!(code(&polymix(&["sector-blowup", "--alpha", "0.5pi"])), 2);
    assert_eq!(code(&polymix(&["trace-energy", "--case", "no-such-case"])), 2);
    assert_eq!(code(&polymix(&[])), 2);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = polymix(&["angles", "fixture:cube", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["command"], "angles");
}
