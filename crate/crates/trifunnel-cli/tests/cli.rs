//! End-to-end checks of the command-line interface: output formats,
//! determinism across thread counts, file round trips and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trifunnel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = tempfile::Builder::new()
        .prefix("trifunnel")
        .tempdir()
        .unwrap();
    // Leak the TempDir so the path survives the test body; the OS reclaims it.
    let path = dir.path().join(name);
    std::mem::forget(dir);
    path
}

#[test]
fn surface_prints_constants() {
    let out = run(&["surface", "--b", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("theta"));
    assert!(text.contains("beta_3"));
}

#[test]
fn spectrum_census() {
    let out = run(&["spectrum", "--b", "4", "--m", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let counts: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(counts, vec!["6", "36", "18", "6"]);
}

#[test]
fn eval_z0_is_one() {
    let out = run(&["eval", "--b", "4", "--n", "0", "--s", "0.3+2i"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parts: Vec<f64> = text
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(parts, vec![1.0, 0.0]);
}

#[test]
fn delta_matches_reference() {
    let out = run(&["delta", "--b", "4.71238898", "--n", "14"]);
    assert!(out.status.success());
    let d: f64 = stdout(&out).trim().parse().unwrap();
    assert!((d - 0.146949).abs() < 2e-4, "delta = {d}");
}

#[test]
fn zeros_deterministic_across_threads_and_runs() {
    let args = ["zeros", "--b", "4", "--n", "10", "--rect", "0,0.25,0,3"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "2"]].concat());
    let c = run(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "output depends on worker count");
    assert_eq!(a.stdout, c.stdout, "output differs between runs");
    assert!(stdout(&a).lines().count() > 1);
}

#[test]
fn zeros_json_format() {
    let out = run(&[
        "zeros",
        "--b",
        "4",
        "--n",
        "10",
        "--rect",
        "0,0.25,0,2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_start().starts_with('['));
    assert!(text.contains("\"re\""));
}

#[test]
fn zeros_rescale_compare_round_trip() {
    let csv = tmp("zeros.csv");
    let out = run(&[
        "zeros",
        "--b",
        "4",
        "--n",
        "14",
        "--rect",
        "-0.02,0.2,0,13",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let resc = run(&["rescale", "--b", "4", "--input", csv.to_str().unwrap()]);
    assert!(resc.status.success());
    let resc_text = stdout(&resc);
    let lines: Vec<&str> = resc_text.lines().skip(1).collect();
    assert!(!lines.is_empty());
    for l in &lines {
        let re: f64 = l.split(',').next().unwrap().parse().unwrap();
        assert!(re > -0.1 && re < 2.0f64.ln() + 0.1, "rescaled re = {re}");
    }

    let cmp = run(&[
        "compare",
        "--b",
        "4",
        "--input",
        csv.to_str().unwrap(),
        "--height",
        "0.23",
        "--margin",
        "0.01",
    ]);
    assert!(
        cmp.status.success(),
        "{}",
        String::from_utf8_lossy(&cmp.stderr)
    );
    assert!(stdout(&cmp).contains("hausdorff"));

    let tr = run(&[
        "translate",
        "--b",
        "4",
        "--input",
        csv.to_str().unwrap(),
        "--tau",
        "0",
        "--eps",
        "1e-9",
    ]);
    assert!(tr.status.success());
    assert!(stdout(&tr).contains("pass = true"));
}

#[test]
fn plot_emits_svg() {
    let csv = tmp("zeros.csv");
    let svg = tmp("plot.svg");
    assert!(run(&[
        "zeros",
        "--b",
        "4",
        "--n",
        "10",
        "--rect",
        "0,0.25,0,3",
        "-o",
        csv.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&[
        "plot",
        "--b",
        "4",
        "--input",
        csv.to_str().unwrap(),
        "--curves",
        "-o",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("circle"));
    assert!(text.contains("path"));
}

#[test]
fn lfunction_trivial_matches_eval() {
    let a = run(&["eval", "--b", "4.5", "--n", "10", "--s", "0.2+3i"]);
    let b = run(&[
        "lfunction",
        "--b",
        "4.5",
        "--n",
        "10",
        "--character",
        "trivial",
        "--s",
        "0.2+3i",
    ]);
    assert!(a.status.success() && b.status.success());
    let pa: Vec<f64> = stdout(&a)
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    let pb: Vec<f64> = stdout(&b)
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((pa[0] - pb[0]).abs() < 1e-13 && (pa[1] - pb[1]).abs() < 1e-13);
}

#[test]
fn lfunction_zero_csv_has_character_column() {
    // The band 0.02 <= sigma keeps the contour away from the zero chain that
    // hugs the imaginary axis; an edge through it would (correctly) fail the
    // winding audit.
    let out = run(&[
        "lfunction",
        "--b",
        "4.5",
        "--n",
        "10",
        "--character",
        "1",
        "--rect",
        "0.02,0.2,0.1,2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with("re,im,residual,iterations,character"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(!rows.is_empty());
    for line in rows {
        assert!(line.ends_with(",chi1"), "row: {line}");
    }
}

#[test]
fn bound_exit_codes() {
    // Inside the proven region.
    let t_in = (1.05f64 * 20.0).exp().to_string();
    let ok = run(&["bound", "--b", "20", "--n", "14", "--t-height", &t_in]);
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let eta: f64 = stdout(&ok).trim().parse().unwrap();
    assert!(eta.is_finite() && eta > 0.0);

    // Outside: dedicated exit code 4.
    let bad = run(&["bound", "--b", "10", "--n", "14", "--t-height", "1e4"]);
    assert_eq!(bad.status.code(), Some(4));
    let bad_n = run(&["bound", "--b", "20", "--n", "12", "--t-height", "1e4"]);
    assert_eq!(bad_n.status.code(), Some(4));
}

#[test]
fn invalid_usage_exits_2() {
    let unknown = run(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    let missing = run(&["delta", "--n", "14"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_rect = run(&["zeros", "--b", "4", "--n", "10", "--rect", "0.3,0.2,0,1"]);
    assert_eq!(bad_rect.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = tmp("run.json");
    std::fs::write(
        &cfg,
        r#"{"b": 4.0, "n": 10, "rect": [0.0, 0.25, 0.0, 2.0], "tol": 1e-9}"#,
    )
    .unwrap();
    let from_cfg = run(&["zeros", "--config", cfg.to_str().unwrap()]);
    assert!(
        from_cfg.status.success(),
        "{}",
        String::from_utf8_lossy(&from_cfg.stderr)
    );
    let explicit = run(&["zeros", "--b", "4", "--n", "10", "--rect", "0,0.25,0,2"]);
    assert_eq!(from_cfg.stdout, explicit.stdout);

    // Flags override the config.
    let override_b = run(&[
        "delta",
        "--config",
        cfg.to_str().unwrap(),
        "--b",
        "4.71238898",
        "--n",
        "14",
    ]);
    assert!(override_b.status.success());
    let d: f64 = stdout(&override_b).trim().parse().unwrap();
    assert!((d - 0.146949).abs() < 2e-4);

    let broken = tmp("broken.json");
    std::fs::write(&broken, "{not json").unwrap();
    let bad = run(&[
        "delta",
        "--config",
        broken.to_str().unwrap(),
        "--b",
        "4",
        "--n",
        "2",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lattice_report() {
    let out = run(&["lattice", "--b", "6", "--n", "14"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("hausdorff_to_lattice"))
        .unwrap();
    let d: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(d < 0.05, "lattice distance {d}");
}
