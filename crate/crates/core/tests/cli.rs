use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_circle-approx"));
    cmd.env_remove("CIRCLE_APPROX_OUT");
    cmd
}

fn run(out: &Path, args: &[&str]) -> Output {
    bin().arg("--out").arg(out).args(args).output().unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn report_value(dir: &Path, key: &str) -> String {
    let text = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in report"))
        .to_string()
}

#[test]
fn blaschke_run_puts_zeros_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run1");
    let o = run(
        &out,
        &[
            "approx-blaschke",
            "--fn",
            "exp",
            "--r",
            "0.5",
            "--delta",
            "0.1",
            "--eps",
            "1e-2",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let zeros = std::fs::read_to_string(out.join("zeros.csv")).unwrap();
    let moduli = column(&zeros, "modulus");
    assert!(!moduli.is_empty());
    assert!(moduli.iter().all(|m| (m - 0.5).abs() <= 1e-9));
    let grid = std::fs::read_to_string(out.join("error_grid.csv")).unwrap();
    assert!(column(&grid, "abs_error").iter().all(|e| *e < 1e-2));
    assert!(report_value(&out, "grid_max_error").parse::<f64>().unwrap() < 1e-2);
}

#[test]
fn rubinstein_roots_are_unimodular() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["rubinstein", "--poly", "\u{2212}2,1", "--k", "12"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let zeros = std::fs::read_to_string(dir.path().join("zeros.csv")).unwrap();
    let moduli = column(&zeros, "modulus");
    assert_eq!(moduli.len(), 13);
    assert!(moduli.iter().all(|m| (m - 1.0).abs() <= 1e-9));
}

#[test]
fn missing_argument_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "approx-blaschke",
            "--fn",
            "exp",
            "--delta",
            "0.1",
            "--eps",
            "1e-2",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--r"), "{err}");
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[
            "approx-poly",
            "--fn",
            "0, 1",
            "--radius",
            "0.5",
            "--eps",
            "1e-3",
        ][..],
        &[
            "approx-poly",
            "--fn",
            "exp",
            "--radius",
            "1.5",
            "--eps",
            "1e-3",
        ],
        &[
            "transport",
            "--fn",
            "exp",
            "--center",
            "0.7",
            "--radius",
            "0.5",
            "--eps",
            "1e-2",
        ],
        &[
            "transport",
            "--fn",
            "affine:-2.5",
            "--center",
            "0.3",
            "--radius",
            "0.2",
            "--eps",
            "0.05",
        ],
        &["rubinstein", "--poly", "-0.5,1", "--k", "3"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn budget_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "approx-poly",
            "--fn",
            "exp",
            "--radius",
            "0.9",
            "--eps",
            "1e-14",
            "--j-max",
            "20",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(
            out,
            &[
                "approx-poly",
                "--fn",
                "exp",
                "--radius",
                "0.4",
                "--eps",
                "1e-6",
            ],
        );
        assert!(o.status.success());
        let o = run(
            &out.join("rmt"),
            &[
                "rmt-prob", "--fn", "1", "--r", "0.1", "--eps", "0.1,0.5", "--n", "4", "--trials",
                "300", "--seed", "5",
            ],
        );
        assert!(o.status.success());
    }
    for name in [
        "factors.csv",
        "zeros.csv",
        "error_grid.csv",
        "rmt/probability.csv",
    ] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("CIRCLE_APPROX_OUT", dir.path())
        .args(["rmt-sample", "--n", "3", "--samples", "20", "--seed", "1"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let phases = std::fs::read_to_string(dir.path().join("phases.csv")).unwrap();
    assert_eq!(phases.lines().count(), 1 + 60);
    assert!(dir.path().join("tuple_histogram.csv").exists());
}

#[test]
fn spec_from_file_and_transport_modes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("f.txt");
    std::fs::write(&spec, "1\n-0.5\n").unwrap();
    let at = format!("@{}", spec.display());
    let out = dir.path().join("poly");
    let o = run(
        &out,
        &[
            "transport",
            "--fn",
            &at,
            "--center",
            "0.3",
            "--radius",
            "0.2",
            "--eps",
            "0.05",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report_value(&out, "mode"), "polynomial");
    assert!(report_value(&out, "grid_max_error").parse::<f64>().unwrap() < 0.1);

    let out = dir.path().join("blaschke");
    let o = run(
        &out,
        &[
            "transport",
            "--fn",
            "geometric:0.5",
            "--center",
            "0.1",
            "--radius",
            "0.3",
            "--delta",
            "0.05",
            "--eps",
            "1e-3",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let zeros = std::fs::read_to_string(out.join("zeros.csv")).unwrap();
    assert!(column(&zeros, "modulus")
        .iter()
        .all(|m| (m - 0.3).abs() <= 1e-9));
    assert!(report_value(&out, "grid_max_error").parse::<f64>().unwrap() < 1e-3);

    let out = dir.path().join("prescribed");
    let o = run(
        &out,
        &[
            "transport",
            "--fn",
            "exp",
            "--center",
            "0",
            "--radius",
            "0.5",
            "--delta",
            "0.05",
            "--eps",
            "1e-3",
            "--zeros",
            "0.2,-0.3i",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report_value(&out, "prescribed_zeros"), "2");
    assert!(report_value(&out, "grid_max_error").parse::<f64>().unwrap() < 1e-3);
}
