use std::path::Path;
use std::process::{Command, Output};

fn cbcfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbcfd")).args(args).output().unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn csv_without_seconds(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn example2_study_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbcfd(&["run", "--problem", "example2", "--scheme", "cbcfd", "--grids", "10,20", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("### CBCFD"));

    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "scheme,n,h,dt,err_p,rate_p,err_u,rate_u,seconds");
    let rate: f64 = lines[2].split(',').nth(5).unwrap().parse().unwrap();
    assert!((rate - 4.0).abs() < 0.15, "{rate}");
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("convergence.md").exists());
    let dat = std::fs::read_to_string(dir.path().join("loglog.dat")).unwrap();
    assert!(dat.contains("# scheme cbcfd") && !dat.contains("# scheme bcfd"));
}

#[test]
fn runs_are_deterministic_apart_from_timing() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = cbcfd(&["run", "--problem", "example1", "--scheme", "both", "--grids", "10,20", "--T", "0.5", "--out", &out_arg(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    let name = "convergence.csv";
    assert_eq!(csv_without_seconds(&a.path().join(name)), csv_without_seconds(&b.path().join(name)));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.cfg");
    let out_dir = dir.path().join("results");
    std::fs::write(
        &cfg,
        format!("# example 1, both schemes\nproblem = example1\nscheme = both\ngrids = 10, 20\nT = 0.5\nout = {}\n", out_dir.display()),
    )
    .unwrap();
    let out = cbcfd(&["run", "--config", cfg.to_str().unwrap(), "--scheme", "bcfd"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("bcfd,")));
}

#[test]
fn custom_problem_file_runs() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("cosine.txt");
    std::fs::write(&problem, "dim = 2\na = 1.5\nb = 0.5\ntime_power = 2\nb_time_power = 0\nwavenumber = 1\n").unwrap();
    let out = cbcfd(&["run", "--problem", problem.to_str().unwrap(), "--grids", "8,16", "--T", "0.25", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_exit_with_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["--grids", "40,20"], "grids"),
        (&["--grids", "2,4"], "grids"),
        (&["--dt-rule", "h^0"], "dt-rule"),
        (&["--dt-rule", "h2"], "dt-rule"),
        (&["--T", "-1"], "T"),
        (&["--scheme", "fancy"], "scheme"),
    ];
    for (extra, field) in cases {
        let mut args = vec!["run", "--out"];
        let o = out_arg(dir.path());
        args.push(&o);
        args.extend_from_slice(extra);
        let out = cbcfd(&args);
        assert_eq!(out.status.code(), Some(2), "{extra:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(&format!("`{field}`")), "{extra:?}: {err}");
    }
    let missing = cbcfd(&["run", "--problem", "/nonexistent/problem.txt", "--grids", "8"]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown_flag = cbcfd(&["run", "--colour", "blue"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("not-a-dir");
    std::fs::write(&file, "x").unwrap();
    let out = cbcfd(&["run", "--grids", "8", "--T", "0.1", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
