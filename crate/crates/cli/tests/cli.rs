use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use retinex_entropy::sweep::SweepReport;
use retinex_entropy::{fixture, ImageRgb8, RetinexLevel};
use retinex_entropy_cli::io::{load_image, save_image};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_retinex-entropy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(o: &Output, name: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{name}=")))
        .unwrap_or_else(|| panic!("no {name} in {}", stdout(o)))
        .parse()
        .unwrap()
}

fn write_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("foggy.png");
    save_image(&fixture::default_foggy(), &path).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn filter_defaults_write_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let output = dir.path().join("out.png");
    let o = run(&["filter", "--input", s(&input), "--output", s(&output)]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let img = load_image(&output).unwrap();
    assert_eq!(
        (img.width(), img.height()),
        (fixture::DEFAULT_WIDTH, fixture::DEFAULT_HEIGHT)
    );
    assert!(value(&o, "shannon") > 0.0);
}

#[test]
fn filter_rejects_small_scale() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let output = dir.path().join("out.png");
    let o = run(&[
        "filter",
        "--input",
        s(&input),
        "--output",
        s(&output),
        "--scale",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!output.exists());
    let o = run(&[
        "filter",
        "--input",
        s(&input),
        "--output",
        s(&output),
        "--level",
        "medium",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn filter_missing_input_is_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "filter",
        "--input",
        s(&dir.path().join("absent.png")),
        "--output",
        s(&dir.path().join("o.png")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.png"));
}

#[test]
fn low_level_raises_entropy_of_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let output = dir.path().join("low.png");
    let filtered = run(&[
        "filter",
        "--input",
        s(&input),
        "--output",
        s(&output),
        "--level",
        "low",
    ]);
    let original = run(&["entropy", "--input", s(&input)]);
    assert!(value(&filtered, "shannon") > value(&original, "shannon"));
}

#[test]
fn entropy_of_constant_image() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.ppm");
    save_image(&ImageRgb8::filled(8, 8, [77; 3]).unwrap(), &path).unwrap();
    let o = run(&["entropy", "--input", s(&path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "shannon=0.000000000\n");
}

fn uniform_histogram_image(dir: &Path) -> PathBuf {
    let grey: Vec<u8> = (0..=255).collect();
    let path = dir.join("ramp.png");
    save_image(&ImageRgb8::from_grey(16, 16, &grey).unwrap(), &path).unwrap();
    path
}

#[test]
fn entropy_indices() {
    let dir = tempfile::tempdir().unwrap();
    let path = uniform_histogram_image(dir.path());
    let o = run(&["entropy", "--input", s(&path), "--q", "1", "--kappa", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("kaniadakis=5.83375"), "{text}");
    let closed = (256f64.powf(0.1) - 256f64.powf(-0.1)) / 0.2;
    assert!((value(&o, "kaniadakis") - closed).abs() < 1e-8);
    assert_eq!(value(&o, "tsallis"), value(&o, "shannon"));
    assert!((value(&o, "shannon") - 256f64.ln()).abs() < 1e-8);

    assert_eq!(
        run(&["entropy", "--input", s(&path), "--q", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["entropy", "--input", s(&path), "--kappa", "-0.1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn curve_csv_shape_and_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_fixture(dir.path());
    let b = uniform_histogram_image(dir.path());
    let csv_path = dir.path().join("c.csv");

    let o = run(&["curve", "--input", s(&a), "--out-csv", s(&csv_path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "kappa,foggy");
    assert_eq!(rows.len(), 12);
    assert!(rows[1].starts_with("0,"));

    let o = run(&["curve", "--input", s(&a), s(&b), "--out-csv", s(&csv_path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["kappa", "foggy", "ramp"]);
    assert!(rows.iter().all(|r| r.len() == 3));
    let kappas: Vec<f64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(kappas.windows(2).all(|w| w[1] > w[0]));

    for (col, path) in [(1, &a), (2, &b)] {
        let shannon = value(&run(&["entropy", "--input", s(path)]), "shannon");
        let from_csv: f64 = rows[1][col].parse().unwrap();
        assert!((from_csv - shannon).abs() < 1e-8, "{from_csv} vs {shannon}");
    }

    let o = run(&["curve", "--input", s(&a), "--kappa-steps", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_report_csv_and_images() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = dir.path().join("out");
    let o = run(&[
        "sweep",
        "--input",
        s(&input),
        "--levels",
        "low,high",
        "--scales",
        "16",
        "--dynamics",
        "1.2,2.4",
        "--out-dir",
        s(&out),
        "--save-images",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: SweepReport =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.records.len(), 4);
    let winner = report.winner();
    assert!(stdout(&o).starts_with(&format!("winner={}\n", winner.id())));
    for r in &report.records {
        assert!(out.join(format!("{}.png", r.id())).exists());
    }
    assert!(out.join("high_s16_n3_d2.4.png").exists());
    let csv = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "kappa,original,low_s16_n3_d1.2,low_s16_n3_d2.4,high_s16_n3_d1.2,high_s16_n3_d2.4"
    );
}

#[test]
fn sweep_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let report_path = dir.path().join("r.json");
    let o = run(&[
        "sweep",
        "--input",
        s(&input),
        "--scales",
        "16",
        "--out-dir",
        s(dir.path()),
        "--report",
        s(&report_path),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&report_path).unwrap();
    let report: SweepReport = serde_json::from_str(&text).unwrap();
    assert_eq!(retinex_entropy_cli::app::report_json(&report), text);
    let direct = retinex_entropy::sweep::run_sweep(
        &load_image(&input).unwrap(),
        report.grid.as_ref().unwrap(),
    )
    .unwrap();
    assert_eq!(report, direct);
    assert_eq!(report.grid.as_ref().unwrap().levels, RetinexLevel::ALL);
}

#[test]
fn sweep_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    for bad in [
        vec!["--levels", ""],
        vec!["--levels", "low,bright"],
        vec!["--scales", "1"],
        vec!["--scale-divs", "9"],
        vec!["--dynamics", "0"],
        vec!["--kappa-max", "0"],
    ] {
        let mut args = vec!["sweep", "--input", s(&input), "--out-dir", s(dir.path())];
        args.extend(bad.iter());
        assert_eq!(run(&args).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn fixture_subcommand_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.ppm");
    let o = run(&[
        "fixture",
        "--output",
        s(&path),
        "--width",
        "30",
        "--height",
        "20",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(load_image(&path).unwrap(), fixture::foggy(30, 20, 9));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
