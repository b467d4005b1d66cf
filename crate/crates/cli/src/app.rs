use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use retinex_entropy::entropy::{
    kaniadakis, shannon, tsallis, Kappa, DEFAULT_CURVE_STEPS, KAPPA_SMALL_MAX, Q,
};
use retinex_entropy::histogram::image_distribution;
use retinex_entropy::retinex::{msrcr, DEFAULT_DYNAMIC, DEFAULT_SCALE, DEFAULT_SCALE_DIVISION};
use retinex_entropy::sweep::{run_sweep_with_outputs, SweepReport};
use retinex_entropy::{entropy, fixture, Error, GridSpec, RetinexLevel, RetinexParams};
use thiserror::Error;

use crate::format::{named_value, write_curve_csv};
use crate::io::{load_image, save_image, ImageIoError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Image(#[from] ImageIoError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "retinex-entropy",
    version,
    about = "MSRCR filtering ranked by image entropy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the MSRCR filter to one image
    Filter(FilterArgs),
    /// Print Shannon and optionally Tsallis / Kaniadakis entropies
    Entropy(EntropyArgs),
    /// Write Kaniadakis entropy curves of one or more images as CSV
    Curve(CurveArgs),
    /// Filter with every combination of a parameter grid and rank by entropy
    Sweep(SweepArgs),
    /// Write the synthetic foggy test image
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value = "uniform", value_parser = parse_level)]
    level: RetinexLevel,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: u32,
    #[arg(long = "scale-div", default_value_t = DEFAULT_SCALE_DIVISION)]
    scale_div: u32,
    #[arg(long, default_value_t = DEFAULT_DYNAMIC)]
    dynamic: f64,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Tsallis index, q > 0
    #[arg(long)]
    q: Option<f64>,
    /// Kaniadakis index, kappa >= 0
    #[arg(long)]
    kappa: Option<f64>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long = "kappa-max", default_value_t = KAPPA_SMALL_MAX)]
    kappa_max: f64,
    #[arg(long = "kappa-steps", default_value_t = DEFAULT_CURVE_STEPS)]
    kappa_steps: usize,
    /// Output path; standard output when omitted
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "uniform,low,high", value_parser = parse_level)]
    levels: Vec<RetinexLevel>,
    #[arg(long, value_delimiter = ',', default_value = "240")]
    scales: Vec<u32>,
    #[arg(long = "scale-divs", value_delimiter = ',', default_value = "3")]
    scale_divs: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1.2")]
    dynamics: Vec<f64>,
    #[arg(long = "kappa-max", default_value_t = KAPPA_SMALL_MAX)]
    kappa_max: f64,
    #[arg(long = "kappa-steps", default_value_t = DEFAULT_CURVE_STEPS)]
    kappa_steps: usize,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// JSON report path; defaults to <out-dir>/report.json
    #[arg(long)]
    report: Option<PathBuf>,
    /// Curve CSV path; defaults to <out-dir>/curves.csv
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write every filtered variant into --out-dir
    #[arg(long = "save-images")]
    save_images: bool,
}

#[derive(Debug, Args)]
struct FixtureArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = fixture::DEFAULT_WIDTH)]
    width: usize,
    #[arg(long, default_value_t = fixture::DEFAULT_HEIGHT)]
    height: usize,
    #[arg(long, default_value_t = fixture::DEFAULT_SEED)]
    seed: u64,
}

fn parse_level(s: &str) -> Result<RetinexLevel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Filter(a) => cmd_filter(a, &mut out),
        Command::Entropy(a) => cmd_entropy(a, &mut out),
        Command::Curve(a) => cmd_curve(a, &mut out),
        Command::Sweep(a) => cmd_sweep(a, &mut out),
        Command::Fixture(a) => cmd_fixture(a),
    };
    match result.and_then(|()| out.flush().map_err(io_err(Path::new("<stdout>")))) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn cmd_filter(a: FilterArgs, out: &mut impl Write) -> Result<(), CliError> {
    let params = RetinexParams::new(a.level, a.scale, a.scale_div, a.dynamic).map_err(usage)?;
    let image = load_image(&a.input)?;
    let filtered = msrcr(&image, &params).map_err(runtime)?;
    save_image(&filtered, &a.output)?;
    let s = shannon(&image_distribution(&filtered).map_err(runtime)?);
    writeln!(out, "{}", named_value("shannon", s)).map_err(stdout_err)
}

fn cmd_entropy(a: EntropyArgs, out: &mut impl Write) -> Result<(), CliError> {
    let q = a.q.map(Q::new).transpose().map_err(usage)?;
    let kappa = a.kappa.map(Kappa::new).transpose().map_err(usage)?;
    let p = image_distribution(&load_image(&a.input)?).map_err(runtime)?;
    let mut lines = vec![named_value("shannon", shannon(&p))];
    if let Some(q) = q {
        lines.push(named_value("tsallis", tsallis(&p, q)));
    }
    if let Some(k) = kappa {
        lines.push(named_value("kaniadakis", kaniadakis(&p, k)));
    }
    for line in lines {
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    Ok(())
}

/// Column ids for curve CSVs: file stems, or the full path where stems collide.
fn column_ids(paths: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    stems
        .iter()
        .zip(paths)
        .map(|(stem, path)| {
            if stems.iter().filter(|s| *s == stem).count() > 1 {
                path.display().to_string()
            } else {
                stem.clone()
            }
        })
        .collect()
}

fn cmd_curve(a: CurveArgs, out: &mut impl Write) -> Result<(), CliError> {
    entropy::kappa_grid(a.kappa_max, a.kappa_steps).map_err(usage)?;
    let mut curves = Vec::with_capacity(a.input.len());
    for path in &a.input {
        let p = image_distribution(&load_image(path)?).map_err(runtime)?;
        curves.push(entropy::entropy_curve(&p, a.kappa_max, a.kappa_steps).map_err(runtime)?);
    }
    let columns: Vec<(String, &entropy::EntropyCurve)> =
        column_ids(&a.input).into_iter().zip(&curves).collect();
    match &a.out_csv {
        Some(path) => write_csv_file(path, &columns),
        None => write_curve_csv(out, &columns).map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn write_csv_file(
    path: &Path,
    columns: &[(String, &entropy::EntropyCurve)],
) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_err(path))?;
    write_curve_csv(BufWriter::new(file), columns)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Curve CSV of a report: the original first, then records in enumeration order.
pub fn report_columns(report: &SweepReport) -> Vec<(String, &entropy::EntropyCurve)> {
    std::iter::once(&report.original)
        .chain(&report.records)
        .map(|r| (r.id(), &r.curve))
        .collect()
}

pub fn report_json(report: &SweepReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_sweep(a: SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    let grid = GridSpec {
        levels: a.levels,
        scales: a.scales,
        scale_divisions: a.scale_divs,
        dynamics: a.dynamics,
        kappa_max: a.kappa_max,
        kappa_steps: a.kappa_steps,
    };
    grid.validate().map_err(usage)?;
    let image = load_image(&a.input)?;
    let (report, outputs) = run_sweep_with_outputs(&image, &grid).map_err(runtime)?;

    fs::create_dir_all(&a.out_dir).map_err(io_err(&a.out_dir))?;
    let report_path = a.report.unwrap_or_else(|| a.out_dir.join("report.json"));
    let csv_path = a.csv.unwrap_or_else(|| a.out_dir.join("curves.csv"));
    fs::write(&report_path, report_json(&report)).map_err(io_err(&report_path))?;
    write_csv_file(&csv_path, &report_columns(&report))?;
    if a.save_images {
        for (record, img) in report.records.iter().zip(&outputs) {
            save_image(img, &a.out_dir.join(format!("{}.png", record.id())))?;
        }
    }

    let winner = report.winner();
    let params = winner.params.expect("filtered records carry params");
    let lines = [
        format!("winner={}", winner.id()),
        format!("level={}", params.level),
        format!("scale={}", params.scale),
        format!("scale_div={}", params.scale_division),
        format!("dynamic={}", params.dynamic),
        named_value("shannon", winner.shannon),
        named_value("original_shannon", report.original.shannon),
        format!("below_original={}", report.below_original.len()),
        format!("crossings={}", report.crossings.len()),
    ];
    for line in lines {
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    Ok(())
}

fn cmd_fixture(a: FixtureArgs) -> Result<(), CliError> {
    if a.width == 0 || a.height == 0 {
        return Err(CliError::Usage(
            "fixture dimensions must be positive".into(),
        ));
    }
    save_image(&fixture::foggy(a.width, a.height, a.seed), &a.output)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_disambiguate_collisions() {
        let ids = column_ids(&[
            PathBuf::from("a/x.png"),
            PathBuf::from("b/x.png"),
            PathBuf::from("c/y.ppm"),
        ]);
        assert_eq!(ids, ["a/x.png", "b/x.png", "y"]);
    }
}
