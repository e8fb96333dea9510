//! Command-line front end: `analyze`, `compare` and `case`.
//!
//! Exit codes: 0 success, 2 input/parse/IO errors, 3 numerical failure.
//! Diagnostics go to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baselines::{classical_mds, correspondence_analysis, pca_map};
use crate::biplot::{pairwise_distances, BiplotKind, DEFAULT_DIMS};
use crate::data::{corner_label, load_case, parse_table, preprocess, DataTable, Scale};
use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::report::{analyze, dataset_info, to_sorted_json, Analysis, BaselineReport};
use crate::svg::{render_scatter, render_svg, PlotSpec, Scatter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "biplot",
    version,
    about = "SVD biplots of labeled indicator tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a biplot to a CSV table and write a JSON report and/or SVG plot.
    Analyze(AnalyzeArgs),
    /// Run the biplot next to PCA, MDS and CA maps of the same table.
    Compare(CompareArgs),
    /// Analyze (or dump) one of the embedded case tables.
    Case(CaseArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Display multiplier for column arrows (default: automatic).
    #[arg(long, value_parser = positive_f64)]
    vector_scale: Option<f64>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Biplot type.
    #[arg(long = "type", value_parser = parse_kind, conflicts_with = "gamma")]
    kind: Option<BiplotKind>,
    /// Custom split of singular values between rows and columns, in [0, 1].
    #[arg(long, value_parser = unit_f64)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DIMS)]
    dims: usize,
    #[arg(long, default_value = "zscore", value_parser = parse_scale)]
    scale: Scale,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    input: PathBuf,
    /// Comma-separated list from jk, pca, mds, ca.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
    methods: Vec<Method>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CaseArgs {
    /// Case number: 1, 2 or 3.
    id: u8,
    /// Write the embedded table as CSV.
    #[arg(long)]
    dump_csv: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Jk,
    Pca,
    Mds,
    Ca,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Jk => "jk",
            Method::Pca => "pca",
            Method::Mds => "mds",
            Method::Ca => "ca",
        }
    }
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    match s.trim() {
        "jk" => Ok(Method::Jk),
        "pca" => Ok(Method::Pca),
        "mds" => Ok(Method::Mds),
        "ca" => Ok(Method::Ca),
        other => Err(format!(
            "unknown method '{other}' (expected jk, pca, mds or ca)"
        )),
    }
}

fn parse_kind(s: &str) -> std::result::Result<BiplotKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scale(s: &str) -> std::result::Result<Scale, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn unit_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("gamma {v} outside [0, 1]"))
    }
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

/// Runs the CLI with process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing summaries to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Compare(c) => cmd_compare(c, out),
        Command::Case(c) => cmd_case(c, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Numerical(_) => EXIT_NUMERICAL,
                _ => EXIT_INPUT,
            }
        }
    }
}

/// Reads a CSV table, naming it after its top-left header cell or, when
/// that is blank, after the file stem.
pub fn read_table(path: &Path) -> Result<DataTable> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let name = corner_label(&text).unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "table".to_owned())
    });
    parse_table(&text, &name)
}

fn plot_spec(o: &OutputArgs) -> PlotSpec {
    PlotSpec {
        vector_scale: o.vector_scale,
        ..PlotSpec::default()
    }
}

fn write_outputs(a: &Analysis, o: &OutputArgs, out: &mut dyn Write) -> Result<()> {
    let json = o.json.as_ref().map(|_| a.report.to_json()).transpose()?;
    let svg = o
        .svg
        .as_ref()
        .map(|_| render_svg(&a.model, &a.quality, &plot_spec(o)))
        .transpose()?;
    if let (Some(path), Some(text)) = (&o.json, json) {
        fs::write(path, text)?;
    }
    if let (Some(path), Some(text)) = (&o.svg, svg) {
        fs::write(path, text)?;
    }
    print_summary(a, out)
}

fn print_summary(a: &Analysis, out: &mut dyn Write) -> Result<()> {
    let r = &a.report;
    writeln!(
        out,
        "{}: {} biplot (gamma {}), {} dims, scale {}",
        r.dataset.name, r.method.kind, r.method.gamma, r.method.dims, r.preprocess.mode
    )?;
    writeln!(out, "qr_overall = {:.4}", r.quality.qr_overall)?;
    for w in &r.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let table = read_table(&a.input)?;
    let gamma = match (a.kind, a.gamma) {
        (Some(k), _) => k.gamma().unwrap_or(1.0),
        (None, Some(g)) => g,
        (None, None) => 1.0,
    };
    let analysis = analyze(&table, gamma, a.dims, a.scale)?;
    write_outputs(&analysis, &a.out, out)
}

fn cmd_case(c: CaseArgs, out: &mut dyn Write) -> Result<()> {
    let table = load_case(c.id)?;
    if let Some(path) = &c.dump_csv {
        fs::write(path, table.to_csv())?;
    }
    let analysis = analyze(&table, 1.0, DEFAULT_DIMS, Scale::Zscore)?;
    write_outputs(&analysis, &c.out, out)
}

struct MethodOutput {
    method: Method,
    json: String,
    svg: String,
    share: f64,
}

fn cmd_compare(c: CompareArgs, out: &mut dyn Write) -> Result<()> {
    let table = read_table(&c.input)?;
    let mut methods = c.methods.clone();
    methods.dedup();

    let mut outputs = Vec::with_capacity(methods.len());
    for &m in &methods {
        outputs.push(run_method(m, &table)?);
    }

    fs::create_dir_all(&c.out)?;
    for o in &outputs {
        fs::write(c.out.join(format!("{}.json", o.method.name())), &o.json)?;
        fs::write(c.out.join(format!("{}.svg", o.method.name())), &o.svg)?;
    }
    let summary: std::collections::BTreeMap<&str, f64> =
        outputs.iter().map(|o| (o.method.name(), o.share)).collect();
    fs::write(c.out.join("summary.json"), to_sorted_json(&summary)?)?;

    writeln!(out, "{}: 2-D share per method", table.name())?;
    for o in &outputs {
        writeln!(out, "  {:<4} {:.4}", o.method.name(), o.share)?;
    }
    Ok(())
}

fn run_method(method: Method, t: &DataTable) -> Result<MethodOutput> {
    let spec = PlotSpec::default();
    let dims = DEFAULT_DIMS;
    match method {
        Method::Jk => {
            let a = analyze(t, 1.0, dims, Scale::Zscore)?;
            Ok(MethodOutput {
                method,
                json: a.report.to_json()?,
                svg: render_svg(&a.model, &a.quality, &spec)?,
                share: a.quality.qr_overall,
            })
        }
        Method::Pca => {
            let scores = pca_map(t, dims)?;
            let (x, _) = preprocess(t, Scale::Zscore)?;
            let s = svd(&x)?;
            let total: f64 = s.sigma.iter().map(|v| v * v).sum();
            let denom = t.n_rows() as f64 - 1.0;
            let variances: Vec<f64> = s.sigma[..dims].iter().map(|v| v * v / denom).collect();
            let share = s.sigma[..dims].iter().map(|v| v * v).sum::<f64>() / total;
            let axis_labels = axis_labels(
                "PC",
                &s.sigma[..dims]
                    .iter()
                    .map(|v| v * v / total)
                    .collect::<Vec<_>>(),
            );
            baseline_output(
                method,
                t,
                "PCA scores (z-scored)",
                &scores,
                None,
                variances,
                share,
                vec![],
                axis_labels,
                &spec,
            )
        }
        Method::Mds => {
            let (x, _) = preprocess(t, Scale::Zscore)?;
            let e = classical_mds(&pairwise_distances(&x), dims)?;
            let mut warnings = Vec::new();
            if e.truncated {
                warnings.push(format!(
                    "only {} positive eigenvalue(s); remaining axes are zero",
                    e.dims()
                ));
            }
            let coords = pad_columns(&e.coords, dims);
            let total: f64 =
                e.eigenvalues.iter().sum::<f64>() / (1.0 - e.strain).max(f64::MIN_POSITIVE);
            let shares: Vec<f64> = (0..dims)
                .map(|k| e.eigenvalues.get(k).map_or(0.0, |v| v / total))
                .collect();
            let axis_labels = axis_labels("Dim", &shares);
            baseline_output(
                method,
                t,
                "Classical MDS (z-scored Euclidean)",
                &coords,
                None,
                e.eigenvalues.clone(),
                1.0 - e.strain,
                warnings,
                axis_labels,
                &spec,
            )
        }
        Method::Ca => {
            let ca = correspondence_analysis(t, dims)?;
            let share = if ca.total_inertia > 0.0 {
                ca.inertias.iter().sum::<f64>() / ca.total_inertia
            } else {
                0.0
            };
            let shares: Vec<f64> = ca
                .inertias
                .iter()
                .map(|v| {
                    if ca.total_inertia > 0.0 {
                        v / ca.total_inertia
                    } else {
                        0.0
                    }
                })
                .collect();
            let axis_labels = axis_labels("Dim", &shares);
            baseline_output(
                method,
                t,
                "Correspondence analysis (symmetric)",
                &ca.row_coords,
                Some(&ca.col_coords),
                ca.inertias.clone(),
                share,
                ca.warnings.clone(),
                axis_labels,
                &spec,
            )
        }
    }
}

fn axis_labels(prefix: &str, shares: &[f64]) -> [String; 2] {
    let s = |k: usize| shares.get(k).copied().unwrap_or(0.0) * 100.0;
    [
        format!("{prefix} 1 ({:.1}%)", s(0)),
        format!("{prefix} 2 ({:.1}%)", s(1)),
    ]
}

fn pad_columns(m: &Matrix, cols: usize) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), cols.max(m.cols()));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn baseline_output(
    method: Method,
    t: &DataTable,
    title: &str,
    rows: &Matrix,
    cols: Option<&Matrix>,
    axis_values: Vec<f64>,
    share: f64,
    warnings: Vec<String>,
    axis_labels: [String; 2],
    spec: &PlotSpec,
) -> Result<MethodOutput> {
    let report = BaselineReport {
        method: method.name().to_owned(),
        dataset: dataset_info(t),
        row_coords: rows.to_rows(),
        col_coords: cols.map(Matrix::to_rows),
        axis_values,
        share,
        warnings: warnings.clone(),
    };
    let scatter = Scatter {
        title: format!("{title}: {}", t.name()),
        points: Some((rows, t.row_labels())),
        arrows: None,
        squares: cols.map(|c| (c, t.col_labels())),
        axis_labels,
        legend: std::iter::once(format!("2-D share {:.1}%", share * 100.0))
            .chain(warnings.iter().map(|w| format!("warning: {w}")))
            .collect(),
    };
    Ok(MethodOutput {
        method,
        json: report.to_json()?,
        svg: render_scatter(&scatter, spec)?,
        share,
    })
}
