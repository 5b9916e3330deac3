//! Argument parsing and subcommand dispatch for `bdtool`.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use bjontegaard::{
    fit_support_set, rcd_curve, select_supporting_params, BdConfig, Method, MetricTransform,
    RcdCurve, TransformKind,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::report::{
    render_json, render_text, run_report, run_rie, run_validate, shared_param_sweep, ConfigError,
    ReportConfig,
};
use crate::svg::{rcd_plot_svg, rcd_samples_csv, rd_plot_svg, write_file, PlotLabels, RdSeries};
use crate::table::{RunTable, TableError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    None,
    LogSsim,
    LogVmaf,
}

impl From<TransformArg> for TransformKind {
    fn from(arg: TransformArg) -> TransformKind {
        match arg {
            TransformArg::None => TransformKind::Identity,
            TransformArg::LogSsim => TransformKind::LogSsim,
            TransformArg::LogVmaf => TransformKind::LogVmaf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Csi,
    Pchip,
    Akima,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Method {
        match arg {
            MethodArg::Csi => Method::Csi,
            MethodArg::Pchip => Method::Pchip,
            MethodArg::Akima => Method::Akima,
        }
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Measurement CSV with columns sequence,config,param,<metric>...
    #[arg(long)]
    input: PathBuf,
    /// Quality-like metric column the curves are parameterized over
    #[arg(long)]
    independent: String,
    /// Rate-like metric column being compared
    #[arg(long)]
    dependent: String,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Transform applied to the independent metric before fitting
    #[arg(long, value_enum, default_value_t = TransformArg::None)]
    transform: TransformArg,
    /// Interpolation method
    #[arg(long, value_enum, default_value_t = MethodArg::Akima)]
    method: MethodArg,
}

#[derive(Debug, Args)]
struct SubsetFlags {
    /// Number of supporting params, chosen from the shared param sweep
    #[arg(long, conflicts_with = "params")]
    points: Option<usize>,
    /// Explicit supporting params, comma separated (e.g. 22,27,32,37)
    #[arg(long, value_delimiter = ',')]
    params: Option<Vec<f64>>,
}

#[derive(Debug, Parser)]
#[command(
    name = "bdtool",
    version,
    about = "Bjontegaard-Delta reports and diagnostics from measurement tables"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a BD report of one anchor config against test configs
    Bd(BdArgs),
    /// Sample the relative curve difference of one pair and plot it
    Rcd(RcdArgs),
    /// Validate every (sequence, config) sweep of the table
    Validate(ValidateArgs),
    /// Quantify the BD error a sparse param subset introduces
    SubsetError(SubsetErrorArgs),
    /// Quantify how well a sparse subset interpolates all measured points
    Rie(RieArgs),
}

#[derive(Debug, Args)]
struct BdArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Anchor (reference) config id
    #[arg(long)]
    anchor: String,
    /// Test config id; repeat for several
    #[arg(long, required = true)]
    test: Vec<String>,
    #[command(flatten)]
    subset: SubsetFlags,
    /// Warn when the quality ranges overlap worse than this
    #[arg(long, default_value_t = 0.5)]
    min_iou: f64,
    /// Warn when |bd| falls below this fraction
    #[arg(long)]
    bd_warn_threshold: Option<f64>,
    /// Panel count for sampled diagnostics
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RcdArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Sequence id to plot
    #[arg(long)]
    sequence: String,
    /// Anchor (reference) config id
    #[arg(long)]
    anchor: String,
    /// Test config id
    #[arg(long)]
    test: String,
    /// Number of curve samples
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// SVG output path for the difference plot
    #[arg(long)]
    out: PathBuf,
    /// Also dump the samples as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also draw the two fitted curves as an SVG here
    #[arg(long)]
    rd: Option<PathBuf>,
    /// Print the sampled curve as JSON to standard output
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SubsetErrorArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Anchor (reference) config id
    #[arg(long)]
    anchor: String,
    /// Test config id; repeat for several
    #[arg(long, required = true)]
    test: Vec<String>,
    #[command(flatten)]
    subset: SubsetFlags,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RieArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Interpolation method
    #[arg(long, value_enum, default_value_t = MethodArg::Akima)]
    method: MethodArg,
    #[command(flatten)]
    subset: SubsetFlags,
    /// Only study these config ids; repeat for several
    #[arg(long)]
    config: Option<Vec<String>>,
    /// Write the result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => f.write_str(msg),
        }
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bd(args) => cmd_bd(args, false),
        Command::SubsetError(args) => cmd_bd(
            BdArgs {
                table: args.table,
                fit: args.fit,
                anchor: args.anchor,
                test: args.test,
                subset: args.subset,
                min_iou: 0.5,
                bd_warn_threshold: None,
                samples: 1000,
                out: args.out,
                json: args.json,
            },
            true,
        ),
        Command::Rcd(args) => cmd_rcd(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Rie(args) => cmd_rie(args),
    }
}

fn warn_csi(method: Method) {
    if method == Method::Csi {
        eprintln!(
            "caution: cubic spline interpolation can overshoot between supporting \
             points; akima or pchip is usually the safer choice"
        );
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, content)
            .map_err(|e| CliError::Data(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn resolve_subset(
    table: &RunTable,
    flags: &SubsetFlags,
) -> Result<Option<Vec<f64>>, CliError> {
    match (flags.points, &flags.params) {
        (None, None) => Ok(None),
        (None, Some(params)) => Ok(Some(params.clone())),
        (Some(count), None) => {
            let sweep = shared_param_sweep(table).ok_or_else(|| {
                CliError::Usage(
                    "--points requires every (sequence, config) to share one param \
                     sweep; give --params explicitly"
                        .to_string(),
                )
            })?;
            let ints: Option<Vec<i64>> = sweep
                .iter()
                .map(|p| (p.fract() == 0.0).then_some(*p as i64))
                .collect();
            let ints = ints.ok_or_else(|| {
                CliError::Usage(
                    "--points requires integer params; give --params explicitly".to_string(),
                )
            })?;
            let chosen = select_supporting_params(&ints, count)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Some(chosen.into_iter().map(|p| p as f64).collect()))
        }
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--points and --params are mutually exclusive".to_string(),
        )),
    }
}

fn cmd_bd(args: BdArgs, subset_required: bool) -> Result<i32, CliError> {
    let table = RunTable::load_csv(&args.table.input)?;
    let method: Method = args.fit.method.into();
    warn_csi(method);
    let subset_params = resolve_subset(&table, &args.subset)?;
    if subset_required && subset_params.is_none() {
        return Err(CliError::Usage(
            "subset-error needs --points or --params".to_string(),
        ));
    }

    let cfg = ReportConfig {
        anchor: args.anchor,
        tests: args.test,
        independent: args.table.independent,
        dependent: args.table.dependent,
        transform: args.fit.transform.into(),
        method,
        subset_params,
        min_iou: args.min_iou,
        bd_warn_threshold: args.bd_warn_threshold,
        sample_count: args.samples,
    };
    let outcome = run_report(&table, &cfg)?;
    if subset_required && outcome.report.subset_error.is_none() {
        return Err(CliError::Data(
            "the table has no measurements beyond the subset; nothing to compare".to_string(),
        ));
    }

    let content = if args.json {
        render_json(&outcome.report)
    } else {
        render_text(&outcome.report)
    };
    emit(&args.out, &content)?;
    Ok(if outcome.had_validation_errors { 1 } else { 0 })
}

/// JSON shape of `rcd --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcdDoc {
    pub sequence: String,
    pub test: String,
    pub anchor: String,
    pub bd_percent: f64,
    pub bounds: [f64; 2],
    pub iou: f64,
    pub crossings: Vec<f64>,
    pub samples: Vec<(f64, f64)>,
}

fn cmd_rcd(args: RcdArgs) -> Result<i32, CliError> {
    let table = RunTable::load_csv(&args.table.input)?;
    let method: Method = args.fit.method.into();
    warn_csi(method);
    let ind = table
        .metric_index(&args.table.independent)
        .ok_or_else(|| ConfigError::UnknownMetric(args.table.independent.clone()))?;
    let dep = table
        .metric_index(&args.table.dependent)
        .ok_or_else(|| ConfigError::UnknownMetric(args.table.dependent.clone()))?;
    let pair = |config: &str| {
        table
            .support_set(&args.sequence, config, ind, dep)
            .ok_or_else(|| {
                CliError::Data(format!(
                    "no rows for ({}, {config})",
                    args.sequence
                ))
            })
    };
    let anchor_set = pair(&args.anchor)?;
    let test_set = pair(&args.test)?;

    let transform = MetricTransform::new(args.fit.transform.into());
    let bd_cfg = BdConfig {
        method,
        independent_transform: transform,
        sample_count: 1000,
    };
    let rcd: RcdCurve = rcd_curve(&test_set, &anchor_set, &bd_cfg, args.samples)
        .map_err(|e| CliError::Data(e.to_string()))?;

    let metric = &table.metrics()[ind];
    let axis = if transform.is_identity() {
        metric.axis_label()
    } else {
        format!("{}({})", transform.label(), metric.name)
    };
    let title = format!("{}: {} vs {}", args.sequence, args.test, args.anchor);
    let labels = PlotLabels {
        title: &title,
        independent: &axis,
        dependent: &table.metrics()[dep].axis_label(),
        test: &args.test,
        anchor: &args.anchor,
    };
    write_file(&args.out, &rcd_plot_svg(&rcd, &labels))
        .map_err(|e| CliError::Data(format!("cannot write '{}': {e}", args.out.display())))?;
    if let Some(csv_path) = &args.csv {
        write_file(csv_path, &rcd_samples_csv(&rcd))
            .map_err(|e| CliError::Data(format!("cannot write '{}': {e}", csv_path.display())))?;
    }
    if let Some(rd_path) = &args.rd {
        let fit_of = |set| {
            fit_support_set(set, &transform, method).map_err(|e| CliError::Data(e.to_string()))
        };
        let support_of = |set: &bjontegaard::SupportSet| -> Result<Vec<(f64, f64)>, CliError> {
            set.points()
                .iter()
                .map(|p| {
                    transform
                        .apply(p.independent)
                        .map(|q| (q, p.dependent.log10()))
                        .map_err(|e| CliError::Data(e.to_string()))
                })
                .collect()
        };
        let pa = fit_of(&test_set)?;
        let pb = fit_of(&anchor_set)?;
        let series = [
            RdSeries {
                label: &args.test,
                poly: &pa,
                support: support_of(&test_set)?,
            },
            RdSeries {
                label: &args.anchor,
                poly: &pb,
                support: support_of(&anchor_set)?,
            },
        ];
        write_file(rd_path, &rd_plot_svg(&series, &labels))
            .map_err(|e| CliError::Data(format!("cannot write '{}': {e}", rd_path.display())))?;
    }
    if args.json {
        let doc = RcdDoc {
            sequence: args.sequence,
            test: args.test,
            anchor: args.anchor,
            bd_percent: rcd.bd_percent,
            bounds: [rcd.bounds.0, rcd.bounds.1],
            iou: rcd.iou,
            crossings: rcd.crossings.clone(),
            samples: rcd.samples.clone(),
        };
        print!("{}", render_json(&doc));
    }
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32, CliError> {
    let table = RunTable::load_csv(&args.table.input)?;
    let doc = run_validate(&table, &args.table.independent, &args.table.dependent)?;
    if args.json {
        print!("{}", render_json(&doc));
    } else {
        for case in &doc.cases {
            if case.errors.is_empty() && case.warnings.is_empty() {
                println!("({}, {}): ok", case.sequence, case.config);
                continue;
            }
            println!("({}, {}):", case.sequence, case.config);
            for e in &case.errors {
                println!("    error: {e}");
            }
            for w in &case.warnings {
                println!("    warning: {w}");
            }
        }
    }
    Ok(if doc.ok { 0 } else { 1 })
}

fn cmd_rie(args: RieArgs) -> Result<i32, CliError> {
    let table = RunTable::load_csv(&args.table.input)?;
    let method: Method = args.method.into();
    warn_csi(method);
    let params = resolve_subset(&table, &args.subset)?
        .ok_or_else(|| CliError::Usage("rie needs --points or --params".to_string()))?;
    let doc = run_rie(
        &table,
        &args.table.independent,
        &args.table.dependent,
        method,
        &params,
        args.config.as_deref(),
    )?;
    let content = if args.json {
        render_json(&doc)
    } else {
        use std::fmt::Write;
        let mut text = String::new();
        for case in &doc.per_case {
            writeln!(
                text,
                "({}, {}): mean {:.6e}  max {:.6e}",
                case.sequence, case.config, case.mean, case.max
            )
            .unwrap();
        }
        writeln!(text, "overall: mean {:.6e}  max {:.6e}", doc.mean, doc.max).unwrap();
        for s in &doc.skipped {
            writeln!(text, "skipped {s}").unwrap();
        }
        text
    };
    emit(&args.out, &content)?;
    Ok(if doc.skipped.is_empty() { 0 } else { 1 })
}
