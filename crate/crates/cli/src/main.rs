//! Command-line front end for the `hausdorff` library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hausdorff::lipschitz::{distance_grid, TransformSummary};
use hausdorff::report::{cell_rows, render_json, to_rounded_value, CheckReport, DimensionReport};
use hausdorff::*;
use serde::Serialize;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "hausdorff-cli", version, about = "Hausdorff content and measure by covering optimization")]
struct Cli {
    /// Relative tolerance for axiom checks, stabilization and integration.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Deepest cell level used by Cantor solvers and integration.
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Strictly decreasing eps values, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    eps_schedule: Vec<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check a distance matrix against the metric axioms.
    Check {
        space: PathBuf,
        /// Also require the strong triangle inequality.
        #[arg(long)]
        ultrametric: bool,
    },
    /// Hausdorff content, or the eps-premeasure with --eps.
    Content(ContentArgs),
    /// Hausdorff measure over --eps-schedule.
    Measure(ContentArgs),
    /// Similarity dimension: the alpha with n r^alpha = 1.
    Dimension {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: f64,
    },
    /// Cantor-type sequence spaces.
    Cantor {
        #[command(subcommand)]
        command: CantorCommand,
    },
    /// Apply a distance transform phi to a space.
    Transform {
        #[arg(long)]
        space: PathBuf,
        /// e.g. '{"form":"power","a":0.5}'
        #[arg(long)]
        phi: String,
        /// Where to write the transformed space.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the content of a set and of its image under a map.
    Lipschitz {
        #[arg(long)]
        source: PathBuf,
        /// Defaults to the source space.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Image of each source point, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        map: Vec<usize>,
        /// Source points making up E; all points by default.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long, default_value = r#"{"form":"power","alpha":1}"#)]
        gauge: String,
        /// Price every covering set as if its diameter were at least this.
        #[arg(long)]
        floor: Option<f64>,
    },
}

#[derive(Args)]
struct ContentArgs {
    /// Finite metric space file.
    #[arg(long, group = "input")]
    space: Option<PathBuf>,
    /// Cantor space file.
    #[arg(long, group = "input")]
    cantor: Option<PathBuf>,
    /// Closed interval a,b.
    #[arg(long, group = "input", value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    interval: Option<Vec<f64>>,
    /// Points of the finite space; all points by default.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<usize>>,
    /// Cells as a JSON list of digit lists; the whole space by default.
    #[arg(long)]
    cells: Option<String>,
    #[arg(long, default_value = r#"{"form":"power","alpha":1}"#)]
    gauge: String,
    #[arg(long)]
    floor: Option<f64>,
    /// Largest finite set handed to the exact solver.
    #[arg(long)]
    limit: Option<usize>,
    /// Only for content: compute the eps-premeasure instead.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum CantorCommand {
    /// List the cells of one depth, or print their distance matrix.
    Cells {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Print one point per cell as a space file instead.
        #[arg(long)]
        matrix: bool,
    },
    /// Content of a union of cells.
    Content {
        file: PathBuf,
        #[arg(long)]
        cells: Option<String>,
        #[arg(long, default_value = r#"{"form":"power","alpha":1}"#)]
        gauge: String,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Integrate a built-in function against the cell measure.
    Integrate {
        file: PathBuf,
        /// e.g. '{"family":"indicator","cell":[0]}'
        #[arg(long)]
        function: String,
    },
}

/// Depth used for cell solvers when --max-depth is not given.
const DEFAULT_CELL_DEPTH: usize = 16;
/// Depth limit for integration when --max-depth is not given.
const DEFAULT_INTEGRATION_DEPTH: usize = 20;

enum Failure {
    /// A checked property does not hold; the report has been printed.
    Property,
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Shape(_) | Error::Domain(_) | Error::Json(_) | Error::InvalidMetric(_) => Failure::Usage(err.to_string()),
            _ => Failure::Refused(err.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    Ok(FiniteMetricSpace::from_json(&read(path)?)?)
}

fn load_cantor(path: &Path) -> Result<CantorSpace, Failure> {
    Ok(CantorSpace::from_json(&read(path)?)?)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("bad {what}: {e}")))
}

fn parse_cells(space: &CantorSpace, text: Option<&str>) -> Result<Vec<Cell>, Failure> {
    let prefixes: Vec<Vec<u32>> = match text {
        Some(t) => parse_json("cell list", t)?,
        None => vec![vec![]],
    };
    Ok(prefixes.into_iter().map(|p| space.cell(p)).collect::<Result<_>>()?)
}

/// Leaves of a JSON value as `(path, value)` pairs.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) if items.is_empty() => out.push((prefix.to_string(), "[]".into())),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(value: &impl Serialize, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => render_json(value)?,
        Format::Csv | Format::Table => {
            let mut rows = Vec::new();
            flatten("", &to_rounded_value(value)?, &mut rows);
            if matches!(format, Format::Csv) {
                std::iter::once("key,value".to_string())
                    .chain(rows.iter().map(|(k, v)| format!("{},{}", csv_field(k), csv_field(v))))
                    .collect::<Vec<_>>()
                    .join("\n")
            } else {
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:<width$}  {v}")).collect::<Vec<_>>().join("\n")
            }
        }
    })
}

fn emit(value: &impl Serialize, format: Format) -> Outcome {
    println!("{}", render(value, format)?);
    Ok(())
}

fn finite_options(floor: Option<f64>, limit: Option<usize>) -> FiniteOptions {
    FiniteOptions {
        min_diameter: floor,
        limit: limit.unwrap_or(FiniteOptions::default().limit),
    }
}

/// First level whose radius is below `eps`.
fn forced_depth(space: &CantorSpace, eps: Option<f64>) -> usize {
    eps.and_then(|e| (0..10_000).find(|&l| space.r(l) < e)).unwrap_or(0)
}

fn content_like(cli: &Cli, args: &ContentArgs, measure: bool) -> Outcome {
    if measure && args.eps.is_some() {
        return Err(Failure::Usage("measure takes --eps-schedule, not --eps".into()));
    }
    if measure && cli.eps_schedule.is_empty() {
        return Err(Failure::Usage("measure needs --eps-schedule".into()));
    }
    let smallest_eps = if measure { cli.eps_schedule.last().copied() } else { args.eps };
    let gauge_spec: GaugeSpec = parse_json("gauge", &args.gauge)?;
    let finite_space;
    let cantor_space;
    let (target, gauge) = if let Some(path) = &args.space {
        finite_space = load_space(path)?;
        let set = match &args.set {
            Some(points) => finite_space.subset(points.iter().copied())?,
            None => finite_space.all(),
        };
        let target = Target::finite(&finite_space, set, finite_options(args.floor, args.limit));
        (target, gauge_spec.build(None)?)
    } else if let Some(path) = &args.cantor {
        cantor_space = load_cantor(path)?;
        let cells = parse_cells(&cantor_space, args.cells.as_deref())?;
        let deepest = cells.iter().map(Cell::depth).max().unwrap_or(0);
        let depth = cli
            .max_depth
            .unwrap_or(DEFAULT_CELL_DEPTH.max(deepest).max(forced_depth(&cantor_space, smallest_eps)));
        let gauge = gauge_spec.build(Some(&cantor_space.radii(depth)))?;
        (Target::cells(&cantor_space, cells, depth), gauge)
    } else if let Some(ends) = &args.interval {
        let [a, b] = ends.as_slice() else {
            return Err(Failure::Usage("--interval takes two numbers a,b".into()));
        };
        (Target::Interval(Interval::new(*a, *b)?), gauge_spec.build(None)?)
    } else {
        return Err(Failure::Usage("one of --space, --cantor or --interval is required".into()));
    };
    let estimate = if measure {
        hausdorff_measure(&target, &gauge, &cli.eps_schedule, cli.tol)?
    } else {
        match args.eps {
            Some(eps) => premeasure(&target, &gauge, eps)?,
            None => content(&target, &gauge)?,
        }
    };
    emit(&estimate, cli.format)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { space, ultrametric } => {
            let file: metric::SpaceFile = parse_json("space file", &read(space)?)?;
            let (_, matrix) = file.into_parts()?;
            let report = CheckReport::run(&matrix, *ultrametric, cli.tol);
            emit(&report, cli.format)?;
            if report.valid {
                Ok(())
            } else {
                Err(Failure::Property)
            }
        }
        Command::Content(args) => content_like(cli, args, false),
        Command::Measure(args) => content_like(cli, args, true),
        Command::Dimension { n, r } => emit(&DimensionReport::run(*n, *r)?, cli.format),
        Command::Cantor { command } => match command {
            CantorCommand::Cells { file, depth, matrix } => {
                let space = load_cantor(file)?;
                if *matrix {
                    emit(&space.distance_matrix(*depth)?.1.to_file(), cli.format)
                } else {
                    emit(&cell_rows(&space, *depth)?, cli.format)
                }
            }
            CantorCommand::Content { file, cells, gauge, eps } => {
                let args = ContentArgs {
                    space: None,
                    cantor: Some(file.clone()),
                    interval: None,
                    set: None,
                    cells: cells.clone(),
                    gauge: gauge.clone(),
                    floor: None,
                    limit: None,
                    eps: *eps,
                };
                content_like(cli, &args, false)
            }
            CantorCommand::Integrate { file, function } => {
                let space = load_cantor(file)?;
                let builtin: integrate::BuiltinFunction = parse_json("function", function)?;
                let f = builtin.build(&space)?;
                let depth = cli.max_depth.unwrap_or(DEFAULT_INTEGRATION_DEPTH);
                emit(&integrate_seeded(&space, &f, cli.tol, depth, cli.seed)?, cli.format)
            }
        },
        Command::Transform { space, phi, out } => {
            let base = load_space(space)?;
            let mut phi = TransformSpec::new(parse_json("transform", phi)?)?;
            check_subadditive(&mut phi, &distance_grid(base.matrix()));
            let transformed = match transform_space(&base, &phi) {
                Ok(t) => t,
                Err(Error::Domain(msg)) => {
                    eprintln!("error: {msg}");
                    return Err(Failure::Property);
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&transformed.result.to_file()).map_err(Error::from)?;
                fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let summary: TransformSummary = transformed.summary();
            emit(&summary, cli.format)
        }
        Command::Lipschitz { source, target, map, set, gauge, floor } => {
            let src = load_space(source)?;
            let dst = match target {
                Some(path) => load_space(path)?,
                None => src.clone(),
            };
            let h = parse_json::<GaugeSpec>("gauge", gauge)?.build(None)?;
            let e = match set {
                Some(points) => src.subset(points.iter().copied())?,
                None => src.all(),
            };
            let m = LipschitzMap::new(src, dst, map.clone(), None)?;
            let report = check_image_content(&m, &e, &h, &finite_options(*floor, None), &cli.eps_schedule)?;
            emit(&report, cli.format)?;
            if report.all_hold() {
                Ok(())
            } else {
                Err(Failure::Property)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}
