//! `emanet`: generate point sets, build emanation graphs, SEGs and Delaunay
//! baselines, measure them, draw them and run comparison experiments.
//!
//! Exit status: 0 on success, 2 for bad input or configuration, 3 when a
//! graph was produced but an invariant check fired (planarity repair,
//! crossings, structural defects).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emanet::io::{
    compare_experiment, graph_from_json, graph_to_json, instance_stem, points_to_triangle_node, read_points,
    render_svg, write_points, Algorithm, ExperimentConfig, PointModel, PointSetFile, SvgStyle,
};
use emanet::{
    build_emanation, build_emanation_approx, build_seg, check_planarity, delaunay, generate_points, import_triangle,
    metrics_report, Coord, Error, NeighborQueries, PlaneGraph, Point, SegConfig, TiePolicy, TriangleMeshFiles,
};

#[derive(Parser)]
#[command(name = "emanet", version, about = "Emanation graphs and simplified emanation graphs of planar point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random point set (JSON, CSV or Triangle .node by extension).
    Gen(GenArgs),
    /// Build a SEG or an emanation graph from a point file.
    Build(BuildArgs),
    /// Build the Delaunay triangulation of a point file.
    Delaunay(IoArgs),
    /// Read a Triangle .node/.ele pair into a graph file.
    ImportTriangle(ImportArgs),
    /// Print the metrics report of a graph file as JSON.
    Metrics(MetricsArgs),
    /// Run a comparison experiment and write the averaged CSV table.
    Compare(CompareArgs),
    /// Draw a graph file as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of points.
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "uniform")]
    model: PointModel,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum BuildAlg {
    Seg,
    Emanation,
}

#[derive(Copy, Clone, ValueEnum)]
enum Queries {
    Naive,
    RangeTree,
    Auto,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "seg")]
    alg: BuildAlg,
    /// Grade of the emanation graph; a SEG is always grade 2.
    #[arg(long, default_value_t = 2)]
    grade: u32,
    /// `lex` or `seeded:<n>`.
    #[arg(long, default_value = "lex")]
    tie: TiePolicy,
    /// Floating-point simulation, required above grade 2.
    #[arg(long)]
    approx: bool,
    /// Padding of the bounding box for degenerate (flat) inputs.
    #[arg(long, default_value = "1")]
    margin: Coord,
    /// Report crossings instead of repairing them.
    #[arg(long)]
    no_repair: bool,
    #[arg(long, value_enum, default_value = "auto")]
    queries: Queries,
    /// Record per-build counters in the graph diagnostics.
    #[arg(long)]
    diagnostics: bool,
    /// Also draw the graph to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct IoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ImportArgs {
    /// The `.node` file; the `.ele` file next to it is read as well.
    #[arg(long = "in")]
    input: PathBuf,
    /// Explicit `.ele` path.
    #[arg(long)]
    ele: Option<PathBuf>,
    /// Original point file; mesh nodes not found in it become Steiner vertices.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Experiment configuration as JSON; the flags below are ignored when given.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "uniform")]
    model: PointModel,
    /// Comma-separated: seg, emanation1, emanation2, delaunay, triangle-import:<dir>.
    #[arg(long, value_delimiter = ',', default_value = "seg,delaunay")]
    alg: Vec<Algorithm>,
    #[arg(long, default_value = "lex")]
    tie: TiePolicy,
    /// CSV table output.
    #[arg(long, required_unless_present = "node_dir")]
    out: Option<PathBuf>,
    /// Per-instance reports, one JSON object per line.
    #[arg(long)]
    raw: Option<PathBuf>,
    /// Write every instance as `<dir>/n<size>-<i>.node` for Triangle, then stop.
    #[arg(long)]
    node_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Pixel size of the longer side.
    #[arg(long, default_value_t = 800.0)]
    size: f64,
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInvariantViolation(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn load_points(path: &Path) -> Result<Vec<Point>, Failure> {
    read_points(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<PlaneGraph, Failure> {
    graph_from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Problems that make a produced graph untrustworthy.
fn invariant_problems(graph: &PlaneGraph) -> Vec<String> {
    let mut problems = graph.structural_problems();
    for key in ["planarity_repairs", "proper_crossings"] {
        if let Some(n) = graph.meta.diagnostics.get(key).and_then(|v| v.as_u64()) {
            if n > 0 {
                problems.push(format!("{key} = {n}"));
            }
        }
    }
    let report = check_planarity(graph);
    if !report.is_plane() {
        problems.push(format!("{} planarity defects", report.defects.len()));
    }
    problems
}

/// Writes the graph, then reports invariant problems as exit status 3.
fn emit_graph(graph: &PlaneGraph, out: &Path, svg: Option<&Path>) -> Outcome {
    write(out, &graph_to_json(graph)?)?;
    if let Some(svg) = svg {
        write(svg, &render_svg(graph, &SvgStyle::default())?)?;
    }
    let problems = invariant_problems(graph);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(problems.join("; ")))
    }
}

fn gen(a: GenArgs) -> Outcome {
    let points = generate_points(a.n, a.seed, a.model)?;
    if a.out.extension().is_some_and(|e| e == "node") {
        return write(&a.out, &points_to_triangle_node(&points));
    }
    let mut meta = BTreeMap::new();
    meta.insert("generator".to_string(), a.model.to_string().into());
    meta.insert("seed".to_string(), a.seed.into());
    write_points(&a.out, &PointSetFile::new(&points, meta)).map_err(|e| Failure::Input(format!("{}: {e}", a.out.display())))
}

fn build(a: BuildArgs) -> Outcome {
    let points = load_points(&a.input)?;
    let graph = match a.alg {
        BuildAlg::Seg => {
            if a.grade != 2 {
                return Err(Failure::Input(format!("a SEG has grade 2, not {}", a.grade)));
            }
            let config = SegConfig {
                tie: a.tie,
                planarity_repair: !a.no_repair,
                record_diagnostics: a.diagnostics,
                queries: match a.queries {
                    Queries::Naive => NeighborQueries::Naive,
                    Queries::RangeTree => NeighborQueries::RangeTree,
                    Queries::Auto => NeighborQueries::Auto,
                },
                ..SegConfig::default()
            };
            build_seg(&points, &config)?
        }
        BuildAlg::Emanation if a.approx => build_emanation_approx(&points, a.grade, &a.margin, a.tie)?,
        BuildAlg::Emanation => build_emanation(&points, a.grade, &a.margin, a.tie)?,
    };
    emit_graph(&graph, &a.out, a.svg.as_deref())
}

fn run_delaunay(a: IoArgs) -> Outcome {
    let graph = delaunay(&load_points(&a.input)?)?;
    emit_graph(&graph, &a.out, None)
}

fn import(a: ImportArgs) -> Outcome {
    let ele = a.ele.clone().unwrap_or_else(|| a.input.with_extension("ele"));
    let files = TriangleMeshFiles {
        node_text: read(&a.input)?,
        ele_text: read(&ele)?,
    };
    let originals = a.points.as_deref().map(load_points).transpose()?;
    let graph = import_triangle(&files, originals.as_deref())?;
    emit_graph(&graph, &a.out, None)
}

fn metrics(a: MetricsArgs) -> Outcome {
    let report = metrics_report(&load_graph(&a.input)?)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(Error::from)?;
    text.push('\n');
    match a.out {
        Some(out) => write(&out, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn compare(a: CompareArgs) -> Outcome {
    let config = match &a.input {
        Some(path) => serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => ExperimentConfig {
            sizes: a.sizes.clone(),
            instances_per_size: a.instances,
            seed: a.seed,
            generator: a.model,
            algorithms: a.alg.clone(),
            tie: a.tie,
        },
    };
    if let Some(dir) = &a.node_dir {
        config.validate()?;
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for &n in &config.sizes {
            for i in 0..config.instances_per_size {
                let path = dir.join(format!("{}.node", instance_stem(n, i)));
                write(&path, &points_to_triangle_node(&config.instance_points(n, i)?))?;
            }
        }
        return Ok(());
    }
    let out = compare_experiment(&config)?;
    write(a.out.as_deref().expect("required without --node-dir"), &out.csv)?;
    if let Some(raw) = &a.raw {
        write(raw, &out.instances_jsonl()?)?;
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if !out.warnings.is_empty() {
        eprintln!("{} instance(s) skipped", out.warnings.len());
    }
    let flagged: Vec<String> = out
        .instances
        .iter()
        .filter(|r| {
            ["planarity_repairs", "proper_crossings"]
                .iter()
                .any(|k| r.diagnostics.get(*k).and_then(|v| v.as_u64()).is_some_and(|n| n > 0))
        })
        .map(|r| format!("{} n={} instance {}", r.algorithm, r.size, r.instance))
        .collect();
    if flagged.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("crossings repaired or reported in: {}", flagged.join(", "))))
    }
}

fn render(a: RenderArgs) -> Outcome {
    let graph = load_graph(&a.input)?;
    let style = SvgStyle {
        size: a.size,
        ..SvgStyle::default()
    };
    write(&a.out, &render_svg(&graph, &style)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Delaunay(a) => run_delaunay(a),
        Command::ImportTriangle(a) => import(a),
        Command::Metrics(a) => metrics(a),
        Command::Compare(a) => compare(a),
        Command::Render(a) => render(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
