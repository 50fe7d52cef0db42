//! `amoeba`: draw, test and analyze amoebas of Laurent polynomials.
//!
//! Exit codes: 0 success, 2 expression parse error, 3 numeric failure,
//! 4 artifact-suspect result (with --strict).

use amoeba_core::analysis::{self, AnalysisError};
use amoeba_core::bench;
use amoeba_core::membership::{self, MembershipParams, MembershipStatus};
use amoeba_core::parse;
use amoeba_core::poly::{LaurentPolynomial, LogPoint};
use amoeba_core::raster::{
    self, GridRootParams, PixelRasterParams, PointCloud, Raster, RasterError,
};
use amoeba_core::spine::{self, SpineError};
use amoeba_core::tropical::{self, Rect};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PARSE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_ARTIFACT: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<parse::ParseError> for Failure {
    fn from(e: parse::ParseError) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

impl From<RasterError> for Failure {
    fn from(e: RasterError) -> Self {
        Failure::new(EXIT_NUMERIC, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure::new(EXIT_NUMERIC, e.to_string())
    }
}

impl From<membership::MembershipError> for Failure {
    fn from(e: membership::MembershipError) -> Self {
        Failure::new(EXIT_NUMERIC, e.to_string())
    }
}

impl From<SpineError> for Failure {
    fn from(e: SpineError) -> Self {
        let code = match e {
            SpineError::ArtifactSuspect => EXIT_ARTIFACT,
            _ => EXIT_NUMERIC,
        };
        Failure::new(code, e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "amoeba",
    about = "Compute, analyze and render amoebas of Laurent polynomials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the amoeba over its drawing window
    Draw(DrawArgs),
    /// Decide whether a log-space point lies in the amoeba
    Member(MemberArgs),
    /// Label complement components, orders and Ronkin coefficients
    Analyze(AnalyzeArgs),
    /// Build the spine over the analyzed amoeba
    Spine(SpineArgs),
    /// Sample the coamoeba on the argument torus
    Coamoeba(CloudArgs),
    /// Sample the compactified amoeba inside the Newton polytope
    Compactified(CloudArgs),
    /// Sample the contour (critical values of the logarithmic map)
    Contour(ContourArgs),
    /// Run the benchmark families and report timings
    Bench(BenchArgs),
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial expression, e.g. "z1^2 + 5*z1*z2 + 1"
    #[arg(long, conflicts_with = "poly_file")]
    poly: Option<String>,
    /// File containing the polynomial expression
    #[arg(long)]
    poly_file: Option<PathBuf>,
}

impl PolyInput {
    fn load(&self) -> Result<LaurentPolynomial, Failure> {
        let text = match (&self.poly, &self.poly_file) {
            (Some(t), _) => t.clone(),
            (None, Some(f)) => std::fs::read_to_string(f)?,
            (None, None) => {
                return Err(Failure::new(EXIT_PARSE, "provide --poly or --poly-file"));
            }
        };
        Ok(parse::parse(text.trim())?.poly)
    }
}

#[derive(Args)]
struct WindowArgs {
    /// Drawing window x0 x1 y0 y1 (default: computed from the
    /// Archimedean tropicalization)
    #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true)]
    domain: Option<Vec<f64>>,
    /// Raster resolution W H
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    res: Option<Vec<usize>>,
    /// Quality preset: 512x512 pixels and 500-value grids unless overridden
    #[arg(long)]
    quality: bool,
}

impl WindowArgs {
    fn window(&self, p: &LaurentPolynomial) -> Result<Rect, Failure> {
        match &self.domain {
            Some(v) => {
                if v[0] >= v[1] || v[2] >= v[3] {
                    return Err(Failure::new(EXIT_PARSE, "empty --domain rectangle"));
                }
                Ok(Rect::new(v[0], v[1], v[2], v[3]))
            }
            None => Ok(tropical::select_domain(p)),
        }
    }

    fn resolution(&self) -> (usize, usize) {
        match &self.res {
            Some(v) => (v[0].max(2), v[1].max(2)),
            None if self.quality => (512, 512),
            None => (256, 256),
        }
    }

    fn grid_values(&self, explicit: Option<usize>) -> usize {
        match explicit {
            Some(v) => v,
            None if self.quality => 500,
            None => 100,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Grid,
    Pixel,
    Greedy,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Ppm,
    Svg,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutputArgs {
    fn write_bytes(&self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }

    fn write_text(&self, text: &str) -> Result<(), Failure> {
        self.write_bytes(text.as_bytes())
    }
}

#[derive(Args)]
struct DrawArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "pixel")]
    algorithm: Algorithm,
    /// Skip membership tests for pixels certified by the tropical gap
    #[arg(long)]
    prune: bool,
    /// Angle samples per fiber membership test
    #[arg(long, default_value_t = 128)]
    fiber_samples: usize,
    /// Moduli and angle counts for the grid algorithm
    #[arg(long)]
    grid_values: Option<usize>,
}

#[derive(Args)]
struct MemberArgs {
    #[command(flatten)]
    input: PolyInput,
    /// Log coordinates of the queried point
    #[arg(long, num_args = 2, value_names = ["X1", "X2"], allow_negative_numbers = true)]
    point: Vec<f64>,
    #[arg(long, default_value_t = 128)]
    fiber_samples: usize,
    /// Log-scale modulus tolerance
    #[arg(long, default_value_t = 1e-3)]
    tau: f64,
    /// Sweep the first variable instead of the last
    #[arg(long)]
    transpose: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long)]
    prune: bool,
    #[arg(long, default_value_t = 128)]
    fiber_samples: usize,
    /// Torus quadrature nodes per dimension
    #[arg(long, default_value_t = 200)]
    quadrature: usize,
    /// Exit with code 4 when the report is artifact-suspect
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SpineArgs {
    #[command(flatten)]
    analyze: AnalyzeArgs,
}

#[derive(Args)]
struct CloudArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long)]
    grid_values: Option<usize>,
}

#[derive(Args)]
struct ContourArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    /// Tolerance on the normalized imaginary part of the Gauss ratio
    #[arg(long, default_value_t = 1e-6)]
    tau_real: f64,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Trinomial,
    Dense,
    Random,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Largest degree (trinomial/dense) or monomial count (random)
    #[arg(long, default_value_t = 10)]
    max: u32,
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    res: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
    /// Exit with code 4 when any record is not fully correct
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("amoeba: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Draw(args) => draw(args),
        Command::Member(args) => member(args),
        Command::Analyze(args) => analyze_cmd(args).map(|_| ()),
        Command::Spine(args) => spine_cmd(args),
        Command::Coamoeba(args) => cloud_cmd(args, CloudKind::Coamoeba),
        Command::Compactified(args) => cloud_cmd(args, CloudKind::Compactified),
        Command::Contour(args) => contour_cmd(args),
        Command::Bench(args) => bench_cmd(args),
    }
}

fn pixel_params(prune: bool, samples: usize) -> PixelRasterParams {
    PixelRasterParams {
        samples,
        prune,
        ..PixelRasterParams::default()
    }
}

fn emit_raster(r: &Raster, output: &OutputArgs) -> Result<(), Failure> {
    match output.format.unwrap_or(Format::Ppm) {
        Format::Ppm => output.write_bytes(&r.ppm_bytes()),
        Format::Svg => output.write_text(&r.to_svg(800, 800)),
        _ => Err(Failure::new(
            EXIT_PARSE,
            "draw supports --format ppm or svg",
        )),
    }
}

fn draw(args: DrawArgs) -> Result<(), Failure> {
    let p = args.input.load()?;
    let window = args.window.window(&p)?;
    let (w, h) = args.window.resolution();
    match args.algorithm {
        Algorithm::Pixel => {
            let r = raster::pixel_membership_raster(
                &p,
                window,
                w,
                h,
                &pixel_params(args.prune, args.fiber_samples),
            )?;
            emit_raster(&r, &args.output)
        }
        Algorithm::Grid => {
            let values = args.window.grid_values(args.grid_values);
            let (r, _) = raster::grid_root_raster(
                &p,
                window,
                GridRootParams {
                    moduli: values,
                    angles: values,
                    width: w,
                    height: h,
                },
            )?;
            emit_raster(&r, &args.output)
        }
        Algorithm::Greedy => {
            let seeds = raster::default_greedy_seeds(&p, window)?;
            if seeds.is_empty() {
                return Err(Failure::new(
                    EXIT_NUMERIC,
                    "no seed points found; the amoeba may miss the window",
                ));
            }
            let r = raster::greedy_raster(
                &p,
                window,
                w,
                h,
                &seeds,
                &pixel_params(args.prune, args.fiber_samples),
            )?;
            emit_raster(&r, &args.output)
        }
    }
}

fn member(args: MemberArgs) -> Result<(), Failure> {
    let p = args.input.load()?;
    let x = LogPoint::new(args.point.clone());
    let params = MembershipParams {
        samples: args.fiber_samples.max(8),
        tau_mod: args.tau,
        transpose: args.transpose,
        ..MembershipParams::default()
    };
    let verdict = membership::decide(&p, &x, &params)?;
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let json = serde_json::json!({
                "point": args.point,
                "status": verdict.status,
                "witness": verdict.witness,
            });
            args.output
                .write_text(&format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
        }
        _ => {
            let line = match verdict.status {
                MembershipStatus::InAmoeba => "in-amoeba",
                MembershipStatus::CertifiedOutside => "certified-outside",
                MembershipStatus::ProbablyOutside => "probably-outside",
            };
            args.output.write_text(&format!("{line}\n"))
        }
    }
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<analysis::AnalysisReport, Failure> {
    let p = args.input.load()?;
    let window = args.window.window(&p)?;
    let (w, h) = args.window.resolution();
    let r = raster::pixel_membership_raster(
        &p,
        window,
        w,
        h,
        &pixel_params(args.prune, args.fiber_samples),
    )?;
    let (report, _) = analysis::analyze(&p, &r, args.quadrature)?;
    args.output
        .write_text(&format!("{}\n", report.to_json()))?;
    if args.strict && report.artifact_suspect {
        return Err(Failure::new(
            EXIT_ARTIFACT,
            "analysis is artifact-suspect (--strict)",
        ));
    }
    Ok(report)
}

fn spine_cmd(args: SpineArgs) -> Result<(), Failure> {
    let a = args.analyze;
    let p = a.input.load()?;
    let window = a.window.window(&p)?;
    let (w, h) = a.window.resolution();
    let r = raster::pixel_membership_raster(
        &p,
        window,
        w,
        h,
        &pixel_params(a.prune, a.fiber_samples),
    )?;
    let (report, _) = analysis::analyze(&p, &r, a.quadrature)?;
    let sp = spine::build_spine(&report, window)?;
    match a.output.format.unwrap_or(Format::Svg) {
        Format::Svg => a.output.write_text(&sp.to_svg_overlay(&r, 800, 800)),
        Format::Json => a.output.write_text(&format!("{}\n", sp.to_json())),
        _ => Err(Failure::new(
            EXIT_PARSE,
            "spine supports --format svg or json",
        )),
    }
}

enum CloudKind {
    Coamoeba,
    Compactified,
}

fn emit_cloud(
    cloud: &PointCloud,
    world: Rect,
    output: &OutputArgs,
) -> Result<(), Failure> {
    match output.format.unwrap_or(Format::Json) {
        Format::Json => output.write_text(&format!("{}\n", cloud.to_json())),
        Format::Svg => output.write_text(&cloud.to_svg(800, 800, world)),
        _ => Err(Failure::new(
            EXIT_PARSE,
            "point clouds support --format json or svg",
        )),
    }
}

fn cloud_cmd(args: CloudArgs, kind: CloudKind) -> Result<(), Failure> {
    let p = args.input.load()?;
    let values = args.window.grid_values(args.grid_values);
    match kind {
        CloudKind::Coamoeba => {
            let window = args.window.window(&p)?;
            let cloud = raster::coamoeba_cloud(&p, values, values, window)?;
            let pi = std::f64::consts::PI;
            emit_cloud(&cloud, Rect::new(-pi, pi, -pi, pi), &args.output)
        }
        CloudKind::Compactified => {
            let cloud = raster::compactified_cloud(&p, values, values)?;
            let nd = amoeba_core::newton::newton_polytope(&p)
                .map_err(|e| Failure::new(EXIT_NUMERIC, e.to_string()))?;
            let xs: Vec<f64> = nd.vertices.iter().map(|v| v.get(0) as f64).collect();
            let ys: Vec<f64> = nd.vertices.iter().map(|v| v.get(1) as f64).collect();
            let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let world = Rect::new(
                min(&xs) - 0.5,
                max(&xs) + 0.5,
                min(&ys) - 0.5,
                max(&ys) + 0.5,
            );
            emit_cloud(&cloud, world, &args.output)
        }
    }
}

fn contour_cmd(args: ContourArgs) -> Result<(), Failure> {
    let p = args.cloud.input.load()?;
    let window = args.cloud.window.window(&p)?;
    let values = args.cloud.window.grid_values(args.cloud.grid_values);
    let cloud = raster::contour_cloud(&p, values, values, args.tau_real, window)?;
    emit_cloud(&cloud, window, &args.cloud.output)
}

fn bench_cmd(args: BenchArgs) -> Result<(), Failure> {
    let res = args.res.as_ref().map_or(256, |v| v[0].max(2));
    let records = match args.family {
        Family::Trinomial => bench::bench_trinomial(args.max, res, args.repeats),
        Family::Dense => bench::bench_dense(args.max, res, args.repeats),
        Family::Random => bench::bench_random(args.max as usize, args.seed, res, args.repeats),
    };
    match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => args.output.write_text(&bench::write_csv(&records))?,
        Format::Svg => args
            .output
            .write_text(&bench::write_svg_scatter(&records, 800, 500))?,
        _ => {
            return Err(Failure::new(
                EXIT_PARSE,
                "bench supports --format csv or svg",
            ));
        }
    }
    if args.strict
        && records
            .iter()
            .any(|r| r.status != bench::BenchStatus::Correct)
    {
        return Err(Failure::new(
            EXIT_ARTIFACT,
            "benchmark contains non-correct records (--strict)",
        ));
    }
    Ok(())
}
