//! Command-line front end for the `hyperfractal` crate.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperfractal::city::build_city;
use hyperfractal::estimator::{estimate_dimension_with, network_to_streets, DEFAULT_TAIL_FRACTION};
use hyperfractal::io;
use hyperfractal::manhattan::{ManhattanNetwork, TruncationMode};
use hyperfractal::measure::{
    ifs_dimension, manhattan_dimension, uniform_ss_dimension, ContractionSystem, DimensionValue, UniformSelfSimilarSpec,
};
use hyperfractal::{figures, rng, Error, Point};

#[derive(Debug, Parser)]
#[command(name = "hyperfractal", version, about = "Random hyperfractal cities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a Manhattan grid and print its per-depth table.
    Grid(GridArgs),
    /// Sample points from a grid or a city.
    Sample(SampleArgs),
    /// Build a city from a JSON config and print its mass report.
    City(CityArgs),
    /// Estimate the dimension of a street CSV.
    Estimate(EstimateArgs),
    /// Print a closed-form dimension.
    Dim(DimArgs),
    /// Write all preset figures as SVG.
    Figures(FiguresArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    depth: u32,
    /// `renormalized` or `raw`.
    #[arg(long, default_value = "renormalized")]
    mode: TruncationMode,
    #[arg(long)]
    out_geojson: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Also write the grid as a street CSV.
    #[arg(long)]
    out_streets: Option<PathBuf>,
    #[arg(long, default_value_t = io::DEFAULT_WIDTH_PX)]
    width: u32,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["p", "config"])))]
struct SampleArgs {
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid depth when sampling with `--p`.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    #[arg(long)]
    n: usize,
    /// Defaults to 0 with `--p` and to a value derived from the config seed otherwise.
    #[arg(long)]
    seed: Option<u64>,
    /// Points CSV; written to stdout when no output is given.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long, default_value_t = io::DEFAULT_WIDTH_PX)]
    width: u32,
}

#[derive(Debug, Args)]
struct CityArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_geojson: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long, default_value_t = io::DEFAULT_WIDTH_PX)]
    width: u32,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Merge threshold A > 1 on the max/min density ratio.
    #[arg(long)]
    factor: f64,
    /// Share of the rank curve's log range, from the top, used in the fit.
    #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
    tail_fraction: f64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("model").required(true).args(["p", "ifs", "ss"])))]
struct DimArgs {
    /// Manhattan parameter.
    #[arg(long)]
    p: Option<f64>,
    /// `PROBS/RATIOS`, each a comma-separated list, e.g. `0.5,0.5/0.5,0.5`.
    #[arg(long)]
    ifs: Option<String>,
    /// `R,S`: mass and length scaling of a uniform self-similar network.
    #[arg(long)]
    ss: Option<String>,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    #[arg(long)]
    outdir: PathBuf,
}

/// Failures after argument parsing; `Usage` maps to exit code 2.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("{what}: `{t}` is not a number"))))
        .collect()
}

/// Rounds away float noise from closed forms, so `3.0000000000000004` prints as `3.0`.
fn format_dimension(d: DimensionValue<f64>) -> String {
    if d.is_infinite() {
        return "inf".into();
    }
    let v = (d.value() * 1e12).round() / 1e12;
    format!("{v:?}")
}

fn grid(a: GridArgs, out: &mut dyn Write) -> Outcome {
    let net = ManhattanNetwork::build(a.p, a.depth, a.mode)?;
    writeln!(out, "depth,count,length,mass,linear_density")?;
    for r in net.segment_table() {
        writeln!(out, "{},{},{},{},{}", r.depth, r.count, r.length, r.mass, r.linear_density)?;
    }
    if let Some(path) = a.out_geojson {
        io::export_network_geojson(&net, path)?;
    }
    if let Some(path) = a.out_svg {
        io::render_network_svg::<f64>(&net, &[], path, a.width)?;
    }
    if let Some(path) = a.out_streets {
        io::export_streets_csv(&network_to_streets(&net), path)?;
    }
    Ok(())
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Outcome {
    let mut csv = Vec::new();
    let svg;
    if let Some(p) = a.p {
        let net = ManhattanNetwork::build(p, a.depth, TruncationMode::Renormalized)?;
        let pts = net.sample_points(a.n, a.seed.unwrap_or(0));
        io::write_points(&pts, &mut csv)?;
        let locs: Vec<Point> = pts.iter().map(|p| p.location()).collect();
        svg = a.out_svg.as_ref().map(|_| io::network_svg(&net, &locs, a.width));
    } else {
        let config = io::load_city_config(a.config.as_ref().expect("clap enforces a source"))?;
        let city = build_city(&config)?;
        let seed = a.seed.unwrap_or_else(|| rng::derive_seed(config.seed, rng::tag::SAMPLING));
        let pts = city.sample(a.n, seed);
        io::write_points(&pts, &mut csv)?;
        let locs: Vec<Point> = pts.iter().map(|p| p.location).collect();
        svg = a.out_svg.as_ref().map(|_| io::city_svg(&city, &locs, a.width));
    }
    if let (Some(path), Some(svg)) = (&a.out_svg, svg) {
        std::fs::write(path, svg)?;
    }
    match (&a.out_csv, &a.out_svg) {
        (Some(path), _) => std::fs::write(path, csv)?,
        (None, None) => out.write_all(&csv)?,
        (None, Some(_)) => {}
    }
    Ok(())
}

fn city(a: CityArgs, out: &mut dyn Write) -> Outcome {
    let config = io::load_city_config(&a.config)?;
    let city = build_city(&config)?;
    writeln!(out, "component,mass")?;
    for (c, m) in city.mass_report() {
        writeln!(out, "{},{}", io::component_label(c), m)?;
    }
    if let Some(path) = a.out_geojson {
        io::export_city_geojson(&city, path)?;
    }
    if let Some(path) = a.out_svg {
        io::render_city_svg::<f64>(&city, &[], path, a.width)?;
    }
    Ok(())
}

fn estimate(a: EstimateArgs, out: &mut dyn Write) -> Outcome {
    let streets = io::import_streets_csv::<f64>(&a.input)?;
    let est = estimate_dimension_with(&streets, a.factor, a.tail_fraction)?;
    writeln!(out, "dimension: {}", est.dimension)?;
    writeln!(out, "exponent: {}", est.fit.exponent)?;
    writeln!(out, "r_squared: {}", est.fit.r_squared)?;
    writeln!(out, "points: {}", est.fit.n_points)?;
    Ok(())
}

fn dim(a: DimArgs, out: &mut dyn Write) -> Outcome {
    let d = if let Some(p) = a.p {
        manhattan_dimension(p)?
    } else if let Some(text) = a.ifs {
        let (probs, ratios) =
            text.split_once('/').ok_or_else(|| Failure::Usage("--ifs expects PROBS/RATIOS".into()))?;
        let system = ContractionSystem::new(parse_list(ratios, "--ifs")?, parse_list(probs, "--ifs")?)?;
        ifs_dimension(&system)
    } else {
        let v = parse_list(a.ss.as_deref().expect("clap enforces a model"), "--ss")?;
        let [r, s] = v[..] else {
            return Err(Failure::Usage("--ss expects R,S".into()));
        };
        uniform_ss_dimension(&UniformSelfSimilarSpec::with_scalings(s, r)?)?
    };
    writeln!(out, "{}", format_dimension(d))?;
    Ok(())
}

fn generate_figures(a: FiguresArgs, out: &mut dyn Write) -> Outcome {
    for path in figures::generate_all(&a.outdir)? {
        writeln!(out, "{}", path.display())?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Grid(a) => grid(a, out),
        Command::Sample(a) => sample(a, out),
        Command::City(a) => city(a, out),
        Command::Estimate(a) => estimate(a, out),
        Command::Dim(a) => dim(a, out),
        Command::Figures(a) => generate_figures(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
