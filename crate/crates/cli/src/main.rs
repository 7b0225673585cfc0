use clap::{Args, Parser, Subcommand};
use splinewidth_cli::config::{self, ConfigError, Validate};
use splinewidth_cli::experiments;
use splinewidth_cli::output::{self, Outcome, PlotSpec, RunInfo};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_FAIL: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "splinewidth", version, about = "Spline approximation and n-width experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the config's `out`, else results/<subcommand>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, env = "SPLINEWIDTH_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// L2 projection error against (h/pi)^r |u|_r
    Project(Common),
    /// Ritz projection errors with the recursive/variational cross-check
    Ritz(Common),
    /// Reduced spline spaces with h or h_hat
    Reduced(Common),
    /// Outlier modes of the periodic Laplacian
    Outliers {
        #[command(flatten)]
        common: Common,
        /// Relative error above which a mode counts as an outlier
        #[arg(long)]
        outlier_threshold: Option<f64>,
    },
    /// Spectral branches of C^k periodic splines
    Branches(Common),
    /// Numerical n-widths and optimality ratios
    Nwidth(Common),
    /// Inverse inequality on constrained spline spaces
    Inverse(Common),
    /// Eigenfunction convergence tables
    Eigconv(Common),
    /// Exploratory errors for the critical harmonic
    Conjecture(Common),
    /// Redraw an SVG line plot from a result CSV
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Columns whose values split the rows into separate lines
        #[arg(long, value_delimiter = ',')]
        series: Vec<String>,
        #[arg(long)]
        log_y: bool,
        #[arg(long, default_value = "")]
        title: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load<T: serde::de::DeserializeOwned + Validate>(path: &Path, sub: &str) -> Result<(T, String), ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    Ok((config::parse(&text, sub)?, text))
}

fn out_of(v: &serde_json::Value) -> Option<PathBuf> {
    v.get("out").and_then(|o| o.as_str()).map(PathBuf::from)
}

fn run(sub: &str, common: &Common, threshold: Option<f64>) -> Result<ExitCode, ConfigError> {
    macro_rules! go {
        ($ty:ty, $f:expr) => {{
            let (cfg, text) = load::<$ty>(&common.config, sub)?;
            (Box::new(move || $f(&cfg)) as Box<dyn FnOnce() -> Outcome + Send>, text)
        }};
    }
    let (job, text) = match sub {
        "project" => go!(config::ProjectConfig, experiments::project),
        "ritz" => go!(config::RitzConfig, experiments::ritz),
        "reduced" => go!(config::ReducedConfig, experiments::reduced),
        "outliers" => go!(config::OutliersConfig, |c| experiments::outliers(c, threshold)),
        "branches" => go!(config::BranchesConfig, experiments::branches),
        "nwidth" => go!(config::NwidthConfig, experiments::nwidth),
        "inverse" => go!(config::InverseConfig, experiments::inverse),
        "eigconv" => go!(config::EigconvConfig, experiments::eigconv),
        "conjecture" => go!(config::ConjectureConfig, experiments::conjecture),
        _ => unreachable!("unknown subcommand {sub}"),
    };
    if let Some(t) = threshold {
        if !(t > 0.0) {
            return Err(ConfigError(format!("field `outlier-threshold`: {t} must be positive")));
        }
    }
    let threads = match common.threads {
        Some(0) => return Err(ConfigError("field `threads`: must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError(format!("cannot start {threads} worker threads: {e}")))?;
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap_or_default();
    let dir = common.out.clone().or_else(|| out_of(&raw)).unwrap_or_else(|| Path::new("results").join(sub));

    let start = Instant::now();
    let outcome = pool.install(job);
    let info = RunInfo { subcommand: sub, config_text: &text, threads, wall_time_s: start.elapsed().as_secs_f64() };
    if let Err(e) = output::write_outcome(&dir, &outcome, &info) {
        eprintln!("error: cannot write results to {}: {e}", dir.display());
        return Ok(ExitCode::FAILURE);
    }

    let mut counts = std::collections::BTreeMap::new();
    for (_, s) in &outcome.cells {
        *counts.entry(s.label()).or_insert(0) += 1;
    }
    let counts: Vec<String> = counts.iter().map(|(k, v)| format!("{v} {k}")).collect();
    println!("{sub}: {} cells ({}) in {:.2}s -> {}", outcome.cells.len(), counts.join(", "), info.wall_time_s, dir.display());
    for (cell, s) in outcome.cells.iter().filter(|(_, s)| *s == output::Status::Fail) {
        println!("  FAIL {cell} [{}]", s.label());
    }
    Ok(if outcome.failed() { ExitCode::from(EXIT_FAIL) } else { ExitCode::SUCCESS })
}

fn plot(csv: &Path, spec: PlotSpec, out: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(csv).map_err(|e| format!("cannot read {}: {e}", csv.display()))?;
    let svg = splinewidth_cli::svg::plot_csv(&text, &spec)?;
    output::write_atomic(out, svg.as_bytes()).map_err(|e| format!("cannot write {}: {e}", out.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common, threshold) = match &cli.command {
        Command::Project(c) => ("project", c, None),
        Command::Ritz(c) => ("ritz", c, None),
        Command::Reduced(c) => ("reduced", c, None),
        Command::Outliers { common, outlier_threshold } => ("outliers", common, *outlier_threshold),
        Command::Branches(c) => ("branches", c, None),
        Command::Nwidth(c) => ("nwidth", c, None),
        Command::Inverse(c) => ("inverse", c, None),
        Command::Eigconv(c) => ("eigconv", c, None),
        Command::Conjecture(c) => ("conjecture", c, None),
        Command::Plot { csv, x, y, series, log_y, title, out } => {
            let spec = PlotSpec {
                name: String::new(),
                table: String::new(),
                x: x.clone(),
                y: y.clone(),
                series: series.clone(),
                log_y: *log_y,
                title: title.clone(),
            };
            return match plot(csv, spec, out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            };
        }
    };
    match run(sub, common, threshold) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
