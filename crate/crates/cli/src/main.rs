//! `nlab`: eigenpairs, nodal statistics, the Pleijel gain and packing checks
//! from the command line.

mod commands;
mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlab::geometry::Shape;

use config::ConfigFile;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input files: exit code 2.
    Usage(String),
    /// The computation itself failed: exit code 1.
    Compute(String),
}

impl From<nlab::Error> for CliError {
    fn from(e: nlab::Error) -> Self {
        match e {
            nlab::Error::InvalidShape(_) | nlab::Error::InvalidParameter(_) | nlab::Error::Parse(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "nlab", version, about = "Nodal domains, Faber-Krahn bounds and the Pleijel constant")]
pub struct Cli {
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base directory for run directories [default: runs].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smallest Dirichlet eigenpairs of a rasterized shape.
    Eigs(EigsArgs),
    /// Nodal counts, domain classes and both sides of the class inequality per mode.
    Pleijel(PleijelArgs),
    /// Maximise the gain over (2/j)^2 in delta.
    Optimize(OptimizeArgs),
    /// Build, load or verify a disc packing and check the density bound.
    Pack(PackArgs),
}

#[derive(Args, Debug)]
pub struct EigsArgs {
    /// Shape descriptor, e.g. `square`, `rectangle:2,0.5`, `disc:1`, `annulus:0.5,1`.
    #[arg(long, value_parser = parse_shape)]
    pub shape: Option<Shape>,
    /// Grid spacing [default: 1/64].
    #[arg(long)]
    pub h: Option<f64>,
    /// Number of eigenpairs [default: 10].
    #[arg(long)]
    pub k: Option<usize>,
    /// Relative residual tolerance [default: 1e-9].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Skip writing eigenvector grids.
    #[arg(long)]
    pub no_vectors: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Rectangle,
}

#[derive(Args, Debug)]
pub struct PleijelArgs {
    #[arg(long, value_parser = parse_shape)]
    pub shape: Option<Shape>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Largest mode index [default: 50].
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Class threshold parameter [default: the optimizer's delta].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Radius-ratio threshold [default: 0.74299].
    #[arg(long)]
    pub p: Option<f64>,
    /// Tail window `lo:hi` for the reported maximum [default: n_max/2:n_max].
    #[arg(long)]
    pub window: Option<String>,
    /// Use closed-form rectangle modes instead of a grid solve.
    #[arg(long, value_enum)]
    pub oracle: Option<Oracle>,
    /// Rectangle width for the oracle [default: 1].
    #[arg(long)]
    pub a: Option<f64>,
    /// Rectangle height for the oracle [default: 1/sqrt 2].
    #[arg(long)]
    pub b: Option<f64>,
    /// Relative threshold below which cells count as nodal set [default: 1e-9].
    #[arg(long)]
    pub zero_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Radius-ratio threshold [default: 0.74299].
    #[arg(long)]
    pub p: Option<f64>,
    /// Final bracket width of the golden-section search [default: 1e-12].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write the `delta,gain` scan to this CSV file.
    #[arg(long)]
    pub scan_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lattice {
    Hex,
    Square,
}

#[derive(Args, Debug)]
pub struct PackArgs {
    /// Periodic lattice of congruent discs.
    #[arg(long, value_enum, conflicts_with_all = ["greedy", "load"])]
    pub lattice: Option<Lattice>,
    /// Torus size `WxH` [default: 20x20].
    #[arg(long)]
    pub torus: Option<String>,
    /// Disc radius for lattices [default: 1].
    #[arg(long)]
    pub radius: Option<f64>,
    /// Random sequential insertion.
    #[arg(long, conflicts_with = "load")]
    pub greedy: bool,
    /// Radius range `lo:hi` for greedy insertion [default: 0.74299:1].
    #[arg(long)]
    pub radii: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Insertion attempts [default: 100000].
    #[arg(long)]
    pub attempts: Option<usize>,
    /// Verify a packing CSV instead of generating one.
    #[arg(long)]
    pub load: Option<PathBuf>,
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    s.parse::<Shape>().map_err(|e| e.to_string())
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("NLAB_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("NLAB_THREADS must be a count, got '{v}'")))?;
        if n == 0 {
            return Err(CliError::Usage("NLAB_THREADS must be at least 1".into()));
        }
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let out = cli
        .out
        .or_else(|| file.as_ref().and_then(|f| f.get("out")).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"));
    let summary = match cli.command {
        Command::Eigs(a) => commands::eigs(a, file.as_ref(), &out)?,
        Command::Pleijel(a) => commands::pleijel(a, file.as_ref(), &out)?,
        Command::Optimize(a) => commands::optimize(a, file.as_ref(), &out)?,
        Command::Pack(a) => commands::pack(a, file.as_ref(), &out)?,
    };
    println!("{}", serde_json::to_string_pretty(&summary).map_err(|e| CliError::Compute(e.to_string()))?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
