use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use currentproj::currents::{current_length, filling_check, simple_pool, systole_estimate, MulticurveCurrent};
use currentproj::group::{SurfacePresentation, Word};
use currentproj::holonomy::{build_representation, FnCoordinates};
use currentproj::intersection::Intersector;
use currentproj::projection::{detect_no_minimizer, project, twist_equivariance_check, OptimizerConfig, Status};
use currentproj::verify::{run_verify, write_reports, Checker, ExperimentSpec};
use currentproj::Error;

const PARSE_FAILURE: u8 = 1;
const NON_FILLING: u8 = 2;
const NO_MINIMIZER: u8 = 3;
const CUTOFF_UNSTABLE: u8 = 4;
/// A run that finished without a verdict, or a verification that failed.
const INCONCLUSIVE: u8 = 5;

#[derive(Parser)]
#[command(name = "currentproj", about = "Length-minimizing projection of filling multicurve currents")]
struct Cli {
    /// Seed for restarts and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Surface genus [default: 2].
    #[arg(long, global = true)]
    genus: Option<usize>,
    /// Cap on conjugator word length in the intersection engine.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Longest words in the simple-curve pool [default: 6].
    #[arg(long, global = true)]
    pool_len: Option<usize>,
    /// Output file (directory for `verify`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the length of a filling current over Teichmüller space.
    Project {
        current: PathBuf,
        /// Starting FN coordinates, a flat JSON array.
        #[arg(long)]
        start: Option<PathBuf>,
        /// Run the descent even if the current does not fill.
        #[arg(long)]
        override_filling: bool,
        /// Write the trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Run the inequality suites described by an experiment spec.
    Verify {
        spec: PathBuf,
        /// Flip every inequality; the run must then fail.
        #[arg(long)]
        negate: bool,
    },
    /// Geometric intersection number of two classes.
    Intersect {
        u: String,
        v: String,
        /// Structure to compute at; the reference structure by default.
        #[arg(long = "fn")]
        fn_coords: Option<PathBuf>,
    },
    /// Length of a current at a point (the standard point by default).
    Length {
        current: PathBuf,
        #[arg(long = "fn")]
        fn_coords: Option<PathBuf>,
    },
    /// Smallest pairing of a current with the simple-curve pool.
    Systole { current: PathBuf },
    /// Whether a current fills, with a witness.
    FillCheck { current: PathBuf },
    /// Compare π of a twisted current with the shifted projection.
    Twist {
        current: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        times: i32,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonFillingInput => NON_FILLING,
        Error::CutoffUnstable { .. } => CUTOFF_UNSTABLE,
        _ => PARSE_FAILURE,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_current(path: &Path) -> Result<MulticurveCurrent, Error> {
    MulticurveCurrent::from_json(&read(path)?)
}

fn read_fn(path: &Path) -> Result<FnCoordinates, Error> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Error> {
    let body = serde_json::to_string_pretty(value)? + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn intersector(cli: &Cli, p: &SurfacePresentation, fn_coords: Option<&Path>) -> Result<Intersector, Error> {
    let reference = Intersector::reference(p)?;
    let representation = match fn_coords {
        Some(path) => build_representation(p, &read_fn(path)?)?,
        None => reference.representation().clone(),
    };
    Ok(Intersector::with_max_radius(representation, cli.radius.unwrap_or(reference.max_radius())))
}

fn pool_len(cli: &Cli) -> usize {
    cli.pool_len.unwrap_or(6)
}

fn optimizer(cli: &Cli) -> OptimizerConfig {
    OptimizerConfig { seed: cli.seed.unwrap_or(0), ..OptimizerConfig::default() }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let p = SurfacePresentation::new(cli.genus.unwrap_or(2))?;
    match &cli.command {
        Command::Project { current, start, override_filling, trajectory } => {
            let mu = read_current(current)?;
            let start = match start {
                Some(path) => read_fn(path)?,
                None => FnCoordinates::standard(&p),
            };
            let ix = intersector(cli, &p, None)?;
            let cfg = optimizer(cli);
            let result = match project(&ix, &mu, &cfg, &start) {
                Err(Error::NonFillingInput) if *override_filling => {
                    let pool = simple_pool(&ix, pool_len(cli))?;
                    detect_no_minimizer(&p, &mu, &cfg, &pool)?
                }
                other => other?,
            };
            if let Some(path) = trajectory {
                std::fs::write(path, result.trajectory_csv())?;
            }
            emit(cli, &result)?;
            Ok(match result.status {
                Status::Converged => 0,
                Status::NoMinimizer => NO_MINIMIZER,
                Status::IterationCap => INCONCLUSIVE,
            })
        }
        Command::Verify { spec, negate } => {
            let mut spec = ExperimentSpec::from_json(&read(spec)?)?;
            // Flags given on the command line override the experiment file.
            if let Some(seed) = cli.seed {
                spec.seed = seed;
            }
            if let Some(genus) = cli.genus {
                spec.genus = genus;
            }
            if let Some(len) = cli.pool_len {
                spec.pool_max_len = len;
            }
            if let Some(radius) = cli.radius {
                spec.ball_radius = radius;
            }
            if let Some(out) = &cli.out {
                spec.output_path = out.clone();
            }
            let report = run_verify(&spec, Checker { negated: *negate })?;
            for path in write_reports(&report, &spec.output_path)? {
                eprintln!("wrote {}", path.display());
            }
            for s in &report.suites {
                println!("{:<22} {:>6} checks {:>4} violations", s.name, s.checks, s.violations);
            }
            if let (Some(c1), Some(c2)) = (report.c1, report.c2) {
                println!("ratio range [{c1:.6}, {c2:.6}]");
            }
            Ok(if report.passed { 0 } else { INCONCLUSIVE })
        }
        Command::Intersect { u, v, fn_coords } => {
            let ix = intersector(cli, &p, fn_coords.as_deref())?;
            let (u, v) = (Word::parse(u)?, Word::parse(v)?);
            let count = ix.intersection_number(&u, &v)?;
            let (_, radius) = ix.crossings_with_radius(&u, &v)?;
            println!("{count}");
            eprintln!("stable from radius {radius}");
            Ok(0)
        }
        Command::Length { current, fn_coords } => {
            let x = match fn_coords {
                Some(path) => read_fn(path)?,
                None => FnCoordinates::standard(&p),
            };
            let length = current_length(&build_representation(&p, &x)?, &read_current(current)?)?;
            println!("{length:.17e}");
            Ok(0)
        }
        Command::Systole { current } => {
            let ix = intersector(cli, &p, None)?;
            let pool = simple_pool(&ix, pool_len(cli))?;
            let (value, argmin) = systole_estimate(&ix, &read_current(current)?, &pool)?;
            emit(cli, &serde_json::json!({ "systole": value, "argmin": argmin }))?;
            Ok(0)
        }
        Command::FillCheck { current } => {
            let ix = intersector(cli, &p, None)?;
            let pool = simple_pool(&ix, pool_len(cli))?;
            let verdict = filling_check(&ix, &read_current(current)?, &pool)?;
            emit(cli, &verdict)?;
            Ok(if verdict.filling { 0 } else { NON_FILLING })
        }
        Command::Twist { current, index, times } => {
            let ix = intersector(cli, &p, None)?;
            let report = twist_equivariance_check(&ix, &read_current(current)?, *index, *times, &optimizer(cli))?;
            emit(cli, &report)?;
            Ok(if report.passed { 0 } else { INCONCLUSIVE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("CURRENTPROJ_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
