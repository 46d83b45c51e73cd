//! Command-line frontend: distances, bound-verification campaigns,
//! embeddings and quotient metrics, with machine-readable JSON output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use swemb::bounds::{run_campaign, sample_measure, CampaignConfig, PointDistribution};
use swemb::embedding::{build_kernel, embed_finite_set_with_tol, KernelMethod, NSD_REL_TOL};
use swemb::io;
use swemb::{
    cap_expectation, kappa, sphere_area, sw1_exact_2d, sw1_monte_carlo, w1, Dimension,
    EmpiricalMeasure, Error, Result, SlicedEstimate,
};

const EXIT_CODES_HELP: &str = "Exit codes:\n  0  success\n  1  bound violation detected\n  2  input error (unreadable or malformed files, bad configuration)\n  3  semantic mismatch (incompatible sizes or dimensions, domain errors)";

#[derive(Parser)]
#[command(
    name = "swemb",
    about = "Sliced Wasserstein distances, embeddings and orbit quotients for empirical measures",
    long_about = None,
    after_help = EXIT_CODES_HELP,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact 1-Wasserstein distance between two measure files
    W1 {
        /// First measure (.json or .csv)
        alpha: PathBuf,
        /// Second measure (.json or .csv)
        beta: PathBuf,
    },
    /// Sliced 1-Wasserstein distance (unnormalized sphere integral)
    Sw1 {
        alpha: PathBuf,
        beta: PathBuf,
        /// mc = seeded Monte-Carlo (any n), exact2d = arc decomposition (n = 2)
        #[arg(long, value_enum)]
        method: Option<SlicedMethodArg>,
        /// Monte-Carlo directions
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The slice constant kappa(n) and its companions
    Kappa {
        #[arg(long)]
        n: usize,
    },
    /// Randomized verification of the sliced-vs-plain sandwich bounds
    VerifyBounds(VerifyBoundsArgs),
    /// Hilbert embedding of a family of measures via the SW1/kappa kernel
    Embed {
        /// JSON array of measure objects
        measures: PathBuf,
        #[arg(long, value_enum)]
        method: Option<SlicedMethodArg>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quotient distance between two points under a finite isometry group
    QuotientDist {
        /// Group file (JSON)
        group: PathBuf,
        /// First point (bare JSON array)
        x: PathBuf,
        /// Second point (bare JSON array)
        y: PathBuf,
    },
    /// Generate random measure files
    Gen {
        #[arg(long, default_value = "gaussian")]
        dist: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyBoundsArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gaussian, cube or clustered
    #[arg(long, default_value = "gaussian")]
    dist: String,
    /// Monte-Carlo directions per instance (n >= 3)
    #[arg(long, default_value_t = 2_000)]
    samples: u64,
    /// Also write the report to this path
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SlicedMethodArg {
    Mc,
    Exact2d,
}

#[derive(Serialize)]
struct W1Output {
    w1: f64,
    matching: Vec<usize>,
}

#[derive(Serialize)]
struct KappaOutput {
    n: usize,
    kappa: f64,
    sphere_area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_expectation: Option<f64>,
}

#[derive(Serialize)]
struct QuotientOutput {
    quotient_distance: f64,
    orbit_w1: f64,
    reduction_ok: bool,
}

#[derive(Serialize)]
struct GenOutput {
    files: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::InvalidConfig(_)
        | Error::InvalidIsometry(_)
        | Error::GroupClosure(_)
        | Error::Empty(_) => 2,
        Error::SizeMismatch { .. }
        | Error::DimensionMismatch { .. }
        | Error::Domain(_)
        | Error::InvalidKernel(_)
        | Error::NotNegativeSemidefinite { .. } => 3,
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<EmpiricalMeasure> {
    let content = read_file(path)?;
    if path.extension().is_some_and(|ext| ext == "csv") {
        io::measure_from_csv(&content)
    } else {
        io::measure_from_json(&content)
    }
}

fn compatibility_message(alpha: &EmpiricalMeasure, beta: &EmpiricalMeasure) -> Option<Error> {
    if alpha.size() != beta.size() {
        return Some(Error::Domain(format!(
            "measures disagree in field \"k\": {} vs {}",
            alpha.size(),
            beta.size()
        )));
    }
    if alpha.dim() != beta.dim() {
        return Some(Error::Domain(format!(
            "measures disagree in field \"n\": {} vs {}",
            alpha.dim(),
            beta.dim()
        )));
    }
    None
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serialization cannot fail")
    );
}

fn compute_sliced(
    alpha: &EmpiricalMeasure,
    beta: &EmpiricalMeasure,
    method: Option<SlicedMethodArg>,
    samples: u64,
    seed: u64,
) -> Result<SlicedEstimate> {
    let method = method.unwrap_or(if alpha.dim() == 2 {
        SlicedMethodArg::Exact2d
    } else {
        SlicedMethodArg::Mc
    });
    match method {
        SlicedMethodArg::Exact2d => sw1_exact_2d(alpha, beta),
        SlicedMethodArg::Mc => sw1_monte_carlo(alpha, beta, samples, seed),
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::W1 { alpha, beta } => {
            let a = load_measure(&alpha)?;
            let b = load_measure(&beta)?;
            if let Some(err) = compatibility_message(&a, &b) {
                return Err(err);
            }
            let (dist, matching) = w1(&a, &b)?;
            print_json(&W1Output {
                w1: dist,
                matching: matching.permutation,
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Sw1 {
            alpha,
            beta,
            method,
            samples,
            seed,
        } => {
            let a = load_measure(&alpha)?;
            let b = load_measure(&beta)?;
            if let Some(err) = compatibility_message(&a, &b) {
                return Err(err);
            }
            let estimate = compute_sliced(&a, &b, method, samples, seed)?;
            print_json(&estimate);
            Ok(ExitCode::SUCCESS)
        }
        Command::Kappa { n } => {
            let dim = Dimension::new(n)?;
            print_json(&KappaOutput {
                n,
                kappa: kappa(dim),
                sphere_area: sphere_area(dim),
                cap_expectation: cap_expectation(dim).ok(),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyBounds(args) => {
            let config = CampaignConfig {
                n: args.n,
                k: args.k,
                trials: args.trials,
                num_samples: args.samples,
                seed: args.seed,
                distribution: args.dist.parse::<PointDistribution>()?,
            };
            let report = run_campaign(&config)?;
            let json = serde_json::to_string(&report).expect("report serialization cannot fail");
            println!("{json}");
            if let Some(path) = args.output {
                std::fs::write(&path, format!("{json}\n")).map_err(|e| {
                    Error::InvalidConfig(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            if report.violations > 0 {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Embed {
            measures,
            method,
            samples,
            seed,
        } => {
            let list = io::measures_from_json(&read_file(&measures)?)?;
            if list.is_empty() {
                return Err(Error::Empty("embed needs at least one measure"));
            }
            let method = match method.unwrap_or(if list[0].dim() == 2 {
                SlicedMethodArg::Exact2d
            } else {
                SlicedMethodArg::Mc
            }) {
                SlicedMethodArg::Exact2d => KernelMethod::Exact2d,
                SlicedMethodArg::Mc => KernelMethod::MonteCarlo {
                    num_samples: samples,
                    seed,
                },
            };
            let kernel = build_kernel(&list, method)?;
            // Monte-Carlo kernels carry sampling noise; widen the NSD gate
            // accordingly so estimator jitter is not reported as failure.
            let tol = NSD_REL_TOL + 4.0 * kernel.max_std_error();
            let result = embed_finite_set_with_tol(&kernel, tol)?;
            print_json(&result);
            Ok(ExitCode::SUCCESS)
        }
        Command::QuotientDist { group, x, y } => {
            let g = io::group_from_json(&read_file(&group)?)?;
            let px = io::point_from_json(&read_file(&x)?)?;
            let py = io::point_from_json(&read_file(&y)?)?;
            let check = g.check_isometric_reduction(&px, &py)?;
            print_json(&QuotientOutput {
                quotient_distance: check.quotient,
                orbit_w1: check.wasserstein,
                reduction_ok: check.ok,
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            dist,
            n,
            k,
            count,
            seed,
            out,
        } => {
            let distribution = dist.parse::<PointDistribution>()?;
            if n == 0 || k == 0 {
                return Err(Error::InvalidConfig("gen needs n >= 1 and k >= 1".into()));
            }
            std::fs::create_dir_all(&out).map_err(|e| {
                Error::InvalidConfig(format!("cannot create {}: {e}", out.display()))
            })?;
            let mut files = Vec::with_capacity(count);
            for i in 0..count {
                let mut stream = swemb::rng::CounterStream::new(seed, i as u64);
                let measure = sample_measure(distribution, n, k, &mut stream);
                let path = out.join(format!("measure_{i:03}.json"));
                std::fs::write(&path, format!("{}\n", io::measure_to_json(&measure))).map_err(
                    |e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())),
                )?;
                files.push(path.display().to_string());
            }
            print_json(&GenOutput { files });
            Ok(ExitCode::SUCCESS)
        }
    }
}
