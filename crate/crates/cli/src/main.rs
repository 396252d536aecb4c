use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use permlab_core::samplers::{DistributionSpec, RngStream};
use permlab_core::shape::{g_function, solve_theta, ScaledProfile};
use permlab_core::subseq::{lcs, lis, rsk_shape};
use permlab_core::twstat::CdfTable;
use permlab_core::Permutation;

use permlab::config::{ConfigError, ExperimentConfig, ExperimentKind};
use permlab::experiments::{run_experiment, run_fluctuation_experiment};
use permlab::report::{f2_checksum, ExperimentReport};

#[derive(Parser)]
#[command(name = "permlab", version, about = "Monte Carlo laboratory for LIS/LCS statistics of random permutations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw permutations from a distribution spec (JSON file).
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Longest increasing subsequence of the permutation on stdin.
    Lis,
    /// Longest common subsequence of two permutations read from files.
    Lcs { a: PathBuf, b: PathBuf },
    /// Insertion-tableau shape of the permutation on stdin.
    Rsk {
        /// Also write the rotated profile as CSV (x,height).
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
    /// Solve for the lower-bound constant theta.
    Theta,
    /// Evaluate the area function G at gamma.
    Gfun {
        #[arg(long)]
        gamma: f64,
    },
    /// Run the Monte Carlo experiment named in the config.
    Mc {
        #[arg(long)]
        config: PathBuf,
        /// Replacement F2 table (CSV with header "s,F2").
        #[arg(long)]
        f2_table: Option<PathBuf>,
    },
    /// Run the pathwise invariant suite; nonzero exit on violations.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_permutation_stdin() -> Result<Permutation> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    text.trim().parse().context("invalid permutation on stdin")
}

fn read_permutation_file(path: &PathBuf) -> Result<Permutation> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?
        .trim()
        .parse()
        .with_context(|| format!("invalid permutation in {}", path.display()))
}

fn write_report(report: &ExperimentReport) -> Result<()> {
    match &report.config.output_path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("creating {path}"))?;
            report.write_json(file)?;
            if let Some(csv_path) = path.strip_suffix(".json") {
                report.write_csv(std::fs::File::create(format!("{csv_path}.csv"))?)?;
            }
        }
        None => report.write_json(std::io::stdout().lock())?,
    }
    Ok(())
}

/// Exit code 2 for configuration problems, 1 for everything else.
fn classify(err: &anyhow::Error) -> u8 {
    if err.is::<ConfigError>() {
        2
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Sample { spec, seed, count } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let spec: DistributionSpec = serde_json::from_str(&text)
                .map_err(ConfigError::Parse)
                .context("parsing distribution spec")?;
            spec.validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            for i in 0..count {
                let mut rng = RngStream::new(seed, i).rng();
                println!("{}", spec.sample(&mut rng));
            }
        }
        Command::Lis => println!("{}", lis(&read_permutation_stdin()?)),
        Command::Lcs { a, b } => {
            let pa = read_permutation_file(&a)?;
            let pb = read_permutation_file(&b)?;
            println!("{}", lcs(&pa, &pb).context("computing lcs")?);
        }
        Command::Rsk { profile_csv } => {
            let shape = rsk_shape(&read_permutation_stdin()?);
            println!("{}", serde_json::to_string(&shape)?);
            if let Some(path) = profile_csv {
                let profile = ScaledProfile::from_shape(&shape);
                let mut out = String::from("x,height\n");
                for (x, h) in profile.breakpoints() {
                    out.push_str(&format!("{x},{h}\n"));
                }
                std::fs::write(&path, out)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Theta => {
            let theta = solve_theta();
            let two_sqrt = 2.0 * theta.sqrt();
            let residual = (g_function(two_sqrt).expect("in domain") - (2.0 + theta) / 12.0).abs();
            println!(
                "{}",
                serde_json::json!({
                    "theta": theta,
                    "two_sqrt_theta": two_sqrt,
                    "residual": residual,
                })
            );
        }
        Command::Gfun { gamma } => {
            let g = g_function(gamma)
                .map_err(|e| ConfigError::Invalid(e.to_string()))
                .context("evaluating G")?;
            println!("{}", serde_json::json!({ "gamma": gamma, "G": g }));
        }
        Command::Mc { config, f2_table } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let report = match f2_table {
                Some(path) if cfg.experiment == ExperimentKind::Fluctuation => {
                    let csv = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let table = CdfTable::from_csv(&csv)
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                    let mut report = run_fluctuation_experiment(&cfg, &table)?;
                    report.meta.f2_checksum = f2_checksum(&csv);
                    report
                }
                _ => run_experiment(&cfg)?,
            };
            write_report(&report)?;
        }
        Command::Check { config } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            cfg.experiment = ExperimentKind::InvariantSuite;
            let report = run_experiment(&cfg)?;
            let violations = report.aggregates["total_violations"];
            write_report(&report)?;
            if violations > 0.0 {
                bail!("{violations} invariant violation(s)");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
