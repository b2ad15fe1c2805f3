use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use strongfree_core::ensembles::{sample, EnsembleSpec};
use strongfree_core::freelimit::{free_add_convolve, free_compression, free_mult_convolve, measure_support};
use strongfree_core::spectral::{eig_unitary, empirical_cdf, hermitian_eigenvalues};
use strongfree_core::{EnsembleKind, Execution, NcPolynomial, Seed, SquareMatrix};
use strongfree_harness::measure_spec::MeasureSpec;
use strongfree_harness::oracle::norm_oracle;
use strongfree_harness::{emit_report, run_experiment_with, verify, ExperimentConfig, HarnessError, Result};

#[derive(Parser)]
#[command(name = "strongfree", version, about = "Random matrices against their free limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operation {
    Add,
    Mult,
    Compress,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one matrix from an ensemble.
    Sample {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        n: usize,
        /// `master` or `master:stream`.
        #[arg(long, default_value = "0")]
        seed: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of a stored matrix (arguments in [0, 2π) for unitaries).
    Spectrum {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Print the empirical distribution function instead.
        #[arg(long)]
        cdf: bool,
    },
    /// Free convolution or compression of measure specs.
    Convolve {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, value_enum, default_value = "add")]
        op: Operation,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1e-5)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form limit norm of a polynomial in free letters.
    NormOracle {
        expr: String,
        #[arg(long, default_value = "haar_unitary")]
        ensemble: String,
    },
    /// Run experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Check a report against its manifest.
    Verify {
        manifest: PathBuf,
        /// Skip re-running the experiment.
        #[arg(long)]
        no_rerun: bool,
    },
}

#[derive(Subcommand)]
enum ExperimentAction {
    Run {
        config: PathBuf,
        /// Overrides `output` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_seed(s: &str) -> Result<Seed> {
    let bad = || HarnessError::Config(format!("bad seed {s:?}"));
    let (m, st) = s.split_once(':').unwrap_or((s, "0"));
    Ok(Seed::new(m.trim().parse().map_err(|_| bad())?, st.trim().parse().map_err(|_| bad())?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sample {
            ensemble,
            n,
            seed,
            format,
            out,
        } => {
            let kind = EnsembleKind::parse(&ensemble)
                .ok_or_else(|| HarnessError::Config(format!("unknown ensemble {ensemble:?}")))?;
            let m = sample(&EnsembleSpec::new(kind, n), parse_seed(&seed)?)?;
            let w = output(out.as_deref())?;
            match format {
                Format::Csv => m.write_csv(w)?,
                Format::Binary => m.write_binary(w)?,
            }
        }
        Command::Spectrum { matrix, format, cdf } => {
            let f = BufReader::new(File::open(&matrix)?);
            let m = match format {
                Format::Csv => SquareMatrix::read_csv(f)?,
                Format::Binary => SquareMatrix::read_binary(f)?,
            }
            .detect_flags();
            let values = if m.is_hermitian() {
                hermitian_eigenvalues(&m)?
            } else if m.is_unitary() {
                eig_unitary(&m)?.arguments()
            } else {
                return Err(HarnessError::Config("matrix is neither hermitian nor unitary".into()));
            };
            let mut w = output(None)?;
            if cdf {
                empirical_cdf(&values)?.write_csv(&mut w)?;
            } else {
                for v in values {
                    writeln!(w, "{v:?}")?;
                }
            }
        }
        Command::Convolve {
            mu,
            nu,
            op,
            t,
            threshold,
            out,
        } => {
            let mu = MeasureSpec::parse(&mu)?.build()?;
            let need_nu = || -> Result<_> {
                MeasureSpec::parse(nu.as_deref().ok_or_else(|| HarnessError::Config("--nu is required".into()))?)?
                    .build()
            };
            let result = match op {
                Operation::Add => free_add_convolve(&mu, &need_nu()?)?,
                Operation::Mult => free_mult_convolve(&mu, &need_nu()?)?,
                Operation::Compress => {
                    free_compression(&mu, t.ok_or_else(|| HarnessError::Config("--t is required".into()))?)?
                }
            };
            let support = measure_support(&result, threshold)?;
            eprintln!(
                "mass {:.12} mean {:.9} variance {:.9} support {}",
                result.total_mass(),
                result.mean(),
                result.variance(),
                support.to_json()
            );
            let mut w = output(out.as_deref())?;
            result.write(&mut w)?;
        }
        Command::NormOracle { expr, ensemble } => {
            let poly: NcPolynomial = expr.parse()?;
            let kind = EnsembleKind::parse(&ensemble)
                .ok_or_else(|| HarnessError::Config(format!("unknown ensemble {ensemble:?}")))?;
            let o = norm_oracle(&poly, kind)?;
            println!("{} {:?}", o.kind, o.value);
        }
        Command::Experiment {
            action: ExperimentAction::Run {
                config,
                output,
                sequential,
            },
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let report = run_experiment_with(&cfg, exec)?;
            print!("{}", report.summary());
            let dir = output.or_else(|| cfg.output().map(PathBuf::from));
            if let Some(dir) = dir {
                let manifest = emit_report(&report, &dir)?;
                println!("wrote {}", manifest.display());
            }
            return Ok(report.passed());
        }
        Command::Verify { manifest, no_rerun } => {
            let v = verify(&manifest, !no_rerun)?;
            println!("digest {}", if v.digest_matches { "ok" } else { "MISMATCH" });
            println!("verdict {}", if v.verdict_matches { "ok" } else { "MISMATCH" });
            if let Some(r) = v.rerun_matches {
                println!("rerun {}", if r { "ok" } else { "MISMATCH" });
            }
            return Ok(v.ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
