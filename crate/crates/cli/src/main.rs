mod config;
mod output;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use swtomo::error::Error;
use swtomo::keyl::{verify_calibration, verify_diagonal_moments, verify_power_moment, verify_tomography_bounds, KeylContext};
use swtomo::linalg::{density_from_spectrum, DensityMatrix, UnitaryMatrix};
use swtomo::partition::{majorizes, Partition, ProbVec};
use swtomo::report::{BoundReport, CheckKind};
use swtomo::rng::{derive_seed, replicas};
use swtomo::schur_weyl::{sw_pmf, sw_sample};
use swtomo::spectrum::{verify_eyd_bound, verify_topk_bound, verify_topk_sum_bound};
use swtomo::suite::{random_state, run_criterion, verify_sw_coupling, Status, SuiteOptions, CRITERIA, TV_LIMIT};
use swtomo::{dyck, params};

use output::Sink;

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "swtomo", version, about = "Seeded Schur-Weyl sampling and tomography experiments")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed; every run is a deterministic function of it.
    #[arg(long)]
    seed: u64,
    /// Append JSON-lines reports here instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also append reports as CSV rows to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Spectrum {
    /// Comma-separated probabilities; sorted before use.
    #[arg(long, value_parser = parse_prob)]
    alpha: ProbVec,
    /// Dimension; if given it must equal the number of alpha entries.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    /// ρ = diag(α).
    Diagonal,
    /// ρ = U diag(α) U† for a Haar-random U fixed by the seed.
    Haar,
}

#[derive(Subcommand)]
enum Command {
    /// Sample Schur-Weyl shapes and compare with the exact pmf.
    SampleSw {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        /// Largest allowed total-variation distance.
        #[arg(long, default_value_t = TV_LIMIT)]
        tolerance: f64,
    },
    /// Empirical Young diagram estimator: E||λ/n - α||² ≤ d/n.
    Eyd {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
    },
    /// Top-k distance and top-k row sums.
    Topk {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
    },
    /// Keyl tomography: E||ρ̂ - ρ||_F² ≤ (4d - 3)/n.
    Tomography {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long, value_enum, default_value_t = Basis::Haar)]
        basis: Basis,
        #[arg(long)]
        n: usize,
        /// Number of sampled shapes.
        #[arg(long, default_value_t = 1000)]
        outer: usize,
        /// Importance-sampling draws per distinct shape.
        #[arg(long, default_value_t = 10_000)]
        inner: usize,
    },
    /// Rank-k tomography: E||ρ̂_k - ρ||₁ ≤ Σ_{i>k} α_i + 6√(kd/n).
    Pca {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long, value_enum, default_value_t = Basis::Haar)]
        basis: Basis,
        #[arg(long)]
        n: usize,
        /// One or more ranks, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        outer: usize,
        #[arg(long, default_value_t = 10_000)]
        inner: usize,
    },
    /// Keyl-distribution moments for a fixed shape.
    Moments {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long, value_enum, default_value_t = Basis::Haar)]
        basis: Basis,
        /// Shape λ, comma-separated rows.
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        /// Also check the power moment for this shape μ.
        #[arg(long, value_parser = parse_partition)]
        mu: Option<Partition>,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
    },
    /// Coupling of SW^n(α) and SW^n(β) with μ ⊵ λ, for β majorizing α.
    CouplingVerify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: Spectrum,
        #[arg(long, value_parser = parse_prob)]
        beta: ProbVec,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
    },
    /// Exhaustive check of the raising bijection on Dyck paths of length ≤ n.
    DyckBijection {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Runs the acceptance grid and prints one line per criterion.
    VerifyAll {
        #[command(flatten)]
        common: Common,
        /// Only these criteria, comma-separated.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        /// Tighten every bound by this factor before judging (harness check).
        #[arg(long, default_value_t = 1.0)]
        bound_factor: f64,
    },
}

fn parse_prob(s: &str) -> Result<ProbVec, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    ProbVec::new(v).map_err(|e| e.to_string())
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    Partition::new(v).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_)
            | Error::RejectionExhausted { .. }
            | Error::ZeroWeights
            | Error::NotHermitian(_)
            | Error::NotPsd(_)
            | Error::NotUnitary(_)
            | Error::RepeatedEntries
            | Error::ShapeMismatch => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl Spectrum {
    fn check(&self) -> Result<&ProbVec, Failure> {
        match self.d {
            Some(d) if d != self.alpha.dim() => Err(usage(format!("--d {d} but alpha has {} entries", self.alpha.dim()))),
            _ => Ok(&self.alpha),
        }
    }

    fn state(&self, basis: Basis, seed: u64) -> Result<DensityMatrix, Failure> {
        let alpha = self.check()?;
        Ok(match basis {
            Basis::Diagonal => density_from_spectrum(&alpha.sorted(), &UnitaryMatrix::identity(alpha.dim()))?,
            Basis::Haar => random_state(alpha.sorted().entries(), derive_seed(seed, 1))?,
        })
    }
}

fn positive(name: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        Err(usage(format!("--{name} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn sample_sw_report(alpha: &ProbVec, n: usize, reps: usize, tolerance: f64, seed: u64) -> Result<BoundReport, Failure> {
    let pmf = sw_pmf(n, alpha)?;
    let shapes = replicas(seed, reps, |r| sw_sample(n, alpha, r));
    let mut counts: HashMap<Partition, u64> = HashMap::new();
    for s in shapes {
        *counts.entry(s).or_insert(0) += 1;
    }
    let tv = pmf.tv_to_counts(&counts);
    let mut sorted: Vec<(&Partition, &u64)> = counts.iter().collect();
    sorted.sort();
    let hist: Vec<_> = sorted.iter().map(|(l, c)| json!([l.parts(), c])).collect();
    let params = params!("n" => n, "d" => alpha.dim(), "alpha" => alpha.sorted().entries(), "reps" => reps, "counts" => hist);
    let mut r = BoundReport::exact("sample_sw", "d_TV(empirical, SW^n(α)) ≤ tolerance", params, CheckKind::Upper, tv, tolerance, tv <= tolerance);
    r.n_reps = reps as u64;
    Ok(r)
}

/// Runs one subcommand, streaming reports to `sink`; returns whether every
/// report passed.
fn run(command: Command) -> Result<bool, Failure> {
    let mut all_pass = true;
    let mut criterion_failed = false;
    let mut emit = |sink: &mut Sink, r: BoundReport| -> Result<(), Failure> {
        all_pass &= r.pass;
        sink.write(&r)?;
        Ok(())
    };
    match command {
        Command::SampleSw { common, spectrum, n, reps, tolerance } => {
            let alpha = spectrum.check()?;
            positive("n", n)?;
            positive("reps", reps)?;
            let r = sample_sw_report(alpha, n, reps, tolerance, common.seed)?;
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            emit(&mut sink, r)?;
            sink.finish()?;
        }
        Command::Eyd { common, spectrum, n, reps } => {
            let alpha = spectrum.check()?;
            positive("n", n)?;
            let r = verify_eyd_bound(n, alpha, reps, common.seed)?;
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            emit(&mut sink, r)?;
            sink.finish()?;
        }
        Command::Topk { common, spectrum, n, k, reps } => {
            let alpha = spectrum.check()?;
            positive("n", n)?;
            let mut reports = vec![verify_topk_bound(n, alpha, k, reps, derive_seed(common.seed, 0))?];
            reports.extend(verify_topk_sum_bound(n, alpha, k, reps, derive_seed(common.seed, 1))?);
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for r in reports {
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::Tomography { common, spectrum, basis, n, outer, inner } => {
            positive("n", n)?;
            let rho = spectrum.state(basis, common.seed)?;
            let reports = verify_tomography_bounds(n, &rho, &[], outer, inner, common.seed)?;
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for r in reports {
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::Pca { common, spectrum, basis, n, k, outer, inner } => {
            positive("n", n)?;
            let d = spectrum.check()?.dim();
            if let Some(&bad) = k.iter().find(|&&k| k == 0 || k > d) {
                return Err(usage(format!("--k {bad} must lie in 1..={d}")));
            }
            let rho = spectrum.state(basis, common.seed)?;
            let reports = verify_tomography_bounds(n, &rho, &k, outer, inner, common.seed)?;
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for r in reports.into_iter().skip(1) {
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::Moments { common, spectrum, basis, lambda, mu, draws } => {
            let rho = spectrum.state(basis, common.seed)?;
            let ctx = KeylContext::new(lambda, rho)?;
            if let Some(mu) = &mu {
                if mu.len() > ctx.dim() {
                    return Err(usage(format!("--mu {mu} has more than {} rows", ctx.dim())));
                }
            }
            let mut reports = vec![verify_calibration(&ctx, draws, derive_seed(common.seed, 2))?];
            reports.extend(verify_diagonal_moments(&ctx, draws, derive_seed(common.seed, 3))?);
            if let Some(mu) = &mu {
                reports.push(verify_power_moment(&ctx, mu, draws, derive_seed(common.seed, 4))?);
            }
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for r in reports {
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::CouplingVerify { common, spectrum, beta, n, reps } => {
            let alpha = spectrum.check()?.sorted();
            let beta = beta.sorted();
            positive("n", n)?;
            positive("reps", reps)?;
            if beta.dim() != alpha.dim() {
                return Err(usage(format!("alpha has {} entries, beta {}", alpha.dim(), beta.dim())));
            }
            if !majorizes(beta.entries(), alpha.entries())? {
                return Err(usage("beta must majorize alpha"));
            }
            let (reports, _) = verify_sw_coupling(&alpha, &beta, n, reps, common.seed)?;
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for r in reports {
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::DyckBijection { common, n } => {
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            for m in 1..=n {
                let checked = dyck::verify_bijection(m);
                let cases = checked.as_ref().map_or(0, |c| *c);
                let mut r = BoundReport::exact(
                    "dyck_bijection",
                    "g(f(w, s)) = (w, s), f(w, s) dominates w, image multiplicities n - 2λ₂ + 1",
                    params!("n" => m, "pairs" => cases, "error" => checked.as_ref().err().map(|e| e.to_string())),
                    CheckKind::Equal,
                    if checked.is_ok() { 0.0 } else { 1.0 },
                    0.0,
                    checked.is_ok(),
                );
                r.n_reps = cases as u64;
                emit(&mut sink, r)?;
            }
            sink.finish()?;
        }
        Command::VerifyAll { common, criteria, bound_factor } => {
            if !(bound_factor.is_finite() && bound_factor > 0.0) {
                return Err(usage("--bound-factor must be positive"));
            }
            let known: Vec<u32> = CRITERIA.iter().map(|(i, _)| *i).collect();
            if let Some(bad) = criteria.iter().find(|c| !known.contains(c)) {
                return Err(usage(format!("no criterion {bad}")));
            }
            let ids: Vec<u32> = if criteria.is_empty() { known } else { criteria };
            let opts = SuiteOptions { seed: common.seed, bound_factor };
            let mut sink = Sink::open(common.out.as_deref(), common.csv.as_deref())?;
            let to_stdout = sink.to_stdout;
            let started = std::time::Instant::now();
            let mut tally = [0usize; 3];
            for id in ids {
                let outcome = run_criterion(id, &opts)?;
                let line = outcome.summary_line();
                if to_stdout {
                    eprintln!("{line}");
                } else {
                    println!("{line}");
                }
                tally[match outcome.status {
                    Status::Pass => 0,
                    Status::Fail => 1,
                    Status::NotApplicable => 2,
                }] += 1;
                for mut r in outcome.reports {
                    r.params.insert("criterion".into(), id.into());
                    emit(&mut sink, r)?;
                }
                criterion_failed |= outcome.status == Status::Fail;
            }
            sink.finish()?;
            let total = format!(
                "{} passed, {} failed, {} not applicable in {:.1}s",
                tally[0],
                tally[1],
                tally[2],
                started.elapsed().as_secs_f64()
            );
            if to_stdout {
                eprintln!("{total}");
            } else {
                println!("{total}");
            }
        }
    }
    Ok(all_pass && !criterion_failed)
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_errors_get_their_own_exit_code() {
        assert!(matches!(Failure::from(Error::ZeroWeights), Failure::Numerical(_)));
        let e = Error::RejectionExhausted { tries: 1, observed: 0.0, expected: 0.1 };
        assert!(matches!(Failure::from(e), Failure::Numerical(_)));
        assert!(matches!(Failure::from(Error::NotMajorized), Failure::Usage(_)));
        assert!(matches!(Failure::from(Error::Precondition("x".into())), Failure::Usage(_)));
    }

    #[test]
    fn parsers_validate() {
        assert!(parse_prob("0.5, 0.5").is_ok());
        assert!(parse_prob("0.5,x").is_err());
        assert!(parse_prob("1.2,-0.2").is_err());
        assert_eq!(parse_partition("3,1").unwrap().parts(), &[3, 1]);
        assert!(parse_partition("1,3").is_err());
    }
}
