//! xpow: modular exponentiation with a factored modulus, plus the matrix,
//! linear-recurrence and Gaussian-integer variants, a parameter tuner, and
//! benchmark sweeps.
//!
//! Exit codes: 0 success, 2 domain errors (non-coprime base, singular
//! matrix, unsupported prime), 3 parse/validation errors, 4 resource limits
//! and I/O failures.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use xpow_core::bench::{
    sweep_primes, sweep_sqrt_family, sweep_t, write_csv, PrimeSweepConfig, SqrtFamilyConfig,
};
use xpow_core::error::{Error, ErrorKind, Result};
use xpow_core::fit::{fit_sqrt_curve, fit_t_curve};
use xpow_core::gaussian::{gaussian_fast_exp, GaussianResidue};
use xpow_core::inverse::{direct_inverse_pair, InverseMode, InversePairTable};
use xpow_core::matrix::{mat_fast_exp, MatrixModM};
use xpow_core::modulus::{FactoredModulus, ParameterVector, PrimalityCheck};
use xpow_core::recurrence::{recurrence_term, RecurrenceSpec};
use xpow_core::sieve::{niven_average, DEFAULT_SIEVE_CAP};
use xpow_core::steps::StepCount;
use xpow_core::strategy;
use xpow_core::tuner::{calibrate_weights, cost_model, tune_parameters, CostWeights, InstantTimer};

/// Environment variable overriding the sieve memory cap (entries).
const SIEVE_CAP_VAR: &str = "XPOW_SIEVE_CAP";

#[derive(Parser)]
#[command(name = "xpow", version, about = "Fast modular exponentiation with factored modulus")]
struct Cli {
    /// Skip primality validation of --factors (structural checks remain).
    #[arg(long, global = true)]
    trust_factors: bool,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Suppress informational messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute BASE^EXP modulo the factored modulus.
    Modexp(ModexpArgs),
    /// Print inverse pairs 0..=UPTO as `i u v` lines.
    InversePairs(InversePairsArgs),
    /// Exponentiate a square matrix modulo the factored modulus.
    Matexp(MatexpArgs),
    /// Compute the INDEX-th term of a linear recurrence.
    Recurrence(RecurrenceArgs),
    /// Exponentiate a Gaussian integer modulo p^k.
    Gauss(GaussArgs),
    /// Choose the parameter vector minimizing the cost model.
    Tune(TuneArgs),
    /// Benchmark sweeps writing CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Statistics helpers.
    #[command(subcommand)]
    Stats(StatsCommand),
}

#[derive(Args)]
struct ModexpArgs {
    #[arg(long)]
    base: String,
    #[arg(long)]
    exp: String,
    /// Factorization grammar: p(^e)? joined by '*', e.g. 2^3*5*11^4.
    #[arg(long)]
    factors: String,
    /// Comma-separated parameters t_i; tuned automatically when omitted.
    #[arg(long)]
    t: Option<String>,
    /// Inverse-pair mode of the fast path.
    #[arg(long, default_value = "recursive")]
    mode: String,
    /// Use plain repeated squaring instead of the fast path.
    #[arg(long)]
    baseline: bool,
    /// Force direct (extended-Euclid) inverses for cross-checking.
    #[arg(long, conflicts_with = "mode")]
    paranoid: bool,
    /// Also print the operation tally.
    #[arg(long)]
    count_steps: bool,
}

#[derive(Args)]
struct InversePairsArgs {
    #[arg(long)]
    factors: String,
    #[arg(long)]
    upto: u64,
    #[arg(long, default_value = "recursive")]
    mode: String,
}

#[derive(Args)]
struct MatexpArgs {
    #[arg(long)]
    factors: String,
    /// Rows separated by ';', entries by ',', e.g. "1,1;1,0".
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    exp: String,
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args)]
struct RecurrenceArgs {
    /// Coefficients c_{d-1},...,c_0.
    #[arg(long)]
    coeffs: String,
    /// Initial terms u_0,...,u_{d-1}.
    #[arg(long)]
    init: String,
    #[arg(long)]
    index: String,
    #[arg(long)]
    factors: String,
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long)]
    re: String,
    #[arg(long)]
    im: String,
    #[arg(long)]
    exp: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    factors: String,
    /// Calibrate the cost weights by timing synthetic workloads.
    #[arg(long)]
    calibrate: bool,
    /// Explicit weights alpha,beta,overhead.
    #[arg(long, conflicts_with = "calibrate")]
    weights: Option<String>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Random prime-power instances with e near ln p.
    SweepPrimes(SweepPrimesArgs),
    /// Scalar-parameter sweep at a fixed instance.
    SweepT(SweepTArgs),
    /// The family m = P(n)^n with P(n) the first prime above 10^n.
    SweepSqrt(SweepSqrtArgs),
}

#[derive(Args)]
struct SweepPrimesArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 50)]
    iterations: u32,
    #[arg(long, default_value_t = 5)]
    repeats: u32,
    #[arg(long, default_value_t = 1_000)]
    p_min: u64,
    #[arg(long, default_value_t = 100_000)]
    p_max: u64,
}

#[derive(Args)]
struct SweepTArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "101")]
    p: String,
    #[arg(long, default_value_t = 200)]
    e: u32,
    #[arg(long, default_value = "13")]
    base: String,
    /// Exponent; defaults to floor(p^e / 3).
    #[arg(long)]
    exp: Option<String>,
    #[arg(long, default_value_t = 1)]
    t_min: u32,
    #[arg(long, default_value_t = 50)]
    t_max: u32,
    #[arg(long, default_value_t = 5)]
    repeats: u32,
}

#[derive(Args)]
struct SweepSqrtArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    #[arg(long, default_value_t = 20)]
    n_max: u32,
    #[arg(long, default_value_t = 5)]
    repeats: u32,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Average largest factorization exponent over 1..=limit.
    Niven {
        #[arg(long)]
        limit: u64,
    },
}

fn parse_biguint(text: &str, what: &str) -> Result<BigUint> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what}: {text:?} (decimal digits only)")))
}

fn parse_bigint_list(text: &str, what: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid {what} entry {part:?}")))
        })
        .collect()
}

fn parse_t_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid parameter {part:?}")))
        })
        .collect()
}

fn parse_weights(text: &str) -> Result<CostWeights> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "--weights wants alpha,beta,overhead; got {text:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid weight {p:?}")))
        })
        .collect::<Result<_>>()?;
    if nums[0] <= 0.0 || nums[1] <= 0.0 {
        return Err(Error::Parse("alpha and beta must be positive".into()));
    }
    Ok(CostWeights { alpha: nums[0], beta: nums[1], overhead: nums[2] })
}

fn parse_factors(text: &str, trust: bool) -> Result<FactoredModulus> {
    let check = if trust { PrimalityCheck::Trusted } else { PrimalityCheck::Strict };
    FactoredModulus::parse(text, check)
}

/// `--t` given: validate verbatim. Omitted: tune with the default weights.
fn choose_parameters(fm: &FactoredModulus, t: Option<&str>) -> Result<ParameterVector> {
    match t {
        Some(text) => ParameterVector::new(fm, parse_t_list(text)?),
        None => Ok(tune_parameters(fm, &CostWeights::default())),
    }
}

fn sieve_cap() -> u64 {
    std::env::var(SIEVE_CAP_VAR)
        .ok()
        .and_then(|value| value.parse().ok())
        .unwrap_or(DEFAULT_SIEVE_CAP)
}

fn run_modexp(cli: &Cli, args: &ModexpArgs) -> Result<()> {
    let base = parse_biguint(&args.base, "base")?;
    let exp = parse_biguint(&args.exp, "exponent")?;
    let fm = parse_factors(&args.factors, cli.trust_factors)?;
    let tv = choose_parameters(&fm, args.t.as_deref())?;

    let strategy_name = if args.baseline {
        "baseline"
    } else if args.paranoid {
        "direct"
    } else {
        match args.mode.as_str() {
            "recursive" => "recursive",
            "direct" => "direct",
            other => {
                return Err(Error::Parse(format!(
                    "unknown mode {other:?} (expected recursive|direct)"
                )))
            }
        }
    };
    let strategy = strategy::find(strategy_name)?;
    let mut count = StepCount::new();
    let residue = strategy.pow(&base, &exp, &fm, &tv, &mut count)?;
    println!("{residue}");
    if args.count_steps {
        println!("steps: {count}");
    }
    if !cli.quiet && args.t.is_none() {
        eprintln!("t: {}", join_t(tv.t()));
    }
    Ok(())
}

const MAX_LISTED_PAIRS: u64 = 10_000_000;

fn run_inverse_pairs(cli: &Cli, args: &InversePairsArgs) -> Result<()> {
    if args.upto < 1 {
        return Err(Error::Parse("--upto must be >= 1".into()));
    }
    if args.upto > MAX_LISTED_PAIRS {
        return Err(Error::Resource(format!(
            "--upto {} exceeds the {MAX_LISTED_PAIRS}-entry listing cap",
            args.upto
        )));
    }
    let fm = parse_factors(&args.factors, cli.trust_factors)?;
    let mode: InverseMode = args.mode.parse()?;
    let m = fm.value();
    match mode {
        InverseMode::Recursive => {
            let table = InversePairTable::generate(args.upto, m, fm.primes());
            for (i, pair) in table.pairs().iter().enumerate() {
                println!("{i} {} {}", pair.u, pair.v);
            }
        }
        InverseMode::Direct => {
            println!("0 0 0");
            for i in 1..=args.upto {
                let pair = direct_inverse_pair(i, m, fm.primes())?;
                println!("{i} {} {}", pair.u, pair.v);
            }
        }
    }
    Ok(())
}

fn run_matexp(cli: &Cli, args: &MatexpArgs) -> Result<()> {
    let fm = parse_factors(&args.factors, cli.trust_factors)?;
    let matrix = MatrixModM::parse(&args.matrix, fm.value())?;
    let exp = parse_biguint(&args.exp, "exponent")?;
    let tv = choose_parameters(&fm, args.t.as_deref())?;
    let result = mat_fast_exp(&matrix, &exp, &fm, &tv)?;
    println!("{result}");
    Ok(())
}

fn run_recurrence(cli: &Cli, args: &RecurrenceArgs) -> Result<()> {
    let fm = parse_factors(&args.factors, cli.trust_factors)?;
    let coeffs = parse_bigint_list(&args.coeffs, "coefficient")?;
    let init = parse_bigint_list(&args.init, "initial term")?;
    let spec = RecurrenceSpec::new(&coeffs, &init, fm.value())?;
    let index = parse_biguint(&args.index, "index")?;
    let tv = choose_parameters(&fm, args.t.as_deref())?;
    let term = recurrence_term(&spec, &index, &fm, &tv)?;
    println!("{term}");
    Ok(())
}

fn run_gauss(args: &GaussArgs) -> Result<()> {
    let p = parse_biguint(&args.p, "prime")?;
    let re = parse_biguint(&args.re, "real part")?;
    let im = parse_biguint(&args.im, "imaginary part")?;
    let exp = parse_biguint(&args.exp, "exponent")?;
    let z = GaussianResidue { re, im };
    let result = gaussian_fast_exp(&z, &exp, &p, args.k)?;
    println!("{result}");
    Ok(())
}

fn join_t(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn run_tune(cli: &Cli, args: &TuneArgs) -> Result<()> {
    let fm = parse_factors(&args.factors, cli.trust_factors)?;
    let weights = if args.calibrate {
        let mut timer = InstantTimer::new(&fm);
        let w = calibrate_weights(&mut timer)?;
        if !cli.quiet {
            eprintln!("weights: alpha={} beta={} overhead={}", w.alpha, w.beta, w.overhead);
        }
        w
    } else if let Some(text) = &args.weights {
        parse_weights(text)?
    } else {
        CostWeights::default()
    };
    let tv = tune_parameters(&fm, &weights);
    println!("{}", join_t(tv.t()));
    println!("cost: {}", cost_model(&fm, &tv, &weights));
    Ok(())
}

fn run_bench(cli: &Cli, command: &BenchCommand) -> Result<()> {
    match command {
        BenchCommand::SweepPrimes(args) => {
            let cfg = PrimeSweepConfig {
                prime_lo: args.p_min,
                prime_hi: args.p_max,
                iterations: args.iterations,
                seed: cli.seed,
                repeats: args.repeats,
                ..Default::default()
            };
            let points = sweep_primes(&cfg)?;
            write_csv(&points, &args.out)?;
            println!("{}", args.out.display());
            println!("points: {}", points.len());
        }
        BenchCommand::SweepT(args) => {
            let p = parse_biguint(&args.p, "prime")?;
            let base = parse_biguint(&args.base, "base")?;
            let exp = match &args.exp {
                Some(text) => parse_biguint(text, "exponent")?,
                None => p.pow(args.e) / BigUint::from(3u32),
            };
            let points = sweep_t(&p, args.e, &base, &exp, args.t_min, args.t_max, args.repeats)?;
            write_csv(&points, &args.out)?;
            println!("{}", args.out.display());
            let steps: Vec<(f64, f64)> = points
                .iter()
                .map(|pt| (f64::from(pt.t), pt.steps_fast as f64))
                .collect();
            let fit = fit_t_curve(&steps)?;
            println!(
                "fit: a={} b={} r2={}",
                fit.coefficients[0], fit.coefficients[1], fit.r_squared
            );
        }
        BenchCommand::SweepSqrt(args) => {
            let cfg = SqrtFamilyConfig {
                n_lo: args.n_min,
                n_hi: args.n_max,
                seed: cli.seed,
                repeats: args.repeats,
                ..Default::default()
            };
            let points = sweep_sqrt_family(&cfg)?;
            write_csv(&points, &args.out)?;
            println!("{}", args.out.display());
            let ratios: Vec<(f64, f64)> = points
                .iter()
                .map(|pt| (pt.log10_m, pt.steps_baseline as f64 / pt.steps_fast as f64))
                .collect();
            let fit = fit_sqrt_curve(&ratios)?;
            println!("fit: c={} r2={}", fit.coefficients[0], fit.r_squared);
        }
    }
    Ok(())
}

fn run_stats(command: &StatsCommand) -> Result<()> {
    match command {
        StatsCommand::Niven { limit } => {
            let average = niven_average(*limit, sieve_cap())?;
            println!("{average}");
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Modexp(args) => run_modexp(cli, args),
        Command::InversePairs(args) => run_inverse_pairs(cli, args),
        Command::Matexp(args) => run_matexp(cli, args),
        Command::Recurrence(args) => run_recurrence(cli, args),
        Command::Gauss(args) => run_gauss(args),
        Command::Tune(args) => run_tune(cli, args),
        Command::Bench(command) => run_bench(cli, command),
        Command::Stats(command) => run_stats(command),
    }
}

fn exit_code(error: &Error) -> i32 {
    match error.kind() {
        ErrorKind::Domain => 2,
        ErrorKind::Validation => 3,
        ErrorKind::Resource => 4,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind as ClapKind;
            let code = match err.kind() {
                ClapKind::DisplayHelp | ClapKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(error) = run(&cli) {
        eprintln!("error: {error}");
        std::process::exit(exit_code(&error));
    }
}
