//! Benchmark sweeps comparing the fast path against repeated squaring:
//! random prime-power instances, a parameter sweep at a fixed instance, and
//! the family m = P(n)^n where the step ratio grows like sqrt(log m).
//!
//! Instrumented multiplication counts are the primary metric; wall time is
//! recorded as the median over repeats after a warmup run. Every sweep
//! cross-checks the fast residue against the baseline and refuses to emit
//! a point on mismatch.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exp::{fast_mod_exp, fast_mod_exp_counted, mod_exp_baseline, mod_exp_baseline_counted};
use crate::inverse::InverseMode;
use crate::modulus::{FactoredModulus, ParameterVector, PrimalityCheck};
use crate::primality::{next_prime, primes_in_range};
use crate::steps::StepCount;
use crate::tuner::log2_big;

/// Default ceiling on modulus size for all sweeps.
pub const DEFAULT_MAX_MODULUS_BITS: u64 = 20_000;

/// One timing/step observation.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchPoint {
    pub p: BigUint,
    pub e: u32,
    pub t: u32,
    pub log10_m: f64,
    pub steps_fast: u64,
    pub steps_baseline: u64,
    pub time_fast_ns: u64,
    pub time_baseline_ns: u64,
    /// time_baseline_ns / time_fast_ns.
    pub ratio: f64,
}

/// Median wall time of `f` over `repeats` runs (at least 3) after one
/// warmup, in nanoseconds.
fn median_time_ns(repeats: u32, mut f: impl FnMut()) -> u64 {
    f();
    let repeats = repeats.max(3);
    let mut samples: Vec<u64> = (0..repeats)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_nanos() as u64
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2].max(1)
}

struct Measurement {
    steps_fast: u64,
    steps_baseline: u64,
    time_fast_ns: u64,
    time_baseline_ns: u64,
}

/// Counted runs for both algorithms plus timed medians; errors out if the
/// residues disagree.
fn measure(
    fm: &FactoredModulus,
    tv: &ParameterVector,
    a: &BigUint,
    n: &BigUint,
    repeats: u32,
) -> Result<Measurement> {
    let (fast_residue, fast_steps) = fast_mod_exp_counted(a, n, fm, tv, InverseMode::Recursive)?;
    let mut baseline_steps = StepCount::new();
    let baseline_residue = mod_exp_baseline_counted(a, n, fm.value(), &mut baseline_steps);
    if fast_residue != baseline_residue {
        return Err(Error::ResidueMismatch(format!(
            "m={} a={a} n={n}: fast {fast_residue} vs baseline {baseline_residue}",
            fm.value()
        )));
    }
    let time_fast_ns = median_time_ns(repeats, || {
        fast_mod_exp(a, n, fm, tv, InverseMode::Recursive).expect("validated above");
    });
    let time_baseline_ns = median_time_ns(repeats, || {
        mod_exp_baseline(a, n, fm.value());
    });
    Ok(Measurement {
        steps_fast: fast_steps.multiplications,
        steps_baseline: baseline_steps.multiplications,
        time_fast_ns,
        time_baseline_ns,
    })
}

fn bench_point(p: &BigUint, e: u32, t: u32, m: &Measurement, modulus: &BigUint) -> BenchPoint {
    BenchPoint {
        p: p.clone(),
        e,
        t,
        log10_m: log2_big(modulus) * std::f64::consts::LOG10_2,
        steps_fast: m.steps_fast,
        steps_baseline: m.steps_baseline,
        time_fast_ns: m.time_fast_ns,
        time_baseline_ns: m.time_baseline_ns,
        ratio: m.time_baseline_ns as f64 / m.time_fast_ns as f64,
    }
}

fn check_cap(m: &BigUint, cap_bits: u64) -> Result<()> {
    if m.bits() > cap_bits {
        return Err(Error::Resource(format!(
            "modulus has {} bits, over the {cap_bits}-bit cap",
            m.bits()
        )));
    }
    Ok(())
}

/// Base coprime to p and exponent, both uniform in [m/2, m).
fn random_instance(rng: &mut ChaCha8Rng, m: &BigUint, p: &BigUint) -> (BigUint, BigUint) {
    let half = m >> 1;
    let a = loop {
        let candidate = rng.gen_biguint_range(&half, m);
        if !(&candidate % p).is_zero() {
            break candidate;
        }
    };
    let n = rng.gen_biguint_range(&half, m);
    (a, n)
}

#[derive(Debug, Clone)]
pub struct PrimeSweepConfig {
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub iterations: u32,
    pub seed: u64,
    pub repeats: u32,
    pub max_modulus_bits: u64,
}

impl Default for PrimeSweepConfig {
    fn default() -> Self {
        PrimeSweepConfig {
            prime_lo: 1_000,
            prime_hi: 100_000,
            iterations: 50,
            seed: 0,
            repeats: 5,
            max_modulus_bits: DEFAULT_MAX_MODULUS_BITS,
        }
    }
}

/// Random prime-power instances: p uniform over the primes in range, the
/// exponent uniform in [ln p - sqrt(ln p), ln p + sqrt(ln p)] rounded to
/// the nearest integer (at least 1), base and exponent in [m/2, m), t = 1.
pub fn sweep_primes(cfg: &PrimeSweepConfig) -> Result<Vec<BenchPoint>> {
    if cfg.iterations < 1 {
        return Err(Error::Domain("need at least one iteration".into()));
    }
    let primes = primes_in_range(cfg.prime_lo, cfg.prime_hi);
    if primes.is_empty() {
        return Err(Error::Domain(format!(
            "no primes in [{}, {}]",
            cfg.prime_lo, cfg.prime_hi
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = Vec::with_capacity(cfg.iterations as usize);
    for _ in 0..cfg.iterations {
        let p = primes[rng.gen_range(0..primes.len())];
        let ln_p = (p as f64).ln();
        let width = ln_p.sqrt();
        let e = rng.gen_range(ln_p - width..=ln_p + width).round().max(1.0) as u32;
        let p_big = BigUint::from(p);
        let fm = FactoredModulus::from_parts(vec![p_big.clone()], vec![e], PrimalityCheck::Trusted)?;
        check_cap(fm.value(), cfg.max_modulus_bits)?;
        let tv = ParameterVector::all_ones(&fm);
        let (a, n) = random_instance(&mut rng, fm.value(), &p_big);
        let m = measure(&fm, &tv, &a, &n, cfg.repeats)?;
        points.push(bench_point(&p_big, e, 1, &m, fm.value()));
    }
    Ok(points)
}

/// Scalar-parameter sweep at a fixed instance: one point per t, the
/// baseline measured once and shared. All residues are cross-checked
/// against it inside [`measure`].
pub fn sweep_t(
    p: &BigUint,
    e: u32,
    a: &BigUint,
    n: &BigUint,
    t_lo: u32,
    t_hi: u32,
    repeats: u32,
) -> Result<Vec<BenchPoint>> {
    let fm = FactoredModulus::from_parts(vec![p.clone()], vec![e], PrimalityCheck::Trusted)?;
    check_cap(fm.value(), DEFAULT_MAX_MODULUS_BITS)?;
    let mut points = Vec::new();
    for t in t_lo..=t_hi {
        let tv = ParameterVector::new(&fm, vec![t])?;
        let m = measure(&fm, &tv, a, n, repeats)?;
        points.push(bench_point(p, e, t, &m, fm.value()));
    }
    Ok(points)
}

#[derive(Debug, Clone)]
pub struct SqrtFamilyConfig {
    pub n_lo: u32,
    pub n_hi: u32,
    pub seed: u64,
    pub repeats: u32,
    pub max_modulus_bits: u64,
}

impl Default for SqrtFamilyConfig {
    fn default() -> Self {
        SqrtFamilyConfig {
            n_lo: 2,
            n_hi: 20,
            seed: 0,
            repeats: 5,
            max_modulus_bits: DEFAULT_MAX_MODULUS_BITS,
        }
    }
}

/// The family m = P(n)^n with P(n) the first prime above 10^n: exponents
/// scale with log p, the regime where the step ratio follows c*sqrt(log m).
pub fn sweep_sqrt_family(cfg: &SqrtFamilyConfig) -> Result<Vec<BenchPoint>> {
    if cfg.n_lo < 1 || cfg.n_lo > cfg.n_hi {
        return Err(Error::Domain(format!(
            "invalid family range [{}, {}]",
            cfg.n_lo, cfg.n_hi
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = Vec::with_capacity((cfg.n_hi - cfg.n_lo + 1) as usize);
    for n in cfg.n_lo..=cfg.n_hi {
        let p = next_prime(&BigUint::from(10u32).pow(n));
        let fm = FactoredModulus::from_parts(vec![p.clone()], vec![n], PrimalityCheck::Trusted)?;
        check_cap(fm.value(), cfg.max_modulus_bits)?;
        let tv = ParameterVector::all_ones(&fm);
        let (a, exp) = random_instance(&mut rng, fm.value(), &p);
        let m = measure(&fm, &tv, &a, &exp, cfg.repeats)?;
        points.push(bench_point(&p, n, 1, &m, fm.value()));
    }
    Ok(points)
}

pub const CSV_HEADER: &str =
    "p,e,t,log10_m,steps_fast,steps_baseline,time_fast_ns,time_baseline_ns,ratio";

/// Write points in the stable CSV schema, one row per point, newline
/// terminated.
pub fn write_csv(points: &[BenchPoint], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{CSV_HEADER}")?;
    for pt in points {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{},{}",
            pt.p,
            pt.e,
            pt.t,
            pt.log10_m,
            pt.steps_fast,
            pt.steps_baseline,
            pt.time_fast_ns,
            pt.time_baseline_ns,
            pt.ratio
        )?;
    }
    Ok(())
}
