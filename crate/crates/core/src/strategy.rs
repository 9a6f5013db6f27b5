//! Exponentiation strategies behind one trait, registered by name and
//! selected at runtime (CLI flags, benchmark harness).

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exp::{fast_mod_exp_counted, mod_exp_baseline_counted};
use crate::inverse::InverseMode;
use crate::modulus::{FactoredModulus, ParameterVector};
use crate::steps::StepCount;

/// A scalar modular-exponentiation algorithm. Every strategy computes the
/// same residue; they differ in step profile and memory use.
pub trait ExpStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// a^n mod fm.value(), tallying operations into `count`.
    fn pow(
        &self,
        base: &BigUint,
        exp: &BigUint,
        fm: &FactoredModulus,
        tv: &ParameterVector,
        count: &mut StepCount,
    ) -> Result<BigUint>;
}

/// Repeated squaring; ignores the parameter vector.
pub struct Baseline;

impl ExpStrategy for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn pow(
        &self,
        base: &BigUint,
        exp: &BigUint,
        fm: &FactoredModulus,
        _tv: &ParameterVector,
        count: &mut StepCount,
    ) -> Result<BigUint> {
        Ok(mod_exp_baseline_counted(base, exp, fm.value(), count))
    }
}

/// Binomial series with the recursive inverse-pair table (the default).
pub struct FastRecursive;

/// Binomial series with extended-Euclid inverses; constant memory.
pub struct FastDirect;

fn fast_pow(
    mode: InverseMode,
    base: &BigUint,
    exp: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
    count: &mut StepCount,
) -> Result<BigUint> {
    let (residue, steps) = fast_mod_exp_counted(base, exp, fm, tv, mode)?;
    count.add(&steps);
    Ok(residue)
}

impl ExpStrategy for FastRecursive {
    fn name(&self) -> &'static str {
        "recursive"
    }

    fn pow(
        &self,
        base: &BigUint,
        exp: &BigUint,
        fm: &FactoredModulus,
        tv: &ParameterVector,
        count: &mut StepCount,
    ) -> Result<BigUint> {
        fast_pow(InverseMode::Recursive, base, exp, fm, tv, count)
    }
}

impl ExpStrategy for FastDirect {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn pow(
        &self,
        base: &BigUint,
        exp: &BigUint,
        fm: &FactoredModulus,
        tv: &ParameterVector,
        count: &mut StepCount,
    ) -> Result<BigUint> {
        fast_pow(InverseMode::Direct, base, exp, fm, tv, count)
    }
}

static STRATEGIES: [&dyn ExpStrategy; 3] = [&Baseline, &FastRecursive, &FastDirect];

/// All registered strategies.
pub fn all() -> &'static [&'static dyn ExpStrategy] {
    &STRATEGIES
}

/// Look a strategy up by its registered name.
pub fn find(name: &str) -> Result<&'static dyn ExpStrategy> {
    STRATEGIES
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
}
