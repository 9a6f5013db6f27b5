//! Scalar modular exponentiation: the repeated-squaring baseline and the
//! binomial-series fast path that exploits a known factorization.
//!
//! The fast path decomposes n = M*phi(T) + r for a chosen sub-modulus T of
//! m, lifts c = a^phi(T) - 1 (a multiple of T), and evaluates
//! sum_i C(M,i) c^i (mod m). Terms with i >= l vanish because T^l = 0
//! (mod m), so only l = max ceil(e_i/t_i) terms are ever computed.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::inverse::{
    direct_inverse_pair_counted, InverseMode, InversePair, InversePairTable,
};
use crate::modulus::{FactoredModulus, ParameterVector};
use crate::steps::StepCount;

/// Left-to-right square-and-multiply. `n = 0` yields `1 mod m`.
pub fn mod_exp_baseline(a: &BigUint, n: &BigUint, m: &BigUint) -> BigUint {
    let mut scratch = StepCount::new();
    mod_exp_baseline_counted(a, n, m, &mut scratch)
}

pub fn mod_exp_baseline_counted(
    a: &BigUint,
    n: &BigUint,
    m: &BigUint,
    count: &mut StepCount,
) -> BigUint {
    if n.is_zero() {
        return BigUint::one() % m;
    }
    let base = a % m;
    let mut result = base.clone();
    for bit in (0..n.bits() - 1).rev() {
        result = (&result * &result) % m;
        count.multiplications += 1;
        if n.bit(bit) {
            result = (&result * &base) % m;
            count.multiplications += 1;
        }
    }
    result
}

/// Exact number of nonzero series terms: `l = max_i ceil(e_i / t_i)`.
/// T^l = 0 (mod m) while T^(l-1) is not.
pub fn series_length(fm: &FactoredModulus, tv: &ParameterVector) -> u32 {
    fm.exponents()
        .iter()
        .zip(tv.t())
        .map(|(&e, &t)| e.div_ceil(t))
        .max()
        .expect("non-empty factorization")
}

/// Running state of the binomial-series evaluation.
#[derive(Debug, Clone)]
pub struct SeriesState {
    /// Exponent quotient M in n = M*phi + r.
    pub quotient: BigUint,
    /// Exponent remainder r < phi.
    pub remainder: BigUint,
    /// c = (a^phi - 1) mod m; divisible by T as an integer.
    pub lifted: BigUint,
    /// Series length l.
    pub length: u32,
    /// Running binomial coefficient C(M, i) mod m.
    pub binom: BigUint,
    /// Running power c^i mod m.
    pub power: BigUint,
    /// Partial sum of C(M, j) c^j over j <= i.
    pub acc: BigUint,
    /// Next term index i.
    pub index: u64,
}

impl SeriesState {
    fn new(quotient: BigUint, remainder: BigUint, lifted: BigUint, length: u32) -> Self {
        SeriesState {
            quotient,
            remainder,
            lifted,
            length,
            binom: BigUint::one(),
            power: BigUint::one(),
            acc: BigUint::zero(),
            index: 0,
        }
    }

    /// Scratch state with representative operand sizes for timing workloads;
    /// the values carry no arithmetic meaning.
    pub fn new_for_timing(operand: &BigUint, m: &BigUint) -> Self {
        let mut state = Self::new(m * 2u32, BigUint::zero(), operand % m, 0);
        state.binom = operand % m;
        state.power = (operand + BigUint::one()) % m;
        state
    }

    /// Add term `index` to the accumulator, then advance the running power
    /// and binomial coefficient using the inverse pair of `index + 1`.
    /// The binomial update reduces first, integer-divides by v, then
    /// multiplies by u, matching the recursion the series is built on.
    pub fn step(&mut self, m: &BigUint, next_pair: &InversePair, count: &mut StepCount) {
        self.acc = (&self.acc + &self.binom * &self.power) % m;
        count.multiplications += 1;

        self.power = (&self.power * &self.lifted) % m;
        count.multiplications += 1;

        let factor = (&self.quotient - self.index) % m;
        let scaled = (&self.binom * factor) % m;
        count.multiplications += 1;
        let quotient = scaled / BigUint::from(next_pair.v);
        count.divisions += 1;
        self.binom = (quotient * &next_pair.u) % m;
        count.multiplications += 1;

        self.index += 1;
    }
}

fn fast_mod_exp_impl(
    a: &BigUint,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
    mode: InverseMode,
    terms: u32,
    count: &mut StepCount,
) -> Result<BigUint> {
    tv.validate_for(fm)?;
    let m = fm.value();
    if !a.gcd(m).is_one() {
        return Err(Error::NotCoprime { base: a.clone(), modulus: m.clone() });
    }
    let a = a % m;

    let (quotient, remainder) = n.div_rem(tv.phi());
    // M = 0 makes the series identically 1: skip the a^phi computation and
    // answer with plain repeated squaring on the (small) remainder.
    if quotient.is_zero() && terms >= 1 {
        return Ok(mod_exp_baseline_counted(&a, &remainder, m, count));
    }
    let a_phi = mod_exp_baseline_counted(&a, tv.phi(), m, count);
    // a is a unit, so a^phi lands in [1, m) and the subtraction is safe.
    let lifted = a_phi - BigUint::one();
    // Euler guarantees T | a^phi(T) - 1 when the listed factors really are
    // prime; a failure here means the factorization was trusted and wrong.
    if !(&lifted % tv.sub_modulus()).is_zero() {
        return Err(Error::Domain(format!(
            "a^phi(T) is not 1 modulo T = {}; the factorization of {} is inconsistent",
            tv.sub_modulus(),
            m
        )));
    }

    // C(M, i) = 0 for i > M, so the series ends at min(terms, M + 1).
    let term_bound = (&quotient + BigUint::one())
        .to_u64()
        .unwrap_or(u64::MAX)
        .min(u64::from(terms));

    let table = match mode {
        InverseMode::Recursive if term_bound >= 1 => Some(InversePairTable::generate_counted(
            term_bound,
            m,
            fm.primes(),
            count,
        )),
        _ => None,
    };

    let mut state = SeriesState::new(quotient, remainder, lifted, terms);
    while state.index < term_bound {
        let next_index = state.index + 1;
        let pair = match &table {
            Some(table) => table.get(next_index)?.clone(),
            None => direct_inverse_pair_counted(next_index, m, fm.primes(), count)?,
        };
        state.step(m, &pair, count);
    }

    let a_r = mod_exp_baseline_counted(&a, &state.remainder, m, count);
    count.multiplications += 1;
    Ok((state.acc * a_r) % m)
}

/// a^n mod m via the binomial series; agrees with [`mod_exp_baseline`] for
/// every coprime base. Requires gcd(a, m) = 1.
pub fn fast_mod_exp(
    a: &BigUint,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
    mode: InverseMode,
) -> Result<BigUint> {
    let mut scratch = StepCount::new();
    fast_mod_exp_impl(a, n, fm, tv, mode, series_length(fm, tv), &mut scratch)
}

/// As [`fast_mod_exp`], additionally reporting the operation tally.
pub fn fast_mod_exp_counted(
    a: &BigUint,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
    mode: InverseMode,
) -> Result<(BigUint, StepCount)> {
    let mut count = StepCount::new();
    let residue = fast_mod_exp_impl(a, n, fm, tv, mode, series_length(fm, tv), &mut count)?;
    Ok((residue, count))
}

/// Diagnostic entry point with an explicit series term count, used to probe
/// truncation: `terms = series_length(..)` reproduces [`fast_mod_exp`],
/// fewer terms must break at least one input, more terms never change
/// anything.
pub fn fast_mod_exp_truncated(
    a: &BigUint,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
    mode: InverseMode,
    terms: u32,
) -> Result<BigUint> {
    let mut scratch = StepCount::new();
    fast_mod_exp_impl(a, n, fm, tv, mode, terms, &mut scratch)
}
