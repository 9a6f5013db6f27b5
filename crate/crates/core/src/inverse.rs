//! Inverse pairs: (u, v) records where v collects the prime-power part of an
//! index and u inverts the remaining coprime part modulo m. They let the
//! binomial recursion "divide" by indices that share factors with m.
//!
//! Two construction modes exist behind one interface: a recursive table
//! build (linear time, O(l) memory) and a direct extended-Euclid mode (O(1)
//! memory). The recursive formula is implemented verbatim, including its
//! integer division step; individual u entries may disagree with the true
//! inverse on non-coprime moduli, and the exponentiation result is still
//! exact (see the regression tests here and the end-to-end suites).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::steps::StepCount;

/// How inverse pairs are produced during series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMode {
    /// Table recursion; the default fast path.
    #[default]
    Recursive,
    /// Extended Euclid per index; constant memory.
    Direct,
}

impl std::str::FromStr for InverseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursive" => Ok(InverseMode::Recursive),
            "direct" => Ok(InverseMode::Direct),
            other => Err(Error::Parse(format!(
                "unknown inverse mode {other:?} (expected recursive|direct)"
            ))),
        }
    }
}

/// One (u, v) record. v is the product of the modulus-prime powers inside
/// the index and always fits a machine word because it divides the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversePair {
    pub u: BigUint,
    pub v: u64,
}

impl InversePair {
    fn sentinel() -> Self {
        InversePair { u: BigUint::zero(), v: 0 }
    }

    fn unit() -> Self {
        InversePair { u: BigUint::one(), v: 1 }
    }
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
pub fn ext_gcd(a: &BigUint, b: &BigUint) -> (BigUint, BigInt, BigInt) {
    let (mut old_r, mut r) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mut old_x, mut x) = (BigInt::one(), BigInt::zero());
    let (mut old_y, mut y) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = &old_x - &q * &x;
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = &old_y - &q * &y;
        old_y = std::mem::replace(&mut y, next_y);
    }
    (old_r.to_biguint().expect("gcd is non-negative"), old_x, old_y)
}

/// Inverse of a modulo m, if it exists.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let (g, x, _) = ext_gcd(a, m);
    if !g.is_one() {
        return None;
    }
    let m_int = BigInt::from(m.clone());
    let reduced = ((x % &m_int) + &m_int) % &m_int;
    debug_assert!(!reduced.is_negative());
    reduced.to_biguint()
}

/// Product of `p^valuation(i, p)` over the modulus primes.
pub fn v_part(i: u64, primes: &[BigUint]) -> u64 {
    debug_assert!(i >= 1);
    let mut v = 1u64;
    for p in primes {
        let Some(p) = p.to_u64() else { continue };
        if p > i {
            continue;
        }
        let mut rest = i;
        while rest.is_multiple_of(p) {
            rest /= p;
            v *= p;
        }
    }
    v
}

fn pair_at(pairs: &[InversePair], index: u64) -> Result<&InversePair> {
    pairs
        .get(index as usize)
        .ok_or(Error::Index { needed: index, len: pairs.len() })
}

/// One step of the table recursion: the pair of `i` from the pairs of
/// `0..i`. Implements the recursive formula exactly, integer division
/// included.
pub fn next_inverse_pair(
    i: u64,
    m: &BigUint,
    pairs: &[InversePair],
    primes: &[BigUint],
) -> Result<InversePair> {
    let mut scratch = StepCount::new();
    next_inverse_pair_counted(i, m, pairs, primes, &mut scratch)
}

pub(crate) fn next_inverse_pair_counted(
    i: u64,
    m: &BigUint,
    pairs: &[InversePair],
    primes: &[BigUint],
    count: &mut StepCount,
) -> Result<InversePair> {
    debug_assert!(i >= 2);
    let v = v_part(i, primes);
    if v == 1 {
        let i_big = BigUint::from(i);
        let r = (m % &i_big)
            .to_u64()
            .expect("m mod i fits: it is below i");
        let prev = pair_at(pairs, r)?;
        if prev.v == 0 {
            return Err(Error::Domain(format!(
                "recursion reached the zero sentinel at index {i}"
            )));
        }
        let quotient = (m - m / &i_big) / BigUint::from(prev.v);
        count.divisions += 1;
        let u = (&prev.u * quotient) % m;
        count.multiplications += 1;
        Ok(InversePair { u, v: 1 })
    } else {
        let prev = pair_at(pairs, i / v)?;
        Ok(InversePair { u: prev.u.clone(), v })
    }
}

/// The pair of `i` by extended Euclid: v is split off, the coprime part is
/// inverted directly. Always a true inverse: (i/v) * u = 1 (mod m).
pub fn direct_inverse_pair(i: u64, m: &BigUint, primes: &[BigUint]) -> Result<InversePair> {
    let mut scratch = StepCount::new();
    direct_inverse_pair_counted(i, m, primes, &mut scratch)
}

pub(crate) fn direct_inverse_pair_counted(
    i: u64,
    m: &BigUint,
    primes: &[BigUint],
    count: &mut StepCount,
) -> Result<InversePair> {
    debug_assert!(i >= 1);
    let v = v_part(i, primes);
    let coprime_part = BigUint::from(i / v);
    count.inversions += 1;
    let u = mod_inverse(&coprime_part, m).ok_or_else(|| Error::NotCoprime {
        base: coprime_part.clone(),
        modulus: m.clone(),
    })?;
    Ok(InversePair { u, v })
}

/// Table of inverse pairs for indices 0..=l.
#[derive(Debug, Clone)]
pub struct InversePairTable {
    pairs: Vec<InversePair>,
    modulus: BigUint,
    primes: Vec<BigUint>,
}

impl InversePairTable {
    /// Build the table for 0..=l with the recursion, seeded with the
    /// sentinel pair (0,0) and the unit pair (1,1).
    pub fn generate(l: u64, m: &BigUint, primes: &[BigUint]) -> Self {
        let mut scratch = StepCount::new();
        Self::generate_counted(l, m, primes, &mut scratch)
    }

    pub(crate) fn generate_counted(
        l: u64,
        m: &BigUint,
        primes: &[BigUint],
        count: &mut StepCount,
    ) -> Self {
        debug_assert!(l >= 1);
        let mut pairs = Vec::with_capacity((l + 1) as usize);
        pairs.push(InversePair::sentinel());
        pairs.push(InversePair::unit());
        for i in 2..=l {
            let next = next_inverse_pair_counted(i, m, &pairs, primes, count)
                .expect("recursion only looks below the current index");
            pairs.push(next);
        }
        InversePairTable { pairs, modulus: m.clone(), primes: primes.to_vec() }
    }

    pub fn pairs(&self) -> &[InversePair] {
        &self.pairs
    }

    pub fn get(&self, i: u64) -> Result<&InversePair> {
        pair_at(&self.pairs, i)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }
}
