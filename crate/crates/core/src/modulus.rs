//! Factored modulus representation, p-adic valuations, radical, totient of
//! the sub-modulus and the height function driving the series length.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primality::is_prime;

/// Whether constructors verify that every listed factor is prime.
///
/// `Trusted` skips the strong-pseudoprime test so that construction cost
/// stays out of benchmark loops; structural checks (ordering, exponents)
/// always run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalityCheck {
    Strict,
    Trusted,
}

/// A modulus given as its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredModulus {
    primes: Vec<BigUint>,
    exponents: Vec<u32>,
    value: BigUint,
}

impl FactoredModulus {
    /// Build from explicit `(prime, exponent)` parts. Parts may arrive in any
    /// order; they are sorted into canonical ascending-prime form.
    pub fn from_parts(
        primes: Vec<BigUint>,
        exponents: Vec<u32>,
        check: PrimalityCheck,
    ) -> Result<Self> {
        if primes.len() != exponents.len() {
            return Err(Error::InvalidFactorization(format!(
                "{} primes but {} exponents",
                primes.len(),
                exponents.len()
            )));
        }
        if primes.is_empty() {
            return Err(Error::InvalidFactorization("empty factorization".into()));
        }
        let mut parts: Vec<(BigUint, u32)> = primes.into_iter().zip(exponents).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        for window in parts.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(Error::InvalidFactorization(format!(
                    "duplicate prime {}",
                    window[0].0
                )));
            }
        }
        let two = BigUint::from(2u32);
        for (p, e) in &parts {
            if *e == 0 {
                return Err(Error::InvalidFactorization(format!(
                    "exponent 0 on prime {p}"
                )));
            }
            if *p < two {
                return Err(Error::InvalidFactorization(format!("{p} is not a prime")));
            }
            if check == PrimalityCheck::Strict && !is_prime(p) {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
        }
        let mut value = BigUint::one();
        for (p, e) in &parts {
            value *= p.pow(*e);
        }
        let (primes, exponents) = parts.into_iter().unzip();
        Ok(Self { primes, exponents, value })
    }

    /// Parse the `p(^e)?(*p(^e)?)*` grammar, e.g. `"2^3*5*11^4"`. A missing
    /// exponent defaults to 1.
    pub fn parse(text: &str, check: PrimalityCheck) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty factorization string".into()));
        }
        let mut primes = Vec::new();
        let mut exponents = Vec::new();
        for term in text.split('*') {
            let term = term.trim();
            let (p_str, e_str) = match term.split_once('^') {
                Some((p, e)) => (p.trim(), Some(e.trim())),
                None => (term, None),
            };
            let prime: BigUint = p_str
                .parse()
                .map_err(|_| Error::Parse(format!("invalid prime {p_str:?} in {text:?}")))?;
            let exponent = match e_str {
                Some(e) => e
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid exponent {e:?} in {text:?}")))?,
                None => 1,
            };
            primes.push(prime);
            exponents.push(exponent);
        }
        Self::from_parts(primes, exponents, check)
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// The modulus itself, `prod primes[i]^exponents[i]`.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Product of the distinct prime factors.
    pub fn radical(&self) -> BigUint {
        self.primes.iter().product()
    }

    /// Largest exponent in the factorization.
    pub fn max_exponent(&self) -> u32 {
        *self.exponents.iter().max().expect("non-empty factorization")
    }

    /// max over i of exponents[i] / t[i], as an exact rational.
    pub fn height(&self, params: &ParameterVector) -> Ratio {
        self.exponents
            .iter()
            .zip(params.t())
            .map(|(&e, &t)| Ratio::new(u64::from(e), u64::from(t)))
            .max()
            .expect("non-empty factorization")
    }
}

impl fmt::Display for FactoredModulus {
    /// Canonical form: primes ascending, `^1` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, e)) in self.primes.iter().zip(&self.exponents).enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The tuning parameters `t_i`, one per prime of the modulus, together with
/// the cached sub-modulus `T = prod p_i^{t_i}` and its totient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterVector {
    t: Vec<u32>,
    sub_modulus: BigUint,
    phi: BigUint,
}

impl ParameterVector {
    /// Validate `1 <= t[i] <= e[i]` against `fm` and cache `T` and `phi(T)`.
    pub fn new(fm: &FactoredModulus, t: Vec<u32>) -> Result<Self> {
        if t.len() != fm.primes().len() {
            return Err(Error::Parse(format!(
                "expected {} parameters, got {}",
                fm.primes().len(),
                t.len()
            )));
        }
        for (index, (&ti, &ei)) in t.iter().zip(fm.exponents()).enumerate() {
            if ti < 1 || ti > ei {
                return Err(Error::ParameterOutOfRange { index, t: ti, exponent: ei });
            }
        }
        let mut sub_modulus = BigUint::one();
        let mut phi = BigUint::one();
        for (p, &ti) in fm.primes().iter().zip(&t) {
            sub_modulus *= p.pow(ti);
            phi *= p.pow(ti - 1) * (p - BigUint::one());
        }
        Ok(Self { t, sub_modulus, phi })
    }

    /// The all-ones vector `t = [1, 1, ...]`, always valid.
    pub fn all_ones(fm: &FactoredModulus) -> Self {
        Self::new(fm, vec![1; fm.primes().len()]).expect("t = 1 is always in range")
    }

    /// Cheap re-validation against a (possibly different) modulus, for
    /// operations that take the pair (fm, tv) from independent sources.
    pub fn validate_for(&self, fm: &FactoredModulus) -> Result<()> {
        if self.t.len() != fm.primes().len() {
            return Err(Error::Parse(format!(
                "parameter vector has {} entries for a {}-prime modulus",
                self.t.len(),
                fm.primes().len()
            )));
        }
        for (index, (&t, &e)) in self.t.iter().zip(fm.exponents()).enumerate() {
            if t < 1 || t > e {
                return Err(Error::ParameterOutOfRange { index, t, exponent: e });
            }
        }
        if !(fm.value() % &self.sub_modulus).is_zero() {
            return Err(Error::Parse(
                "parameter vector was built for a different modulus".into(),
            ));
        }
        Ok(())
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    /// `T = prod p_i^{t_i}`; divides the modulus value.
    pub fn sub_modulus(&self) -> &BigUint {
        &self.sub_modulus
    }

    /// `phi(T) = prod p_i^{t_i - 1} (p_i - 1)`.
    pub fn phi(&self) -> &BigUint {
        &self.phi
    }

    /// The factorization of `T` itself (exponents are the `t_i`).
    pub fn sub_modulus_factored(&self, fm: &FactoredModulus) -> FactoredModulus {
        FactoredModulus::from_parts(fm.primes().to_vec(), self.t.clone(), PrimalityCheck::Trusted)
            .expect("T inherits a valid factorization")
    }
}

/// Exact non-negative rational, kept as an integer pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        if g == 0 {
            return Self { num, den };
        }
        Self { num: num / g, den: den / g }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn ceil(&self) -> u64 {
        self.num.div_ceil(self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = u128::from(self.num) * u128::from(other.den);
        let rhs = u128::from(other.num) * u128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Largest k with `p^k | n`. Undefined (an error) for n = 0.
pub fn valuation(n: &BigUint, p: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::Domain("valuation of 0 is undefined".into()));
    }
    if *p < BigUint::from(2u32) {
        return Err(Error::Domain(format!("valuation base {p} must be >= 2")));
    }
    let mut k = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        k += 1;
        rest = q;
    }
}

/// Machine-sized helper; panics never, same contract as [`valuation`].
pub fn valuation_u64(n: u64, p: u64) -> Result<u64> {
    valuation(&BigUint::from(n), &BigUint::from(p))
}
