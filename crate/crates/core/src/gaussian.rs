//! Gaussian integers modulo p^k for primes p = 3 (mod 4): ring arithmetic,
//! a square-and-multiply baseline, and the binomial-series fast path with
//! the exponent reduced modulo p^2 - 1 (the unit-group order of F_p[i]).
//!
//! For p = 3 (mod 4), -1 is a quadratic non-residue, F_p[i] is the field
//! with p^2 elements, and z^(p^2-1) = 1 (mod p) for every unit z. The lift
//! c = z^(p^2-1) - 1 then has both components divisible by p, so the series
//! mod p^k closes after k terms. p = 2 and p = 1 (mod 4) are rejected, not
//! approximated.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::inverse::InversePairTable;
use crate::primality::is_prime;

/// An element a + b i of Z[i] / p^k, components in [0, p^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianResidue {
    pub re: BigUint,
    pub im: BigUint,
}

impl GaussianResidue {
    pub fn new(re: BigUint, im: BigUint, modulus: &BigUint) -> Self {
        Self { re: re % modulus, im: im % modulus }
    }

    pub fn one(modulus: &BigUint) -> Self {
        Self { re: BigUint::one() % modulus, im: BigUint::zero() }
    }

    /// (a + bi)(c + di) with i^2 = -1, componentwise mod m.
    pub fn mul(&self, other: &Self, modulus: &BigUint) -> Self {
        let ac = &self.re * &other.re;
        let bd = &self.im * &other.im;
        let ad = &self.re * &other.im;
        let bc = &self.im * &other.re;
        let re = (ac % modulus + modulus - bd % modulus) % modulus;
        let im = (ad + bc) % modulus;
        Self { re, im }
    }

    /// Entry-wise scalar product.
    pub fn scale(&self, scalar: &BigUint, modulus: &BigUint) -> Self {
        Self { re: (&self.re * scalar) % modulus, im: (&self.im * scalar) % modulus }
    }

    pub fn add(&self, other: &Self, modulus: &BigUint) -> Self {
        Self {
            re: (&self.re + &other.re) % modulus,
            im: (&self.im + &other.im) % modulus,
        }
    }

    /// re^2 + im^2 mod m.
    pub fn norm(&self, modulus: &BigUint) -> BigUint {
        (&self.re * &self.re + &self.im * &self.im) % modulus
    }
}

impl fmt::Display for GaussianResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*i", self.re, self.im)
    }
}

/// z^n by square-and-multiply in the ring; the oracle for the fast path.
pub fn gauss_pow_baseline(z: &GaussianResidue, n: &BigUint, modulus: &BigUint) -> GaussianResidue {
    let mut result = GaussianResidue::one(modulus);
    if n.is_zero() {
        return result;
    }
    let mut base = z.clone();
    let bits = n.bits();
    for bit in 0..bits {
        if n.bit(bit) {
            result = result.mul(&base, modulus);
        }
        if bit + 1 < bits {
            base = base.mul(&base, modulus);
        }
    }
    result
}

/// z^n in Z[i]/p^k via the binomial series. Requires p prime, p = 3 (mod 4),
/// k >= 1, and z a unit (norm coprime to p).
pub fn gaussian_fast_exp(
    z: &GaussianResidue,
    n: &BigUint,
    p: &BigUint,
    k: u32,
) -> Result<GaussianResidue> {
    if *p == BigUint::from(2u32) || p % 4u32 != BigUint::from(3u32) || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p.clone()));
    }
    if k < 1 {
        return Err(Error::Parse("k must be >= 1".into()));
    }
    let modulus = p.pow(k);
    let z = GaussianResidue::new(z.re.clone(), z.im.clone(), &modulus);
    if (z.norm(&modulus) % p).is_zero() {
        return Err(Error::NotUnit { re: z.re.clone(), im: z.im.clone(), p: p.clone() });
    }

    // |F_{p^2}^*| = p^2 - 1.
    let phi = p * p - BigUint::one();
    let (quotient, remainder) = n.div_rem(&phi);
    if quotient.is_zero() {
        return Ok(gauss_pow_baseline(&z, &remainder, &modulus));
    }

    let z_phi = gauss_pow_baseline(&z, &phi, &modulus);
    // z^phi = 1 (mod p), so re = 1 (mod p) and im = 0 (mod p); the lift has
    // both components divisible by p and the series closes after k terms.
    let lifted = GaussianResidue {
        re: (&z_phi.re + &modulus - BigUint::one()) % &modulus,
        im: z_phi.im.clone(),
    };
    if !(&lifted.re % p).is_zero() || !(&lifted.im % p).is_zero() {
        return Err(Error::Domain(format!(
            "z^(p^2-1) is not 1 modulo {p}; is p really prime?"
        )));
    }

    let term_bound = (&quotient + BigUint::one())
        .to_u64()
        .unwrap_or(u64::MAX)
        .min(u64::from(k));

    let mut acc = GaussianResidue { re: BigUint::zero(), im: BigUint::zero() };
    if term_bound >= 1 {
        let primes = [p.clone()];
        let table = InversePairTable::generate(term_bound, &modulus, &primes);
        let mut binom = BigUint::one();
        let mut power = GaussianResidue::one(&modulus);
        for i in 0..term_bound {
            acc = acc.add(&power.scale(&binom, &modulus), &modulus);
            power = power.mul(&lifted, &modulus);
            let factor = (&quotient - i) % &modulus;
            let scaled = (&binom * factor) % &modulus;
            let pair = table.get(i + 1)?;
            binom = (scaled / BigUint::from(pair.v) * &pair.u) % &modulus;
        }
    }

    Ok(acc.mul(&gauss_pow_baseline(&z, &remainder, &modulus), &modulus))
}
