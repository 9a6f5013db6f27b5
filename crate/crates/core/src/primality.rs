//! Miller-Rabin primality testing and prime generation helpers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Witnesses that make Miller-Rabin deterministic for all n < 2^64.
const SMALL_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of rounds used above 2^64. With fixed prime bases the test is
/// deterministic for a given input; 40 rounds push the error probability
/// below 4^-40 for adversarial inputs.
const LARGE_ROUNDS: usize = 40;

fn mod_pow(base: &BigUint, exp: &BigUint, m: &BigUint) -> BigUint {
    base.modpow(exp, m)
}

fn miller_rabin_witness(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    // Returns true if `a` proves n composite.
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut x = mod_pow(a, d, n);
    if x == one || x == n_minus_1 {
        return false;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return false;
        }
    }
    true
}

/// Primality check: deterministic strong-pseudoprime test below 2^64,
/// 40 rounds of Miller-Rabin with fixed prime bases above.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    // n odd and >= 3 from here on.
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    if n.to_u64().is_some() {
        for &a in &SMALL_WITNESSES {
            let a = BigUint::from(a);
            if a >= *n {
                continue;
            }
            if miller_rabin_witness(n, &a, &d, s) {
                return false;
            }
        }
        return true;
    }

    // First LARGE_ROUNDS primes as bases.
    let mut bases = Vec::with_capacity(LARGE_ROUNDS);
    let mut candidate = 2u64;
    while bases.len() < LARGE_ROUNDS {
        if is_prime_u64(candidate) {
            bases.push(candidate);
        }
        candidate += 1;
    }
    for a in bases {
        if miller_rabin_witness(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    true
}

/// Convenience wrapper for machine-sized candidates.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if *n < two {
        return two;
    }
    let mut candidate = n + BigUint::one();
    if candidate.is_even() {
        if candidate == two {
            return two;
        }
        candidate += BigUint::one();
    }
    while !is_prime(&candidate) {
        candidate += &two;
    }
    candidate
}

/// All primes in `[lo, hi]` by a simple sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let hi_usize = hi as usize;
    let mut composite = vec![false; hi_usize + 1];
    let mut primes = Vec::new();
    for p in 2..=hi_usize {
        if !composite[p] {
            if p as u64 >= lo {
                primes.push(p as u64);
            }
            let mut multiple = p * p;
            while multiple <= hi_usize {
                composite[multiple] = true;
                multiple += p;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn carmichael_numbers_rejected() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime_u64(n), "{n} is a Carmichael number");
        }
    }

    #[test]
    fn large_known_prime() {
        // 2^89 - 1 is a Mersenne prime; 2^89 + 1 is divisible by 3.
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        assert!(is_prime(&m89));
        assert!(!is_prime(&((BigUint::one() << 89u32) + BigUint::one())));
    }

    #[test]
    fn next_prime_after_powers_of_ten() {
        assert_eq!(next_prime(&BigUint::from(100u32)), BigUint::from(101u32));
        assert_eq!(next_prime(&BigUint::from(1000u32)), BigUint::from(1009u32));
        assert_eq!(next_prime(&BigUint::from(10000u32)), BigUint::from(10007u32));
        assert_eq!(next_prime(&BigUint::from(1u32)), BigUint::from(2u32));
        assert_eq!(next_prime(&BigUint::from(2u32)), BigUint::from(3u32));
    }

    #[test]
    fn range_sieve_matches_filter() {
        let sieved = primes_in_range(50, 200);
        let filtered: Vec<u64> = (50..=200).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieved, filtered);
    }
}
