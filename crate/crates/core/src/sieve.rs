//! Smallest-prime-factor sieve and the empirical average of the largest
//! exponent in a factorization, which tends to Niven's constant (~1.705).

use crate::error::{Error, Result};

/// Default memory cap for the sieve (entries, i.e. the largest admissible
/// `limit`). Overridable by callers; the CLI wires an environment variable.
pub const DEFAULT_SIEVE_CAP: u64 = 10_000_000;

/// Hard ceiling regardless of configuration; 4 bytes per entry puts this at
/// ~400 MB, past desk scale.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Smallest-prime-factor table for 2..=limit. `entry(n)` is the smallest
/// prime dividing n.
#[derive(Debug)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn build(limit: u64, cap: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit {limit} must be >= 2")));
        }
        let cap = cap.min(MAX_SIEVE_LIMIT);
        if limit > cap {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the configured cap {cap}"
            )));
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = vec![0; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                // i is prime; mark it and every unmarked multiple.
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Ok(Self { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of n; n must be in [2, limit].
    pub fn entry(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    /// Largest exponent in the factorization of n. By convention H(1) = 1.
    pub fn max_exponent(&self, n: u64) -> u32 {
        if n == 1 {
            return 1;
        }
        let mut rest = n;
        let mut best = 0u32;
        while rest > 1 {
            let p = u64::from(self.entry(rest));
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            best = best.max(e);
        }
        best
    }
}

/// `(1/limit) * sum_{k <= limit} H(k)` with `H(k)` the largest exponent in
/// k's factorization and `H(1) = 1`.
pub fn niven_average(limit: u64, cap: u64) -> Result<f64> {
    if limit < 2 {
        return Err(Error::Domain(format!("limit {limit} must be >= 2")));
    }
    let sieve = SpfSieve::build(limit, cap)?;
    let mut sum: u64 = 1; // H(1) = 1
    for k in 2..=limit {
        sum += u64::from(sieve.max_exponent(k));
    }
    Ok(sum as f64 / limit as f64)
}
