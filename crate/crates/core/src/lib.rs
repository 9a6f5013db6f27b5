//! Fast modular exponentiation for moduli with known prime factorization.
//!
//! The fast path applies Euler's theorem at a sub-modulus T dividing m and
//! lifts the result back to m with a short binomial series whose length is
//! governed by the factorization's exponents. Extensions cover matrices
//! over Z/mZ, linear recurrences, and Gaussian integers modulo prime
//! powers. A tuner picks the sub-modulus parameters, and a benchmark
//! harness measures step counts and wall time against plain repeated
//! squaring.

pub mod bench;
pub mod error;
pub mod exp;
pub mod fit;
pub mod gaussian;
pub mod inverse;
pub mod matrix;
pub mod modulus;
pub mod primality;
pub mod recurrence;
pub mod sieve;
pub mod steps;
pub mod strategy;
pub mod tuner;

pub use error::{Error, ErrorKind, Result};
pub use exp::{fast_mod_exp, fast_mod_exp_counted, mod_exp_baseline, series_length};
pub use inverse::{InverseMode, InversePair, InversePairTable};
pub use modulus::{FactoredModulus, ParameterVector, PrimalityCheck};
pub use steps::StepCount;
