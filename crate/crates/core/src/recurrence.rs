//! Linear recurrences modulo m, advanced through companion-matrix powers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{mat_fast_exp, reduce_signed, MatrixModM};
use crate::modulus::{FactoredModulus, ParameterVector};

/// A degree-d recurrence u_{n+d} = c_{d-1} u_{n+d-1} + ... + c_0 u_n with
/// its initial terms u_0..u_{d-1}, everything reduced into [0, m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    /// c_{d-1}, ..., c_0.
    coeffs: Vec<BigUint>,
    /// u_0, ..., u_{d-1}.
    init: Vec<BigUint>,
    modulus: BigUint,
}

impl RecurrenceSpec {
    /// Coefficients arrive highest-lag first (c_{d-1}..c_0), matching the
    /// CLI grammar. Signed values are reduced modulo m.
    pub fn new(coeffs: &[BigInt], init: &[BigInt], modulus: &BigUint) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("recurrence needs at least one coefficient".into()));
        }
        if coeffs.len() != init.len() {
            return Err(Error::Parse(format!(
                "degree-{} recurrence needs {} initial terms, got {}",
                coeffs.len(),
                coeffs.len(),
                init.len()
            )));
        }
        Ok(Self {
            coeffs: coeffs.iter().map(|c| reduce_signed(c, modulus)).collect(),
            init: init.iter().map(|u| reduce_signed(u, modulus)).collect(),
            modulus: modulus.clone(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn init(&self) -> &[BigUint] {
        &self.init
    }

    /// The d x d companion matrix: top row c_{d-1}..c_0, subdiagonal ones.
    /// Its determinant is +-c_0, so invertibility needs gcd(c_0, m) = 1.
    pub fn companion(&self) -> Result<MatrixModM> {
        let c0 = self.coeffs.last().expect("non-empty");
        if !c0.gcd(&self.modulus).is_one() {
            return Err(Error::NotCoprime { base: c0.clone(), modulus: self.modulus.clone() });
        }
        let d = self.degree();
        let mut entries = vec![BigUint::zero(); d * d];
        entries[..d].clone_from_slice(&self.coeffs);
        for i in 1..d {
            entries[i * d + (i - 1)] = BigUint::one();
        }
        MatrixModM::new(d, entries, self.modulus.clone())
    }

    /// u_N by direct iteration; the oracle for the fast path.
    pub fn term_by_iteration(&self, n: u64) -> BigUint {
        let d = self.degree();
        if (n as usize) < d {
            return self.init[n as usize].clone();
        }
        let mut window = self.init.clone();
        for _ in d..=(n as usize) {
            let mut next = BigUint::zero();
            for (j, c) in self.coeffs.iter().enumerate() {
                // c_{d-1} pairs with the newest window entry.
                next += c * &window[d - 1 - j];
            }
            next %= &self.modulus;
            window.rotate_left(1);
            window[d - 1] = next;
        }
        window[d - 1].clone()
    }
}

/// u_N mod m via fast companion-matrix exponentiation.
pub fn recurrence_term(
    spec: &RecurrenceSpec,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
) -> Result<BigUint> {
    if spec.modulus != *fm.value() {
        return Err(Error::Domain(format!(
            "recurrence modulus {} does not match factored modulus {}",
            spec.modulus,
            fm.value()
        )));
    }
    let d = spec.degree();
    if *n < BigUint::from(d) {
        let index = n.to_usize().expect("n < d fits in usize");
        return Ok(spec.init[index].clone());
    }
    let companion = spec.companion()?;
    let power = mat_fast_exp(&companion, n, fm, tv)?;
    // State vector S_0 = (u_{d-1}, ..., u_0); u_N is the last row of
    // C^N applied to it.
    let mut result = BigUint::zero();
    for j in 0..d {
        result += power.entry(d - 1, j) * &spec.init[d - 1 - j];
    }
    Ok(result % fm.value())
}
