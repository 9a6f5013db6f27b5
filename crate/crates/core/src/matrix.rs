//! Matrices over Z/mZ: schoolbook arithmetic, repeated-squaring baseline,
//! general-linear-group orders, and the binomial-series fast exponentiation
//! that reduces the exponent modulo |GL_d(Z/TZ)| instead of phi(T).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exp::series_length;
use crate::inverse::InversePairTable;
use crate::modulus::{FactoredModulus, ParameterVector};

/// A square matrix with entries reduced into [0, m), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixModM {
    dim: usize,
    entries: Vec<BigUint>,
    modulus: BigUint,
}

impl MatrixModM {
    pub fn new(dim: usize, entries: Vec<BigUint>, modulus: BigUint) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("matrix dimension must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Parse(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| x % &modulus).collect();
        Ok(Self { dim, entries, modulus })
    }

    pub fn identity(dim: usize, modulus: &BigUint) -> Self {
        let mut entries = vec![BigUint::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigUint::one() % modulus;
        }
        Self { dim, entries, modulus: modulus.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// Parse the CLI grammar: rows separated by `;`, entries by `,`.
    /// Negative entries are reduced into [0, m).
    pub fn parse(text: &str, modulus: &BigUint) -> Result<Self> {
        let rows: Vec<&str> = text.split(';').collect();
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != dim {
                return Err(Error::Parse(format!(
                    "matrix is not square: {dim} rows but a row with {} entries",
                    cols.len()
                )));
            }
            for cell in cols {
                let value: BigInt = cell
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid matrix entry {cell:?}")))?;
                entries.push(reduce_signed(&value, modulus));
            }
        }
        Self::new(dim, entries, modulus.clone())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.modulus != other.modulus {
            return Err(Error::Domain(format!(
                "matrix moduli differ: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    /// Schoolbook product, every entry reduced mod m.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let d = self.dim;
        let mut entries = vec![BigUint::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entry(k, j);
                }
            }
        }
        for e in &mut entries {
            *e %= &self.modulus;
        }
        Ok(Self { dim: d, entries, modulus: self.modulus.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + b) % &self.modulus)
            .collect();
        Ok(Self { dim: self.dim, entries, modulus: self.modulus.clone() })
    }

    /// Entry-wise scalar product.
    pub fn scale(&self, scalar: &BigUint) -> Self {
        let entries = self.entries.iter().map(|a| (a * scalar) % &self.modulus).collect();
        Self { dim: self.dim, entries, modulus: self.modulus.clone() }
    }

    /// self - I, entries kept in [0, m).
    pub fn sub_identity(&self) -> Self {
        let mut entries = self.entries.clone();
        for i in 0..self.dim {
            let idx = i * self.dim + i;
            entries[idx] = (&entries[idx] + &self.modulus - BigUint::one() % &self.modulus)
                % &self.modulus;
        }
        Self { dim: self.dim, entries, modulus: self.modulus.clone() }
    }

    /// A^n by repeated squaring; A^0 = I. The oracle for the fast path.
    pub fn pow_baseline(&self, n: &BigUint) -> Self {
        let mut result = Self::identity(self.dim, &self.modulus);
        if n.is_zero() {
            return result;
        }
        let mut base = self.clone();
        let bits = n.bits();
        for bit in 0..bits {
            if n.bit(bit) {
                result = result.mul(&base).expect("same shape");
            }
            if bit + 1 < bits {
                base = base.mul(&base).expect("same shape");
            }
        }
        result
    }

    /// Exact determinant by fraction-free (Bareiss) elimination, reduced
    /// into [0, m).
    pub fn determinant(&self) -> BigUint {
        let d = self.dim;
        if d == 1 {
            return self.entries[0].clone();
        }
        let mut a: Vec<BigInt> = self.entries.iter().map(|x| BigInt::from(x.clone())).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if a[k * d + k].is_zero() {
                match (k + 1..d).find(|&r| !a[r * d + k].is_zero()) {
                    Some(r) => {
                        for c in 0..d {
                            a.swap(k * d + c, r * d + c);
                        }
                        sign = -sign;
                    }
                    None => return BigUint::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &a[i * d + j] * &a[k * d + k] - &a[i * d + k] * &a[k * d + j];
                    a[i * d + j] = num / &prev;
                }
                a[i * d + k] = BigInt::zero();
            }
            prev = a[k * d + k].clone();
        }
        let det = if sign < 0 { -a[d * d - 1].clone() } else { a[d * d - 1].clone() };
        reduce_signed(&det, &self.modulus)
    }
}

impl fmt::Display for MatrixModM {
    /// Same grammar the parser accepts: rows `;`, entries `,`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn reduce_signed(value: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    let mut r = value % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_biguint().expect("reduced representative is non-negative")
}

/// |GL_d(Z/TZ)| for T given in factored form:
/// `prod_j p_j^((t_j - 1) d^2) * prod_{i<d} (p_j^d - p_j^i)`.
pub fn gl_order(d: usize, fm: &FactoredModulus) -> BigUint {
    let d_u32 = d as u32;
    let mut order = BigUint::one();
    for (p, &e) in fm.primes().iter().zip(fm.exponents()) {
        order *= p.pow((e - 1) * d_u32 * d_u32);
        let p_d = p.pow(d_u32);
        for i in 0..d_u32 {
            order *= &p_d - p.pow(i);
        }
    }
    order
}

/// A^n mod m with the exponent reduced modulo |GL_d(Z/TZ)|. The lifted
/// B = A^Phi - I has every entry divisible by T, so the scalar binomial
/// series applies verbatim with matrix-valued powers (I and B commute).
pub fn mat_fast_exp(
    a: &MatrixModM,
    n: &BigUint,
    fm: &FactoredModulus,
    tv: &ParameterVector,
) -> Result<MatrixModM> {
    tv.validate_for(fm)?;
    let m = fm.value();
    if a.modulus() != m {
        return Err(Error::Domain(format!(
            "matrix modulus {} does not match factored modulus {}",
            a.modulus(),
            m
        )));
    }
    let det = a.determinant();
    if !det.gcd(m).is_one() {
        return Err(Error::NonInvertibleMatrix(m.clone()));
    }

    let group_order = gl_order(a.dim(), &tv.sub_modulus_factored(fm));
    let (quotient, remainder) = n.div_rem(&group_order);
    // M = 0: the series is the identity, and A^|GL| would cost more than
    // the answer itself.
    if quotient.is_zero() {
        return Ok(a.pow_baseline(&remainder));
    }

    let lifted = a.pow_baseline(&group_order).sub_identity();
    // Lagrange guarantees A^|GL(Z/TZ)| = I (mod T) for a genuine
    // factorization; anything else means the trusted factors were wrong.
    if !lifted.entries().iter().all(|e| (e % tv.sub_modulus()).is_zero()) {
        return Err(Error::Domain(format!(
            "A^|GL| is not the identity modulo T = {}; the factorization of {} is inconsistent",
            tv.sub_modulus(),
            m
        )));
    }

    let length = series_length(fm, tv);
    let term_bound = (&quotient + BigUint::one())
        .to_u64()
        .unwrap_or(u64::MAX)
        .min(u64::from(length));

    let mut acc = MatrixModM::identity(a.dim(), m).scale(&BigUint::zero());
    if term_bound >= 1 {
        let table = InversePairTable::generate(term_bound, m, fm.primes());
        let mut binom = BigUint::one();
        let mut power = MatrixModM::identity(a.dim(), m);
        for i in 0..term_bound {
            acc = acc.add(&power.scale(&binom))?;
            power = power.mul(&lifted)?;
            let factor = (&quotient - i) % m;
            let scaled = (&binom * factor) % m;
            let pair = table.get(i + 1)?;
            binom = (scaled / BigUint::from(pair.v) * &pair.u) % m;
        }
    }

    acc.mul(&a.pow_baseline(&remainder))
}
