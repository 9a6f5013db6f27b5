//! Parameter tuning: a cost model for the fast path (series terms plus
//! repeated-squaring bits) and a sweep over target series lengths that
//! picks the cheapest parameter vector in the one-parameter family
//! t_i = ceil(e_i / l*). Weights can be calibrated against wall time.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exp::series_length;
use crate::inverse::InversePair;
use crate::modulus::{FactoredModulus, ParameterVector};
use crate::steps::StepCount;

/// Relative costs in the model
/// `alpha * series_terms + beta * sum(t_i log2 p_i) + overhead`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    /// Cost per series term.
    pub alpha: f64,
    /// Cost per bit of exponent in a repeated-squaring sub-call.
    pub beta: f64,
    pub overhead: f64,
}

impl Default for CostWeights {
    /// beta = 1.5 is the square-and-multiply expectation: one squaring per
    /// bit plus a multiplication for half the bits.
    fn default() -> Self {
        CostWeights { alpha: 1.0, beta: 1.5, overhead: 0.0 }
    }
}

impl CostWeights {
    pub fn unit() -> Self {
        CostWeights { alpha: 1.0, beta: 1.0, overhead: 0.0 }
    }
}

/// log2 of an arbitrary-precision natural, via the top bits when the value
/// does not fit a double.
pub fn log2_big(n: &BigUint) -> f64 {
    if let Some(x) = n.to_f64() {
        if x.is_finite() && x > 0.0 {
            return x.log2();
        }
    }
    let bits = n.bits();
    let top = (n >> (bits - 53)).to_f64().unwrap_or(f64::MAX);
    top.log2() + (bits - 53) as f64
}

/// Predicted cost of one fast exponentiation with the given parameters.
/// The series term count is the exact length, not the height bound.
pub fn cost_model(fm: &FactoredModulus, tv: &ParameterVector, w: &CostWeights) -> f64 {
    let terms = f64::from(series_length(fm, tv));
    let squaring_bits: f64 = fm
        .primes()
        .iter()
        .zip(tv.t())
        .map(|(p, &t)| f64::from(t) * log2_big(p))
        .sum();
    w.alpha * terms + w.beta * squaring_bits + w.overhead
}

/// Sweep the target series length l* from 1 to max(e_i), build
/// t_i = ceil(e_i / l*) for each, and return the cheapest vector under the
/// cost model. Exhaustive over l*, so optimal within this family; ties go
/// to the smallest l*.
pub fn tune_parameters(fm: &FactoredModulus, w: &CostWeights) -> ParameterVector {
    let max_e = fm.max_exponent();
    let mut best: Option<(f64, ParameterVector)> = None;
    for target in 1..=max_e {
        let t: Vec<u32> = fm
            .exponents()
            .iter()
            .map(|&e| e.div_ceil(target).clamp(1, e))
            .collect();
        let tv = ParameterVector::new(fm, t).expect("family vector is always in range");
        let cost = cost_model(fm, &tv, w);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, tv));
        }
    }
    best.expect("max_e >= 1").1
}

/// Times a synthetic workload of series steps and squaring bits; the
/// calibration fit runs on its measurements. Abstracted so tests can
/// substitute an exact model.
pub trait WorkloadTimer {
    /// Cost of `series_terms` series steps plus `exp_bits` squaring bits,
    /// in any consistent unit.
    fn measure(&mut self, series_terms: u64, exp_bits: u64) -> f64;
}

/// Real timer: runs the workloads on residues of the sample modulus size
/// and reports elapsed seconds. Each point takes the minimum over several
/// repetitions, which filters out scheduler noise.
pub struct InstantTimer {
    modulus: BigUint,
    batch: u64,
    repeats: u32,
}

impl InstantTimer {
    pub fn new(fm: &FactoredModulus) -> Self {
        // Batch each workload enough to outlast clock granularity.
        InstantTimer { modulus: fm.value().clone(), batch: 32, repeats: 5 }
    }

    fn run_once(&self, series_terms: u64, exp_bits: u64) -> f64 {
        use crate::exp::SeriesState;
        let m = &self.modulus;
        let x = m / 3u32 + BigUint::from(2u32);
        let start = Instant::now();
        let mut sink = BigUint::from(1u32);
        for _ in 0..self.batch {
            let mut state = SeriesState::new_for_timing(&x, m);
            let pair = InversePair { u: BigUint::from(1u32), v: 1 };
            let mut count = StepCount::new();
            for _ in 0..series_terms {
                state.step(m, &pair, &mut count);
            }
            sink += &state.acc;

            let mut y = x.clone();
            for bit in 0..exp_bits {
                y = (&y * &y) % m;
                if bit % 2 == 0 {
                    y = (&y * &x) % m;
                }
            }
            sink += &y;
        }
        std::hint::black_box(sink);
        start.elapsed().as_secs_f64() / self.batch as f64
    }
}

impl WorkloadTimer for InstantTimer {
    fn measure(&mut self, series_terms: u64, exp_bits: u64) -> f64 {
        (0..self.repeats)
            .map(|_| self.run_once(series_terms, exp_bits))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Fit (alpha, beta, overhead) by least squares over a small grid of
/// synthetic workloads.
pub fn calibrate_weights(timer: &mut dyn WorkloadTimer) -> Result<CostWeights> {
    let terms_grid = [0u64, 8, 16, 32, 64];
    let bits_grid = [0u64, 16, 32, 64, 128];
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    let mut total = 0.0;
    for &terms in &terms_grid {
        for &bits in &bits_grid {
            let y = timer.measure(terms, bits);
            if !y.is_finite() {
                return Err(Error::ClockUnavailable("non-finite measurement".into()));
            }
            total += y;
            rows.push((terms as f64, bits as f64, y));
        }
    }
    if total <= 0.0 {
        return Err(Error::ClockUnavailable(
            "all measurements were zero; clock too coarse".into(),
        ));
    }

    // Normal equations for y = alpha*t + beta*b + overhead.
    let n = rows.len() as f64;
    let (mut st, mut sb, mut sy) = (0.0, 0.0, 0.0);
    let (mut stt, mut sbb, mut stb) = (0.0, 0.0, 0.0);
    let (mut sty, mut sby) = (0.0, 0.0);
    for &(t, b, y) in &rows {
        st += t;
        sb += b;
        sy += y;
        stt += t * t;
        sbb += b * b;
        stb += t * b;
        sty += t * y;
        sby += b * y;
    }
    let a = [[stt, stb, st], [stb, sbb, sb], [st, sb, n]];
    let rhs = [sty, sby, sy];
    let solution = solve3(a, rhs)
        .ok_or_else(|| Error::ClockUnavailable("singular calibration system".into()))?;
    Ok(CostWeights { alpha: solution[0], beta: solution[1], overhead: solution[2] })
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..3 {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}
