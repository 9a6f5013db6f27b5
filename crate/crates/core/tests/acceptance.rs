//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with:
//!   cargo test -p xpow-core --test acceptance -- --nocapture
//!
//! The oracle grids take a few minutes in total; they are exact (zero
//! mismatches tolerated) except where a tolerance is stated inline.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use xpow_core::bench::{sweep_sqrt_family, sweep_t, SqrtFamilyConfig};
use xpow_core::exp::{
    fast_mod_exp, fast_mod_exp_counted, fast_mod_exp_truncated, mod_exp_baseline,
    mod_exp_baseline_counted, series_length,
};
use xpow_core::fit::{fit_sqrt_curve, fit_t_curve, pearson};
use xpow_core::gaussian::{gauss_pow_baseline, gaussian_fast_exp, GaussianResidue};
use xpow_core::inverse::{direct_inverse_pair, InverseMode, InversePairTable};
use xpow_core::matrix::{gl_order, mat_fast_exp, MatrixModM};
use xpow_core::modulus::{FactoredModulus, ParameterVector, PrimalityCheck};
use xpow_core::primality::next_prime;
use xpow_core::recurrence::{recurrence_term, RecurrenceSpec};
use xpow_core::sieve::niven_average;
use xpow_core::steps::StepCount;
use xpow_core::tuner::{cost_model, log2_big, tune_parameters, CostWeights};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn fm(text: &str) -> FactoredModulus {
    FactoredModulus::parse(text, PrimalityCheck::Strict).unwrap()
}

fn prime_power(p: u64, e: u32) -> FactoredModulus {
    FactoredModulus::from_parts(vec![big(p)], vec![e], PrimalityCheck::Trusted).unwrap()
}

fn factorize(n: u64) -> FactoredModulus {
    let mut primes = Vec::new();
    let mut exponents = Vec::new();
    let mut rest = n;
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            primes.push(big(d));
            exponents.push(e);
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(big(rest));
        exponents.push(1);
    }
    FactoredModulus::from_parts(primes, exponents, PrimalityCheck::Trusted).unwrap()
}

fn random_coprime(rng: &mut ChaCha8Rng, m: &BigUint) -> BigUint {
    loop {
        let a = rng.gen_biguint_range(&BigUint::one(), m);
        if a.gcd(m).is_one() {
            return a;
        }
    }
}

/// Check both fast modes against the baseline for one input.
fn check_both_modes(a: &BigUint, n: &BigUint, fm: &FactoredModulus, tv: &ParameterVector) {
    let expected = mod_exp_baseline(a, n, fm.value());
    for mode in [InverseMode::Recursive, InverseMode::Direct] {
        let got = fast_mod_exp(a, n, fm, tv, mode).unwrap();
        assert_eq!(
            got,
            expected,
            "mismatch: m={} t={:?} a={a} n={n} mode={mode:?}",
            fm.value(),
            tv.t()
        );
    }
}

#[test]
fn criterion_01_golden_examples() {
    let m = fm("11^3");
    let tv = ParameterVector::all_ones(&m);
    for mode in [InverseMode::Recursive, InverseMode::Direct] {
        assert_eq!(fast_mod_exp(&big(7), &big(123), &m, &tv, mode).unwrap(), big(1234));
        // The a^Phi-power part alone (n = 120 has remainder 0).
        assert_eq!(fast_mod_exp(&big(7), &big(120), &m, &tv, mode).unwrap(), big(23));
    }

    let m20 = big(20);
    let primes = [big(2), big(5)];
    let table = InversePairTable::generate(12, &m20, &primes);
    let pair = table.get(12).unwrap();
    assert_eq!((pair.u.clone(), pair.v), (big(7), 4));
    let direct = direct_inverse_pair(12, &m20, &primes).unwrap();
    assert_eq!((direct.u, direct.v), (big(7), 4));

    println!("criterion 1 (golden examples): PASS");
}

#[test]
fn criterion_02_scalar_oracle_equivalence() {
    // Prime-power grid: exhaustive (a, n) below 200, dense samples above.
    let mut grid: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for e in 1..=8u32 {
            if BigUint::from(p).pow(e).bits() <= 34 {
                grid.push((p, e));
            }
        }
    }

    let checked: u64 = grid
        .par_iter()
        .map(|&(p, e)| {
            let fm = prime_power(p, e);
            let m = fm.value().clone();
            let m_u64 = m.to_u64().unwrap();
            let mut count = 0u64;
            for t in 1..=e {
                let tv = ParameterVector::new(&fm, vec![t]).unwrap();
                if m_u64 <= 200 {
                    for a in 1..m_u64 {
                        if !big(a).gcd(&m).is_one() {
                            continue;
                        }
                        for n in 0..=2 * m_u64 {
                            check_both_modes(&big(a), &big(n), &fm, &tv);
                            count += 1;
                        }
                    }
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(p * 1000 + u64::from(e) * 10 + u64::from(t));
                    let samples = 1000u32.div_ceil(e).max(125);
                    for _ in 0..samples {
                        let a = random_coprime(&mut rng, &m);
                        let n = rng.gen_biguint_below(&(&m * 2u32 + 1u32));
                        check_both_modes(&a, &n, &fm, &tv);
                        count += 1;
                    }
                }
            }
            count
        })
        .sum();
    assert!(checked > 400_000, "grid too small: {checked}");

    // 10^4 random multi-prime moduli up to 10^6 with random valid t.
    let prime_pool: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let multi_checked: u64 = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97 + i);
            let fm = loop {
                let k = rng.gen_range(2..=3usize);
                let mut picks: Vec<u64> = Vec::new();
                while picks.len() < k {
                    let p = prime_pool[rng.gen_range(0..prime_pool.len())];
                    if !picks.contains(&p) {
                        picks.push(p);
                    }
                }
                picks.sort_unstable();
                let exps: Vec<u32> = picks.iter().map(|_| rng.gen_range(1..=4u32)).collect();
                let value: f64 = picks
                    .iter()
                    .zip(&exps)
                    .map(|(&p, &e)| (p as f64).powi(e as i32))
                    .product();
                if value <= 1_000_000.0 {
                    break FactoredModulus::from_parts(
                        picks.into_iter().map(big).collect(),
                        exps,
                        PrimalityCheck::Trusted,
                    )
                    .unwrap();
                }
            };
            let t: Vec<u32> = fm.exponents().iter().map(|&e| rng.gen_range(1..=e)).collect();
            let tv = ParameterVector::new(&fm, t).unwrap();
            let m = fm.value().clone();
            for _ in 0..2 {
                let a = random_coprime(&mut rng, &m);
                let n = rng.gen_biguint_below(&(&m * 2u32 + 1u32));
                check_both_modes(&a, &n, &fm, &tv);
            }
            2
        })
        .sum();
    assert_eq!(multi_checked, 20_000);

    println!("criterion 2 (scalar oracle equivalence, {checked} prime-power cases + 10^4 multi-prime moduli): PASS");
}

fn random_invertible(rng: &mut ChaCha8Rng, dim: usize, fm: &FactoredModulus) -> MatrixModM {
    let m = fm.value();
    loop {
        let entries: Vec<BigUint> = (0..dim * dim).map(|_| rng.gen_biguint_below(m)).collect();
        let candidate = MatrixModM::new(dim, entries, m.clone()).unwrap();
        if candidate.determinant().gcd(m).is_one() {
            return candidate;
        }
    }
}

/// Fibonacci by fast doubling, an oracle independent of the matrix path:
/// F(2k) = F(k) (2 F(k+1) - F(k)), F(2k+1) = F(k)^2 + F(k+1)^2.
fn fibonacci_fast_doubling(n: &BigUint, m: &BigUint) -> BigUint {
    fn pair(n: &BigUint, m: &BigUint) -> (BigUint, BigUint) {
        if n.is_zero() {
            return (BigUint::zero(), BigUint::one() % m);
        }
        let (f_k, f_k1) = pair(&(n >> 1u32), m);
        let two_fk1 = (&f_k1 << 1u32) % m;
        let even = (&f_k * ((two_fk1 + m - &f_k) % m)) % m;
        let odd = (&f_k * &f_k + &f_k1 * &f_k1) % m;
        if n.bit(0) {
            (odd.clone(), (even + odd) % m)
        } else {
            (even, odd)
        }
    }
    pair(n, m).0
}

#[test]
fn criterion_03_matrix_recurrence_gaussian_oracles() {
    // Matrix grid.
    let mut moduli: Vec<FactoredModulus> = Vec::new();
    for p in [2u64, 3, 5] {
        for e in 1..=5u32 {
            moduli.push(prime_power(p, e));
        }
    }
    for composite in [12u64, 45, 100, 360] {
        moduli.push(factorize(composite));
    }

    let combos: Vec<(usize, FactoredModulus)> = (1..=3usize)
        .flat_map(|d| moduli.iter().cloned().map(move |f| (d, f)))
        .collect();

    combos.par_iter().for_each(|(dim, fm)| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA7 + *dim as u64 * 131 + fm.value().bits());
        let big_n_30 = BigUint::from(10u32).pow(30);
        for round in 0..200u32 {
            let t: Vec<u32> = fm.exponents().iter().map(|&e| rng.gen_range(1..=e)).collect();
            let tv = ParameterVector::new(fm, t).unwrap();
            let a = random_invertible(&mut rng, *dim, fm);
            let n = match round % 5 {
                0 => BigUint::zero(),
                1 => BigUint::one(),
                2 => big(2),
                3 => big(rng.gen_range(3..=1_000_000_000u64)),
                _ => rng.gen_biguint_below(&big_n_30),
            };
            let fast = mat_fast_exp(&a, &n, fm, &tv).unwrap();
            let slow = a.pow_baseline(&n);
            assert_eq!(fast, slow, "d={dim} m={} n={n}", fm.value());
        }
    });

    // Recurrence terms against direct iteration for every N <= 10^4.
    let recurrence_cases: Vec<(&str, Vec<i64>, Vec<i64>)> = vec![
        ("2^3", vec![1, 1], vec![0, 1]),
        ("11^3", vec![1, 1], vec![0, 1]),
        ("3^2*5", vec![2, -1, 7], vec![1, 2, 3]),
    ];
    recurrence_cases.par_iter().for_each(|(text, coeffs, init)| {
        let f = fm(text);
        let tv = ParameterVector::all_ones(&f);
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let init: Vec<BigInt> = init.iter().map(|&u| BigInt::from(u)).collect();
        let spec = RecurrenceSpec::new(&coeffs, &init, f.value()).unwrap();
        for n in 0..=10_000u64 {
            assert_eq!(
                recurrence_term(&spec, &big(n), &f, &tv).unwrap(),
                spec.term_by_iteration(n),
                "m={text} N={n}"
            );
        }
    });

    // Fibonacci mod 11^3 at N = 10^18 against fast doubling.
    let f = fm("11^3");
    let tv = ParameterVector::all_ones(&f);
    let fib = RecurrenceSpec::new(
        &[BigInt::one(), BigInt::one()],
        &[BigInt::zero(), BigInt::one()],
        f.value(),
    )
    .unwrap();
    let n18 = BigUint::from(10u64.pow(18));
    let via_matrix = recurrence_term(&fib, &n18, &f, &tv).unwrap();
    let via_doubling = fibonacci_fast_doubling(&n18, f.value());
    assert_eq!(via_matrix, via_doubling);

    // Gaussian grid: exhaustive units; n exhaustive through twice the unit
    // group order where that stays small, dense deterministic samples above.
    let gauss_cases: Vec<(u64, u32)> =
        vec![(3, 1), (3, 2), (3, 3), (7, 1), (7, 2), (7, 3), (11, 1), (11, 2), (11, 3)];
    gauss_cases.par_iter().for_each(|&(p, k)| {
        let p_big = big(p);
        let modulus = p_big.pow(k);
        let bound = 2 * (p * p - 1) * p.pow(2 * (k - 1));
        let exponents: Vec<u64> = if bound <= 2_000 {
            (0..=bound).collect()
        } else {
            let mut ns: Vec<u64> = (0..=64).collect();
            let stride = bound / 400;
            ns.extend((1..=400).map(|i| i * stride));
            ns.extend([bound - 1, bound, bound / 2, bound / 2 + 1]);
            ns
        };
        for re in 0..p {
            for im in 0..p {
                let z = GaussianResidue { re: big(re), im: big(im) };
                if (z.norm(&modulus) % &p_big).is_zero() {
                    continue;
                }
                for &n in &exponents {
                    let fast = gaussian_fast_exp(&z, &big(n), &p_big, k).unwrap();
                    let slow = gauss_pow_baseline(&z, &big(n), &modulus);
                    assert_eq!(fast, slow, "p={p} k={k} z={z} n={n}");
                }
            }
        }
    });

    // Bridge: z = a+bi against the matrix [[a, -b], [b, a]].
    for (p, k) in [(3u64, 2u32), (7, 2)] {
        let f = prime_power(p, k);
        let tv = ParameterVector::all_ones(&f);
        let m = f.value().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..50 {
            let re = rng.gen_range(0..p.pow(k));
            let im = rng.gen_range(0..p.pow(k));
            let z = GaussianResidue { re: big(re), im: big(im) };
            if (z.norm(&m) % big(p)).is_zero() {
                continue;
            }
            let n = big(rng.gen_range(0..100_000u64));
            let z_n = gaussian_fast_exp(&z, &n, &big(p), k).unwrap();
            let neg_im = (&m - big(im) % &m) % &m;
            let a = MatrixModM::new(2, vec![big(re), neg_im, big(im), big(re)], m.clone()).unwrap();
            let a_n = mat_fast_exp(&a, &n, &f, &tv).unwrap();
            assert_eq!(a_n.entry(0, 0), &z_n.re);
            assert_eq!(a_n.entry(1, 0), &z_n.im);
        }
    }

    println!("criterion 3 (matrix/recurrence/Gaussian oracles): PASS");
}

#[test]
fn criterion_04_gl_order_formula() {
    // d = 2 against full enumeration.
    for m in [2u64, 3, 4, 5, 6] {
        let mut count = 0u64;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let det = ((a * d) % m + m * m - (b * c) % m) % m;
                        if det.gcd(&m) == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(gl_order(2, &factorize(m)), big(count), "d=2 m={m}");
    }
    assert_eq!(gl_order(2, &factorize(2)), big(6));
    assert_eq!(gl_order(2, &factorize(4)), big(96));

    // d = 1: the unit group, counted by gcd.
    for m in 2u64..=50 {
        let phi = (1..m).filter(|x| x.gcd(&m) == 1).count() as u64;
        assert_eq!(gl_order(1, &factorize(m)), big(phi), "d=1 m={m}");
    }

    println!("criterion 4 (GL order formula): PASS");
}

#[test]
fn criterion_05_complexity_shape() {
    // (a) Tuned family m = P(n)^n: multiplications / sqrt(log2 m) stays in
    // a factor-2 band, and the tuned series length tracks sqrt(log2 m).
    let mut normalized = Vec::new();
    let mut length_over_sqrt = Vec::new();
    for n in 2u32..=20 {
        let p = next_prime(&BigUint::from(10u32).pow(n));
        let f = FactoredModulus::from_parts(vec![p.clone()], vec![n], PrimalityCheck::Trusted)
            .unwrap();
        let tv = tune_parameters(&f, &CostWeights::default());
        let m = f.value();
        let half = m >> 1;
        let mut a = &half + BigUint::one();
        while (&a % &p) == BigUint::zero() {
            a += BigUint::one();
        }
        let exp = &half + big(7);
        let (_, steps) = fast_mod_exp_counted(&a, &exp, &f, &tv, InverseMode::Recursive).unwrap();
        let sqrt_log = log2_big(m).sqrt();
        normalized.push(steps.multiplications as f64 / sqrt_log);
        length_over_sqrt.push(f64::from(series_length(&f, &tv)) / sqrt_log);
    }
    let min = normalized.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = normalized.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        max / min <= 2.0,
        "normalized step counts span more than a factor 2: [{min:.3}, {max:.3}]"
    );
    let l_min = length_over_sqrt.iter().cloned().fold(f64::INFINITY, f64::min);
    let l_max = length_over_sqrt.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        l_max / l_min <= 1.5,
        "tuned series length is not proportional to sqrt(log m): [{l_min:.3}, {l_max:.3}]"
    );

    // (b) Prime powers with t = 1 and e ~ ln p: the fast/baseline step
    // ratio trends down with p and finishes below 1.
    let primes = [3u64, 7, 17, 41, 101, 251, 647, 1601, 4001, 10007, 25013, 65003, 100003];
    let mut ratios = Vec::new();
    for &p in &primes {
        let e = (p as f64).ln().round().max(1.0) as u32;
        let f = prime_power(p, e);
        let tv = ParameterVector::all_ones(&f);
        let m = f.value().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut ratio_sum = 0.0;
        let instances = 5;
        for _ in 0..instances {
            let a = random_coprime(&mut rng, &m);
            // Exponents in [m, m^2) keep the baseline denominator nonzero
            // even at the smallest grid point.
            let n = rng.gen_biguint_range(&m, &(&m * &m));
            let (fast_res, fast) = fast_mod_exp_counted(&a, &n, &f, &tv, InverseMode::Recursive).unwrap();
            let mut base = StepCount::new();
            let base_res = mod_exp_baseline_counted(&a, &n, &m, &mut base);
            assert_eq!(fast_res, base_res);
            ratio_sum += fast.multiplications as f64 / base.multiplications as f64;
        }
        ratios.push(ratio_sum / f64::from(instances));
    }
    assert!(ratios[0] > 1.0, "fast should lose at tiny sizes: {ratios:?}");
    assert!(
        ratios[ratios.len() - 1] < 1.0 && ratios[ratios.len() - 2] < 1.0,
        "fast should win before the grid ends: {ratios:?}"
    );
    for i in 0..ratios.len() - 2 {
        assert!(
            ratios[i + 2] < ratios[i],
            "ratio did not decrease (2-step smoothed) at index {i}: {ratios:?}"
        );
    }
    let below: Vec<f64> = ratios.iter().copied().filter(|&r| r < 1.0).collect();
    assert!(below.len() >= 8, "ratio crosses below 1 too late: {ratios:?}");

    // (c) Step bound: multiplications <= K (l + bits(phi) + bits(r)) with a
    // single constant K = 6 over the prime-power grid (measured max 3.6).
    let mut k_max = 0.0f64;
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        for e in 1..=8u32 {
            let f = prime_power(p, e);
            let m = f.value().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(p + u64::from(e));
            for t in 1..=e {
                let tv = ParameterVector::new(&f, vec![t]).unwrap();
                let l = f64::from(series_length(&f, &tv));
                for _ in 0..25 {
                    let a = random_coprime(&mut rng, &m);
                    let n = rng.gen_biguint_below(&(&m * 2u32 + 1u32));
                    let (_, steps) =
                        fast_mod_exp_counted(&a, &n, &f, &tv, InverseMode::Recursive).unwrap();
                    let r = &n % tv.phi();
                    let denom = l + tv.phi().bits() as f64 + r.bits().max(1) as f64;
                    k_max = k_max.max(steps.multiplications as f64 / denom);
                }
            }
        }
    }
    assert!(k_max <= 6.0, "step bound constant blew up: {k_max:.3}");

    // (d) The cost model tracks measured multiplications: Pearson r >= 0.9.
    let mut costs = Vec::new();
    let mut mults = Vec::new();
    let w = CostWeights::default();
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        for e in 1..=8u32 {
            let f = prime_power(p, e);
            let m_u64 = f.value().to_u64().unwrap();
            for t in 1..=e {
                let tv = ParameterVector::new(&f, vec![t]).unwrap();
                let mut a = m_u64 / 2 + 1;
                while !big(a).gcd(f.value()).is_one() {
                    a += 1;
                }
                let n = 2 * m_u64 - 3;
                let (_, steps) =
                    fast_mod_exp_counted(&big(a), &big(n), &f, &tv, InverseMode::Recursive)
                        .unwrap();
                costs.push(cost_model(&f, &tv, &w));
                mults.push(steps.multiplications as f64);
            }
        }
    }
    let r = pearson(&costs, &mults);
    assert!(r >= 0.9, "cost model correlation too weak: r = {r:.4}");

    println!(
        "criterion 5 (complexity shape: band [{min:.2}, {max:.2}], K={k_max:.2}, r={r:.3}): PASS"
    );
}

#[test]
fn criterion_06_figure3_reproduction() {
    // p = 101, e = 200, a = 13, n = floor(p^e / 3), t in [1, 50].
    let p = big(101);
    let n = p.pow(200) / big(3);
    let points = sweep_t(&p, 200, &big(13), &n, 1, 50, 3).unwrap();
    assert_eq!(points.len(), 50);
    // Residues are cross-checked against the baseline inside the sweep;
    // verify directly here as well that every t yields the same residue.
    let f = prime_power(101, 200);
    let mut residues = Vec::new();
    for t in 1..=50u32 {
        let tv = ParameterVector::new(&f, vec![t]).unwrap();
        residues.push(fast_mod_exp(&big(13), &n, &f, &tv, InverseMode::Recursive).unwrap());
    }
    assert!(residues.windows(2).all(|w| w[0] == w[1]), "residues differ across t");

    let steps: Vec<(f64, f64)> = points
        .iter()
        .map(|pt| (f64::from(pt.t), pt.steps_fast as f64))
        .collect();
    let fit = fit_t_curve(&steps).unwrap();
    assert!(
        fit.r_squared >= 0.9,
        "a*t + b/t fit too weak: R^2 = {}",
        fit.r_squared
    );
    println!(
        "criterion 6 (parameter sweep fit: a={:.2} b={:.2} R^2={:.4}): PASS",
        fit.coefficients[0], fit.coefficients[1], fit.r_squared
    );
}

#[test]
fn criterion_07_sqrt_ratio_fit() {
    let cfg = SqrtFamilyConfig { n_lo: 2, n_hi: 20, seed: 0, repeats: 3, ..Default::default() };
    let points = sweep_sqrt_family(&cfg).unwrap();
    assert_eq!(points.len(), 19);
    let ratios: Vec<(f64, f64)> = points
        .iter()
        .map(|pt| (pt.log10_m, pt.steps_baseline as f64 / pt.steps_fast as f64))
        .collect();
    let fit = fit_sqrt_curve(&ratios).unwrap();
    assert!(
        fit.r_squared >= 0.8,
        "c*sqrt(x) fit too weak: R^2 = {}",
        fit.r_squared
    );
    println!(
        "criterion 7 (sqrt ratio fit: c={:.3} R^2={:.4}): PASS",
        fit.coefficients[0], fit.r_squared
    );
}

#[test]
fn criterion_08_niven_average() {
    // Oracle run gave 1.705194 at 10^6; the 0.05 band has two orders of
    // magnitude of headroom.
    let at_million = niven_average(1_000_000, 10_000_000).unwrap();
    assert!(
        (at_million - 1.705).abs() < 0.05,
        "average {at_million} strayed from Niven's constant"
    );

    // Exact agreement with per-number trial division at 10^4.
    let limit = 10_000u64;
    let mut oracle_sum = 1u64;
    for n in 2..=limit {
        let mut rest = n;
        let mut best = 0u32;
        let mut d = 2;
        while d * d <= rest {
            if rest % d == 0 {
                let mut e = 0;
                while rest % d == 0 {
                    rest /= d;
                    e += 1;
                }
                best = best.max(e);
            }
            d += 1;
        }
        if rest > 1 {
            best = best.max(1);
        }
        oracle_sum += u64::from(best);
    }
    let expected = oracle_sum as f64 / limit as f64;
    assert_eq!(niven_average(limit, 10_000_000).unwrap(), expected);

    println!("criterion 8 (Niven average {at_million:.6} within 0.05 of 1.705): PASS");
}

#[test]
fn criterion_09_series_tightness() {
    // Per grid modulus: l+1 terms never change any sampled residue, and
    // some (t, a, n) witnesses that l-1 terms break. Not every t admits a
    // witness (2-adic valuations can zero a top term for every input), so
    // the witness search ranges over t.
    let mut grid: Vec<FactoredModulus> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for e in 1..=8u32 {
            if BigUint::from(p).pow(e).bits() <= 30 {
                grid.push(prime_power(p, e));
            }
        }
    }
    for composite in [12u64, 18, 20, 45, 360] {
        grid.push(factorize(composite));
    }

    grid.par_iter().for_each(|f| {
        let m = f.value().clone();
        let mut witness = false;
        let mut t_choices: Vec<Vec<u32>> = vec![vec![1; f.exponents().len()]];
        t_choices.push(f.exponents().to_vec());
        if f.max_exponent() >= 3 {
            t_choices.push(f.exponents().iter().map(|&e| e.div_ceil(2)).collect());
        }
        for t in t_choices {
            let tv = ParameterVector::new(f, t).unwrap();
            let l = series_length(f, &tv);
            let mut rng = ChaCha8Rng::seed_from_u64(m.bits() + u64::from(l));
            for _ in 0..60 {
                let a = random_coprime(&mut rng, &m);
                let n = rng.gen_biguint_below(&(&m * 2u32 + 1u32));
                let exact = fast_mod_exp(&a, &n, f, &tv, InverseMode::Recursive).unwrap();
                assert_eq!(exact, mod_exp_baseline(&a, &n, &m));
                let extended =
                    fast_mod_exp_truncated(&a, &n, f, &tv, InverseMode::Recursive, l + 1).unwrap();
                assert_eq!(extended, exact, "extension changed m={m} a={a} n={n}");
                let truncated =
                    fast_mod_exp_truncated(&a, &n, f, &tv, InverseMode::Recursive, l - 1).unwrap();
                if truncated != exact {
                    witness = true;
                }
            }
        }
        assert!(witness, "series length is not tight for any sampled input on m={m}");
    });

    println!("criterion 9 (series tightness): PASS");
}

#[test]
fn criterion_10_inverse_recursion_gap_regression() {
    // The recursion's entry at (m=18, i=7) deviates from the true inverse.
    let m18 = big(18);
    let primes = [big(2), big(3)];
    let table = InversePairTable::generate(7, &m18, &primes);
    let recursive = table.get(7).unwrap();
    assert_eq!(recursive.u, big(4));
    let direct = direct_inverse_pair(7, &m18, &primes).unwrap();
    assert_eq!(direct.u, big(13));
    assert_ne!(recursive.u, direct.u);

    // End-to-end correctness survives on every 18-like modulus: all valid
    // t, every coprime base, exhaustive n.
    for m in [12u64, 18, 20, 24, 36, 45, 50, 54, 75, 98, 99] {
        let f = factorize(m);
        let mut t_stack: Vec<Vec<u32>> = vec![vec![]];
        for &e in f.exponents() {
            let mut next = Vec::new();
            for prefix in &t_stack {
                for t in 1..=e {
                    let mut v = prefix.clone();
                    v.push(t);
                    next.push(v);
                }
            }
            t_stack = next;
        }
        for t in t_stack {
            let tv = ParameterVector::new(&f, t).unwrap();
            for a in 1..m {
                if !big(a).gcd(f.value()).is_one() {
                    continue;
                }
                for n in 0..=2 * m {
                    check_both_modes(&big(a), &big(n), &f, &tv);
                }
            }
        }
    }

    println!("criterion 10 (inverse-recursion gap regression): PASS");
}
