//! Least-squares fits for the benchmark curves: y = c*sqrt(x) for the
//! ratio-versus-size plot and y = a*t + b/t for the parameter sweep.

use crate::error::{Error, Result};

/// Fitted coefficients plus the coefficient of determination, clamped into
/// [0, 1] (no-intercept models can otherwise go negative on pathological
/// data).
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

fn r_squared(points: &[(f64, f64)], predict: impl Fn(f64) -> f64) -> f64 {
    let n = points.len() as f64;
    let mean = points.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let ss_res: f64 = points.iter().map(|&(x, y)| (y - predict(x)).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|&(_, y)| (y - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        // Constant data: either a perfect fit or no variance to explain.
        return if ss_res < 1e-12 { 1.0 } else { 0.0 };
    }
    (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
}

/// Least-squares c for y = c*sqrt(x); closed form c = sum(y sqrt(x)) / sum(x).
pub fn fit_sqrt_curve(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, _)| x < 0.0 || !x.is_finite()) {
        return Err(Error::DegenerateFit("x values must be finite and >= 0".into()));
    }
    let sum_x: f64 = points.iter().map(|&(x, _)| x).sum();
    if sum_x == 0.0 {
        return Err(Error::DegenerateFit("all x values are 0".into()));
    }
    let sum_y_sqrt_x: f64 = points.iter().map(|&(x, y)| y * x.sqrt()).sum();
    let c = sum_y_sqrt_x / sum_x;
    let r2 = r_squared(points, |x| c * x.sqrt());
    Ok(FitResult { coefficients: vec![c], r_squared: r2 })
}

/// Least-squares (a, b) for y = a*t + b/t via the 2x2 normal equations.
pub fn fit_t_curve(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(t, _)| t <= 0.0 || !t.is_finite()) {
        return Err(Error::DegenerateFit("t values must be finite and positive".into()));
    }
    let n = points.len() as f64;
    let s_t2: f64 = points.iter().map(|&(t, _)| t * t).sum();
    let s_inv2: f64 = points.iter().map(|&(t, _)| 1.0 / (t * t)).sum();
    let s_ty: f64 = points.iter().map(|&(t, y)| t * y).sum();
    let s_y_over_t: f64 = points.iter().map(|&(t, y)| y / t).sum();

    // | s_t2  n      | |a|   |s_ty      |
    // | n     s_inv2 | |b| = |s_y_over_t|
    let det = s_t2 * s_inv2 - n * n;
    if det.abs() < 1e-9 * s_t2.max(1.0) {
        // Cauchy-Schwarz equality: all t coincide.
        return Err(Error::DegenerateFit("normal system is singular".into()));
    }
    let a = (s_ty * s_inv2 - n * s_y_over_t) / det;
    let b = (s_t2 * s_y_over_t - n * s_ty) / det;
    let r2 = r_squared(points, |t| a * t + b / t);
    Ok(FitResult { coefficients: vec![a, b], r_squared: r2 })
}

/// Pearson correlation coefficient of two equal-length samples.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_fit_recovers_exact_data() {
        let points: Vec<(f64, f64)> = (1..=20).map(|i| (i as f64, 2.0 * (i as f64).sqrt())).collect();
        let fit = fit_sqrt_curve(&points).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_fit_of_zero_data_is_zero() {
        let points: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 0.0)).collect();
        let fit = fit_sqrt_curve(&points).unwrap();
        assert_eq!(fit.coefficients[0], 0.0);
    }

    #[test]
    fn sqrt_fit_degenerate_cases() {
        assert!(fit_sqrt_curve(&[(1.0, 2.0)]).is_err());
        assert!(fit_sqrt_curve(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn sqrt_fit_recovers_noisy_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let points: Vec<(f64, f64)> = (1..=100)
            .map(|i| {
                let x = i as f64;
                let noise = 1.0 + 0.05 * (rng.gen::<f64>() * 2.0 - 1.0);
                (x, 3.0 * x.sqrt() * noise)
            })
            .collect();
        let fit = fit_sqrt_curve(&points).unwrap();
        assert!(
            fit.coefficients[0] > 2.8 && fit.coefficients[0] < 3.2,
            "c={}",
            fit.coefficients[0]
        );
    }

    #[test]
    fn t_fit_recovers_exact_data() {
        let points: Vec<(f64, f64)> =
            (1..=30).map(|i| (i as f64, 2.0 * i as f64 + 8.0 / i as f64)).collect();
        let fit = fit_t_curve(&points).unwrap();
        let (a, b) = (fit.coefficients[0], fit.coefficients[1]);
        assert!((a - 2.0).abs() < 1e-9, "a={a}");
        assert!((b - 8.0).abs() < 1e-9, "b={b}");
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        // The fitted curve's minimum sits at t = sqrt(b/a).
        assert!(((b / a).sqrt() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn t_fit_degenerate_cases() {
        assert!(fit_t_curve(&[(2.0, 1.0)]).is_err());
        // All t equal: singular normal system.
        assert!(fit_t_curve(&[(3.0, 1.0), (3.0, 2.0), (3.0, 5.0)]).is_err());
        assert!(fit_t_curve(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn pearson_basics() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((pearson(&xs, &ys) - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg) + 1.0).abs() < 1e-12);
    }

    proptest! {
        // Adding points that lie exactly on the fitted curve leaves the
        // optimum stationary and can only grow the explained variance.
        #[test]
        fn sqrt_r_squared_never_decreases_on_curve_points(
            seed in 0u64..1000,
            extra in 1usize..6,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points: Vec<(f64, f64)> = (1..=10)
                .map(|i| (i as f64, (i as f64).sqrt() * (2.0 + rng.gen::<f64>())))
                .collect();
            let base = fit_sqrt_curve(&points).unwrap();
            let c = base.coefficients[0];
            for j in 0..extra {
                let x = 11.0 + j as f64;
                points.push((x, c * x.sqrt()));
            }
            let grown = fit_sqrt_curve(&points).unwrap();
            prop_assert!(grown.r_squared >= base.r_squared - 1e-9,
                "r2 {} -> {}", base.r_squared, grown.r_squared);
        }

        #[test]
        fn t_r_squared_never_decreases_on_curve_points(
            seed in 0u64..1000,
            extra in 1usize..6,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points: Vec<(f64, f64)> = (1..=10)
                .map(|i| {
                    let t = i as f64;
                    (t, 2.0 * t + 8.0 / t + rng.gen::<f64>())
                })
                .collect();
            let base = fit_t_curve(&points).unwrap();
            let (a, b) = (base.coefficients[0], base.coefficients[1]);
            for j in 0..extra {
                let t = 11.0 + j as f64;
                points.push((t, a * t + b / t));
            }
            let grown = fit_t_curve(&points).unwrap();
            prop_assert!(grown.r_squared >= base.r_squared - 1e-9,
                "r2 {} -> {}", base.r_squared, grown.r_squared);
        }
    }
}
