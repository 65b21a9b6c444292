use levysim_core::fit::fit_power_law;
use levysim_core::rng::rng_from_seed;
use proptest::prelude::*;
use rand::Rng;

/// Slope and intercept from the 2x2 normal equations in raw sums.
fn normal_equations(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
}

#[test]
fn noisy_power_law() {
    let mut rng = rng_from_seed(12345);
    let times: Vec<u64> = (10..=1000).step_by(7).collect();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| (t as f64).powf(0.75) * (1.0 + 0.05 * (2.0 * rng.gen::<f64>() - 1.0)))
        .collect();
    let fit = fit_power_law(&times, &values, None, (10, 1000)).unwrap();
    let x: Vec<f64> = times.iter().map(|&t| (t as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = normal_equations(&x, &y);
    assert!((fit.c - 0.75).abs() < 0.02);
    assert!((fit.c - slope).abs() < 1e-10);
    assert!((fit.log_prefactor - intercept).abs() < 1e-9);
    assert!(fit.r_squared > 0.9 && fit.r_squared <= 1.0);
    assert!(fit.c_stderr > 0.0);
}

proptest! {
    #[test]
    fn scale_changes_only_prefactor(c in 0.3f64..1.2, scale in 1e-3f64..1e3, wiggle in 0.0f64..0.2) {
        let times: Vec<u64> = (5..400).step_by(3).collect();
        let base: Vec<f64> = times
            .iter()
            .map(|&t| (t as f64).powf(c) * (1.0 + wiggle * ((t as f64).sin())))
            .collect();
        let scaled: Vec<f64> = base.iter().map(|v| v * scale).collect();
        let a = fit_power_law(&times, &base, None, (5, 400)).unwrap();
        let b = fit_power_law(&times, &scaled, None, (5, 400)).unwrap();
        prop_assert!((a.c - b.c).abs() < 1e-14);
        prop_assert!((b.log_prefactor - a.log_prefactor - scale.ln()).abs() < 1e-10);
    }

    #[test]
    fn doubling_time_keeps_exponent(c in 0.3f64..1.2) {
        let times: Vec<u64> = (10..=1000).step_by(10).collect();
        let doubled: Vec<u64> = times.iter().map(|t| 2 * t).collect();
        let values: Vec<f64> = times.iter().map(|&t| (t as f64).powf(c)).collect();
        let a = fit_power_law(&times, &values, None, (10, 1000)).unwrap();
        let b = fit_power_law(&doubled, &values, None, (20, 2000)).unwrap();
        prop_assert!((a.c - c).abs() < 1e-12);
        prop_assert!((b.c - c).abs() < 1e-12);
    }

    #[test]
    fn exact_data_ignores_window(c in 0.3f64..1.2, lo in 1u64..200, span in 10u64..800) {
        let times: Vec<u64> = (1..=1000).collect();
        let values: Vec<f64> = times.iter().map(|&t| 2.5 * (t as f64).powf(c)).collect();
        let fit = fit_power_law(&times, &values, None, (lo, lo + span)).unwrap();
        prop_assert!((fit.c - c).abs() < 1e-11);
    }
}
