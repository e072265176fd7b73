use std::f64::consts::PI;

use fdl_core::constructions::HoloKernelParams;
use fdl_core::random::{rademacher_poly, rng};
use fdl_core::trig::{dirichlet_eval, NormExponent, TrigPoly};
use fdl_core::verify::*;
use proptest::prelude::{prop_assert, proptest, ProptestConfig};

/// Lebesgue constant `‖D_N‖_1` from the closed trigonometric-sum formula.
fn lebesgue_constant(n: u64) -> f64 {
    let q = (2 * n + 1) as f64;
    1.0 / q + (2.0 / PI) * (1..=n).map(|k| (PI * k as f64 / q).tan() / k as f64).sum::<f64>()
}

/// Composite Simpson rule with `steps` (even) subintervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let inner: f64 = (1..steps)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn constant_strategy_matches_lebesgue_constant() {
    for n in [64u64, 512, 4096] {
        let exact = lebesgue_constant(n);
        let grid = variable_dirichlet_integral(n, Strategy::Constant, 0.0, 0);
        assert!((grid - exact).abs() < 2e-3 * exact, "N = {n}: {grid} vs {exact}");
        let fine = variable_dirichlet_integral_on(n, Strategy::Constant, 0.0, 0, 128 * n as usize);
        assert!((fine - exact).abs() < 1e-4 * exact, "N = {n}: {fine} vs {exact}");
    }
    // L_N = (4/π²) log N + 1.2703… + o(1), so the ratio tends to 4/π² ≈ 0.405 from above
    let limit = 4.0 / (PI * PI);
    let mut last = f64::INFINITY;
    for e in [8u32, 12, 16, 20] {
        let n = 1u64 << e;
        let l = lebesgue_constant(n);
        assert!((l - limit * (n as f64).ln() - 1.2703).abs() < 1e-3, "N = {n}");
        let r = l / (n as f64).ln();
        assert!(r > limit && r < last);
        last = r;
    }
}

#[test]
fn n_equal_one_integral() {
    // ∫|1 + 2cos 2πt| splits at t = ±1/3
    let exact = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
    let quad = simpson(|t| (1.0 + 2.0 * (2.0 * PI * t).cos()).abs(), -0.5, 0.5, 1 << 16);
    assert!((quad - exact).abs() < 1e-6);
    let grid = variable_dirichlet_integral(1, Strategy::Constant, 0.0, 0);
    assert!((grid - exact).abs() < 2e-2 * exact, "{grid} vs {exact}");
}

#[test]
fn greedy_dominates_other_strategies() {
    for n in [16u64, 100, 1024] {
        for t in [0.0, 0.123, 0.77] {
            let g = variable_dirichlet_integral(n, Strategy::Greedy, t, 5);
            let c = variable_dirichlet_integral(n, Strategy::Constant, t, 5);
            let r = variable_dirichlet_integral(n, Strategy::Random, t, 5);
            assert!(g >= c - 1e-12 && g >= r - 1e-12, "N = {n}, t = {t}");
        }
    }
}

#[test]
fn dirichlet_reports_cover_four_scales_and_are_deterministic() {
    let a = check_variable_dirichlet(1 << 10, Strategy::Greedy, 3, 9).unwrap();
    let b = check_variable_dirichlet(1 << 10, Strategy::Greedy, 3, 9).unwrap();
    assert!(a.scale_trend.len() >= 4);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.passed());
}

#[test]
fn maximal_dirichlet_kernel_below_fitted_constant() {
    let fitted = run_weak_maximal(256, 0.5, 10, 4).unwrap().worst_ratio;
    let r = check_weak_maximal(&TrigPoly::dirichlet(64), 64, 0.5).unwrap();
    assert!(r.is_finite() && r > 0.0);
    // D_N has ‖D_N‖_1 ~ log N, so its ratio is far from extremal
    assert!(r <= fitted * 10.0, "{r} vs {fitted}");
}

#[test]
fn derivative_of_truncated_dirichlet() {
    let (n, m) = (40u64, 90u64);
    let p = NormExponent::two();
    let r = check_derivative_bound(&TrigPoly::dirichlet(m), n, p).unwrap();
    // D_n'(t) = -4π Σ k sin(2πkt), maximized on a fine direct grid
    let sup = (0..200_000)
        .map(|i| {
            let t = i as f64 / 200_000.0;
            (1..=n).map(|k| k as f64 * (2.0 * PI * k as f64 * t).sin()).sum::<f64>().abs() * 4.0 * PI
        })
        .fold(0.0, f64::max);
    let nf = n as f64;
    let expected = sup / (nf.ln() * nf.powf(1.5) * ((2 * m + 1) as f64).sqrt());
    assert!((r - expected).abs() < 1e-3 * expected, "{r} vs {expected}");
}

#[test]
fn localization_dirichlet_central_hump() {
    let n = 50u64;
    let len = 1.0 / n as f64;
    let r = check_localization(&TrigPoly::dirichlet(n), 0.0, len, NormExponent::one(), 0.5).unwrap();
    let integral = simpson(|t| dirichlet_eval(n, t).abs(), -len / 2.0, len / 2.0, 1 << 14);
    let rate = localization_rate(n, len, NormExponent::one(), 0.5);
    let expected = integral / ((2 * n + 1) as f64 * len * rate);
    assert!((r - expected).abs() < 1e-4 * expected, "{r} vs {expected}");
    assert!(r >= 0.01);
}

#[test]
fn localization_report_lower_bound() {
    let r = run_localization(NormExponent::two(), 0.5, 4, 0.01, 2).unwrap();
    assert!(r.passed(), "{:?}", r.assertions);
    let min = r.rows.iter().map(|row| row.ratio).fold(f64::INFINITY, f64::min);
    assert_eq!(r.worst_ratio, min);
}

#[test]
fn holo_bounds_small_sweep() {
    let (bounds, report) = holo_sweep(&[8, 16, 32], 1 << 12, 200, 3).unwrap();
    assert!(report.passed(), "{:?}", report.assertions);
    for b in &bounds {
        assert!(b.f_at_origin.1.abs() < 1e-14);
        assert!((b.f_at_origin.0 - 1.0).abs() < 1e-13);
    }
    assert!(check_holo_bounds(&HoloKernelParams::new(8, 3.0).unwrap(), 1 << 10, 10, 0).is_ok());
    assert!(HoloKernelParams::new(64, 1.0).is_err());
}

#[test]
fn nikolsky_report_uses_dirichlet_extremal() {
    let r = run_nikolsky(256, NormExponent::two(), NormExponent::Infinity, 4, 1).unwrap();
    assert!(r.passed());
    let top = *r.scale_trend.last().unwrap();
    assert!((top.1 - (513f64 / 256.0).sqrt()).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn weak_maximal_monotone_in_n(seed in 0u64..1000, deg in 4i64..80) {
        let f = rademacher_poly(&mut rng(seed), -deg, deg);
        let mut last = 0.0;
        for n in [2u64, 4, 8, 16, 32, 64, 128] {
            let r = check_weak_maximal(&f, n, 0.5).unwrap();
            prop_assert!(r >= last - 1e-12);
            last = r;
        }
    }

    #[test]
    fn greedy_never_below_constant(n in 4u64..300, t in 0.0f64..1.0) {
        let g = variable_dirichlet_integral(n, Strategy::Greedy, t, 0);
        let c = variable_dirichlet_integral(n, Strategy::Constant, t, 0);
        prop_assert!(g >= c - 1e-12);
    }

    #[test]
    fn nikolsky_within_tolerance(seed in 0u64..1000, deg in 1i64..200, p in 1.0f64..4.0, dq in 0.0f64..4.0) {
        let f = rademacher_poly(&mut rng(seed), -deg, deg);
        let r = check_nikolsky(&f, NormExponent::new(p).unwrap(), NormExponent::new(p + dq).unwrap()).unwrap();
        prop_assert!(r <= NIKOLSKY_TOLERANCE);
    }
}
