use std::f64::consts::TAU;

use fdl_core::random::{rademacher_poly, rng};
use fdl_core::trig::*;
use fdl_core::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_poly(seed: u64, deg: i64) -> TrigPoly {
    let mut r = rng(seed);
    TrigPoly::from_coeffs((-deg..=deg).map(|k| (k, Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))))
}

/// `(1/n) Σ_{m<n} S_m f(x)` by running partial sums at a single point.
fn fejer_by_averaging(f: &TrigPoly, n: u64, x: f64) -> Complex64 {
    let mut s = f.coeff(0);
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..n {
        if m > 0 {
            let k = m as i64;
            s += f.coeff(k) * Complex64::from_polar(1.0, TAU * k as f64 * x)
                + f.coeff(-k) * Complex64::from_polar(1.0, -TAU * k as f64 * x);
        }
        total += s;
    }
    total / n as f64
}

/// Direct `O(M²)` circular convolution `(1/M) Σ_j f(t_j) D_n(t_i - t_j)`.
fn convolve_with_dirichlet(f: &GridSignal, n: u64) -> Vec<Complex64> {
    let m = f.size();
    (0..m)
        .map(|i| {
            f.samples()
                .iter()
                .enumerate()
                .map(|(j, v)| v * dirichlet_eval(n, (i as f64 - j as f64) / m as f64))
                .sum::<Complex64>()
                / m as f64
        })
        .collect()
}

#[test]
fn parseval_on_large_degree() {
    for seed in 0..10 {
        let f = random_poly(seed, 4096);
        let grid = f.to_grid(grid_size_for(4096)).unwrap();
        let l2 = lp_norm(&grid, NormExponent::two());
        assert!((l2 * l2 - f.energy()).abs() < 1e-10 * f.energy());
    }
}

#[test]
fn convolution_identity() {
    let f = random_poly(7, 20);
    let grid = f.to_grid(64).unwrap();
    for n in [0u64, 3, 11, 20, 25] {
        let direct = convolve_with_dirichlet(&grid, n);
        let fast = partial_sum(&f, n).unwrap().to_grid(64).unwrap();
        for (a, b) in direct.iter().zip(fast.samples()) {
            assert!((a - b).norm() < 1e-11, "n = {n}");
        }
    }
}

#[test]
fn grid_partial_sum_matches_poly() {
    let f = random_poly(3, 40);
    let grid = f.to_grid(256).unwrap();
    for n in [1u64, 10, 39, 40, 100] {
        let a = partial_sum(&grid, n.min(127)).unwrap();
        let b = partial_sum(&f, n).unwrap();
        assert!(a.sub(&b).coefficient_l1() < 1e-12, "n = {n}");
    }
}

#[test]
fn refinement_converges() {
    let f = rademacher_poly(&mut rng(9), -30, 30);
    let coarse = poly_lp_norm(&f, NormExponent::one()).unwrap();
    let fine = lp_norm(&f.to_grid(1 << 16).unwrap(), NormExponent::one());
    assert!((coarse - fine).abs() < 1e-3 * fine);
    let a = lp_norm(&f.to_grid(256).unwrap(), NormExponent::two());
    let b = lp_norm(&f.to_grid(4096).unwrap(), NormExponent::two());
    assert!((a - b).abs() < 1e-12 * b);
}

#[test]
fn exponential_norms_and_modulation() {
    let e = TrigPoly::exponential(17);
    for p in [NormExponent::one(), NormExponent::new(3.5).unwrap(), NormExponent::Infinity] {
        assert!((poly_lp_norm(&e, p).unwrap() - 1.0).abs() < 1e-12);
    }
    let shifted = modulate(&TrigPoly::dirichlet(2), 3);
    assert_eq!(shifted.frequencies().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval(seed in 0u64..100_000, deg in 0i64..600) {
        let f = random_poly(seed, deg);
        let grid = f.to_grid(grid_size_for(deg as u64)).unwrap();
        let l2 = lp_norm(&grid, NormExponent::two());
        prop_assert!((l2 * l2 - f.energy()).abs() <= 1e-10 * f.energy().max(1e-300));
    }

    #[test]
    fn projection_composes(seed in 0u64..100_000, deg in 0i64..300, n in 0u64..400, m in 0u64..400) {
        let f = random_poly(seed, deg);
        let a = partial_sum(&partial_sum(&f, m).unwrap(), n).unwrap();
        prop_assert_eq!(a, partial_sum(&f, n.min(m)).unwrap());
    }

    #[test]
    fn fejer_multiplier_matches_average(seed in 0u64..100_000, deg in 1i64..200, n in 1u64..250, x in 0.0f64..1.0) {
        let f = random_poly(seed, deg);
        let mult = fejer_mean(&f, n).unwrap().eval(x);
        let avg = fejer_by_averaging(&f, n, x);
        prop_assert!((mult - avg).norm() <= 1e-12 * f.coefficient_l1());
    }

    #[test]
    fn grid_roundtrip(seed in 0u64..100_000, deg in 0i64..100) {
        let f = random_poly(seed, deg);
        let back = f.to_grid(grid_size_for(deg as u64)).unwrap().to_trig_poly();
        prop_assert!(back.sub(&f).coefficient_l1() < 1e-11 * (1.0 + f.coefficient_l1()));
    }
}
