use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::{Direction, TrialRow, VerificationReport};
use crate::constructions::{holo_kernel, holo_log_derivative, HoloKernelParams};
use crate::error::Result;
use crate::par;
use crate::random::{derive_seed, rng};

/// Allowed relative excess of `max |f'/f|` over `ωk`.
pub const LOG_DERIVATIVE_TOL: f64 = 1e-6;

/// The four margins of the comb kernel on a boundary grid plus seeded interior samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoloBounds {
    pub k: u64,
    pub omega: f64,
    pub grid: usize,
    pub interior_samples: usize,
    /// `min Re f · ωk` over boundary and interior samples.
    pub c1: f64,
    /// `min_{J_k^ω} |f| / ω`.
    pub c2: f64,
    /// `max_𝕋 |f| / ω`.
    pub c3: f64,
    /// `max |f'/f| / (ωk)` over boundary and interior samples.
    pub c4: f64,
    pub min_re_boundary: f64,
    pub min_re_interior: f64,
    /// `f(0)`, which equals 1.
    pub f_at_origin: (f64, f64),
}

impl HoloBounds {
    pub fn log_derivative_ok(&self) -> bool {
        self.c4 <= 1.0 + LOG_DERIVATIVE_TOL
    }

    pub fn real_part_positive(&self) -> bool {
        self.min_re_boundary > 0.0 && self.min_re_interior > 0.0
    }
}

/// Evaluates the kernel by its defining sums on the `M`-point boundary grid and at
/// `interior` seeded points of the open disk.
pub fn check_holo_bounds(params: &HoloKernelParams, m: usize, interior: usize, seed: u64) -> Result<HoloBounds> {
    let mut in_comb = vec![false; m];
    for i in params.comb().grid_indices(m) {
        in_comb[i] = true;
    }
    let boundary = par::map_indexed(m, |i| {
        let z = Complex64::from_polar(1.0, TAU * i as f64 / m as f64);
        let f = holo_kernel(params, z).expect("on the circle");
        let d = holo_log_derivative(params, z).expect("on the circle");
        (f, d.norm(), in_comb[i])
    });
    let mut r = rng(seed);
    let inner: Vec<Complex64> = (0..interior)
        .map(|_| Complex64::from_polar(r.random::<f64>().sqrt(), TAU * r.random::<f64>()))
        .collect();
    let inner_vals: Vec<(Complex64, f64)> = inner
        .iter()
        .map(|&z| {
            let f = holo_kernel(params, z).expect("inside the disk");
            (f, holo_log_derivative(params, z).expect("inside the disk").norm())
        })
        .collect();

    let wk = params.omega() * params.k() as f64;
    let min_re_boundary = boundary.iter().map(|b| b.0.re).fold(f64::INFINITY, f64::min);
    let min_re_interior = inner_vals.iter().map(|b| b.0.re).fold(f64::INFINITY, f64::min);
    let min_comb = boundary
        .iter()
        .filter(|b| b.2)
        .map(|b| b.0.norm())
        .fold(f64::INFINITY, f64::min);
    let max_abs = boundary.iter().map(|b| b.0.norm()).fold(0.0, f64::max);
    let max_ld = boundary
        .iter()
        .map(|b| b.1)
        .chain(inner_vals.iter().map(|b| b.1))
        .fold(0.0, f64::max);
    let f0 = holo_kernel(params, Complex64::new(0.0, 0.0))?;
    Ok(HoloBounds {
        k: params.k(),
        omega: params.omega(),
        grid: m,
        interior_samples: interior,
        c1: min_re_boundary.min(min_re_interior) * wk,
        c2: min_comb / params.omega(),
        c3: max_abs / params.omega(),
        c4: max_ld / wk,
        min_re_boundary,
        min_re_interior,
        f_at_origin: (f0.re, f0.im),
    })
}

/// `ω = max(log k, 3)`, the sharpness used by the sweep.
pub fn sweep_omega(k: u64) -> f64 {
    (k as f64).ln().max(3.0)
}

/// Bounds for every `k` with `ω = max(log k, 3)`; the report's rows carry `c4` per `k`, and the
/// assertions cover positivity, the `f'/f` bound, factor-2 stability of `c2`, `c3`, `c4`
/// and the `C_1/(ωk)` lower bound for `Re f` with `C_1` fitted at the first `k`.
pub fn holo_sweep(ks: &[u64], m: usize, interior: usize, seed: u64) -> Result<(Vec<HoloBounds>, VerificationReport)> {
    let bounds = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let params = HoloKernelParams::new(k, sweep_omega(k))?;
            check_holo_bounds(&params, m, interior, derive_seed(seed, i as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = bounds
        .iter()
        .enumerate()
        .map(|(i, b)| TrialRow {
            trial: 0,
            seed: derive_seed(seed, i as u64),
            scale: b.k,
            ratio: b.c4,
        })
        .collect();
    let mut report = VerificationReport::from_rows("holo", seed, rows, Direction::Upper);
    report.assert(
        "re_f_positive",
        bounds.iter().all(HoloBounds::real_part_positive),
        format!(
            "min Re f = {:.6e}",
            bounds.iter().map(|b| b.min_re_boundary.min(b.min_re_interior)).fold(f64::INFINITY, f64::min)
        ),
    );
    report.assert(
        "log_derivative_bound",
        bounds.iter().all(HoloBounds::log_derivative_ok),
        format!("max |f'/f|/(ωk) = {:.9}", report.worst_ratio),
    );
    let margins: [(&str, fn(&HoloBounds) -> f64); 3] = [
        ("c2_stability", |b| b.c2),
        ("c3_stability", |b| b.c3),
        ("c4_stability", |b| b.c4),
    ];
    for (name, pick) in margins {
        let vals: Vec<f64> = bounds.iter().map(pick).collect();
        let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        report.assert(name, hi / lo < 2.0, format!("range [{lo:.6}, {hi:.6}], spread {:.4}", hi / lo));
    }
    let c1_fit = bounds.first().map_or(f64::NAN, |b| b.c1);
    report.assert(
        "c1_lower_bound",
        bounds.iter().all(|b| b.c1 >= c1_fit / 2.0),
        format!("fitted c1 = {c1_fit:.6}; every case must reach c1/2"),
    );
    Ok((bounds, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_case() {
        let h = HoloKernelParams::new(8, 3.0).unwrap();
        let b = check_holo_bounds(&h, 1 << 10, 100, 1).unwrap();
        assert!(b.real_part_positive());
        assert!(b.log_derivative_ok());
        assert!((b.f_at_origin.0 - 1.0).abs() < 1e-14 && b.f_at_origin.1.abs() < 1e-14);
        assert!(b.c2 > 0.0 && b.c3 >= b.c2);
    }
}
