use super::report::{scales_for, Direction, TrialRow, VerificationReport};
use crate::constructions::saturator_pj;
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::random::{derive_seed, rademacher_poly, rng};
use crate::setlib::DyadicFamilyParams;
use crate::trig::{grid_size_for, lp_norm, poly_lp_norm, NormExponent, TrigPoly};

/// Factor by which the Nikolsky ratio may exceed 1 before the check fails.
pub const NIKOLSKY_TOLERANCE: f64 = 3.0;

/// Nodes of the composite midpoint rule used for `L^p(I)` integrals.
pub const LOCAL_NODES: usize = 512;

fn reject_zero(f: &TrigPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(())
}

/// `‖P‖_q / (n^{1/p-1/q} ‖P‖_p)` with `n = max(degree(P), 1)`.
pub fn check_nikolsky(poly: &TrigPoly, p: NormExponent, q: NormExponent) -> Result<f64> {
    reject_zero(poly)?;
    if p.value() > q.value() {
        return Err(invalid(format!("Nikolsky needs p <= q, got p = {p}, q = {q}")));
    }
    let n = poly.degree().max(1) as f64;
    let grid = poly.to_grid(grid_size_for(poly.degree()))?;
    let factor = n.powf(p.reciprocal() - q.reciprocal());
    Ok(lp_norm(&grid, q) / (factor * lp_norm(&grid, p)))
}

/// Oversampling of the derivative grid beyond [`grid_size_for`] when locating the sup norm.
pub const SUP_OVERSAMPLE: usize = 8;

/// `‖(S_n f)'‖_∞ / ((log n) n^{1+1/p} ‖f‖_p)`.
pub fn check_derivative_bound(f: &TrigPoly, n: u64, p: NormExponent) -> Result<f64> {
    reject_zero(f)?;
    if n < 2 {
        return Err(invalid(format!("derivative bound needs n >= 2, got {n}")));
    }
    let d = f.truncate(n).derivative();
    let sup = if d.is_zero() {
        0.0
    } else {
        d.to_grid(grid_size_for(n) * SUP_OVERSAMPLE)?.max_abs()
    };
    let nf = n as f64;
    Ok(sup / (nf.ln() * nf.powf(1.0 + p.reciprocal()) * poly_lp_norm(f, p)?))
}

/// The rate factor `R`: `(log n)^{-(1+ε)/p}` for `p > 1` and `(log n)^{-(1+ε)}/log(1/|I|)` for `p = 1`.
pub fn localization_rate(n: u64, interval_length: f64, p: NormExponent, eps: f64) -> f64 {
    let l = (n.max(2) as f64).ln();
    match p {
        NormExponent::Finite(v) if v == 1.0 => l.powf(-(1.0 + eps)) / (1.0 / interval_length).ln(),
        _ => l.powf(-(1.0 + eps) * p.reciprocal()),
    }
}

/// `(∫_I |P|^p)^{1/p}` over `I = [a - |I|/2, a + |I|/2]` (the maximum for `p = ∞`).
pub fn local_norm(poly: &TrigPoly, a: f64, interval_length: f64, p: NormExponent) -> f64 {
    let h = interval_length / LOCAL_NODES as f64;
    let values = (0..LOCAL_NODES).map(|i| poly.eval(a - interval_length / 2.0 + (i as f64 + 0.5) * h).norm());
    match p {
        NormExponent::Infinity => values.fold(0.0, f64::max),
        NormExponent::Finite(v) => (values.map(|x| x.powf(v)).sum::<f64>() * h).powf(1.0 / v),
    }
}

/// `‖P‖_{L^p(I)} / (|P(a)| |I|^{1/p} R)` with `R` from [`localization_rate`] and `n = max(degree(P), 2)`.
pub fn check_localization(poly: &TrigPoly, a: f64, interval_length: f64, p: NormExponent, eps: f64) -> Result<f64> {
    reject_zero(poly)?;
    if p.is_infinite() {
        return Err(invalid("localization is stated for finite p"));
    }
    let deg = poly.degree().max(1) as f64;
    if !(interval_length > 0.0 && interval_length <= 1.0 / deg * (1.0 + 1e-12)) {
        return Err(Error::Hypothesis(format!(
            "|I| = {interval_length} must lie in (0, 1/degree(P)] = (0, {}]",
            1.0 / deg
        )));
    }
    let peak = poly.eval(a).norm();
    let norm = poly_lp_norm(poly, p)?;
    if peak < norm * (1.0 - 1e-12) {
        return Err(Error::Hypothesis(format!("|P(a)| = {peak} is below ‖P‖_p = {norm}")));
    }
    let rate = localization_rate(poly.degree(), interval_length, p, eps);
    Ok(local_norm(poly, a, interval_length, p) / (peak * interval_length.powf(p.reciprocal()) * rate))
}

/// Trial `trials` at each scale is the deterministic extremal member; the others are Rademacher.
fn scaled_family<F>(name: &str, n_max: u64, trials: u64, seed: u64, extremal: F, eval: impl Fn(&TrigPoly, u64) -> Result<f64> + Sync) -> Result<VerificationReport>
where
    F: Fn(u64) -> TrigPoly + Sync,
{
    if n_max < 4 {
        return Err(invalid(format!("N must be >= 4, got {n_max}")));
    }
    let scales = scales_for(n_max);
    let jobs: Vec<(u64, u64)> = scales.iter().flat_map(|&s| (0..=trials).map(move |t| (s, t))).collect();
    let rows = par::map_indexed(jobs.len(), |i| {
        let (scale, trial) = jobs[i];
        let trial_seed = derive_seed(seed, trial);
        let f = if trial == trials {
            extremal(scale)
        } else {
            rademacher_poly(&mut rng(derive_seed(trial_seed, scale)), -(scale as i64), scale as i64)
        };
        eval(&f, scale).map(|ratio| TrialRow {
            trial,
            seed: trial_seed,
            scale,
            ratio,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::from_rows(name, seed, rows, Direction::Upper);
    let limit = 1.1 * report.fitted_constant;
    report.assert(
        "bounded_by_fitted_constant",
        report.worst_ratio <= limit,
        format!("worst ratio {:.6} vs 1.1 x fitted {:.6}", report.worst_ratio, report.fitted_constant),
    );
    report.assert_scale_stability(2.0);
    Ok(report)
}

/// Nikolsky ratios of Rademacher polynomials of degree `N'` plus `D_{N'}` at each dyadic scale.
pub fn run_nikolsky(n_max: u64, p: NormExponent, q: NormExponent, trials: u64, seed: u64) -> Result<VerificationReport> {
    let mut report = scaled_family("nikolsky", n_max, trials, seed, TrigPoly::dirichlet, |f, _| check_nikolsky(f, p, q))?;
    report.assert(
        "within_tolerance",
        report.worst_ratio <= NIKOLSKY_TOLERANCE,
        format!("worst ratio {:.6} vs tolerance {NIKOLSKY_TOLERANCE}", report.worst_ratio),
    );
    Ok(report)
}

/// Derivative bound at `n = N'` for Rademacher polynomials on `[-N', N']` plus an extremal kernel
/// (the Fejér kernel for `p = 1`, `D_{N'}` otherwise).
pub fn run_derivative(n_max: u64, p: NormExponent, trials: u64, seed: u64) -> Result<VerificationReport> {
    let extremal = move |n: u64| {
        if p.value() == 1.0 {
            TrigPoly::dirichlet(n).fejer(n)
        } else {
            TrigPoly::dirichlet(n)
        }
    };
    scaled_family("derivative", n_max, trials, seed, extremal, |f, n| check_derivative_bound(f, n, p))
}

/// One member of the localization family: the polynomial, its peak point and a label.
#[derive(Clone, Debug)]
pub struct LocalizationCase {
    pub label: String,
    pub poly: TrigPoly,
    pub peak: f64,
}

/// `D_n` at 0, saturators `P_j` at a center of their dyadic family, and `random` Rademacher
/// polynomials of degree 64 at their grid maximum.
pub fn localization_family(p: NormExponent, random: u64, seed: u64) -> Result<Vec<LocalizationCase>> {
    let mut cases = Vec::new();
    for n in [16u64, 64, 256, 1024] {
        cases.push(LocalizationCase {
            label: format!("dirichlet/{n}"),
            poly: TrigPoly::dirichlet(n),
            peak: 0.0,
        });
    }
    for j in [8u32, 10] {
        let params = DyadicFamilyParams::new(j, 2.0)?;
        let poly = saturator_pj(params, p, 16 << j)?;
        let centers = params.center_count();
        cases.push(LocalizationCase {
            label: format!("saturator/{j}"),
            poly,
            peak: params.center(centers / 3),
        });
    }
    for t in 0..random {
        let poly = rademacher_poly(&mut rng(derive_seed(seed, t)), -64, 64);
        let grid = poly.to_grid(grid_size_for(poly.degree()))?;
        let (arg, _) = grid
            .samples()
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        cases.push(LocalizationCase {
            label: format!("random/{t}"),
            poly,
            peak: grid.point(arg),
        });
    }
    Ok(cases)
}

/// Localization ratios over [`localization_family`] with `|I| ∈ {1/n, 1/(2n)}`, `n = degree`;
/// the row `scale` is the degree and `trial` the family index.
pub fn run_localization(p: NormExponent, eps: f64, random: u64, delta: f64, seed: u64) -> Result<VerificationReport> {
    let cases = localization_family(p, random, seed)?;
    let rows = par::map_indexed(cases.len() * 2, |i| {
        let case = &cases[i / 2];
        let len = 1.0 / (case.poly.degree().max(1) << (i % 2)) as f64;
        check_localization(&case.poly, case.peak, len, p, eps).map(|ratio| TrialRow {
            trial: i as u64,
            seed,
            scale: case.poly.degree(),
            ratio,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::from_rows("localization", seed, rows, Direction::Lower);
    report.assert(
        "uniform_lower_bound",
        report.worst_ratio >= delta,
        format!("min ratio {:.6} vs delta {delta}", report.worst_ratio),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn nikolsky_examples() {
        let p = NormExponent::new(1.5).unwrap();
        let q = NormExponent::new(4.0).unwrap();
        let k = 12u64;
        let r = check_nikolsky(&TrigPoly::exponential(k as i64), p, q).unwrap();
        assert!((r - (k as f64).powf(-(1.0 / 1.5 - 0.25))).abs() < 1e-12);
        let n = 50u64;
        let r = check_nikolsky(&TrigPoly::dirichlet(n), NormExponent::two(), NormExponent::Infinity).unwrap();
        assert!((r - ((2 * n + 1) as f64 / n as f64).sqrt()).abs() < 1e-10);
        let c = TrigPoly::constant(Complex64::new(2.0, 1.0));
        assert!(check_nikolsky(&c, NormExponent::one(), NormExponent::Infinity).unwrap() <= 1.0 + 1e-12);
        assert!(check_nikolsky(&c, NormExponent::Infinity, NormExponent::one()).is_err());
        assert!(check_nikolsky(&TrigPoly::zero(), p, q).is_err());
    }

    #[test]
    fn derivative_example() {
        let n = 64u64;
        for p in [NormExponent::one(), NormExponent::two()] {
            let r = check_derivative_bound(&TrigPoly::exponential(n as i64), n, p).unwrap();
            let expected = std::f64::consts::TAU / ((n as f64).ln() * (n as f64).powf(p.reciprocal()));
            assert!((r - expected).abs() < 1e-10 * expected);
        }
        assert!(check_derivative_bound(&TrigPoly::zero(), 4, NormExponent::one()).is_err());
    }

    #[test]
    fn localization_exponential() {
        let e = TrigPoly::exponential(9);
        for p in [NormExponent::one(), NormExponent::two()] {
            let len = 1.0 / 9.0;
            let r = check_localization(&e, 0.3, len, p, 0.5).unwrap();
            let expected = 1.0 / localization_rate(9, len, p, 0.5);
            assert!((r - expected).abs() < 1e-9 * expected);
            assert!(r >= 1.0);
        }
        assert!(check_localization(&e, 0.3, 0.5, NormExponent::one(), 0.5).is_err());
    }

    #[test]
    fn localization_hypothesis() {
        // D_n vanishes at 1/(2n+1), far below its L^2 norm
        let d = TrigPoly::dirichlet(10);
        assert!(matches!(
            check_localization(&d, 1.0 / 21.0, 0.05, NormExponent::two(), 0.5),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn runners_pass_small() {
        let r = run_nikolsky(64, NormExponent::two(), NormExponent::Infinity, 5, 3).unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        let r = run_localization(NormExponent::one(), 0.5, 3, 0.01, 3).unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
    }
}
