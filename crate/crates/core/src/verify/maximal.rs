use std::f64::consts::TAU;

use num_complex::Complex64;

use super::report::{scales_for, Direction, TrialRow, VerificationReport};
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::random::{derive_seed, rademacher_poly, rng};
use crate::trig::{lp_norm, NormExponent, TrigPoly};

const CHUNK: usize = 512;
const RESYNC: u64 = 64;

/// Grid used for the maximal function of a degree-`d` polynomial: `4d` rounded up, at least 16.
pub fn maximal_grid(degree: u64) -> usize {
    (4 * degree.max(4) as usize).next_power_of_two()
}

/// `max_{2<=n<=N} |S_n f(t_m)| / (log n)^{1+a}` at every grid point `t_m = m/M`.
pub fn maximal_function(f: &TrigPoly, n_max: u64, a: f64, m: usize) -> Result<Vec<f64>> {
    if n_max < 2 {
        return Err(invalid(format!("maximal function needs N >= 2, got {n_max}")));
    }
    if f.degree() >= (m / 2) as u64 {
        return Err(Error::Aliasing { n: f.degree(), grid: m });
    }
    // S_n f = f once n >= degree, and the weights decrease, so larger n cannot win
    let top = n_max.min(f.degree().max(2));
    let table: Vec<Complex64> = (0..m).map(|i| Complex64::from_polar(1.0, TAU * i as f64 / m as f64)).collect();
    let weights: Vec<f64> = (0..=top)
        .map(|n| if n < 2 { 0.0 } else { (n as f64).ln().powf(-2.0 * (1.0 + a)) })
        .collect();
    let coeffs: Vec<(Complex64, Complex64)> = (0..=top as i64).map(|n| (f.coeff(n), f.coeff(-n))).collect();
    let mut out = vec![0.0; m];
    for (c, out) in out.chunks_mut(CHUNK).enumerate() {
        maximal_chunk(c * CHUNK, out, &table, &coeffs, &weights);
    }
    Ok(out)
}

fn maximal_chunk(
    first: usize,
    out: &mut [f64],
    table: &[Complex64],
    coeffs: &[(Complex64, Complex64)],
    weights: &[f64],
) {
    let m = table.len();
    let len = out.len();
    let (mut zr, mut zi) = (vec![0.0; len], vec![0.0; len]);
    let (mut wr, mut wi) = (vec![0.0; len], vec![0.0; len]);
    let (mut sr, mut si) = (vec![0.0; len], vec![0.0; len]);
    let mut best = vec![0.0f64; len];
    for i in 0..len {
        let w = table[first + i];
        wr[i] = w.re;
        wi[i] = w.im;
        sr[i] = coeffs[0].0.re;
        si[i] = coeffs[0].0.im;
    }
    let top = coeffs.len() as u64 - 1;
    let mut n = 1u64;
    while n <= top {
        for i in 0..len {
            let z = table[(n as usize * (first + i)) % m];
            zr[i] = z.re;
            zi[i] = z.im;
        }
        let stop = (n + RESYNC).min(top + 1);
        while n < stop {
            let (p, q) = coeffs[n as usize];
            let w = weights[n as usize];
            for i in 0..len {
                // p e_n + q e_{-n} with e_n = z and e_{-n} = conj(z)
                sr[i] += (p.re + q.re) * zr[i] - (p.im - q.im) * zi[i];
                si[i] += (p.im + q.im) * zr[i] + (p.re - q.re) * zi[i];
                best[i] = best[i].max((sr[i] * sr[i] + si[i] * si[i]) * w);
                let nr = zr[i] * wr[i] - zi[i] * wi[i];
                let ni = zr[i] * wi[i] + zi[i] * wr[i];
                zr[i] = nr;
                zi[i] = ni;
            }
            n += 1;
        }
    }
    for i in 0..len {
        out[i] = best[i].sqrt();
    }
}

/// `∫ max_{2<=n<=N} |S_n f|/(log n)^{1+a} dx / ‖f‖_1` by grid quadrature.
pub fn check_weak_maximal(f: &TrigPoly, n_max: u64, a: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid(format!("excess exponent must be > 0, got {a}")));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let m = maximal_grid(f.degree());
    let maximal = maximal_function(f, n_max, a, m)?;
    let l1 = lp_norm(&f.to_grid(m)?, NormExponent::one());
    Ok(maximal.iter().sum::<f64>() / m as f64 / l1)
}

/// Weak maximal ratios of `trials` Rademacher polynomials of degree `N'` for each dyadic scale `N' <= N`.
pub fn run_weak_maximal(n_max: u64, a: f64, trials: u64, seed: u64) -> Result<VerificationReport> {
    if n_max < 4 {
        return Err(invalid(format!("N must be >= 4, got {n_max}")));
    }
    let scales = scales_for(n_max);
    let jobs: Vec<(u64, u64)> = scales.iter().flat_map(|&s| (0..trials).map(move |t| (s, t))).collect();
    let rows = par::map_indexed(jobs.len(), |i| {
        let (scale, trial) = jobs[i];
        let trial_seed = derive_seed(seed, trial);
        let f = rademacher_poly(&mut rng(derive_seed(trial_seed, scale)), -(scale as i64), scale as i64);
        check_weak_maximal(&f, scale, a).map(|ratio| TrialRow {
            trial,
            seed: trial_seed,
            scale,
            ratio,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::from_rows("maximal", seed, rows, Direction::Upper);
    let d = report.doubling_spread();
    report.assert(
        "doubling_stability",
        d < 2.0,
        format!("worst ratio changes by a factor up to {d:.4} per doubling of N"),
    );
    let limit = 1.1 * report.fitted_constant;
    report.assert(
        "bounded_by_fitted_constant",
        report.worst_ratio <= limit,
        format!(
            "worst ratio {:.6} vs 1.1 x fitted {:.6}; spread over all scales {:.4}",
            report.worst_ratio,
            report.fitted_constant,
            report.scale_spread()
        ),
    );
    Ok(report)
}
