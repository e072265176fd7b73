use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::setlib::{box_dimension, least_squares, BoxDimEstimate, GridSet};
use crate::trig::{NormExponent, TrigPoly};

/// Partial sums below this modulus count as zero.
pub const VANISHING: f64 = 1e-14;

/// Finite-scale divergence index at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceEstimate {
    pub beta_hat: f64,
    pub r2: f64,
    pub schedule: Vec<u64>,
    /// Running maximum of `|S_n f(x)|` along the schedule.
    pub envelope: Vec<f64>,
    pub vanishing: bool,
}

/// `2^m` for `m ∈ [lo, hi]`.
pub fn dyadic_schedule(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|m| 1u64 << m).collect()
}

/// `2^m` for `m = 1, …, ⌈log2(degree + 1)⌉`: the last entry is the first power of two beyond
/// the degree, where `S_n f = f`.
pub fn default_schedule(f: &TrigPoly) -> Vec<u64> {
    let top = 64 - f.degree().leading_zeros();
    dyadic_schedule(1, top.max(2))
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.len() < 2 || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("schedule needs at least two strictly increasing positive indices"));
    }
    Ok(())
}

/// Index of the first schedule entry in the fitted tail half.
pub fn tail_start(len: usize) -> usize {
    len / 2
}

fn running_max(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut best = 0.0f64;
    values
        .into_iter()
        .map(|v| {
            best = best.max(v);
            best
        })
        .collect()
}

/// Slope of `log envelope` against `log n` over the tail half, skipping vanishing entries.
fn fit_tail(schedule: &[u64], envelope: &[f64]) -> (f64, f64, bool) {
    let start = tail_start(schedule.len());
    let (xs, ys): (Vec<f64>, Vec<f64>) = schedule[start..]
        .iter()
        .zip(&envelope[start..])
        .filter(|(_, &e)| e >= VANISHING)
        .map(|(&n, &e)| ((n as f64).ln(), e.ln()))
        .unzip();
    let vanishing = envelope.last().is_none_or(|&e| e < VANISHING);
    if xs.len() < 2 {
        return (0.0, 1.0, vanishing);
    }
    let (slope, r2) = least_squares(&xs, &ys);
    (slope, r2, vanishing)
}

/// `|S_n f(x)|` along the schedule, its running maximum and the tail-half log-log slope.
pub fn divergence_index(f: &TrigPoly, x: f64, schedule: &[u64]) -> Result<DivergenceEstimate> {
    check_schedule(schedule)?;
    let envelope = running_max(f.partial_sums_at(x, schedule).iter().map(|z| z.norm()));
    let (beta_hat, r2, vanishing) = fit_tail(schedule, &envelope);
    Ok(DivergenceEstimate {
        beta_hat,
        r2,
        schedule: schedule.to_vec(),
        envelope,
        vanishing,
    })
}

/// `β̂` at every point of the `M`-point grid, from one FFT per schedule entry.
pub fn divergence_field(f: &TrigPoly, m: usize, schedule: &[u64]) -> Result<Vec<f64>> {
    check_schedule(schedule)?;
    let top = *schedule.last().expect("checked");
    if top >= (m / 2) as u64 {
        return Err(Error::Aliasing { n: top, grid: m });
    }
    let start = tail_start(schedule.len());
    let mut best = vec![0.0f64; m];
    // per-point least-squares accumulators over the non-vanishing tail entries
    let mut acc = vec![[0.0f64; 5]; m];
    for (i, &n) in schedule.iter().enumerate() {
        let grid = f.truncate(n).to_grid(m)?;
        let x = (n as f64).ln();
        for ((b, a), z) in best.iter_mut().zip(acc.iter_mut()).zip(grid.samples()) {
            *b = b.max(z.norm());
            if i >= start && *b >= VANISHING {
                let y = b.ln();
                a[0] += 1.0;
                a[1] += x;
                a[2] += y;
                a[3] += x * x;
                a[4] += x * y;
            }
        }
    }
    Ok(acc
        .iter()
        .map(|a| {
            let det = a[0] * a[3] - a[1] * a[1];
            if a[0] < 2.0 || det <= 0.0 {
                0.0
            } else {
                (a[0] * a[4] - a[1] * a[2]) / det
            }
        })
        .collect())
}

/// Grid points whose `β̂` lies in `[β - tolerance, β + tolerance]`.
pub fn level_set(f: &TrigPoly, beta: f64, tolerance: f64, m: usize, schedule: &[u64]) -> Result<GridSet> {
    let field = divergence_field(f, m, schedule)?;
    Ok(level_set_of(&field, beta, tolerance))
}

pub fn level_set_of(field: &[f64], beta: f64, tolerance: f64) -> GridSet {
    GridSet::new(field.iter().map(|&b| (b - beta).abs() <= tolerance).collect())
}

/// One row of a spectrum curve: the box dimension of a level set next to `1 - βp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub beta: f64,
    pub points: usize,
    pub estimate: BoxDimEstimate,
    pub theory: f64,
}

/// Box-counting settings and level-set tolerance for [`spectrum_curve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSettings {
    pub tolerance: f64,
    pub grid: usize,
    pub box_lo: u32,
    pub box_hi: u32,
}

/// Box dimension of each level set `E(β)` for `β` in `betas`, computed from a single field.
pub fn spectrum_curve(
    f: &TrigPoly,
    betas: &[f64],
    p: NormExponent,
    settings: SpectrumSettings,
    schedule: &[u64],
) -> Result<Vec<SpectrumPoint>> {
    if (1usize << settings.box_hi) > settings.grid {
        return Err(invalid(format!(
            "box scale 2^-{} is finer than the {}-point grid",
            settings.box_hi, settings.grid
        )));
    }
    let field = divergence_field(f, settings.grid, schedule)?;
    betas
        .iter()
        .map(|&beta| {
            let set = level_set_of(&field, beta, settings.tolerance);
            Ok(SpectrumPoint {
                beta,
                points: set.count(),
                estimate: box_dimension(&set, settings.box_lo, settings.box_hi)?,
                theory: 1.0 - beta * p.value(),
            })
        })
        .collect()
}

/// CSV with columns `beta,dimension,r2,theory`.
pub fn spectrum_csv(curve: &[SpectrumPoint]) -> String {
    let mut out = String::from("beta,dimension,r2,theory\n");
    for s in curve {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::verify::fmt_sig(s.beta),
            crate::verify::fmt_sig(s.estimate.slope),
            crate::verify::fmt_sig(s.estimate.r2),
            crate::verify::fmt_sig(s.theory)
        ));
    }
    out
}
