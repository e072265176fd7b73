use serde::{Deserialize, Serialize};

use super::dyadic::{dyadic_family, j_alpha, DyadicFamilyParams};
use super::intervals::{IntervalSet, PointSet};
use crate::error::{invalid, Result};
use crate::par;

pub const MIN_SCALE: u32 = 4;
pub const MAX_SCALE: u32 = 20;

/// Least-squares slope of `ln N(m)` against `m ln 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDimEstimate {
    pub slope: f64,
    pub r2: f64,
    pub scales: Vec<u32>,
    #[serde(skip)]
    pub counts: Vec<u64>,
}

impl BoxDimEstimate {
    /// CSV with columns `scale_exponent,m_boxes_occupied`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale_exponent,m_boxes_occupied\n");
        for (m, n) in self.scales.iter().zip(&self.counts) {
            out.push_str(&format!("{m},{n}\n"));
        }
        out
    }
}

fn check_scales(m_lo: u32, m_hi: u32) -> Result<()> {
    if !(MIN_SCALE <= m_lo && m_lo < m_hi && m_hi <= MAX_SCALE) {
        return Err(invalid(format!(
            "box scales need {MIN_SCALE} <= m_lo < m_hi <= {MAX_SCALE}, got [{m_lo}, {m_hi}]"
        )));
    }
    Ok(())
}

/// Boxes `[b/2^m, (b+1)/2^m]` meeting the set or adjacent to a box that does (cyclically).
pub fn box_count<S: PointSet + ?Sized>(set: &S, m: u32) -> u64 {
    let n = 1usize << m;
    let h = 1.0 / n as f64;
    let occupied: Vec<bool> = (0..n).map(|b| set.meets(b as f64 * h, (b + 1) as f64 * h)).collect();
    (0..n)
        .filter(|&b| occupied[(b + n - 1) % n] || occupied[b] || occupied[(b + 1) % n])
        .count() as u64
}

pub fn box_counts<S: PointSet + ?Sized>(set: &S, m_lo: u32, m_hi: u32) -> Result<Vec<u64>> {
    check_scales(m_lo, m_hi)?;
    Ok(par::map_indexed((m_hi - m_lo + 1) as usize, |i| box_count(set, m_lo + i as u32)))
}

/// Box-counting dimension over the scales `2^{-m}`, `m ∈ [m_lo, m_hi]`.
pub fn box_dimension<S: PointSet + ?Sized>(set: &S, m_lo: u32, m_hi: u32) -> Result<BoxDimEstimate> {
    let counts = box_counts(set, m_lo, m_hi)?;
    Ok(fit_counts((m_lo..=m_hi).collect(), counts))
}

/// Fits `ln N` against `m ln 2`; slope clamped to `[0, 1]`.
pub fn fit_counts(scales: Vec<u32>, counts: Vec<u64>) -> BoxDimEstimate {
    if counts.first().copied().unwrap_or(0) == 0 {
        return BoxDimEstimate { slope: 0.0, r2: 1.0, scales, counts };
    }
    let xs: Vec<f64> = scales.iter().map(|&m| m as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|&n| (n.max(1) as f64).ln()).collect();
    let (slope, r2) = least_squares(&xs, &ys);
    BoxDimEstimate {
        slope: slope.clamp(0.0, 1.0),
        r2,
        scales,
        counts,
    }
}

/// Slope and coefficient of determination of the least-squares line; `r2 = 1` for constant data.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, 1.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy <= 1e-18 * n * (1.0 + my * my) { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, r2)
}

/// Level-`depth` middle-thirds Cantor construction: `2^depth` closed intervals of length `3^{-depth}`.
pub fn cantor_set(depth: u32) -> IntervalSet {
    let mut arcs = vec![(0.0, 1.0)];
    for _ in 0..depth {
        arcs = arcs
            .into_iter()
            .flat_map(|(a, b): (f64, f64)| {
                let t = (b - a) / 3.0;
                [(a, a + t), (b - t, b)]
            })
            .collect();
    }
    IntervalSet::from_arcs(arcs)
}

/// Box counts for the limsup cover of `⋃_j 𝐈_j`: at scale `2^{-m}` the cover is `𝐈_m`.
///
/// Needs `m_lo >= j_α`.
pub fn limsup_cover_counts(alpha: f64, m_lo: u32, m_hi: u32) -> Result<Vec<u64>> {
    check_scales(m_lo, m_hi)?;
    let lo = j_alpha(alpha)?;
    if m_lo < lo {
        return Err(invalid(format!("limsup cover needs m_lo >= j_alpha = {lo}, got {m_lo}")));
    }
    Ok(par::map_indexed((m_hi - m_lo + 1) as usize, |i| {
        let m = m_lo + i as u32;
        box_count(&dyadic_family(DyadicFamilyParams::new(m, alpha).expect("m above j_alpha")), m)
    }))
}

pub fn limsup_cover_dimension(alpha: f64, m_lo: u32, m_hi: u32) -> Result<BoxDimEstimate> {
    let counts = limsup_cover_counts(alpha, m_lo, m_hi)?;
    Ok(fit_counts((m_lo..=m_hi).collect(), counts))
}
