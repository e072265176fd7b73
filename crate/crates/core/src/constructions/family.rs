use serde::{Deserialize, Serialize};

use super::saturator::saturator_pj;
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::setlib::{dyadic_family, j_alpha, DyadicFamilyParams};
use crate::trig::{NormExponent, SpectrumInterval, TrigPoly};

/// The spectral block `(m_{j,r}, n_{j,r}]` carrying `(1/j²) e_{m_{j,r}} P_j` inside `g_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub j: u32,
    pub r: u32,
    pub m: u64,
    pub n: u64,
}

impl Block {
    pub fn interval(&self) -> SpectrumInterval {
        SpectrumInterval::new(self.m as i64, self.n as i64).expect("m < n")
    }
}

/// `g_r = Σ_{j_α <= j <= jmax} (1/j²) e_{(s+r)2^{j+1}} P_j` for `r = 1..=s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturatorFamily {
    pub s: u32,
    pub alpha: f64,
    pub p: NormExponent,
    pub jmax: u32,
    pub grid: usize,
    pub members: Vec<TrigPoly>,
    pub blocks: Vec<Block>,
}

/// `m_{j,r} = (s+r)2^{j+1}` and `n_{j,r} = m_{j,r} + 2^{j+1} - 1`.
pub fn block_bounds(s: u32, j: u32, r: u32) -> (u64, u64) {
    let w = 1u64 << (j + 1);
    let m = (s + r) as u64 * w;
    (m, m + w - 1)
}

/// `(C/j²)·2^{(j-J)/p}` with `C = 2^{-2/p}/4`: the modulus of block `(j, r)` on `𝐈_j`.
pub fn block_certificate(params: DyadicFamilyParams, p: NormExponent) -> f64 {
    let j = params.j() as f64;
    let c = 0.25 * (-2.0 * p.reciprocal()).exp2();
    c / (j * j) * ((j - params.big_j() as f64) * p.reciprocal()).exp2()
}

/// `Σ_{j > jmax} 1/j²`, which bounds the `L^p` norm of the discarded tail since `‖P_j‖_p <= 1`.
pub fn tail_bound(jmax: u32) -> f64 {
    let cut = jmax as u64 + 10_000;
    let head: f64 = (jmax as u64 + 1..=cut).rev().map(|j| 1.0 / (j as f64 * j as f64)).sum();
    // Euler–Maclaurin for Σ_{j > cut}
    let k = cut as f64;
    head + 1.0 / k - 0.5 / (k * k) + 1.0 / (6.0 * k * k * k)
}

/// Largest `jmax` whose top block frequency `n_{jmax,s}` stays at or below `M/8`.
pub fn default_jmax(s: u32, alpha: f64, m: usize) -> Result<u32> {
    let lo = j_alpha(alpha)?;
    (lo..40)
        .take_while(|&j| block_bounds(s, j, s).1 <= (m / 8) as u64)
        .last()
        .ok_or_else(|| invalid(format!("grid {m} too small for any level of the family")))
}

/// Largest constant `C` such that `n_{j,r} <= C·2^j` for every block, i.e. `2(2s+1)`.
pub fn spectrum_constant(s: u32) -> u64 {
    2 * (2 * s as u64 + 1)
}

pub fn disjoint_family(s: u32, alpha: f64, p: NormExponent, jmax: u32, m: usize) -> Result<SaturatorFamily> {
    if s == 0 {
        return Err(invalid("family size s must be >= 1"));
    }
    let lo = j_alpha(alpha)?;
    if jmax < lo {
        return Err(invalid(format!("jmax = {jmax} is below j_alpha = {lo}")));
    }
    let top = 2 * s as u64 * (1u64 << (jmax + 2));
    if !m.is_power_of_two() || top >= (m / 2) as u64 {
        return Err(Error::SpectralOverflow { width: top, grid: m });
    }
    let levels: Vec<u32> = (lo..=jmax).collect();
    let saturators = par::map_indexed(levels.len(), |i| {
        let params = DyadicFamilyParams::new(levels[i], alpha)?;
        saturator_pj(params, p, m)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut blocks = Vec::new();
    let members = (1..=s)
        .map(|r| {
            let mut coeffs = Vec::new();
            for (&j, pj) in levels.iter().zip(&saturators) {
                let (mj, nj) = block_bounds(s, j, r);
                blocks.push(Block { j, r, m: mj, n: nj });
                let w = 1.0 / (j as f64 * j as f64);
                coeffs.extend(pj.modulate(mj as i64).scale_real(w).iter());
            }
            TrigPoly::from_coeffs(coeffs)
        })
        .collect();
    blocks.sort_by_key(|b| (b.r, b.j));
    Ok(SaturatorFamily {
        s,
        alpha,
        p,
        jmax,
        grid: m,
        members,
        blocks,
    })
}

impl SaturatorFamily {
    pub fn levels(&self) -> std::ops::RangeInclusive<u32> {
        j_alpha(self.alpha).expect("validated") ..= self.jmax
    }

    pub fn member(&self, r: u32) -> &TrigPoly {
        &self.members[r as usize - 1]
    }

    pub fn block(&self, j: u32, r: u32) -> Option<Block> {
        self.blocks.iter().copied().find(|b| b.j == j && b.r == r)
    }

    /// `S_{n_{j,r}} g_r - S_{m_{j,r}} g_r`.
    pub fn block_poly(&self, j: u32, r: u32) -> Option<TrigPoly> {
        let b = self.block(j, r)?;
        Some(self.member(r).restrict(&b.interval()))
    }

    /// Minimum modulus of block `(j, r)` over the `M`-point grid points of `𝐈_j`.
    pub fn min_block_modulus(&self, j: u32, r: u32, m: usize) -> Result<f64> {
        let poly = self
            .block_poly(j, r)
            .ok_or_else(|| invalid(format!("no block ({j}, {r}) in the family")))?;
        let grid = poly.to_grid(m)?;
        let params = DyadicFamilyParams::new(j, self.alpha)?;
        Ok(dyadic_family(params)
            .grid_indices(m)?
            .into_iter()
            .map(|i| grid.samples()[i].norm())
            .fold(f64::INFINITY, f64::min))
    }

    pub fn tail_bound(&self) -> f64 {
        tail_bound(self.jmax)
    }

    /// True when every pair of blocks is disjoint and consecutive blocks are ordered as
    /// `n_{j,r} < m_{j,r+1}` and `n_{j,s} < m_{j+1,1}`.
    pub fn blocks_disjoint(&self) -> bool {
        let mut all: Vec<Block> = self.blocks.clone();
        all.sort_by_key(|b| b.m);
        all.windows(2).all(|w| w[0].n < w[1].m)
    }
}
