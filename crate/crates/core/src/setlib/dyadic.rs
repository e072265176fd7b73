use serde::{Deserialize, Serialize};

use super::intervals::PointSet;
use super::lattice::Lattice;
use crate::error::{invalid, Result};

/// Level `j` and exponent `α` of the dyadic intervals `I_{K,j} = [K/2^J - 2^{-j}, K/2^J + 2^{-j}]`,
/// with `J = ⌊j/α⌋ + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct DyadicFamilyParams {
    j: u32,
    alpha: f64,
    big_j: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    j: u32,
    alpha: f64,
}

impl TryFrom<RawParams> for DyadicFamilyParams {
    type Error = crate::Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.j, raw.alpha)
    }
}

impl From<DyadicFamilyParams> for RawParams {
    fn from(p: DyadicFamilyParams) -> Self {
        RawParams { j: p.j, alpha: p.alpha }
    }
}

/// `⌊j/α⌋ + 1`.
pub fn coarse_level(j: u32, alpha: f64) -> u32 {
    (j as f64 / alpha).floor() as u32 + 1
}

/// Smallest level `j` with `⌊j/α⌋ + 1 <= j - 2`.
pub fn j_alpha(alpha: f64) -> Result<u32> {
    check_alpha(alpha)?;
    (3..=62)
        .find(|&j| coarse_level(j, alpha) + 2 <= j)
        .ok_or_else(|| invalid(format!("no admissible level below 63 for alpha = {alpha}")))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(invalid(format!("alpha must be a finite number > 1, got {alpha}")));
    }
    Ok(())
}

impl DyadicFamilyParams {
    pub fn new(j: u32, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if j > 62 {
            return Err(invalid(format!("level j = {j} exceeds 62")));
        }
        let big_j = coarse_level(j, alpha);
        if big_j + 2 > j {
            return Err(invalid(format!(
                "level j = {j} is below j_alpha for alpha = {alpha} (J = {big_j} > j - 2)"
            )));
        }
        Ok(Self { j, alpha, big_j })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The coarse level `J`.
    pub fn big_j(&self) -> u32 {
        self.big_j
    }

    /// Half-width `2^{-j}` of each interval.
    pub fn radius(&self) -> f64 {
        (-(self.j as f64)).exp2()
    }

    pub fn center_count(&self) -> u64 {
        1 << self.big_j
    }

    pub fn center(&self, k: u64) -> f64 {
        k as f64 / self.center_count() as f64
    }
}

/// `𝐈_j`, the union of the `2^J` intervals `I_{K,j}`, together with its doubling `𝐈'_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicFamily {
    params: DyadicFamilyParams,
}

/// `𝐈'_j = ⋃ 2·I_{K,j}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubledFamily {
    params: DyadicFamilyParams,
}

pub fn dyadic_family(params: DyadicFamilyParams) -> DyadicFamily {
    DyadicFamily { params }
}

impl DyadicFamily {
    pub fn params(&self) -> DyadicFamilyParams {
        self.params
    }

    fn lattice(&self, scale: f64) -> Lattice {
        Lattice {
            count: self.params.center_count() as f64,
            radius: scale * self.params.radius(),
        }
    }

    /// The intervals `I_{K,j}` as `(left, right)` on the real line, `K = 0..2^J`.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let r = self.params.radius();
        (0..self.params.center_count())
            .map(|k| {
                let c = self.params.center(k);
                (c - r, c + r)
            })
            .collect()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.params.center_count()).map(|k| self.params.center(k))
    }

    /// Distance from `x` to the nearest center `K/2^J`.
    pub fn distance_to_centers(&self, x: f64) -> f64 {
        self.lattice(1.0).distance(x)
    }

    pub fn contains_doubled(&self, x: f64) -> bool {
        self.lattice(2.0).contains(x)
    }

    pub fn doubled(&self) -> DoubledFamily {
        DoubledFamily { params: self.params }
    }

    /// `|𝐈_j| = 2^{J-j+1}`.
    pub fn measure(&self) -> f64 {
        (self.params.big_j as f64 - self.params.j as f64 + 1.0).exp2()
    }

    /// Indices `m` of the grid points `m/M` lying in `𝐈_j`, computed in integer arithmetic.
    pub fn grid_indices(&self, m: usize) -> Result<Vec<usize>> {
        let step = self.grid_step(m)?;
        let r = m >> self.params.j;
        let mut out = Vec::with_capacity(self.params.center_count() as usize * (2 * r + 1));
        for c in (0..m).step_by(step) {
            for d in 0..=2 * r {
                out.push((c + m + d - r) % m);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn grid_step(&self, m: usize) -> Result<usize> {
        if !m.is_power_of_two() || m < (1usize << self.params.j) {
            return Err(crate::Error::GridTooCoarse {
                required: 1usize << self.params.j,
                got: m,
            });
        }
        Ok(m >> self.params.big_j)
    }

    /// The partition of `I_{K,j}` into `2^j` closed pieces of length `2^{-2j+1}`.
    pub fn o_partition(&self, k: u64) -> Vec<(f64, f64)> {
        let r = self.params.radius();
        let left = self.params.center(k) - r;
        let pieces = 1u64 << self.params.j;
        let width = 2.0 * r / pieces as f64;
        (0..pieces)
            .map(|l| (left + l as f64 * width, left + (l + 1) as f64 * width))
            .collect()
    }
}

impl PointSet for DyadicFamily {
    fn contains(&self, x: f64) -> bool {
        self.lattice(1.0).contains(x)
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        self.lattice(1.0).meets(lo, hi)
    }
}

impl PointSet for DoubledFamily {
    fn contains(&self, x: f64) -> bool {
        dyadic_family(self.params).lattice(2.0).contains(x)
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        dyadic_family(self.params).lattice(2.0).meets(lo, hi)
    }
}

/// Finite-depth test points for `D_α`: `K/2^J + θ·2^{-αJ}` for `θ ∈ {0, ±1/2}`, `K = 0..2^J`.
///
/// Points come grouped by center, in the order `θ = 0, -1/2, +1/2`.
pub fn dalpha_test_points(alpha: f64, depth: u32) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if depth == 0 || depth > 30 {
        return Err(invalid(format!("test depth must be in 1..=30, got {depth}")));
    }
    let count = 1u64 << depth;
    let h = 0.5 * (-alpha * depth as f64).exp2();
    let mut out = Vec::with_capacity(3 * count as usize);
    for k in 0..count {
        let c = k as f64 / count as f64;
        out.extend([c, super::wrap(c - h), super::wrap(c + h)]);
    }
    Ok(out)
}

/// Number of levels `j` in `window` with `x ∈ family(j)`.
pub fn limsup_membership<S, F>(family: F, x: f64, window: std::ops::RangeInclusive<u32>) -> Result<usize>
where
    S: PointSet,
    F: Fn(u32) -> S,
{
    if window.is_empty() {
        return Err(invalid("limsup window is empty"));
    }
    Ok(window.filter(|&j| family(j).contains(x)).count())
}

/// `limsup_membership` for the families `𝐈_j` at exponent `α`.
pub fn dyadic_limsup_hits(alpha: f64, x: f64, window: std::ops::RangeInclusive<u32>) -> Result<usize> {
    let lo = j_alpha(alpha)?;
    if *window.start() < lo {
        return Err(invalid(format!(
            "window starts at {} below j_alpha = {lo}",
            window.start()
        )));
    }
    limsup_membership(
        |j| dyadic_family(DyadicFamilyParams::new(j, alpha).expect("level above j_alpha")),
        x,
        window,
    )
}
