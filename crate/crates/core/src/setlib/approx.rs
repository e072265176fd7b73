use crate::error::{invalid, Result};

/// A finite binary expansion `x = Σ_i b_i 2^{-(i+1)}` of a point of `[0, 1)`.
///
/// Bits past the stored length are zero, so every value is a dyadic rational; choose
/// the length well past the depth being probed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryExpansion {
    bits: Vec<bool>,
}

impl BinaryExpansion {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_fn<F: Fn(usize) -> bool>(len: usize, bit: F) -> Self {
        Self::from_bits((0..len).map(bit).collect())
    }

    /// `Σ_{e ∈ exponents} 2^{-e}` with distinct exponents `e >= 1`.
    pub fn from_exponents(exponents: &[u32]) -> Result<Self> {
        let len = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut bits = vec![false; len];
        for &e in exponents {
            if e == 0 || bits[e as usize - 1] {
                return Err(invalid(format!("exponents must be distinct and >= 1, got {e}")));
            }
            bits[e as usize - 1] = true;
        }
        Ok(Self { bits })
    }

    /// Exact expansion of the binary fraction of `x` reduced mod 1.
    pub fn from_f64(x: f64) -> Self {
        let mut y = super::wrap(x);
        let mut bits = Vec::new();
        // doubling and subtracting are exact in binary floating point
        while y != 0.0 {
            y *= 2.0;
            let b = y >= 1.0;
            if b {
                y -= 1.0;
            }
            bits.push(b);
        }
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    fn bit(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    /// `log2` of the distance from `x` to the grid `ℤ/2^j`, or `None` when `x` is on it.
    pub fn log2_distance(&self, j: usize) -> Option<f64> {
        if self.bits[j.min(self.bits.len())..].iter().all(|b| !b) {
            return None;
        }
        // frac(2^j x) = 0.b_j b_{j+1}…; complement the bits when it exceeds 1/2
        let flip = self.bit(j);
        let mut i = j;
        while self.bit(i) == flip {
            i += 1;
        }
        let zeros = (i - j) as f64;
        let mantissa: f64 = (0..53)
            .map(|t| if self.bit(i + t) != flip { (-(t as f64) - 1.0).exp2() } else { 0.0 })
            .sum();
        Some(-(j as f64) - zeros + mantissa.log2())
    }
}

/// `max_{j ∈ [⌈depth/2⌉, depth]} -log2(dist(x, ℤ/2^j))/j`, the largest `α` such that
/// `|x - k/2^j| <= 2^{-αj}` for some `j` in the tail window; `+∞` for dyadic points.
pub fn dyadic_approx_exponent(x: f64, depth: u32) -> Result<f64> {
    dyadic_approx_exponent_bits(&BinaryExpansion::from_f64(x), depth)
}

pub fn dyadic_approx_exponent_bits(x: &BinaryExpansion, depth: u32) -> Result<f64> {
    Ok(window_exponents(x, depth)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Per-level exponents `-log2(d_j)/j` over the tail window, in increasing `j`.
pub fn window_exponents(x: &BinaryExpansion, depth: u32) -> Result<Vec<f64>> {
    if depth < 4 {
        return Err(invalid(format!("approximation depth must be >= 4, got {depth}")));
    }
    let lo = depth.div_ceil(2);
    Ok((lo..=depth)
        .map(|j| match x.log2_distance(j as usize) {
            None => f64::INFINITY,
            Some(l) => -l / j as f64,
        })
        .collect())
}

/// Running maximum of the window estimate over depths `4..=max_depth`; nondecreasing in depth.
pub fn approx_exponent_profile(x: &BinaryExpansion, max_depth: u32) -> Result<Vec<(u32, f64)>> {
    let mut best = f64::NEG_INFINITY;
    (4..=max_depth)
        .map(|d| {
            best = best.max(dyadic_approx_exponent_bits(x, d)?);
            Ok((d, best))
        })
        .collect()
}
