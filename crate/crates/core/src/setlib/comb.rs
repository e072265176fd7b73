use serde::{Deserialize, Serialize};

use super::intervals::PointSet;
use super::lattice::Lattice;
use crate::error::{invalid, Result};

/// Teeth count `k` and sharpness `ω` of the comb
/// `J_k^ω = ⋃_j [j/k - 1/(2ωk), j/k + 1/(2ωk)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawComb", into = "RawComb")]
pub struct CombParams {
    k: u64,
    omega: f64,
}

#[derive(Serialize, Deserialize)]
struct RawComb {
    k: u64,
    omega: f64,
}

impl TryFrom<RawComb> for CombParams {
    type Error = crate::Error;

    fn try_from(raw: RawComb) -> Result<Self> {
        Self::new(raw.k, raw.omega)
    }
}

impl From<CombParams> for RawComb {
    fn from(c: CombParams) -> Self {
        RawComb { k: c.k, omega: c.omega }
    }
}

impl CombParams {
    pub fn new(k: u64, omega: f64) -> Result<Self> {
        if k < 3 {
            return Err(invalid(format!("comb needs k >= 3 teeth, got {k}")));
        }
        if !(omega.is_finite() && omega > 1.0) {
            return Err(invalid(format!("comb sharpness must be > 1, got {omega}")));
        }
        Ok(Self { k, omega })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `1/(2ωk)`.
    pub fn half_width(&self) -> f64 {
        1.0 / (2.0 * self.omega * self.k as f64)
    }

    /// `|J_k^ω| = 1/ω`.
    pub fn measure(&self) -> f64 {
        1.0 / self.omega
    }

    fn lattice(&self) -> Lattice {
        Lattice {
            count: self.k as f64,
            radius: self.half_width(),
        }
    }

    /// Indices `m` of the grid points `m/M` in the comb.
    pub fn grid_indices(&self, m: usize) -> Vec<usize> {
        let l = self.lattice();
        (0..m).filter(|&i| l.contains(i as f64 / m as f64)).collect()
    }

    /// Grid points per tooth on an `M`-point grid (rounded down).
    pub fn points_per_tooth(&self, m: usize) -> usize {
        (2.0 * self.half_width() * m as f64).floor() as usize
    }
}

pub fn comb_membership(params: &CombParams, x: f64) -> bool {
    params.lattice().contains(x)
}

impl PointSet for CombParams {
    fn contains(&self, x: f64) -> bool {
        comb_membership(self, x)
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        self.lattice().meets(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tooth_centers_and_gaps() {
        for (k, omega) in [(3, 1.5), (16, 16f64.ln()), (100, 7.0)] {
            let c = CombParams::new(k, omega).unwrap();
            assert!(comb_membership(&c, 2.0 / k as f64));
            assert!(!comb_membership(&c, 1.0 / (2.0 * k as f64)));
            assert!((c.measure() - 1.0 / omega).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(CombParams::new(2, 3.0).is_err());
        assert!(CombParams::new(5, 1.0).is_err());
        assert!(CombParams::new(5, f64::INFINITY).is_err());
    }

    #[test]
    fn grid_fraction_approximates_measure() {
        let c = CombParams::new(16, 3.0).unwrap();
        let m = 1 << 14;
        let frac = c.grid_indices(m).len() as f64 / m as f64;
        assert!((frac - 1.0 / 3.0).abs() < 2.0 * 16.0 / m as f64);
    }
}
