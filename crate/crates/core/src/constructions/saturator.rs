use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setlib::{dyadic_family, DyadicFamilyParams};
use crate::trig::{lp_norm, GridSignal, NormExponent, TrigPoly};

/// Numbers backing a lower-bound claim on a target set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub norm: f64,
    pub min_on_target_set: f64,
    pub bound_required: f64,
    /// `min_on_target_set - bound_required`.
    pub margin: f64,
}

impl Certificate {
    pub fn new(norm: f64, min_on_target_set: f64, bound_required: f64) -> Self {
        Self {
            norm,
            min_on_target_set,
            bound_required,
            margin: min_on_target_set - bound_required,
        }
    }

    pub fn holds(&self, tolerance: f64) -> bool {
        self.margin >= -tolerance
    }
}

fn require_grid(m: usize, required: usize) -> Result<()> {
    if m < required || !m.is_power_of_two() {
        return Err(Error::GridTooCoarse { required, got: m });
    }
    Ok(())
}

/// `χ_j(x) = clamp(2 - 2^j dist(x, 2^{-J}ℤ), 0, 1)` on an `M`-point grid, `M >= 8·2^j`.
pub fn bump_chi(params: DyadicFamilyParams, m: usize) -> Result<GridSignal> {
    require_grid(m, 8 << params.j())?;
    let step = m >> params.big_j();
    let r = (m >> params.j()) as f64;
    GridSignal::new(
        (0..m)
            .map(|i| {
                let d = (i % step).min(step - i % step) as f64;
                Complex64::new((2.0 - d / r).clamp(0.0, 1.0), 0.0)
            })
            .collect(),
    )
}

/// `2^{-(J-j+2)/p}`.
pub fn pj_amplitude(params: DyadicFamilyParams, p: NormExponent) -> f64 {
    (-(params.big_j() as f64 - params.j() as f64 + 2.0) * p.reciprocal()).exp2()
}

/// `2^{-(J-j+2)/p}/4`, the guaranteed modulus of `P_j` on `𝐈_j`.
pub fn pj_lower_bound(params: DyadicFamilyParams, p: NormExponent) -> f64 {
    0.25 * pj_amplitude(params, p)
}

/// `P_j = 2^{-(J-j+2)/p} e_{2^j} σ_{2^j} χ_j`, with `χ_j` sampled on `M >= 8·2^{j+1}` points.
pub fn saturator_pj(params: DyadicFamilyParams, p: NormExponent, m: usize) -> Result<TrigPoly> {
    require_grid(m, 16 << params.j())?;
    let n = 1u64 << params.j();
    let chi = bump_chi(params, m)?;
    Ok(chi
        .spectrum_through(n - 1)?
        .fejer(n)
        .modulate(n as i64)
        .scale_real(pj_amplitude(params, p)))
}

/// `‖P_j‖_p` and `min |P_j|` over the grid points of `𝐈_j`, both on the `M`-point grid.
pub fn certify_pj(params: DyadicFamilyParams, p: NormExponent, pj: &TrigPoly, m: usize) -> Result<Certificate> {
    let grid = pj.to_grid(m)?;
    let min = dyadic_family(params)
        .grid_indices(m)?
        .into_iter()
        .map(|i| grid.samples()[i].norm())
        .fold(f64::INFINITY, f64::min);
    Ok(Certificate::new(lp_norm(&grid, p), min, pj_lower_bound(params, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setlib::PointSet;
    use crate::trig::SpectrumInterval;

    #[test]
    fn chi_shape() {
        let params = DyadicFamilyParams::new(8, 2.0).unwrap();
        let m = 1 << 12;
        let chi = bump_chi(params, m).unwrap();
        let fam = dyadic_family(params);
        for (i, z) in chi.samples().iter().enumerate() {
            let x = i as f64 / m as f64;
            if fam.contains(x) {
                assert_eq!(z.re, 1.0);
            }
            if fam.distance_to_centers(x) >= 2.0 * params.radius() {
                assert_eq!(z.re, 0.0);
            }
        }
        let bound = (params.big_j() as f64 - 8.0 + 2.0).exp2();
        assert!(chi.mean().re <= bound);
        assert!(bump_chi(params, 1 << 10).is_err());
    }

    #[test]
    fn pj_spectrum_and_certificate() {
        let params = DyadicFamilyParams::new(10, 2.0).unwrap();
        let m = 1 << 14;
        let p = NormExponent::one();
        let pj = saturator_pj(params, p, m).unwrap();
        assert!(pj.spectrum_within(&SpectrumInterval::new(0, 2047).unwrap()));
        let cert = certify_pj(params, p, &pj, m).unwrap();
        assert!(cert.norm <= 1.0 + 1e-9);
        assert!(cert.holds(1e-6), "{cert:?}");
    }
}
