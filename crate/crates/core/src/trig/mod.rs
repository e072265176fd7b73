//! Sparse trigonometric polynomials and the grid engine.
//!
//! A [`TrigPoly`] is the exact spectral object; a [`GridSignal`] carries samples on the
//! dyadic grid `m/M` and is the quadrature substrate for norms. Partial sums and Fejér means
//! accept either through [`SpectralSource`].

mod fft;
mod grid;
mod norm;
mod poly;

pub use grid::GridSignal;
pub use norm::NormExponent;
pub use poly::{SpectrumInterval, TrigPoly, PRUNE_TOL};

use std::f64::consts::PI;


use crate::error::{invalid, Result};

/// Below this, `sin(πt)` is treated as a removable zero of the Dirichlet kernel.
const DIRICHLET_SINGULAR_TOL: f64 = 1e-12;

/// `D_n(t) = sin(π(2n+1)t) / sin(πt)`, with the limit `2n+1` at the integers.
pub fn dirichlet_eval(n: u64, t: f64) -> f64 {
    let s = (PI * t).sin();
    if s.abs() < DIRICHLET_SINGULAR_TOL {
        return (2 * n + 1) as f64;
    }
    (PI * (2 * n + 1) as f64 * t).sin() / s
}

/// Anything whose low-frequency Fourier coefficients can be read off exactly.
pub trait SpectralSource {
    /// Coefficients of all frequencies `|k| <= n`.
    fn spectrum_through(&self, n: u64) -> Result<TrigPoly>;
}

impl SpectralSource for TrigPoly {
    fn spectrum_through(&self, n: u64) -> Result<TrigPoly> {
        Ok(self.truncate(n))
    }
}

impl SpectralSource for GridSignal {
    fn spectrum_through(&self, n: u64) -> Result<TrigPoly> {
        GridSignal::spectrum_through(self, n)
    }
}

/// `S_n f`.
pub fn partial_sum<S: SpectralSource + ?Sized>(f: &S, n: u64) -> Result<TrigPoly> {
    f.spectrum_through(n)
}

/// `σ_n f = (S_0 f + … + S_{n-1} f)/n`, computed with the multiplier `max(0, 1-|k|/n)`.
pub fn fejer_mean<S: SpectralSource + ?Sized>(f: &S, n: u64) -> Result<TrigPoly> {
    if n == 0 {
        return Err(invalid("Fejér mean needs n >= 1"));
    }
    Ok(f.spectrum_through(n - 1)?.fejer(n))
}

pub fn modulate(f: &TrigPoly, k: i64) -> TrigPoly {
    f.modulate(k)
}

/// Riemann-sum L^p norm `(Σ_m |f(t_m)|^p / M)^{1/p}`; the sample maximum for `p = ∞`.
pub fn lp_norm(f: &GridSignal, p: NormExponent) -> f64 {
    lp_norm_of(f.samples().iter().map(|z| z.norm()), f.size(), p)
}

/// L^p norm of moduli sampled uniformly with `count` points.
pub(crate) fn lp_norm_of<I: Iterator<Item = f64>>(moduli: I, count: usize, p: NormExponent) -> f64 {
    match p {
        NormExponent::Infinity => moduli.fold(0.0, f64::max),
        NormExponent::Finite(q) if q == 1.0 => moduli.sum::<f64>() / count as f64,
        NormExponent::Finite(q) if q == 2.0 => (moduli.map(|a| a * a).sum::<f64>() / count as f64).sqrt(),
        NormExponent::Finite(q) => (moduli.map(|a| a.powf(q)).sum::<f64>() / count as f64).powf(1.0 / q),
    }
}

/// Grid size used for a polynomial of degree `d`: `8d` rounded up to a power of two (at least 16).
pub fn grid_size_for(degree: u64) -> usize {
    ((8 * degree.max(2)) as usize).next_power_of_two()
}

/// `L^p` norm of a polynomial on its default grid.
pub fn poly_lp_norm(f: &TrigPoly, p: NormExponent) -> Result<f64> {
    let (lo, hi) = f.spectrum_bounds().unwrap_or((0, 0));
    let width = (hi - lo).unsigned_abs().max(f.degree());
    Ok(lp_norm(&f.to_grid(grid_size_for(width))?, p))
}

/// Evaluates `f` on an `M`-point grid and returns the moduli.
pub fn moduli_on_grid(f: &TrigPoly, m: usize) -> Result<Vec<f64>> {
    Ok(f.to_grid(m)?.samples().iter().map(|z| z.norm()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_eval(1, 0.0), 3.0);
        assert_eq!(dirichlet_eval(3, 0.0), 7.0);
        assert!((dirichlet_eval(2, 0.5) - 1.0).abs() < 1e-12);
        // limit at t = 1 agrees with the sum of characters
        for n in 0..5 {
            let direct = TrigPoly::dirichlet(n).eval(1.0).re;
            assert!((dirichlet_eval(n, 1.0) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn dirichlet_matches_character_sum() {
        for n in [0, 1, 4, 17] {
            let d = TrigPoly::dirichlet(n);
            for i in 0..50 {
                let t = -0.5 + i as f64 / 37.0;
                assert!((dirichlet_eval(n, t) - d.eval(t).re).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let one = TrigPoly::constant(Complex64::new(1.0, 0.0)).to_grid(16).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((lp_norm(&one, NormExponent::new(p).unwrap()) - 1.0).abs() < 1e-14);
        }
        assert!((lp_norm(&one, NormExponent::Infinity) - 1.0).abs() < 1e-14);
        let e = TrigPoly::exponential(5).to_grid(64).unwrap();
        assert!((lp_norm(&e, NormExponent::two()) - 1.0).abs() < 1e-12);
        for n in [1u64, 3, 10] {
            let d = TrigPoly::dirichlet(n).to_grid(grid_size_for(n)).unwrap();
            let expected = ((2 * n + 1) as f64).sqrt();
            assert!((lp_norm(&d, NormExponent::two()) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_partial_sum_and_fejer() {
        let p = TrigPoly::from_coeffs((-5..=5).map(|k| (k, Complex64::new(1.0 + k as f64, 0.5))));
        let g = p.to_grid(64).unwrap();
        let s = partial_sum(&g, 3).unwrap();
        for k in -3..=3 {
            assert!((s.coeff(k) - p.coeff(k)).norm() < 1e-12);
        }
        assert_eq!(s.degree(), 3);
        assert!(partial_sum(&g, 32).is_err());
        assert!(fejer_mean(&g, 0).is_err());
        let f = fejer_mean(&g, 4).unwrap();
        assert!((f.coeff(2) - p.coeff(2) * 0.5).norm() < 1e-12);
    }
}
