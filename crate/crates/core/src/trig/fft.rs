//! Thin wrapper over `rustfft` with the normalization used throughout the crate:
//! coefficients are `c_k = (1/M) Σ_m f(m/M) e^{-2πikm/M}`, stored at index `k mod M`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Samples to normalized Fourier coefficients.
pub(crate) fn analyze(samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    plan(buf.len(), false).process(&mut buf);
    let scale = 1.0 / buf.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Normalized coefficients (index `k mod M`) to samples.
pub(crate) fn synthesize(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    plan(buf.len(), true).process(&mut buf);
    buf
}

/// Signed frequency stored at FFT index `idx` of a length-`len` transform.
pub(crate) fn signed_frequency(idx: usize, len: usize) -> i64 {
    if idx < len / 2 {
        idx as i64
    } else {
        idx as i64 - len as i64
    }
}

pub(crate) fn index_of(k: i64, len: usize) -> usize {
    k.rem_euclid(len as i64) as usize
}
