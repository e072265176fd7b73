use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Gauge `φ(s) = s^{1-β} / log(1/s)^ν` built from the power law `τ(s) = s^β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeSpec {
    beta: f64,
    nu: f64,
}

impl GaugeSpec {
    pub fn new(beta: f64, nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(invalid(format!("gauge exponent beta must lie in [0, 1], got {beta}")));
        }
        if !(nu.is_finite() && nu > 3.0) {
            return Err(invalid(format!("gauge log power nu must exceed 3, got {nu}")));
        }
        Ok(Self { beta, nu })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Right end `e^{-ν/(1-β)}` of the range where `φ` is nondecreasing; `None` for `β = 1`.
    pub fn monotone_limit(&self) -> Option<f64> {
        (self.beta < 1.0).then(|| (-self.nu / (1.0 - self.beta)).exp())
    }
}

pub fn gauge_eval(spec: &GaugeSpec, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 0.5) {
        return Err(invalid(format!("gauge scale must lie in (0, 1/2), got {s}")));
    }
    Ok(s.powf(1.0 - spec.beta) / (1.0 / s).ln().powf(spec.nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = (-1f64).exp();
        let g0 = GaugeSpec::new(0.0, 4.0).unwrap();
        assert!((gauge_eval(&g0, s).unwrap() - s).abs() < 1e-15);
        let g1 = GaugeSpec::new(1.0, 4.0).unwrap();
        assert!((gauge_eval(&g1, s).unwrap() - 1.0).abs() < 1e-15);
        assert!(gauge_eval(&g0, 0.5).is_err());
        assert!(gauge_eval(&g0, 0.0).is_err());
        assert!(GaugeSpec::new(0.5, 3.0).is_err());
        assert!(GaugeSpec::new(1.5, 4.0).is_err());
    }
}
