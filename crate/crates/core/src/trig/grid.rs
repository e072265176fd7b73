use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fft;
use super::poly::TrigPoly;
use crate::error::{invalid, Error, Result};

/// Complex samples `f(m/M)`, `m = 0..M`, on a dyadic grid of the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSignal {
    samples: Vec<Complex64>,
}

impl GridSignal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let m = samples.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(invalid(format!("grid size must be a power of two >= 2, got {m}")));
        }
        Ok(Self { samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(m: usize, f: F) -> Result<Self> {
        let step = 1.0 / m as f64;
        Self::new((0..m).map(|i| f(i as f64 * step)).collect())
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(m: usize, f: F) -> Result<Self> {
        Self::from_fn(m, |t| Complex64::new(f(t), 0.0))
    }

    /// Number of grid points `M`.
    pub fn size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// The grid point `m/M`.
    pub fn point(&self, m: usize) -> f64 {
        m as f64 / self.size() as f64
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Normalized DFT coefficients, index `k mod M`.
    pub fn raw_coefficients(&self) -> Vec<Complex64> {
        fft::analyze(&self.samples)
    }

    /// All discrete Fourier coefficients as frequencies in `[-M/2, M/2)`.
    pub fn to_trig_poly(&self) -> TrigPoly {
        let m = self.size();
        TrigPoly::from_coeffs(
            self.raw_coefficients()
                .into_iter()
                .enumerate()
                .map(|(i, c)| (fft::signed_frequency(i, m), c)),
        )
    }

    /// Coefficients of the frequencies `|k| <= n`; requires `n < M/2` to avoid aliasing.
    pub fn spectrum_through(&self, n: u64) -> Result<TrigPoly> {
        let m = self.size();
        if n >= (m / 2) as u64 {
            return Err(Error::Aliasing { n, grid: m });
        }
        let raw = self.raw_coefficients();
        let n = n as i64;
        Ok(TrigPoly::from_coeffs((-n..=n).map(|k| (k, raw[fft::index_of(k, m)]))))
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.size() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    #[serde(rename = "M")]
    m: usize,
    samples: Vec<(f64, f64)>,
}

impl Serialize for GridSignal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRepr {
            m: self.size(),
            samples: self.samples.iter().map(|z| (z.re, z.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSignal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GridRepr::deserialize(d)?;
        if repr.m != repr.samples.len() {
            return Err(serde::de::Error::custom(format!(
                "M = {} but {} samples given",
                repr.m,
                repr.samples.len()
            )));
        }
        GridSignal::new(repr.samples.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_must_be_power_of_two() {
        assert!(GridSignal::new(vec![Complex64::default(); 6]).is_err());
        assert!(GridSignal::new(vec![Complex64::default(); 1]).is_err());
        assert!(GridSignal::new(vec![Complex64::default(); 2]).is_ok());
    }

    #[test]
    fn aliasing_is_reported() {
        let g = GridSignal::from_real_fn(16, |t| t).unwrap();
        assert!(g.spectrum_through(7).is_ok());
        assert!(matches!(g.spectrum_through(8), Err(Error::Aliasing { n: 8, grid: 16 })));
    }

    #[test]
    fn json_layout() {
        let g = GridSignal::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"M":2,"samples":[[1.0,0.0],[0.0,-1.0]]}"#);
        assert_eq!(serde_json::from_str::<GridSignal>(&text).unwrap(), g);
        assert!(serde_json::from_str::<GridSignal>(r#"{"M":4,"samples":[[1,0],[0,0]]}"#).is_err());
        assert!(serde_json::from_str::<GridSignal>(r#"{"M":3,"samples":[[1,0],[0,0],[0,0]]}"#).is_err());
    }
}
