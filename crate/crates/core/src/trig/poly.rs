use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fft;
use super::grid::GridSignal;
use crate::error::{invalid, Error, Result};

/// Coefficients with modulus below this are dropped from the canonical form.
pub const PRUNE_TOL: f64 = 1e-15;

/// Half-open block of frequencies `lo < k <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumInterval {
    pub lo: i64,
    pub hi: i64,
}

impl SpectrumInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(invalid(format!("spectrum interval needs lo <= hi, got ({lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo < k && k <= self.hi
    }

    pub fn is_disjoint(&self, other: &SpectrumInterval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

/// Sparse trigonometric polynomial `Σ c_k e_k`, `e_k(t) = e^{2πikt}`.
///
/// Stored coefficients are always nonzero (modulus at least [`PRUNE_TOL`]).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        Self::from_coeffs([(k, c)])
    }

    /// The character `e_k`.
    pub fn exponential(k: i64) -> Self {
        Self::monomial(k, Complex64::new(1.0, 0.0))
    }

    /// Dirichlet kernel `D_n = Σ_{|k|<=n} e_k`.
    pub fn dirichlet(n: u64) -> Self {
        let n = n as i64;
        Self::from_coeffs((-n..=n).map(|k| (k, Complex64::new(1.0, 0.0))))
    }

    /// Builds a polynomial from `(frequency, coefficient)` pairs; repeated frequencies add up.
    pub fn from_coeffs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in pairs {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        Self { coeffs }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn frequencies(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` with a stored coefficient, 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(lo), Some(hi)) => lo.unsigned_abs().max(hi.unsigned_abs()),
            _ => 0,
        }
    }

    /// Smallest and largest stored frequency.
    pub fn spectrum_bounds(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    /// True when every stored frequency lies in `interval`.
    pub fn spectrum_within(&self, interval: &SpectrumInterval) -> bool {
        self.frequencies().all(|k| interval.contains(k))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, TAU * (k as f64) * t))
            .sum()
    }

    /// Sum of squared coefficient moduli (the squared L² norm by Parseval).
    pub fn energy(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Sum of coefficient moduli, an upper bound for the sup norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.iter().map(|(k, c)| (k, c * Complex64::new(0.0, TAU * k as f64))))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.iter().map(|(k, c)| (k, c * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &TrigPoly) -> Self {
        Self::from_coeffs(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &TrigPoly) -> Self {
        Self::from_coeffs(self.iter().chain(other.iter().map(|(k, c)| (k, -c))))
    }

    /// `S_n`: keeps the frequencies `|k| <= n`.
    pub fn truncate(&self, n: u64) -> Self {
        let n = n.min(i64::MAX as u64) as i64;
        Self {
            coeffs: self.coeffs.range(-n..=n).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// Keeps the frequencies in `interval`.
    pub fn restrict(&self, interval: &SpectrumInterval) -> Self {
        Self {
            coeffs: self
                .coeffs
                .range(interval.lo.saturating_add(1)..=interval.hi)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// `σ_n`: multiplies the coefficient at `k` by `max(0, 1 - |k|/n)`.
    pub fn fejer(&self, n: u64) -> Self {
        assert!(n >= 1, "Fejér mean needs n >= 1");
        let nf = n as f64;
        Self::from_coeffs(
            self.truncate(n - 1)
                .iter()
                .map(|(k, c)| (k, c * (1.0 - k.unsigned_abs() as f64 / nf))),
        )
    }

    /// Multiplication by `e_k`: shifts the spectrum by `k`.
    pub fn modulate(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&j, &c)| (j + k, c)).collect(),
        }
    }

    /// Samples on the grid `t_m = m/M`.
    ///
    /// Exact whenever the spectrum spans fewer than `M` consecutive frequencies, since the
    /// frequencies then land on distinct FFT bins.
    pub fn to_grid(&self, m: usize) -> Result<GridSignal> {
        if !m.is_power_of_two() || m < 2 {
            return Err(invalid(format!("grid size must be a power of two >= 2, got {m}")));
        }
        if let Some((lo, hi)) = self.spectrum_bounds() {
            let width = (hi - lo) as u64;
            if width >= m as u64 {
                return Err(Error::SpectralOverflow { width, grid: m });
            }
        }
        let mut bins = vec![Complex64::new(0.0, 0.0); m];
        for (k, c) in self.iter() {
            bins[fft::index_of(k, m)] += c;
        }
        GridSignal::new(fft::synthesize(&bins))
    }

    /// Partial sums `S_n f(x)` at a single point for every `n` in the increasing `schedule`.
    pub fn partial_sums_at(&self, x: f64, schedule: &[u64]) -> Vec<Complex64> {
        debug_assert!(schedule.windows(2).all(|w| w[0] < w[1]));
        let mut terms: Vec<(u64, Complex64)> = self
            .iter()
            .map(|(k, c)| (k.unsigned_abs(), c * Complex64::from_polar(1.0, TAU * (k as f64) * x)))
            .collect();
        terms.sort_by_key(|&(a, _)| a);
        let mut out = Vec::with_capacity(schedule.len());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut it = terms.into_iter().peekable();
        for &n in schedule {
            while let Some(&(a, v)) = it.peek() {
                if a > n {
                    break;
                }
                acc += v;
                it.next();
            }
            out.push(acc);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrigPolyRepr {
            coeffs: self.iter().map(|(k, c)| (k, c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TrigPolyRepr::deserialize(d)?;
        if repr.coeffs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(serde::de::Error::custom("frequencies must be strictly increasing"));
        }
        Ok(TrigPoly::from_coeffs(
            repr.coeffs.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))),
        ))
    }
}
