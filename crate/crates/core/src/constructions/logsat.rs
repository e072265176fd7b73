use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::holo::{boundary_values, HoloKernelParams};
use super::saturator::Certificate;
use crate::error::{invalid, Error, Result};
use crate::trig::{GridSignal, SpectrumInterval, TrigPoly};

/// Largest admissible relative negative-frequency energy of a lifted boundary function.
pub const ANALYTICITY_TOL: f64 = 1e-6;

/// `g(x) = Log f(e^{2πix})` (principal branch) on an `M`-point grid, `M >= 64k`.
pub fn log_lift(params: &HoloKernelParams, m: usize) -> Result<GridSignal> {
    let required = 64 * params.k() as usize;
    if m < required || !m.is_power_of_two() {
        return Err(Error::GridTooCoarse { required, got: m });
    }
    Ok(boundary_values(params, m)?.map(|z| z.ln()))
}

/// How far a grid signal is from having only nonnegative frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticityDefect {
    /// `Σ_{k<0} |ĝ(k)| / ‖g‖_2`.
    pub negative_mass: f64,
    /// `Σ_{k<0} |ĝ(k)|² / Σ_k |ĝ(k)|²`.
    pub negative_energy: f64,
}

pub fn analyticity_defect(g: &GridSignal) -> AnalyticityDefect {
    let c = g.raw_coefficients();
    let m = c.len();
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let neg = &c[m / 2..];
    if total == 0.0 {
        return AnalyticityDefect {
            negative_mass: 0.0,
            negative_energy: 0.0,
        };
    }
    AnalyticityDefect {
        negative_mass: neg.iter().map(|z| z.norm()).sum::<f64>() / total.sqrt(),
        negative_energy: neg.iter().map(|z| z.norm_sqr()).sum::<f64>() / total,
    }
}

/// `log log n / (4π log n)`.
pub fn eps_floor(n: u64) -> f64 {
    let l = (n as f64).ln();
    l.ln() / (4.0 * PI * l)
}

/// `ω = exp(4π ε log n)`.
pub fn omega_for(n: u64, eps: f64) -> f64 {
    (4.0 * PI * (n as f64).ln() * eps).exp()
}

/// `max{k : 2πkω <= n}`.
pub fn teeth_for(n: u64, omega: f64) -> u64 {
    (n as f64 / (2.0 * PI * omega)).floor() as u64
}

/// `P_n = (2/π) e_n σ_n(Im g_n)` with `g_n` the log-lift of the comb kernel at `(k_n, ω_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSaturator {
    pub n: u64,
    /// The rate actually used, after flooring.
    pub eps_n: f64,
    pub floored: bool,
    pub omega: f64,
    pub k: u64,
    pub grid: usize,
    pub negative_energy: f64,
    pub poly: TrigPoly,
}

pub fn log_saturator(n: u64, eps_n: f64) -> Result<LogSaturator> {
    if n < 16 {
        return Err(invalid(format!("log-saturator needs n >= 16, got {n}")));
    }
    if !(eps_n.is_finite() && eps_n >= 0.0) {
        return Err(invalid(format!("rate eps_n must be finite and >= 0, got {eps_n}")));
    }
    let floor = eps_floor(n);
    let floored = eps_n < floor;
    let eps = eps_n.max(floor);
    let omega = omega_for(n, eps);
    let k = teeth_for(n, omega);
    if k < 3 {
        return Err(invalid(format!(
            "n = {n} too small: 2πkω <= n has no solution k >= 3 for ω = {omega}"
        )));
    }
    let params = HoloKernelParams::new(k, omega)?;
    let grid = (64 * k.max(n) as usize).next_power_of_two();
    let g = log_lift(&params, grid)?;
    let defect = analyticity_defect(&g);
    if defect.negative_energy > ANALYTICITY_TOL {
        return Err(Error::NotBandLimited(defect.negative_energy));
    }
    let im = g.map(|z| Complex64::new(z.im, 0.0));
    let poly = im
        .spectrum_through(n - 1)?
        .fejer(n)
        .modulate(n as i64)
        .scale_real(2.0 / PI);
    Ok(LogSaturator {
        n,
        eps_n: eps,
        floored,
        omega,
        k,
        grid,
        negative_energy: defect.negative_energy,
        poly,
    })
}

impl LogSaturator {
    pub fn params(&self) -> HoloKernelParams {
        HoloKernelParams::new(self.k, self.omega).expect("validated at construction")
    }

    /// Declared spectrum `[1, 2n-1]`.
    pub fn spectrum(&self) -> SpectrumInterval {
        SpectrumInterval::new(0, 2 * self.n as i64 - 1).expect("n >= 1")
    }

    /// `ε_n log n`.
    pub fn lower_bound(&self) -> f64 {
        self.eps_n * (self.n as f64).ln()
    }

    /// `sup |P_n|` on the grid and `min |S_n P_n|` over the comb grid points.
    pub fn certificate(&self) -> Result<Certificate> {
        let sup = self.poly.to_grid(self.grid)?.max_abs();
        let partial = self.poly.truncate(self.n).to_grid(self.grid)?;
        let min = self
            .params()
            .comb()
            .grid_indices(self.grid)
            .into_iter()
            .map(|i| partial.samples()[i].norm())
            .fold(f64::INFINITY, f64::min);
        Ok(Certificate::new(sup, min, self.lower_bound()))
    }
}

/// `h_j = g + (η/ε) e_j P_j` with `P_j` the log-saturator of degree `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: u64,
    pub eta: f64,
    pub saturator: LogSaturator,
    pub h: TrigPoly,
}

pub fn residual_witness(g: &TrigPoly, j: u64, eta: f64, eps: f64) -> Result<Witness> {
    if g.degree() > j {
        return Err(invalid(format!(
            "spectral overlap: degree(g) = {} exceeds j = {j}",
            g.degree()
        )));
    }
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(invalid(format!("rate eta must be finite and >= 0, got {eta}")));
    }
    let saturator = log_saturator(j, eps)?;
    let h = g.add(&saturator.poly.modulate(j as i64).scale_real(eta / saturator.eps_n));
    Ok(Witness { j, eta, saturator, h })
}

impl Witness {
    /// `S_{2j} h - S_j h`.
    pub fn block(&self) -> TrigPoly {
        self.h.restrict(&SpectrumInterval::new(self.j as i64, 2 * self.j as i64).expect("j >= 1"))
    }

    /// `η log j`.
    pub fn lower_bound(&self) -> f64 {
        self.eta * (self.j as f64).ln()
    }

    /// `sup |h|` on the grid and `min |S_{2j}h - S_j h|` over the comb grid points.
    pub fn certificate(&self) -> Result<Certificate> {
        let grid = self.saturator.grid;
        let block = self.block().to_grid(grid)?;
        let min = self
            .saturator
            .params()
            .comb()
            .grid_indices(grid)
            .into_iter()
            .map(|i| block.samples()[i].norm())
            .fold(f64::INFINITY, f64::min);
        let h = self.h.to_grid(grid * 2)?;
        Ok(Certificate::new(h.max_abs(), min, self.lower_bound()))
    }
}
