use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::setlib::CombParams;
use crate::trig::GridSignal;

/// Points with `|z|` up to this much above 1 are accepted as lying on the closed disk.
const DISK_SLACK: f64 = 1e-12;

/// Teeth `k`, sharpness `ω` and `ε = 1/(ωk)` of the kernel
/// `f(z) = (1/k) Σ_j (1+ε)/(1+ε - conj(z_j) z)`, `z_j = e^{2πij/k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHolo", into = "RawHolo")]
pub struct HoloKernelParams {
    k: u64,
    omega: f64,
    eps: f64,
}

#[derive(Serialize, Deserialize)]
struct RawHolo {
    k: u64,
    omega: f64,
}

impl TryFrom<RawHolo> for HoloKernelParams {
    type Error = Error;

    fn try_from(raw: RawHolo) -> Result<Self> {
        Self::new(raw.k, raw.omega)
    }
}

impl From<HoloKernelParams> for RawHolo {
    fn from(h: HoloKernelParams) -> Self {
        RawHolo { k: h.k, omega: h.omega }
    }
}

impl HoloKernelParams {
    /// Requires `k >= 3`, `ω > 1` and `ω >= log k`.
    pub fn new(k: u64, omega: f64) -> Result<Self> {
        CombParams::new(k, omega)?;
        if omega < (k as f64).ln() {
            return Err(invalid(format!("omega = {omega} is below log k = {}", (k as f64).ln())));
        }
        Ok(Self {
            k,
            omega,
            eps: 1.0 / (omega * k as f64),
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn comb(&self) -> CombParams {
        CombParams::new(self.k, self.omega).expect("validated")
    }

    pub fn node(&self, j: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * j as f64 / self.k as f64)
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + DISK_SLACK) {
        return Err(invalid(format!("|z| = {} lies outside the closed unit disk", z.norm())));
    }
    Ok(())
}

/// `f(z)` by the defining sum.
pub fn holo_kernel(params: &HoloKernelParams, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    Ok(sums(params, z).0)
}

/// `f'(z)/f(z)` as the ratio of the sums for `f'` and `f`.
pub fn holo_log_derivative(params: &HoloKernelParams, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    let (f, df) = sums(params, z);
    Ok(df / f)
}

/// `(f(z), f'(z))` from `f' = (1/k) Σ (1+ε) conj(z_j) / (1+ε - conj(z_j) z)²`.
fn sums(params: &HoloKernelParams, z: Complex64) -> (Complex64, Complex64) {
    let a = 1.0 + params.eps;
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for j in 0..params.k {
        let zj = params.node(j).conj();
        let inv = 1.0 / (a - zj * z);
        f += inv;
        df += zj * inv * inv;
    }
    let scale = a / params.k as f64;
    (f * scale, df * scale)
}

/// Summing the geometric series over the nodes gives `f(z) = 1/(1 - (z/(1+ε))^k)`.
pub fn holo_kernel_closed(params: &HoloKernelParams, z: Complex64) -> Complex64 {
    let w = z / (1.0 + params.eps);
    1.0 / (1.0 - w.powu(params.k as u32))
}

/// `f(e^{2πi m/M})` on the `M`-point boundary grid, via the closed form.
pub fn boundary_values(params: &HoloKernelParams, m: usize) -> Result<GridSignal> {
    let k = params.k as usize;
    let rho = (1.0 + params.eps).powf(-(params.k as f64));
    // (e^{2πix}/(1+ε))^k = ρ e^{2πi k x}, reduced mod M for accuracy
    GridSignal::new(
        (0..m)
            .map(|i| {
                let phase = ((i * k) % m) as f64 / m as f64;
                1.0 / (1.0 - Complex64::from_polar(rho, TAU * phase))
            })
            .collect(),
    )
}
