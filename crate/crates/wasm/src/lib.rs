//! Browser bindings: kernel curves, the saturator `P_j` over `𝐈_j`, and `|S_n P_n|` over the comb.

use fdl_core::constructions::{log_saturator, saturator_pj, pj_lower_bound};
use fdl_core::setlib::{dyadic_family, DyadicFamilyParams};
use fdl_core::trig::{lp_norm, NormExponent, TrigPoly};
use wasm_bindgen::prelude::*;

/// Sampled curve plus marked arcs `[lo0, hi0, lo1, hi1, …]` and a reference level.
#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
    second: Vec<f64>,
    arcs: Vec<f64>,
    level: f64,
    stat: f64,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Second curve on the same abscissa; empty when there is none.
    #[wasm_bindgen(getter)]
    pub fn second(&self) -> Vec<f64> {
        self.second.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn arcs(&self) -> Vec<f64> {
        self.arcs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn level(&self) -> f64 {
        self.level
    }

    #[wasm_bindgen(getter)]
    pub fn stat(&self) -> f64 {
        self.stat
    }
}

/// Folds `m` grid values into `buckets` maxima.
fn bucket_max(values: &[f64], buckets: usize) -> Vec<f64> {
    let per = (values.len() / buckets).max(1);
    values.chunks(per).map(|c| c.iter().cloned().fold(0.0, f64::max)).collect()
}

fn display_grid(m: usize, samples: usize) -> Result<usize, String> {
    if samples < 16 || !samples.is_power_of_two() {
        return Err(format!("samples must be a power of two >= 16, got {samples}"));
    }
    Ok(m.max(samples))
}

/// `D_n` and the Fejér kernel `F_n` on `[-1/2, 1/2)`; `stat` is `‖D_n‖_1`.
pub fn build_kernels(n: u32, samples: usize) -> Result<Profile, String> {
    if n == 0 || n > 4096 {
        return Err(format!("n must lie in 1..=4096, got {n}"));
    }
    let m = display_grid((32 * n as usize + 1).next_power_of_two(), samples)?;
    let d = TrigPoly::dirichlet(n as u64);
    let dg = d.to_grid(m).map_err(|e| e.to_string())?;
    let fg = d.fejer(n as u64).to_grid(m).map_err(|e| e.to_string())?;
    let stride = m / samples;
    let centered = |g: &[fdl_core::Complex64]| -> Vec<f64> {
        (0..samples).map(|i| g[(i * stride + m / 2) % m].re).collect()
    };
    Ok(Profile {
        values: centered(dg.samples()),
        second: centered(fg.samples()),
        arcs: Vec::new(),
        level: 0.0,
        stat: lp_norm(&dg, NormExponent::one()),
    })
}

/// `|P_j|` on `[0, 1)` with the arcs of `𝐈_j`; `level` is the certified lower bound and
/// `stat` the minimum of `|P_j|` over the grid points of `𝐈_j`.
pub fn build_saturator(j: u32, alpha: f64, p: f64, samples: usize) -> Result<Profile, String> {
    if j > 14 {
        return Err(format!("j must be <= 14 in the browser, got {j}"));
    }
    let params = DyadicFamilyParams::new(j, alpha).map_err(|e| e.to_string())?;
    let p = NormExponent::new(p).map_err(|e| e.to_string())?;
    let m = 16usize << j;
    let pj = saturator_pj(params, p, m).map_err(|e| e.to_string())?;
    let moduli: Vec<f64> = pj.to_grid(m).map_err(|e| e.to_string())?.samples().iter().map(|z| z.norm()).collect();
    let family = dyadic_family(params);
    let stat = family
        .grid_indices(m)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|i| moduli[i])
        .fold(f64::INFINITY, f64::min);
    display_grid(m, samples)?;
    Ok(Profile {
        values: bucket_max(&moduli, samples.min(m)),
        second: Vec::new(),
        arcs: family.intervals().into_iter().flat_map(|(a, b)| [a, b]).collect(),
        level: pj_lower_bound(params, p),
        stat,
    })
}

/// `|S_n P_n|` on `[0, 1)` with the comb teeth; `level` is `ε_n log n` and `stat` the minimum
/// over the comb grid points.
pub fn build_log_saturator(n: u32, samples: usize) -> Result<Profile, String> {
    if !(16..=16384).contains(&n) {
        return Err(format!("n must lie in 16..=16384, got {n}"));
    }
    let ls = log_saturator(n as u64, 0.0).map_err(|e| e.to_string())?;
    let cert = ls.certificate().map_err(|e| e.to_string())?;
    let partial = ls.poly.truncate(ls.n).to_grid(ls.grid).map_err(|e| e.to_string())?;
    let moduli: Vec<f64> = partial.samples().iter().map(|z| z.norm()).collect();
    display_grid(ls.grid, samples)?;
    let comb = ls.params().comb();
    let h = comb.half_width();
    Ok(Profile {
        values: bucket_max(&moduli, samples.min(ls.grid)),
        second: Vec::new(),
        arcs: (0..comb.k()).flat_map(|t| {
            let c = t as f64 / comb.k() as f64;
            [c - h, c + h]
        }).collect(),
        level: cert.bound_required,
        stat: cert.min_on_target_set,
    })
}

#[wasm_bindgen]
pub fn kernels(n: u32, samples: usize) -> Result<Profile, JsError> {
    build_kernels(n, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn saturator(j: u32, alpha: f64, p: f64, samples: usize) -> Result<Profile, JsError> {
    build_saturator(j, alpha, p, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = logSaturator)]
pub fn log_saturator_js(n: u32, samples: usize) -> Result<Profile, JsError> {
    build_log_saturator(n, samples).map_err(|e| JsError::new(&e))
}
