use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{block_bounds, block_certificate, disjoint_family, SaturatorFamily};
use crate::error::{invalid, Result};
use crate::par;
use crate::random::{derive_seed, rng, DEFAULT_SEED};
use crate::setlib::{coarse_level, dalpha_test_points, j_alpha, DyadicFamilyParams};
use crate::trig::{NormExponent, TrigPoly};

/// Settings of the finite-scale prevalence probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub s: u32,
    pub alpha: f64,
    pub p: NormExponent,
    #[serde(rename = "R")]
    pub r: f64,
    /// Growth threshold; `None` selects half the smallest block certificate over the window.
    #[serde(rename = "M_thresh")]
    pub m_thresh: Option<f64>,
    pub trials: u64,
    pub depth: u32,
    pub seed: u64,
    /// Divergence exponent; `None` selects `max(0, (1/p)(1 - 1/α) - 5/s)`.
    pub beta: Option<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            s: 9,
            alpha: 2.0,
            p: NormExponent::two(),
            r: 1.0,
            m_thresh: None,
            trials: 200,
            depth: 5,
            seed: DEFAULT_SEED,
            beta: None,
        }
    }
}

impl ProbeConfig {
    /// `(1/p)(1 - 1/α)`, the exponent carried by the construction.
    pub fn target(&self) -> f64 {
        self.p.reciprocal() * (1.0 - 1.0 / self.alpha)
    }

    pub fn resolved_beta(&self) -> f64 {
        self.beta.unwrap_or_else(|| (self.target() - 5.0 / self.s as f64).max(0.0))
    }

    /// `ε = (1/p)(1 - 1/α) - β`.
    pub fn eps(&self) -> f64 {
        self.target() - self.resolved_beta()
    }

    /// Whether `s > 4/ε`, the family size the measure-one argument asks for.
    pub fn proof_condition_met(&self) -> bool {
        let e = self.eps();
        e > 0.0 && self.s as f64 > 4.0 / e
    }

    /// Levels `j` whose `𝐈_j` contains every depth-`depth` test point: `J(j) >= depth` and
    /// `j <= α·depth + 1`.
    pub fn window(&self) -> Result<Vec<u32>> {
        let lo = j_alpha(self.alpha)?;
        let hi = (self.alpha * self.depth as f64 + 1.0).floor() as u32;
        let w: Vec<u32> = (lo..=hi.min(40))
            .filter(|&j| coarse_level(j, self.alpha) >= self.depth)
            .collect();
        if w.is_empty() {
            return Err(invalid(format!(
                "no level j carries depth-{} points for alpha = {}",
                self.depth, self.alpha
            )));
        }
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(invalid("family size s must be >= 1"));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(invalid(format!("cube half-width R must be > 0, got {}", self.r)));
        }
        if self.p.is_infinite() {
            return Err(invalid("the probe needs finite p"));
        }
        let b = self.resolved_beta();
        if !(0.0..self.p.reciprocal()).contains(&b) {
            return Err(invalid(format!("beta must lie in [0, 1/p), got {b}")));
        }
        if let Some(m) = self.m_thresh {
            if !(m.is_finite() && m > 0.0) {
                return Err(invalid(format!("M_thresh must be > 0, got {m}")));
            }
        }
        dalpha_test_points(self.alpha, self.depth)?;
        self.window().map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedTrials {
    /// `c = 0`.
    pub zero: bool,
    /// `c = e_1`.
    pub unit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub fraction: f64,
    pub trials: u64,
    pub failures: Vec<u64>,
    pub config: ProbeConfig,
    pub beta: f64,
    pub threshold: f64,
    pub window: Vec<u32>,
    pub test_points: usize,
    pub proof_condition_met: bool,
    pub forced: ForcedTrials,
}

/// Partial sums of `f` and of every `g_r` at every test point along the block endpoints.
struct Table {
    schedule: Vec<u64>,
    weights: Vec<f64>,
    /// `[point][schedule]`
    base: Vec<Vec<Complex64>>,
    /// `[point][schedule][r]`
    members: Vec<Vec<Vec<Complex64>>>,
}

impl Table {
    fn succeeds(&self, c: &[f64], threshold: f64) -> bool {
        self.base.iter().zip(&self.members).all(|(base, members)| {
            base.iter().zip(members).zip(&self.weights).any(|((b, g), w)| {
                let v = g.iter().zip(c).fold(*b, |acc, (z, &cr)| acc + z * cr);
                v.norm() * w >= threshold
            })
        })
    }
}

/// Block endpoints `m_{j,r}, n_{j,r}` for `j` in the window.
fn endpoints(s: u32, window: &[u32]) -> Vec<u64> {
    let mut out: Vec<u64> = window
        .iter()
        .flat_map(|&j| (1..=s).flat_map(move |r| {
            let (m, n) = block_bounds(s, j, r);
            [m, n]
        }))
        .collect();
    out.sort_unstable();
    out
}

/// Family grid: the smallest power of two that holds every block of `g_1, …, g_s` up to `jmax`.
pub fn probe_grid(s: u32, jmax: u32) -> usize {
    (((4 * s as usize) << (jmax + 2)) + 1).next_power_of_two().max(16 << jmax)
}

/// Fraction of `c ∈ [-R, R]^s` for which `g = f + Σ c_r g_r` reaches
/// `max_n |S_n g(x)|/n^β >= M_thresh` at every depth-`depth` test point of `D_α`, with `n`
/// running over the block endpoints of the window.
pub fn prevalence_probe(f: &TrigPoly, config: &ProbeConfig) -> Result<ProbeResult> {
    config.validate()?;
    let window = config.window()?;
    let jmax = *window.last().expect("nonempty");
    let family = disjoint_family(config.s, config.alpha, config.p, jmax, probe_grid(config.s, jmax))?;
    probe_with_family(f, config, &family, &window)
}

fn probe_with_family(f: &TrigPoly, config: &ProbeConfig, family: &SaturatorFamily, window: &[u32]) -> Result<ProbeResult> {
    let beta = config.resolved_beta();
    let s = config.s;
    let threshold = match config.m_thresh {
        Some(m) => m,
        None => window
            .iter()
            .map(|&j| {
                let params = DyadicFamilyParams::new(j, config.alpha)?;
                let top = block_bounds(s, j, s).1 as f64;
                Ok(0.5 * block_certificate(params, config.p) / top.powf(beta))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min),
    };
    let points = dalpha_test_points(config.alpha, config.depth)?;
    let schedule = endpoints(s, window);
    let rows = par::map_indexed(points.len(), |i| {
        let x = points[i];
        let base = f.partial_sums_at(x, &schedule);
        let per_member: Vec<Vec<Complex64>> = family.members.iter().map(|g| g.partial_sums_at(x, &schedule)).collect();
        let members = (0..schedule.len())
            .map(|k| per_member.iter().map(|v| v[k]).collect())
            .collect::<Vec<Vec<_>>>();
        (base, members)
    });
    let (base, members) = rows.into_iter().unzip();
    let table = Table {
        weights: schedule.iter().map(|&n| (n as f64).powf(-beta)).collect(),
        schedule,
        base,
        members,
    };
    debug_assert!(table.schedule.windows(2).all(|w| w[0] < w[1]));

    let outcomes = par::map_indexed(config.trials as usize, |t| {
        let mut r = rng(derive_seed(config.seed, t as u64));
        let c: Vec<f64> = (0..s).map(|_| config.r * r.random_range(-1.0..=1.0)).collect();
        table.succeeds(&c, threshold)
    });
    let failures: Vec<u64> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(t, _)| t as u64)
        .collect();
    let mut unit = vec![0.0; s as usize];
    unit[0] = 1.0;
    let forced = ForcedTrials {
        zero: table.succeeds(&vec![0.0; s as usize], threshold),
        unit: table.succeeds(&unit, threshold),
    };
    Ok(ProbeResult {
        fraction: if config.trials == 0 {
            0.0
        } else {
            (config.trials - failures.len() as u64) as f64 / config.trials as f64
        },
        trials: config.trials,
        failures,
        config: config.clone(),
        beta,
        threshold,
        window: window.to_vec(),
        test_points: points.len(),
        proof_condition_met: config.proof_condition_met(),
        forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ProbeConfig {
        ProbeConfig {
            s: 2,
            depth: 3,
            trials: 20,
            beta: Some(0.2),
            ..ProbeConfig::default()
        }
    }

    #[test]
    fn window_for_alpha_two() {
        let c = ProbeConfig::default();
        assert_eq!(c.window().unwrap(), vec![8, 9, 10, 11]);
        assert!(!c.proof_condition_met());
    }

    #[test]
    fn forced_trials() {
        let r = prevalence_probe(&TrigPoly::zero(), &small()).unwrap();
        assert!(!r.forced.zero);
        assert!(r.forced.unit);
        assert_eq!(r.test_points, 24);
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = small();
        c.r = 0.0;
        assert!(prevalence_probe(&TrigPoly::zero(), &c).is_err());
        let mut c = small();
        c.beta = Some(0.9);
        assert!(c.validate().is_err());
    }
}
