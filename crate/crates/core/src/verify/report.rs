use serde::{Deserialize, Serialize};

/// One evaluated instance: trial index, its derived seed, the scale and the measured ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub scale: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub trials: u64,
    /// Maximum ratio over all trials and scales (minimum for lower-bound inequalities).
    pub worst_ratio: f64,
    pub fitted_constant: f64,
    /// Worst ratio at each scale.
    pub scale_trend: Vec<(u64, f64)>,
    pub seed: u64,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

/// Whether a report bounds ratios from above or from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

impl VerificationReport {
    /// Aggregates rows; rows are sorted by `(scale, trial)` first so the result is
    /// independent of evaluation order.
    pub fn from_rows(name: &str, seed: u64, mut rows: Vec<TrialRow>, direction: Direction) -> Self {
        rows.sort_by_key(|r| (r.scale, r.trial));
        let pick = |a: f64, b: f64| match direction {
            Direction::Upper => a.max(b),
            Direction::Lower => a.min(b),
        };
        let init = match direction {
            Direction::Upper => f64::NEG_INFINITY,
            Direction::Lower => f64::INFINITY,
        };
        let mut scale_trend: Vec<(u64, f64)> = Vec::new();
        for r in &rows {
            match scale_trend.last_mut() {
                Some((s, v)) if *s == r.scale => *v = pick(*v, r.ratio),
                _ => scale_trend.push((r.scale, r.ratio)),
            }
        }
        let worst = scale_trend.iter().fold(init, |acc, &(_, v)| pick(acc, v));
        let trials = rows.iter().map(|r| r.trial).max().map_or(0, |t| t + 1);
        Self {
            name: name.to_string(),
            trials,
            worst_ratio: worst,
            fitted_constant: scale_trend.first().map_or(f64::NAN, |&(_, v)| v),
            scale_trend,
            seed,
            assertions: Vec::new(),
            rows,
        }
    }

    pub fn assert(&mut self, name: &str, passed: bool, detail: String) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// `max / min` of the per-scale worst ratios.
    pub fn scale_spread(&self) -> f64 {
        let (lo, hi) = self
            .scale_trend
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
        hi / lo
    }

    /// Largest ratio between the worst ratios of consecutive scales, in either direction.
    pub fn doubling_spread(&self) -> f64 {
        self.scale_trend
            .windows(2)
            .map(|w| (w[1].1 / w[0].1).max(w[0].1 / w[1].1))
            .fold(1.0, f64::max)
    }

    /// Asserts that the worst ratio varies by less than `factor` across scales.
    pub fn assert_scale_stability(&mut self, factor: f64) {
        let spread = self.scale_spread();
        self.assert(
            "scale_stability",
            spread < factor,
            format!("per-scale worst ratios spread by {spread:.4} (limit {factor})"),
        );
    }

    /// CSV with columns `trial,seed,scale,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,scale,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.trial, r.seed, r.scale, fmt_sig(r.ratio)));
        }
        out
    }
}

/// Formats with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let v: f64 = format!("{x:.11e}").parse().expect("valid float");
    format!("{v}")
}

/// Dyadic scales `N, N/2, …` down to `max(4, N/32)`, ascending.
pub fn scales_for(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..6).map(|i| n >> i).filter(|&s| s >= 4).collect();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_is_order_independent() {
        let rows = vec![
            TrialRow { trial: 1, seed: 5, scale: 8, ratio: 2.0 },
            TrialRow { trial: 0, seed: 4, scale: 16, ratio: 1.5 },
            TrialRow { trial: 0, seed: 4, scale: 8, ratio: 1.0 },
            TrialRow { trial: 1, seed: 5, scale: 16, ratio: 3.0 },
        ];
        let mut rev = rows.clone();
        rev.reverse();
        let a = VerificationReport::from_rows("x", 1, rows, Direction::Upper);
        let b = VerificationReport::from_rows("x", 1, rev, Direction::Upper);
        assert_eq!(a, b);
        assert_eq!(a.scale_trend, vec![(8, 2.0), (16, 3.0)]);
        assert_eq!(a.worst_ratio, 3.0);
        assert_eq!(a.fitted_constant, 2.0);
        assert_eq!(a.trials, 2);
        assert!(a.to_csv().starts_with("trial,seed,scale,ratio\n0,4,8,1\n"));
    }

    #[test]
    fn scales() {
        assert_eq!(scales_for(8192), vec![256, 512, 1024, 2048, 4096, 8192]);
        assert_eq!(scales_for(16), vec![4, 8, 16]);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(123456.0), "123456");
    }
}
