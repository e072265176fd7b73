//! Point sets on the circle `𝕋 = [0, 1)` queried through membership and box intersection.

/// A subset of the circle.
///
/// `meets` answers whether the set intersects the closed arc `[lo, hi]` with
/// `0 <= lo <= hi <= 1`; box counting relies on it, so exact implementations matter.
pub trait PointSet: Sync {
    fn contains(&self, x: f64) -> bool;

    fn meets(&self, lo: f64, hi: f64) -> bool;
}

impl<S: PointSet + ?Sized> PointSet for &S {
    fn contains(&self, x: f64) -> bool {
        (**self).contains(x)
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        (**self).meets(lo, hi)
    }
}

impl<S: PointSet + ?Sized> PointSet for Box<S> {
    fn contains(&self, x: f64) -> bool {
        (**self).contains(x)
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        (**self).meets(lo, hi)
    }
}

/// Reduces `x` into `[0, 1)`.
pub fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Finite union of closed arcs, stored as sorted disjoint intervals of `[0, 1]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    pieces: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Union of arcs `[a, b]` given on the real line (`b - a < 1`); arcs crossing an
    /// integer are split.
    pub fn from_arcs<I: IntoIterator<Item = (f64, f64)>>(arcs: I) -> Self {
        let mut raw = Vec::new();
        for (a, b) in arcs {
            debug_assert!(a <= b);
            if b - a >= 1.0 {
                raw.push((0.0, 1.0));
                continue;
            }
            let shift = a.floor();
            let (a, b) = (a - shift, b - shift);
            if b <= 1.0 {
                raw.push((a, b));
            } else {
                raw.push((a, 1.0));
                raw.push((0.0, b - 1.0));
            }
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match pieces.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => pieces.push((a, b)),
            }
        }
        Self { pieces }
    }

    pub fn point(x: f64) -> Self {
        let x = wrap(x);
        Self::from_arcs([(x, x)])
    }

    pub fn full() -> Self {
        Self { pieces: vec![(0.0, 1.0)] }
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

impl PointSet for IntervalSet {
    fn contains(&self, x: f64) -> bool {
        let x = wrap(x);
        self.meets(x, x) || (x == 0.0 && self.meets(1.0, 1.0))
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        // first piece whose right end reaches lo
        let i = self.pieces.partition_point(|&(_, b)| b < lo);
        self.pieces.get(i).is_some_and(|&(a, _)| a <= hi)
    }
}

/// Marked points of the uniform grid `m/M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSet {
    marks: Vec<bool>,
}

impl GridSet {
    pub fn new(marks: Vec<bool>) -> Self {
        Self { marks }
    }

    pub fn size(&self) -> usize {
        self.marks.len()
    }

    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    pub fn count(&self) -> usize {
        self.marks.iter().filter(|&&b| b).count()
    }

    pub fn marked_points(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.marks.len() as f64;
        self.marks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| i as f64 / m)
    }
}

impl PointSet for GridSet {
    fn contains(&self, x: f64) -> bool {
        let m = self.marks.len();
        let pos = wrap(x) * m as f64;
        let i = pos.round();
        (pos - i).abs() < 1e-9 && self.marks[(i as usize) % m]
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        let m = self.marks.len();
        let first = (lo * m as f64).ceil() as usize;
        let last = (hi * m as f64).floor() as usize;
        (first..=last).any(|i| self.marks[i % m])
    }
}

/// Arbitrary membership predicate; `meets` samples the arc at a fixed resolution.
pub struct PredicateSet<F> {
    predicate: F,
    samples_per_query: usize,
}

impl<F: Fn(f64) -> bool + Sync> PredicateSet<F> {
    pub fn new(predicate: F, samples_per_query: usize) -> Self {
        Self {
            predicate,
            samples_per_query: samples_per_query.max(2),
        }
    }
}

impl<F: Fn(f64) -> bool + Sync> PointSet for PredicateSet<F> {
    fn contains(&self, x: f64) -> bool {
        (self.predicate)(wrap(x))
    }

    fn meets(&self, lo: f64, hi: f64) -> bool {
        let n = self.samples_per_query;
        (0..n).any(|i| (self.predicate)(wrap(lo + (hi - lo) * i as f64 / (n - 1) as f64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcs_wrap_and_merge() {
        let s = IntervalSet::from_arcs([(-0.1, 0.1), (0.05, 0.2), (0.5, 0.6)]);
        assert_eq!(s.pieces().len(), 3);
        assert!((s.measure() - 0.4).abs() < 1e-12);
        assert!(s.contains(0.95));
        assert!(s.contains(0.0));
        assert!(!s.contains(0.3));
        assert!(s.meets(0.25, 0.55));
        assert!(!s.meets(0.25, 0.45));
    }

    #[test]
    fn point_set_meets_only_its_box() {
        let p = IntervalSet::point(0.3);
        assert!(p.meets(0.25, 0.3125));
        assert!(!p.meets(0.3125, 0.375));
    }

    #[test]
    fn grid_set_queries() {
        let g = GridSet::new(vec![false, true, false, false]);
        assert!(g.contains(0.25));
        assert!(!g.contains(0.5));
        assert!(g.meets(0.2, 0.3));
        assert!(!g.meets(0.3, 0.7));
        assert_eq!(g.marked_points().collect::<Vec<_>>(), vec![0.25]);
    }
}
