use super::intervals::wrap;

/// Union of closed arcs of common radius around the points `i/count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Lattice {
    pub count: f64,
    pub radius: f64,
}

impl Lattice {
    /// Distance from `x` to the nearest center.
    pub fn distance(&self, x: f64) -> f64 {
        let y = wrap(x) * self.count;
        (y - y.round()).abs() / self.count
    }

    pub fn contains(&self, x: f64) -> bool {
        self.distance(x) <= self.radius
    }

    pub fn meets(&self, lo: f64, hi: f64) -> bool {
        let a = lo * self.count;
        let b = hi * self.count;
        if a.ceil() <= b {
            return true;
        }
        let below = (a - a.floor()) / self.count;
        let above = (b.ceil() - b) / self.count;
        below.min(above) <= self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meets_uses_nearest_center() {
        let l = Lattice { count: 4.0, radius: 0.05 };
        assert!(l.meets(0.2, 0.3));
        assert!(l.meets(0.29, 0.3));
        assert!(!l.meets(0.31, 0.44));
        assert!(l.meets(0.96, 1.0));
        assert!(l.contains(0.98));
        assert!(!l.contains(0.9));
    }
}
