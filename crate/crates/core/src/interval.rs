//! Certified `[lo, hi]` enclosures and compensated summation.
//!
//! Every series, pressure, and dimension result in this crate is carried as an
//! `Interval`. An interval with `hi == +inf` marks a divergent quantity; a
//! fully divergent series is `[+inf, +inf]`.

use serde::Serialize;

/// A closed interval `[lo, hi]` with `lo <= hi`. `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Certified divergence marker.
    pub const DIVERGENT: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate point interval.
    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        if self.hi.is_infinite() {
            return f64::INFINITY;
        }
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_divergent(&self) -> bool {
        self.hi.is_infinite()
    }

    /// Outward-rounded sum of two enclosures.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(
            next_down(self.lo + other.lo),
            next_up(self.hi + other.hi),
        )
    }

    /// Outward-rounded scaling by a positive constant.
    pub fn scale(&self, k: f64) -> Interval {
        assert!(k > 0.0);
        Interval::new(next_down(self.lo * k), next_up(self.hi * k))
    }

    /// Outward-rounded natural log; requires `lo > 0`.
    ///
    /// `ln` is monotone, so the image of the enclosure is the enclosure of the
    /// images; two ulps absorb libm rounding.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "log of non-positive interval endpoint");
        if self.lo.is_infinite() {
            return Interval::DIVERGENT;
        }
        let lo = next_down(next_down(self.lo.ln()));
        let hi = if self.hi.is_infinite() {
            f64::INFINITY
        } else {
            next_up(next_up(self.hi.ln()))
        };
        Interval::new(lo, hi)
    }

    /// Intersection; `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::new(lo, hi))
    }
}

pub fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

pub fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

/// Neumaier-compensated accumulator that tracks the magnitude sum so the
/// floating error can be inflated into a certified enclosure.
///
/// The reproducibility contract is fixed ascending-index accumulation; the
/// inflate step charges four ulps per accumulated term.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> CompensatedSum {
        CompensatedSum::default()
    }

    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
        self.abs += term.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Enclosure of the exact sum of the terms fed so far.
    pub fn enclosure(&self) -> Interval {
        let v = self.value();
        let slack = 4.0 * f64::EPSILON * self.abs;
        Interval::new(next_down(v - slack), next_up(v + slack))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_and_width() {
        let i = Interval::point(2.0);
        assert_eq!(i.width(), 0.0);
        assert!(i.contains(2.0));
    }

    #[test]
    fn ln_encloses() {
        let i = Interval::new(0.5, 2.0);
        let l = i.ln();
        assert!(l.lo <= (0.5f64).ln() && (2.0f64).ln() <= l.hi);
    }

    #[test]
    fn divergent_flows_through_ln() {
        let i = Interval::new(3.0, f64::INFINITY);
        assert!(i.ln().hi.is_infinite());
        assert!(Interval::DIVERGENT.is_divergent());
    }

    #[test]
    fn compensated_sum_encloses_harmonic_block() {
        let mut acc = CompensatedSum::new();
        for n in 1..=1000u64 {
            acc.add(1.0 / n as f64);
        }
        let enc = acc.enclosure();
        // Reference via rational-free descending accumulation in f64 is close
        // enough to sit strictly inside the inflated enclosure.
        let mut rev = 0.0;
        for n in (1..=1000u64).rev() {
            rev += 1.0 / n as f64;
        }
        assert!(enc.contains(rev));
        assert!(enc.width() < 1e-11);
    }

    #[test]
    #[should_panic]
    fn inverted_rejected() {
        let _ = Interval::new(1.0, 0.0);
    }
}
