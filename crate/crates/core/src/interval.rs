use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A closed interval with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Self::new(lo.into(), hi.into()).expect("lo <= hi")
    }

    pub fn point(p: Dyadic) -> Self {
        Interval {
            lo: p.clone(),
            hi: p,
        }
    }

    /// `[center - radius, center + radius]`.
    pub fn around(center: &Dyadic, radius: &Dyadic) -> Self {
        let r = radius.abs();
        Interval {
            lo: center - &r,
            hi: center + &r,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (
            Interval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            Interval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed intersection; touching endpoints produce a point interval.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.intersect(other).is_some()
    }

    /// Interiors overlap.
    pub fn overlaps_open(&self, other: &Interval) -> bool {
        (&self.lo).max(&other.lo) < (&self.hi).min(&other.hi)
    }

    /// Largest distance from `p` to a point of the interval.
    pub fn max_distance_from(&self, p: &Dyadic) -> Dyadic {
        let a = (&self.lo - p).abs();
        let b = (&self.hi - p).abs();
        a.max(b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reversed() {
        assert!(Interval::new(2.into(), 1.into()).is_err());
    }

    #[test]
    fn bisect_is_exact() {
        let i = Interval::new("1/3".parse().unwrap_or(Dyadic::one()), 3.into()).unwrap();
        let (a, b) = i.bisect();
        assert_eq!(a.hi(), b.lo());
        assert_eq!(&a.width() + &b.width(), i.width());
    }

    #[test]
    fn intersections() {
        let a = Interval::from_ints(0, 2);
        let b = Interval::from_ints(2, 5);
        assert!(a.intersects(&b));
        assert!(!a.overlaps_open(&b));
        assert_eq!(a.intersect(&b).unwrap(), Interval::point(2.into()));
        assert_eq!(a.max_distance_from(&Dyadic::from_i64(-1)), Dyadic::from_i64(3));
    }
}
