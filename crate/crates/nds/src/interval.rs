//! Rational intervals with open/closed endpoint flags, the building block
//! of interval and circle regions.

use num_traits::Zero;

use crate::scalar::{fmt_rat, Rat};
use std::fmt;

/// A nonempty rational interval; `lo == hi` with both ends closed is a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalComp {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl IntervalComp {
    pub fn try_new(lo: Rat, hi: Rat, lo_open: bool, hi_open: bool) -> Option<IntervalComp> {
        if lo > hi || (lo == hi && (lo_open || hi_open)) {
            return None;
        }
        Some(IntervalComp {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn point(x: Rat) -> IntervalComp {
        IntervalComp {
            lo: x.clone(),
            hi: x,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn closed(lo: Rat, hi: Rat) -> IntervalComp {
        IntervalComp::try_new(lo, hi, false, false).expect("closed interval requires lo <= hi")
    }

    pub fn half_open(lo: Rat, hi: Rat) -> IntervalComp {
        IntervalComp::try_new(lo, hi, false, true).expect("half-open interval requires lo < hi")
    }

    pub fn open(lo: Rat, hi: Rat) -> IntervalComp {
        IntervalComp::try_new(lo, hi, true, true).expect("open interval requires lo < hi")
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = if self.lo_open {
            x > &self.lo
        } else {
            x >= &self.lo
        };
        let below = if self.hi_open {
            x < &self.hi
        } else {
            x <= &self.hi
        };
        above && below
    }

    pub fn intersect(&self, other: &IntervalComp) -> Option<IntervalComp> {
        let (lo, lo_open) = max_lo((&self.lo, self.lo_open), (&other.lo, other.lo_open));
        let (hi, hi_open) = min_hi((&self.hi, self.hi_open), (&other.hi, other.hi_open));
        IntervalComp::try_new(lo.clone(), hi.clone(), lo_open, hi_open)
    }

    /// Image under the affine map x -> slope*x + intercept.
    pub fn affine_image(&self, slope: &Rat, intercept: &Rat) -> IntervalComp {
        if slope.is_zero() {
            return IntervalComp::point(intercept.clone());
        }
        let a = slope * &self.lo + intercept;
        let b = slope * &self.hi + intercept;
        if slope > &Rat::zero() {
            IntervalComp {
                lo: a,
                hi: b,
                lo_open: self.lo_open,
                hi_open: self.hi_open,
            }
        } else {
            IntervalComp {
                lo: b,
                hi: a,
                lo_open: self.hi_open,
                hi_open: self.lo_open,
            }
        }
    }

    /// Preimage under x -> slope*x + intercept (slope != 0).
    pub fn affine_preimage(&self, slope: &Rat, intercept: &Rat) -> IntervalComp {
        let a = (&self.lo - intercept) / slope;
        let b = (&self.hi - intercept) / slope;
        if slope > &Rat::zero() {
            IntervalComp {
                lo: a,
                hi: b,
                lo_open: self.lo_open,
                hi_open: self.hi_open,
            }
        } else {
            IntervalComp {
                lo: b,
                hi: a,
                lo_open: self.hi_open,
                hi_open: self.lo_open,
            }
        }
    }
}

fn max_lo<'a>(a: (&'a Rat, bool), b: (&'a Rat, bool)) -> (&'a Rat, bool) {
    match a.0.cmp(b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => (a.0, a.1 || b.1),
    }
}

fn min_hi<'a>(a: (&'a Rat, bool), b: (&'a Rat, bool)) -> (&'a Rat, bool) {
    match a.0.cmp(b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => (a.0, a.1 || b.1),
    }
}

/// Sort and merge overlapping or touching components into a canonical
/// disjoint list.
pub fn canonicalize(mut comps: Vec<IntervalComp>) -> Vec<IntervalComp> {
    comps.sort_by(|a, b| {
        a.lo.cmp(&b.lo)
            .then_with(|| a.lo_open.cmp(&b.lo_open))
            .then_with(|| a.hi.cmp(&b.hi))
    });
    let mut out: Vec<IntervalComp> = Vec::with_capacity(comps.len());
    for c in comps {
        match out.last_mut() {
            Some(last) if joinable(last, &c) => match c.hi.cmp(&last.hi) {
                std::cmp::Ordering::Greater => {
                    last.hi = c.hi;
                    last.hi_open = c.hi_open;
                }
                std::cmp::Ordering::Equal => {
                    last.hi_open = last.hi_open && c.hi_open;
                }
                std::cmp::Ordering::Less => {}
            },
            _ => out.push(c),
        }
    }
    out
}

/// Overlapping or touching (their union is one interval).
fn joinable(a: &IntervalComp, b: &IntervalComp) -> bool {
    // sorted so a.lo <= b.lo
    match b.lo.cmp(&a.hi) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => !(b.lo_open && a.hi_open),
        std::cmp::Ordering::Greater => false,
    }
}

impl fmt::Display for IntervalComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", fmt_rat(&self.lo));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            fmt_rat(&self.lo),
            fmt_rat(&self.hi),
            if self.hi_open { ')' } else { ']' },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn merge_touching_half_open() {
        let merged = canonicalize(vec![
            IntervalComp::half_open(rat(0, 1), rat(1, 2)),
            IntervalComp::half_open(rat(1, 2), rat(1, 1)),
        ]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0], IntervalComp::half_open(rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn open_gap_stays_split() {
        let merged = canonicalize(vec![
            IntervalComp::half_open(rat(0, 1), rat(1, 2)),
            IntervalComp::open(rat(1, 2), rat(1, 1)),
        ]);
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn point_joins_interval_end() {
        let merged = canonicalize(vec![
            IntervalComp::half_open(rat(0, 1), rat(1, 2)),
            IntervalComp::point(rat(1, 2)),
        ]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0], IntervalComp::closed(rat(0, 1), rat(1, 2)));
    }

    #[test]
    fn affine_images_flip_flags_for_negative_slope() {
        let c = IntervalComp::half_open(rat(1, 4), rat(1, 2));
        let img = c.affine_image(&rat(-1, 1), &rat(1, 1));
        // 1 - x maps [1/4, 1/2) to (1/2, 3/4]
        assert_eq!(
            img,
            IntervalComp::try_new(rat(1, 2), rat(3, 4), true, false).unwrap()
        );
    }

    #[test]
    fn intersect_respects_flags() {
        let a = IntervalComp::half_open(rat(0, 1), rat(1, 2));
        let b = IntervalComp::try_new(rat(1, 2), rat(1, 1), false, false).unwrap();
        assert!(a.intersect(&b).is_none());
        let c = IntervalComp::closed(rat(0, 1), rat(1, 2));
        assert_eq!(c.intersect(&b), Some(IntervalComp::point(rat(1, 2))));
    }
}
