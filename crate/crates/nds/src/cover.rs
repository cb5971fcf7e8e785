//! Finite covers: the basis regions that stand in for "any nonempty open
//! set" in detector quantifiers.
//!
//! Cells are dyadic at half the requested scale, so any region of diameter
//! up to the scale contains a cell and every cell has diameter <= scale/2.
//! Each cell carries a center and a small set of probe points (corners plus
//! dyadic refinements) for the point-searching detectors.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{NdsError, Result};
use crate::interval::IntervalComp;
use crate::point::Point;
use crate::region::{CircleRegion, Cylinder, RegionSet};
use crate::scalar::{pow2, Rat};
use crate::seq::SeqPoint;
use crate::space::SpaceSpec;

/// One basis region of a cover.
#[derive(Debug, Clone)]
pub struct Cell {
    pub id: String,
    pub region: RegionSet,
    pub center: Point,
    /// Probe points inside the cell: corners, center, dyadic refinements.
    pub probes: Vec<Point>,
}

/// A finite cover of the space at a given scale.
#[derive(Debug, Clone)]
pub struct CoverSpec {
    pub scale: Rat,
    pub cells: Vec<Cell>,
}

impl CoverSpec {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }
}

/// Largest power of two <= scale/2 (as an exponent m with cell size 2^-m).
fn dyadic_exponent(scale: &Rat) -> Result<i32> {
    if !scale.is_positive() {
        return Err(NdsError::BadParameter(
            "cover scale must be positive".into(),
        ));
    }
    let half = scale / Rat::from_integer(BigInt::from(2));
    let mut m: i32 = 0;
    while pow2(-m) > half {
        m += 1;
        if m > 24 {
            return Err(NdsError::BadParameter(
                "cover scale too fine (cell budget exceeded)".into(),
            ));
        }
    }
    Ok(m)
}

/// Build the cover of a space at the given scale.
pub fn build_cover(space: &SpaceSpec, scale: &Rat) -> Result<CoverSpec> {
    let cells = match space {
        SpaceSpec::UnitInterval => {
            let m = dyadic_exponent(scale)?;
            let len = pow2(-m);
            let count = 1u64 << m;
            let mut cells = Vec::with_capacity(count as usize);
            for k in 0..count {
                let lo = Rat::from_integer(BigInt::from(k)) * &len;
                let hi = Rat::from_integer(BigInt::from(k + 1)) * &len;
                let last = k + 1 == count;
                let comp = IntervalComp::try_new(lo.clone(), hi.clone(), false, !last)
                    .expect("cover cell is nonempty");
                let id = comp.to_string();
                let center = &lo + &len / Rat::from_integer(BigInt::from(2));
                let mut probes: Vec<Point> = Vec::new();
                for j in 0..8 {
                    probes.push(Point::Interval(
                        &lo + &len * Rat::new(BigInt::from(j), BigInt::from(8)),
                    ));
                }
                if last {
                    probes.push(Point::Interval(Rat::one()));
                }
                cells.push(Cell {
                    id,
                    region: RegionSet::Intervals(vec![comp]),
                    center: Point::Interval(center),
                    probes,
                });
            }
            cells
        }
        SpaceSpec::Circle => {
            let m = dyadic_exponent(scale)?;
            let len = pow2(-m);
            let count = 1u64 << m;
            let mut cells = Vec::with_capacity(count as usize);
            for k in 0..count {
                let lo = Rat::from_integer(BigInt::from(k)) * &len;
                let hi = Rat::from_integer(BigInt::from(k + 1)) * &len;
                let comp = IntervalComp::half_open(lo.clone(), hi);
                let id = comp.to_string();
                let center = &lo + &len / Rat::from_integer(BigInt::from(2));
                let probes: Vec<Point> = (0..8)
                    .map(|j| {
                        Point::circle(&lo + &len * Rat::new(BigInt::from(j), BigInt::from(8)), 0)
                    })
                    .collect();
                cells.push(Cell {
                    id,
                    region: RegionSet::Arcs(CircleRegion::from_comps(vec![comp])),
                    center: Point::circle(center, 0),
                    probes,
                });
            }
            cells
        }
        SpaceSpec::Finite { size, .. } => (0..*size)
            .map(|i| Cell {
                id: format!("{{{}}}", space.label_of(i)),
                region: RegionSet::Indices([i].into_iter().collect()),
                center: Point::Finite(i),
                probes: vec![Point::Finite(i)],
            })
            .collect(),
        SpaceSpec::Shift => {
            // cylinders fixing |i| <= m with diameter 2^-(m+1) <= scale/2
            let half = scale / Rat::from_integer(BigInt::from(2));
            let mut m: i64 = 0;
            while pow2(-(m as i32 + 1)) > half {
                m += 1;
                if m > 4 {
                    return Err(NdsError::BadParameter(
                        "cylinder cover too fine (cell budget exceeded)".into(),
                    ));
                }
            }
            let width = (2 * m + 1) as u32;
            let count = 1u64 << width;
            let mut cells = Vec::with_capacity(count as usize);
            for mask in 0..count {
                let mut cyl = Cylinder::new();
                let mut bits = String::new();
                for (j, i) in (-m..=m).enumerate() {
                    let bit = ((mask >> j) & 1) as u8;
                    cyl.fix(i, bit);
                    bits.push(if bit == 0 { '0' } else { '1' });
                }
                let center = cyl.sample_point();
                let probes = cylinder_probes(&cyl, m);
                cells.push(Cell {
                    id: format!("[{bits}@{}]", -m),
                    region: RegionSet::Cylinders(vec![cyl]),
                    center: Point::Seq(center),
                    probes,
                });
            }
            cells
        }
    };
    Ok(CoverSpec {
        scale: scale.clone(),
        cells,
    })
}

/// Probe points inside an arbitrary region: interior dyadic samples of each
/// component plus closed endpoints. Used by the point-searching detectors
/// on balls and user regions.
pub fn region_probes(space: &SpaceSpec, region: &RegionSet) -> Vec<Point> {
    match region {
        RegionSet::Intervals(comps) => {
            let mut out = Vec::new();
            for c in comps {
                if c.is_point() {
                    out.push(Point::Interval(c.lo.clone()));
                    continue;
                }
                let w = c.width();
                if !c.lo_open {
                    out.push(Point::Interval(c.lo.clone()));
                }
                for j in 1..8 {
                    out.push(Point::Interval(
                        &c.lo + &w * Rat::new(BigInt::from(j), BigInt::from(8)),
                    ));
                }
                if !c.hi_open {
                    out.push(Point::Interval(c.hi.clone()));
                }
            }
            out
        }
        RegionSet::Arcs(region) => {
            let mut out = Vec::new();
            for c in &region.comps {
                if c.is_point() {
                    out.push(Point::circle(&c.lo + &region.offset, region.steps));
                    continue;
                }
                let w = c.width();
                for j in 1..8 {
                    out.push(Point::circle(
                        &c.lo + &region.offset + &w * Rat::new(BigInt::from(j), BigInt::from(8)),
                        region.steps,
                    ));
                }
            }
            out
        }
        RegionSet::Indices(set) => set.iter().map(|&i| Point::Finite(i)).collect(),
        RegionSet::Cylinders(cyls) => {
            let _ = space;
            let mut out = Vec::new();
            for cyl in cyls {
                let m = cyl
                    .fixed()
                    .iter()
                    .map(|(k, _)| k.unsigned_abs())
                    .max()
                    .unwrap_or(0) as i64;
                out.extend(cylinder_probes(cyl, m));
            }
            out
        }
    }
}

/// Points of a cylinder with varied tails: constant and period-2 fills on
/// both sides, plus mixed tails (zeros to the left, ones to the right and
/// vice versa). Mixed tails matter for scrambled-pair searches: shifting
/// them in one direction approaches a constant sequence while the other
/// direction separates from it.
fn cylinder_probes(cyl: &Cylinder, m: i64) -> Vec<Point> {
    let lo = -m;
    let hi = m;
    let center: Vec<u8> = (lo..=hi).map(|i| cyl.constraint(i).unwrap_or(0)).collect();
    let mut out = Vec::new();
    let tails: [(Vec<u8>, Vec<u8>); 6] = [
        (vec![0], vec![0]),
        (vec![1], vec![1]),
        (vec![0, 1], vec![0, 1]),
        (vec![1, 0], vec![1, 0]),
        (vec![0], vec![1]),
        (vec![1], vec![0]),
    ];
    for (left, right) in tails {
        if let Ok(p) = SeqPoint::new(left, center.clone(), right, lo) {
            if cyl.contains_seq(&p) {
                out.push(Point::Seq(p));
            }
        }
    }
    out
}
