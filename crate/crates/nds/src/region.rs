//! Exact region algebra: finite unions of rational intervals, circle arcs
//! with a symbolic rotation offset, finite index sets, and cylinder sets.
//!
//! Regions are the open-set surrogate used by every detector. They are
//! closed under exact forward image for all built-in map kinds, and under
//! preimage; intersection, membership, emptiness and diameter are decidable.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{NdsError, Result};
use crate::interval::{canonicalize, IntervalComp};
use crate::maps::MapSpec;
use crate::point::Point;
use crate::scalar::{pow2, Quad, Rat, Scalar};
use crate::space::{FiniteMetric, SpaceSpec};

/// Cylinder set: finitely many coordinates pinned to bits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Cylinder(BTreeMap<i64, u8>);

impl Cylinder {
    pub fn new() -> Cylinder {
        Cylinder(BTreeMap::new())
    }

    pub fn from_pairs(pairs: &[(i64, u8)]) -> Cylinder {
        Cylinder(pairs.iter().copied().collect())
    }

    pub fn fix(&mut self, coord: i64, bit: u8) {
        self.0.insert(coord, bit & 1);
    }

    pub fn fixed(&self) -> Vec<(i64, u8)> {
        self.0.iter().map(|(k, v)| (*k, *v)).collect()
    }

    pub fn constraint(&self, coord: i64) -> Option<u8> {
        self.0.get(&coord).copied()
    }

    pub fn is_unconstrained(&self) -> bool {
        self.0.is_empty()
    }

    /// No coordinate pinned to conflicting bits.
    pub fn compatible(&self, other: &Cylinder) -> bool {
        self.0
            .iter()
            .all(|(k, v)| other.0.get(k).is_none_or(|w| w == v))
    }

    /// Set inclusion: self is a subset of other.
    pub fn subset_of(&self, other: &Cylinder) -> bool {
        other.0.iter().all(|(k, v)| self.0.get(k) == Some(v))
    }

    /// Reindex under the shift y(i) = x(i + power): constraint at coordinate
    /// c moves to c - power.
    pub fn shifted(&self, power: i64) -> Cylinder {
        Cylinder(self.0.iter().map(|(k, v)| (k - power, *v)).collect())
    }

    /// Smallest |i| left free; the cylinder's diameter is 2^-(that).
    pub fn min_free_abs(&self) -> u64 {
        let bound = self.0.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0) + 1;
        for a in 0..=bound {
            let i = a as i64;
            if !self.0.contains_key(&i) || (i != 0 && !self.0.contains_key(&(-i))) {
                return a;
            }
        }
        bound
    }

    /// A concrete member: pinned bits, zero elsewhere.
    pub fn sample_point(&self) -> crate::seq::SeqPoint {
        if self.0.is_empty() {
            return crate::seq::SeqPoint::constant(0);
        }
        let lo = *self.0.keys().next().unwrap();
        let hi = *self.0.keys().last().unwrap();
        let center: Vec<u8> = (lo..=hi)
            .map(|i| self.0.get(&i).copied().unwrap_or(0))
            .collect();
        crate::seq::SeqPoint::new(vec![0], center, vec![0], lo).expect("valid words")
    }

    pub fn contains_seq(&self, s: &crate::seq::SeqPoint) -> bool {
        self.0.iter().all(|(k, v)| s.at(*k) == *v)
    }
}

/// `self minus other`, as disjoint cylinders.
fn cylinder_subtract(c: &Cylinder, other: &Cylinder) -> Vec<Cylinder> {
    if !c.compatible(other) {
        return vec![c.clone()];
    }
    if c.subset_of(other) {
        return Vec::new();
    }
    // split on constraints of `other` that `c` leaves free
    let mut out = Vec::new();
    let mut acc = c.clone();
    for (k, v) in other.0.iter() {
        if acc.constraint(*k).is_none() {
            let mut flipped = acc.clone();
            flipped.fix(*k, 1 - *v);
            out.push(flipped);
            acc.fix(*k, *v);
        }
    }
    out
}

/// Circle region: rational interval components inside [0, 1) plus a global
/// symbolic rotation offset `steps * alpha + offset`.
///
/// Storing the offset separately keeps arc endpoints rational while making
/// the region algebra exactly closed under rotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleRegion {
    pub comps: Vec<IntervalComp>,
    pub steps: i64,
    pub offset: Rat,
}

fn fold_unit(x: &Rat) -> Rat {
    x - x.floor()
}

impl CircleRegion {
    pub fn full() -> CircleRegion {
        CircleRegion {
            comps: vec![IntervalComp::half_open(Rat::zero(), Rat::one())],
            steps: 0,
            offset: Rat::zero(),
        }
    }

    pub fn from_comps(comps: Vec<IntervalComp>) -> CircleRegion {
        CircleRegion {
            comps: canonicalize(comps),
            steps: 0,
            offset: Rat::zero(),
        }
    }

    /// Open arc (lo, hi) of length < 1, folded into [0, 1).
    pub fn open_arc(lo: Rat, hi: Rat) -> CircleRegion {
        CircleRegion {
            comps: fold_comp(IntervalComp::open(lo, hi)),
            steps: 0,
            offset: Rat::zero(),
        }
    }

    pub fn point(base: Rat, steps: i64) -> CircleRegion {
        CircleRegion {
            comps: vec![IntervalComp::point(fold_unit(&base))],
            steps,
            offset: Rat::zero(),
        }
    }

    pub fn rotated(&self, steps: i64, offset: &Rat) -> CircleRegion {
        CircleRegion {
            comps: self.comps.clone(),
            steps: self.steps + steps,
            offset: fold_unit(&(&self.offset + offset)),
        }
    }

    /// Same-frame check: the symbolic offsets agree.
    fn same_frame(&self, other: &CircleRegion) -> bool {
        self.steps == other.steps && self.offset == other.offset
    }

    /// Residual rational rotation of `self`'s frame relative to `other`'s,
    /// when the symbolic parts agree.
    fn frame_delta_rational(&self, other: &CircleRegion) -> Option<Rat> {
        if self.steps == other.steps {
            Some(fold_unit(&(&self.offset - &other.offset)))
        } else {
            None
        }
    }
}

/// Fold a bounded interval over the circle into components of [0, 1).
fn fold_comp(c: IntervalComp) -> Vec<IntervalComp> {
    let base = c.lo.floor();
    let lo = &c.lo - &base;
    let hi = &c.hi - &base;
    let one = Rat::one();
    if hi <= one {
        let mut out = Vec::new();
        if hi == one && !c.hi_open {
            out.push(IntervalComp::point(Rat::zero()));
        }
        if let Some(comp) = IntervalComp::try_new(
            lo,
            hi.clone().min(one),
            c.lo_open,
            c.hi_open || hi == Rat::one(),
        ) {
            out.push(comp);
        }
        canonicalize(out)
    } else {
        // wraps: [lo, 1) and fold the remainder
        let mut out = Vec::new();
        if let Some(first) = IntervalComp::try_new(lo, one.clone(), c.lo_open, true) {
            out.push(first);
        }
        let rest = IntervalComp::try_new(Rat::zero(), &hi - &one, false, c.hi_open)
            .expect("wrapped remainder is nonempty");
        out.extend(fold_comp(rest));
        canonicalize(out)
    }
}

/// Finite union of exactly-represented components, matched to a space kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionSet {
    Intervals(Vec<IntervalComp>),
    Arcs(CircleRegion),
    Indices(BTreeSet<usize>),
    Cylinders(Vec<Cylinder>),
}

impl RegionSet {
    pub fn intervals(comps: Vec<IntervalComp>) -> RegionSet {
        RegionSet::Intervals(canonicalize(comps))
    }

    pub fn full(space: &SpaceSpec) -> RegionSet {
        match space {
            SpaceSpec::UnitInterval => {
                RegionSet::Intervals(vec![IntervalComp::closed(Rat::zero(), Rat::one())])
            }
            SpaceSpec::Circle => RegionSet::Arcs(CircleRegion::full()),
            SpaceSpec::Finite { size, .. } => RegionSet::Indices((0..*size).collect()),
            SpaceSpec::Shift => RegionSet::Cylinders(vec![Cylinder::new()]),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            RegionSet::Intervals(c) => c.is_empty(),
            RegionSet::Arcs(a) => a.comps.is_empty(),
            RegionSet::Indices(s) => s.is_empty(),
            RegionSet::Cylinders(c) => c.is_empty(),
        }
    }

    pub fn canonical(self) -> RegionSet {
        match self {
            RegionSet::Intervals(c) => RegionSet::Intervals(canonicalize(c)),
            RegionSet::Arcs(a) => RegionSet::Arcs(CircleRegion {
                comps: canonicalize(a.comps),
                steps: a.steps,
                offset: a.offset,
            }),
            RegionSet::Indices(s) => RegionSet::Indices(s),
            RegionSet::Cylinders(c) => RegionSet::Cylinders(canonicalize_cylinders(c)),
        }
    }

    pub fn is_full(&self, space: &SpaceSpec) -> bool {
        match (self, space) {
            (RegionSet::Intervals(c), _) => {
                c.len() == 1 && c[0] == IntervalComp::closed(Rat::zero(), Rat::one())
            }
            (RegionSet::Arcs(a), _) => {
                a.comps.len() == 1
                    && a.comps[0].lo.is_zero()
                    && !a.comps[0].lo_open
                    && a.comps[0].hi.is_one()
                    && a.comps[0].hi_open
            }
            (RegionSet::Indices(s), SpaceSpec::Finite { size, .. }) => s.len() == *size,
            (RegionSet::Cylinders(c), _) => c.iter().any(|cy| cy.is_unconstrained()),
            _ => false,
        }
    }

    /// Exact membership.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        match (self, p) {
            (RegionSet::Intervals(comps), Point::Interval(x)) => {
                Ok(comps.iter().any(|c| c.contains(x)))
            }
            (RegionSet::Arcs(region), Point::Circle { base, steps }) => {
                // test base + steps*alpha - frame offset against the arcs
                let rel =
                    Quad::with_alpha_steps(&(base - &region.offset), steps - region.steps).mod1();
                if rel.is_rational() {
                    let x = rel.a;
                    Ok(region.comps.iter().any(|c| c.contains(&x)))
                } else {
                    Ok(region.comps.iter().any(|c| {
                        rel.cmp_rat(&c.lo) == std::cmp::Ordering::Greater
                            && rel.cmp_rat(&c.hi) == std::cmp::Ordering::Less
                    }))
                }
            }
            (RegionSet::Indices(set), Point::Finite(i)) => Ok(set.contains(i)),
            (RegionSet::Cylinders(cyls), Point::Seq(s)) => {
                Ok(cyls.iter().any(|c| c.contains_seq(s)))
            }
            _ => Err(NdsError::SpaceMismatch(format!(
                "membership of {} point in {} region",
                p.kind(),
                self.kind_name()
            ))),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            RegionSet::Intervals(_) => "interval",
            RegionSet::Arcs(_) => "circle",
            RegionSet::Indices(_) => "finite",
            RegionSet::Cylinders(_) => "shift",
        }
    }

    /// Exact nonemptiness of the intersection.
    pub fn intersects(&self, other: &RegionSet) -> Result<bool> {
        match (self, other) {
            (RegionSet::Intervals(a), RegionSet::Intervals(b)) => {
                Ok(a.iter().any(|x| b.iter().any(|y| x.intersect(y).is_some())))
            }
            (RegionSet::Indices(a), RegionSet::Indices(b)) => {
                Ok(a.intersection(b).next().is_some())
            }
            (RegionSet::Cylinders(a), RegionSet::Cylinders(b)) => {
                Ok(a.iter().any(|x| b.iter().any(|y| x.compatible(y))))
            }
            (RegionSet::Arcs(a), RegionSet::Arcs(b)) => arcs_intersect(a, b),
            _ => Err(NdsError::SpaceMismatch(format!(
                "intersection of {} region with {} region",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    /// Union; for circle regions the symbolic frames must agree.
    pub fn union(&self, other: &RegionSet) -> Result<RegionSet> {
        match (self, other) {
            (RegionSet::Intervals(a), RegionSet::Intervals(b)) => {
                let mut all = a.clone();
                all.extend(b.iter().cloned());
                Ok(RegionSet::Intervals(canonicalize(all)))
            }
            (RegionSet::Indices(a), RegionSet::Indices(b)) => {
                Ok(RegionSet::Indices(a.union(b).copied().collect()))
            }
            (RegionSet::Cylinders(a), RegionSet::Cylinders(b)) => {
                let mut all = a.clone();
                all.extend(b.iter().cloned());
                Ok(RegionSet::Cylinders(canonicalize_cylinders(all)))
            }
            (RegionSet::Arcs(a), RegionSet::Arcs(b)) => {
                if a.comps.is_empty() {
                    return Ok(RegionSet::Arcs(b.clone()));
                }
                if b.comps.is_empty() {
                    return Ok(RegionSet::Arcs(a.clone()));
                }
                if let Some(delta) = b.frame_delta_rational(a) {
                    let mut all = a.comps.clone();
                    for c in &b.comps {
                        all.extend(shift_comp_frac(c, &delta));
                    }
                    Ok(RegionSet::Arcs(CircleRegion {
                        comps: canonicalize(all),
                        steps: a.steps,
                        offset: a.offset.clone(),
                    }))
                } else {
                    Err(NdsError::Unsupported(
                        "union of circle regions with different symbolic offsets".into(),
                    ))
                }
            }
            _ => Err(NdsError::SpaceMismatch(format!(
                "union of {} region with {} region",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    /// Subset test (exact). Circle regions must share a rational frame delta.
    pub fn subset_of(&self, other: &RegionSet) -> Result<bool> {
        match (self, other) {
            (RegionSet::Intervals(a), RegionSet::Intervals(b)) => {
                Ok(a.iter().all(|x| b.iter().any(|y| interval_subset(x, y))))
            }
            (RegionSet::Indices(a), RegionSet::Indices(b)) => Ok(a.is_subset(b)),
            (RegionSet::Cylinders(a), RegionSet::Cylinders(b)) => {
                // a \ b empty
                for cyl in a {
                    let mut residue = vec![cyl.clone()];
                    for k in b {
                        residue = residue
                            .into_iter()
                            .flat_map(|r| cylinder_subtract(&r, k))
                            .collect();
                        if residue.is_empty() {
                            break;
                        }
                    }
                    if !residue.is_empty() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (RegionSet::Arcs(a), RegionSet::Arcs(b)) => {
                if a.comps.is_empty() {
                    return Ok(true);
                }
                match a.frame_delta_rational(b) {
                    Some(delta) => {
                        let shifted: Vec<IntervalComp> = a
                            .comps
                            .iter()
                            .flat_map(|c| shift_comp_frac(c, &delta))
                            .collect();
                        Ok(shifted
                            .iter()
                            .all(|x| b.comps.iter().any(|y| interval_subset(x, y))))
                    }
                    None => Err(NdsError::Unsupported(
                        "subset of circle regions with different symbolic offsets".into(),
                    )),
                }
            }
            _ => Err(NdsError::SpaceMismatch(format!(
                "subset of {} region in {} region",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    /// Exact diameter (sup of pairwise distances).
    pub fn diam(&self, space: &SpaceSpec) -> Result<Scalar> {
        match (self, space) {
            (RegionSet::Intervals(comps), _) => {
                if comps.is_empty() {
                    return Ok(Scalar::zero());
                }
                let lo = &comps.first().unwrap().lo;
                let hi = comps.iter().map(|c| &c.hi).max().unwrap();
                Ok(Scalar::Rat(hi - lo))
            }
            (RegionSet::Arcs(region), _) => {
                if region.comps.is_empty() {
                    return Ok(Scalar::zero());
                }
                let half = Rat::new(BigInt::one(), BigInt::from(2));
                let mut best = Rat::zero();
                let n = region.comps.len();
                for i in 0..n {
                    for j in i..n {
                        let d = arc_pair_max_distance(&region.comps[i], &region.comps[j]);
                        if d > best {
                            best = d;
                        }
                        if best >= half {
                            return Ok(Scalar::Rat(half));
                        }
                    }
                }
                Ok(Scalar::Rat(best))
            }
            (RegionSet::Indices(set), SpaceSpec::Finite { metric, .. }) => {
                let mut best = Rat::zero();
                for &i in set {
                    for &j in set {
                        let d = match metric {
                            FiniteMetric::Discrete => {
                                if i == j {
                                    Rat::zero()
                                } else {
                                    Rat::one()
                                }
                            }
                            FiniteMetric::Table(t) => t[i][j].clone(),
                        };
                        if d > best {
                            best = d;
                        }
                    }
                }
                Ok(Scalar::Rat(best))
            }
            (RegionSet::Cylinders(cyls), _) => {
                if cyls.is_empty() {
                    return Ok(Scalar::zero());
                }
                let mut min_k: Option<u64> = None;
                for (i, a) in cyls.iter().enumerate() {
                    for b in cyls.iter().skip(i) {
                        let k = pair_min_diff_abs(a, b);
                        min_k = Some(min_k.map_or(k, |m| m.min(k)));
                        if min_k == Some(0) {
                            break;
                        }
                    }
                }
                match min_k {
                    Some(k) => Ok(Scalar::Rat(pow2(-(k as i32)))),
                    None => Ok(Scalar::zero()),
                }
            }
            _ => Err(NdsError::SpaceMismatch(format!(
                "diameter of {} region in {} space",
                self.kind_name(),
                space.kind()
            ))),
        }
    }

    /// Exact forward image under a map.
    pub fn image(&self, map: &MapSpec) -> Result<RegionSet> {
        match map {
            MapSpec::Identity => Ok(self.clone()),
            MapSpec::Composite(list) => {
                let mut r = self.clone();
                for m in list.iter().rev() {
                    r = r.image(m)?;
                }
                Ok(r)
            }
            MapSpec::Inverse(inner) => self.preimage(inner),
            MapSpec::Pl(pl) => match self {
                RegionSet::Intervals(comps) => Ok(RegionSet::Intervals(canonicalize(
                    comps.iter().flat_map(|c| pl.image_of(c)).collect(),
                ))),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Rotation { steps, offset } => match self {
                RegionSet::Arcs(region) => Ok(RegionSet::Arcs(region.rotated(*steps, offset))),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Finite(table) => match self {
                RegionSet::Indices(set) => Ok(RegionSet::Indices(
                    set.iter().map(|&i| table.apply(i)).collect(),
                )),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Shift { power } => match self {
                RegionSet::Cylinders(cyls) => Ok(RegionSet::Cylinders(
                    cyls.iter().map(|c| c.shifted(*power)).collect(),
                )),
                _ => Err(self.mismatch(map)),
            },
        }
    }

    /// Exact preimage under a map.
    pub fn preimage(&self, map: &MapSpec) -> Result<RegionSet> {
        match map {
            MapSpec::Identity => Ok(self.clone()),
            MapSpec::Composite(list) => {
                let mut r = self.clone();
                for m in list.iter() {
                    r = r.preimage(m)?;
                }
                Ok(r)
            }
            MapSpec::Inverse(inner) => self.image(inner),
            MapSpec::Pl(pl) => match self {
                RegionSet::Intervals(comps) => Ok(RegionSet::Intervals(canonicalize(
                    comps.iter().flat_map(|c| pl.preimage_of(c)).collect(),
                ))),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Rotation { steps, offset } => match self {
                RegionSet::Arcs(region) => Ok(RegionSet::Arcs(region.rotated(-steps, &(-offset)))),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Finite(table) => match self {
                RegionSet::Indices(set) => Ok(RegionSet::Indices(
                    (0..table.size())
                        .filter(|&i| set.contains(&table.apply(i)))
                        .collect(),
                )),
                _ => Err(self.mismatch(map)),
            },
            MapSpec::Shift { power } => match self {
                RegionSet::Cylinders(cyls) => Ok(RegionSet::Cylinders(
                    cyls.iter().map(|c| c.shifted(-*power)).collect(),
                )),
                _ => Err(self.mismatch(map)),
            },
        }
    }

    fn mismatch(&self, map: &MapSpec) -> NdsError {
        NdsError::SpaceMismatch(format!(
            "{} region under {:?} map",
            self.kind_name(),
            map.space_kind().ok().flatten()
        ))
    }
}

fn interval_subset(a: &IntervalComp, b: &IntervalComp) -> bool {
    let lo_ok = match a.lo.cmp(&b.lo) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => a.lo_open || !b.lo_open,
        std::cmp::Ordering::Less => false,
    };
    let hi_ok = match a.hi.cmp(&b.hi) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => a.hi_open || !b.hi_open,
        std::cmp::Ordering::Greater => false,
    };
    lo_ok && hi_ok
}

/// Rotate an interval component of [0,1) by a rational delta, folding.
fn shift_comp_frac(c: &IntervalComp, delta: &Rat) -> Vec<IntervalComp> {
    let shifted = IntervalComp {
        lo: &c.lo + delta,
        hi: &c.hi + delta,
        lo_open: c.lo_open,
        hi_open: c.hi_open,
    };
    fold_comp_pub(shifted)
}

pub(crate) fn fold_comp_pub(c: IntervalComp) -> Vec<IntervalComp> {
    fold_comp(c)
}

/// Exact intersection test for circle regions in possibly different frames.
fn arcs_intersect(a: &CircleRegion, b: &CircleRegion) -> Result<bool> {
    if a.comps.is_empty() || b.comps.is_empty() {
        return Ok(false);
    }
    if a.same_frame(b) {
        return Ok(a
            .comps
            .iter()
            .any(|x| b.comps.iter().any(|y| x.intersect(y).is_some())));
    }
    if let Some(delta) = a.frame_delta_rational(b) {
        // rational relative rotation: shift a into b's frame
        let shifted: Vec<IntervalComp> = a
            .comps
            .iter()
            .flat_map(|c| shift_comp_frac(c, &delta))
            .collect();
        return Ok(shifted
            .iter()
            .any(|x| b.comps.iter().any(|y| x.intersect(y).is_some())));
    }
    // irrational relative rotation: endpoints can never coincide, so openness
    // flags are irrelevant and strict comparisons decide overlap
    let delta = Quad::with_alpha_steps(&(&a.offset - &b.offset), a.steps - b.steps).mod1();
    for x in &a.comps {
        // shifted component [x.lo + delta, x.hi + delta], possibly wrapping once
        let lo = delta.add_rat(&x.lo);
        let hi = delta.add_rat(&x.hi);
        for y in &b.comps {
            if quad_arc_overlaps(&lo, &hi, y) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Does the arc [lo, hi] (irrational endpoints, hi - lo < 1, possibly
/// crossing 1) meet the rational component y of [0, 1)?
fn quad_arc_overlaps(lo: &Quad, hi: &Quad, y: &IntervalComp) -> bool {
    let one = Rat::one();
    let pieces: Vec<(Quad, Quad)> = if hi.cmp_rat(&one) != std::cmp::Ordering::Greater {
        vec![(lo.clone(), hi.clone())]
    } else {
        vec![
            (lo.clone(), Quad::from_rat(one.clone())),
            (Quad::from_rat(Rat::zero()), hi.sub(&Quad::from_rat(one))),
        ]
    };
    for (plo, phi) in pieces {
        // strict overlap test: max(lo) < min(hi); for degenerate rational
        // pieces the endpoints are irrational so strictness is exact
        let lo_max = if plo.cmp_rat(&y.lo) == std::cmp::Ordering::Greater {
            plo.clone()
        } else {
            Quad::from_rat(y.lo.clone())
        };
        let hi_min = if phi.cmp_rat(&y.hi) == std::cmp::Ordering::Less {
            phi.clone()
        } else {
            Quad::from_rat(y.hi.clone())
        };
        match lo_max.cmp_quad(&hi_min) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Equal => {
                // only possible when both bounds are the same rational point
                if y.is_point() && plo.cmp_rat(&y.lo) == std::cmp::Ordering::Less {
                    return true;
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    false
}

/// Sup of arc distances between points of two components of [0, 1).
fn arc_pair_max_distance(a: &IntervalComp, b: &IntervalComp) -> Rat {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    // achievable differences x - y form [a.lo - b.hi, a.hi - b.lo]
    let m = &a.lo - &b.hi;
    let big_m = &a.hi - &b.lo;
    if &big_m - &m >= Rat::one() {
        return half;
    }
    // fold [m, M] into [0, 1) pieces and maximize min(t, 1-t)
    let mut best = Rat::zero();
    for (u, v) in fold_real_interval(&m, &big_m) {
        let cand = if u <= half.clone() && half <= v {
            half.clone()
        } else if v < half {
            v.clone()
        } else {
            Rat::one() - &u
        };
        if cand > best {
            best = cand;
        }
    }
    best
}

/// Fold a real interval [m, M] with M - m < 1 into closed pieces of [0, 1).
fn fold_real_interval(m: &Rat, big_m: &Rat) -> Vec<(Rat, Rat)> {
    let base = m.floor();
    let lo = m - &base;
    let hi = big_m - &base;
    if hi <= Rat::one() {
        vec![(lo, hi)]
    } else {
        vec![(lo, Rat::one()), (Rat::zero(), hi - Rat::one())]
    }
}

/// Smallest |i| at which members of two cylinders can differ.
fn pair_min_diff_abs(a: &Cylinder, b: &Cylinder) -> u64 {
    let bound = a
        .fixed()
        .iter()
        .chain(b.fixed().iter())
        .map(|(k, _)| k.unsigned_abs())
        .max()
        .unwrap_or(0)
        + 1;
    for k in 0..=bound {
        for i in [k as i64, -(k as i64)] {
            let forced_equal = matches!(
                (a.constraint(i), b.constraint(i)),
                (Some(x), Some(y)) if x == y
            );
            if !forced_equal {
                return k;
            }
            if k == 0 {
                break;
            }
        }
    }
    bound
}

/// Deduplicate, drop subsumed cylinders, merge sibling pairs, and make the
/// remaining components pairwise disjoint.
fn canonicalize_cylinders(input: Vec<Cylinder>) -> Vec<Cylinder> {
    let mut work = input;
    loop {
        work.sort();
        work.dedup();
        // drop cylinders subsumed by another
        let mut kept: Vec<Cylinder> = Vec::new();
        'outer: for c in &work {
            for other in &work {
                if c != other && c.subset_of(other) && !(other.subset_of(c) && kept.contains(other))
                {
                    continue 'outer;
                }
            }
            kept.push(c.clone());
        }
        // merge sibling pairs differing in exactly one bit
        let mut merged = false;
        'merge: for i in 0..kept.len() {
            for j in (i + 1)..kept.len() {
                if let Some(m) = merge_siblings(&kept[i], &kept[j]) {
                    let mut next = kept.clone();
                    next.remove(j);
                    next.remove(i);
                    next.push(m);
                    kept = next;
                    merged = true;
                    break 'merge;
                }
            }
        }
        if !merged {
            // disjointify deterministically
            let mut disjoint: Vec<Cylinder> = Vec::new();
            for c in kept {
                let mut parts = vec![c];
                for existing in &disjoint {
                    parts = parts
                        .into_iter()
                        .flat_map(|p| cylinder_subtract(&p, existing))
                        .collect();
                }
                disjoint.extend(parts);
            }
            disjoint.sort();
            return disjoint;
        }
        work = kept;
    }
}

fn merge_siblings(a: &Cylinder, b: &Cylinder) -> Option<Cylinder> {
    let fa = a.fixed();
    let fb = b.fixed();
    if fa.len() != fb.len() {
        return None;
    }
    let mut diff_key = None;
    for ((ka, va), (kb, vb)) in fa.iter().zip(fb.iter()) {
        if ka != kb {
            return None;
        }
        if va != vb {
            if diff_key.is_some() {
                return None;
            }
            diff_key = Some(*ka);
        }
    }
    diff_key.map(|k| {
        let mut m = a.clone();
        m.0.remove(&k);
        m
    })
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSet::Intervals(comps) => {
                let parts: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" u "))
            }
            RegionSet::Arcs(region) => {
                let parts: Vec<String> = region.comps.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" u "))?;
                if region.steps != 0 || !region.offset.is_zero() {
                    write!(
                        f,
                        " (+{}a+{})",
                        region.steps,
                        crate::scalar::fmt_rat(&region.offset)
                    )?;
                }
                Ok(())
            }
            RegionSet::Indices(set) => {
                let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            RegionSet::Cylinders(cyls) => {
                let parts: Vec<String> = cyls
                    .iter()
                    .map(|c| {
                        let inner: Vec<String> =
                            c.fixed().iter().map(|(k, v)| format!("{k}:{v}")).collect();
                        format!("[{}]", inner.join(","))
                    })
                    .collect();
                write!(f, "{}", parts.join(" u "))
            }
        }
    }
}
