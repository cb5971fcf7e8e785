//! Exact self-maps: piecewise-linear interval maps, circle rotations by the
//! fixed irrational angle, finite tables, and shifts, plus composition,
//! inversion, flag analysis and commutation checks.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{NdsError, Result};
use crate::interval::{canonicalize, IntervalComp};
use crate::point::{Point, SpaceKind};
use crate::scalar::{fmt_rat, Rat};

/// x -> slope*x + intercept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rat,
    pub intercept: Rat,
}

impl Affine {
    pub fn new(slope: Rat, intercept: Rat) -> Affine {
        Affine { slope, intercept }
    }

    pub fn identity() -> Affine {
        Affine::new(Rat::one(), Rat::zero())
    }

    pub fn constant(c: Rat) -> Affine {
        Affine::new(Rat::zero(), c)
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    /// outer(inner(x)) as one affine map.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine {
            slope: &self.slope * &inner.slope,
            intercept: &self.slope * &inner.intercept + &self.intercept,
        }
    }
}

/// Piecewise-linear self-map of [0, 1].
///
/// Piece i acts on `[breakpoints[i], breakpoints[i+1])`; the value at 1 is
/// stored explicitly so the algebra stays closed under composition (a
/// composition can disagree with the limit of its last piece at the
/// endpoint). Maps built from user input take their value at 1 from the
/// final piece, matching the convention that the last piece is closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    breakpoints: Vec<Rat>,
    pieces: Vec<Affine>,
    value_at_one: Rat,
}

fn in_unit(x: &Rat) -> bool {
    !x.is_negative() && *x <= Rat::one()
}

impl PLMap {
    /// Build from breakpoints 0 = b0 < ... < bp = 1 and one affine per piece.
    /// The value at 1 comes from the last piece.
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<Affine>) -> Result<PLMap> {
        if pieces.is_empty() || breakpoints.len() != pieces.len() + 1 {
            return Err(NdsError::Parse(
                "piecewise map needs n pieces and n+1 breakpoints".into(),
            ));
        }
        let value_at_one = pieces.last().unwrap().apply(&Rat::one());
        PLMap::with_value_at_one(breakpoints, pieces, value_at_one)
    }

    pub fn with_value_at_one(
        breakpoints: Vec<Rat>,
        pieces: Vec<Affine>,
        value_at_one: Rat,
    ) -> Result<PLMap> {
        if pieces.is_empty() || breakpoints.len() != pieces.len() + 1 {
            return Err(NdsError::Parse(
                "piecewise map needs n pieces and n+1 breakpoints".into(),
            ));
        }
        if breakpoints[0] != Rat::zero() || *breakpoints.last().unwrap() != Rat::one() {
            return Err(NdsError::Parse(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NdsError::Parse(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        for (i, piece) in pieces.iter().enumerate() {
            let at_lo = piece.apply(&breakpoints[i]);
            let at_hi = piece.apply(&breakpoints[i + 1]);
            if !in_unit(&at_lo) || !in_unit(&at_hi) {
                return Err(NdsError::Parse(format!(
                    "piece {i} leaves [0,1]: values {} .. {}",
                    fmt_rat(&at_lo),
                    fmt_rat(&at_hi)
                )));
            }
        }
        if !in_unit(&value_at_one) {
            return Err(NdsError::Parse("value at 1 leaves [0,1]".into()));
        }
        let mut m = PLMap {
            breakpoints,
            pieces,
            value_at_one,
        };
        m.merge_pieces();
        Ok(m)
    }

    pub fn identity() -> PLMap {
        PLMap::new(vec![Rat::zero(), Rat::one()], vec![Affine::identity()]).unwrap()
    }

    /// One affine piece on all of [0, 1].
    pub fn single(slope: Rat, intercept: Rat) -> Result<PLMap> {
        PLMap::new(
            vec![Rat::zero(), Rat::one()],
            vec![Affine::new(slope, intercept)],
        )
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    pub fn value_at_one(&self) -> &Rat {
        &self.value_at_one
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Index of the piece whose half-open domain contains x in [0, 1).
    fn piece_index(&self, x: &Rat) -> usize {
        // last i with breakpoints[i] <= x
        let mut lo = 0usize;
        let mut hi = self.breakpoints.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if &self.breakpoints[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        if x.is_one() {
            return self.value_at_one.clone();
        }
        self.pieces[self.piece_index(x)].apply(x)
    }

    fn merge_pieces(&mut self) {
        let mut bp = Vec::with_capacity(self.breakpoints.len());
        let mut pieces: Vec<Affine> = Vec::with_capacity(self.pieces.len());
        bp.push(self.breakpoints[0].clone());
        for (i, piece) in self.pieces.iter().enumerate() {
            if let Some(last) = pieces.last() {
                if last == piece {
                    continue;
                }
            }
            if !pieces.is_empty() {
                bp.push(self.breakpoints[i].clone());
            }
            pieces.push(piece.clone());
        }
        bp.push(Rat::one());
        self.breakpoints = bp;
        self.pieces = pieces;
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0] == Affine::identity() && self.value_at_one.is_one()
    }

    /// Exact flattening of `self(inner(x))`.
    ///
    /// Fails only when a strictly decreasing piece of `inner` lands exactly
    /// on a discontinuity of `self`, which would require an isolated-point
    /// value that the piece representation cannot express.
    pub fn compose(&self, inner: &PLMap, piece_budget: usize) -> Result<PLMap> {
        if self.pieces.len().saturating_mul(inner.pieces.len()) > piece_budget {
            return Err(NdsError::Flatten(format!(
                "piece budget exceeded: {} x {} pieces",
                self.pieces.len(),
                inner.pieces.len()
            )));
        }
        // cut points: inner breakpoints plus preimages of outer breakpoints
        let mut cuts: Vec<Rat> = inner.breakpoints.clone();
        for i in 0..inner.pieces.len() {
            let piece = &inner.pieces[i];
            if piece.slope.is_zero() {
                continue;
            }
            let lo = &inner.breakpoints[i];
            let hi = &inner.breakpoints[i + 1];
            for beta in &self.breakpoints[1..self.breakpoints.len() - 1] {
                let x = (beta - &piece.intercept) / &piece.slope;
                if &x > lo && &x < hi {
                    cuts.push(x);
                }
            }
        }
        cuts.sort();
        cuts.dedup();

        let mut pieces = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let (u, v) = (&w[0], &w[1]);
            let inner_piece = &inner.pieces[inner.piece_index(u)];
            let composed = if inner_piece.slope.is_zero() {
                Affine::constant(self.eval(&inner_piece.intercept))
            } else if inner_piece.slope.is_positive() {
                // image [g(u), g(v)) contains no outer breakpoint strictly inside
                let y0 = inner_piece.apply(u);
                self.pieces[self.piece_index(&y0)].after(inner_piece)
            } else {
                // image (g(v), g(u)]: pick the piece covering the open interior
                let y_hi = inner_piece.apply(u);
                let y_lo = inner_piece.apply(v);
                let mid = (&y_lo + &y_hi) / Rat::from_integer(2.into());
                let piece = &self.pieces[self.piece_index(&mid)];
                let at_top = if y_hi.is_one() {
                    self.value_at_one.clone()
                } else {
                    self.pieces[self.piece_index(&y_hi)].apply(&y_hi)
                };
                if piece.apply(&y_hi) != at_top {
                    return Err(NdsError::Flatten(format!(
                        "decreasing piece hits a discontinuity of the outer map at {}",
                        fmt_rat(&y_hi)
                    )));
                }
                piece.after(inner_piece)
            };
            pieces.push(composed);
        }
        let value_at_one = self.eval(&inner.value_at_one);
        PLMap::with_value_at_one(cuts, pieces, value_at_one)
    }

    /// Exact image of an interval component, honoring the piece conventions.
    pub fn image_of(&self, comp: &IntervalComp) -> Vec<IntervalComp> {
        let mut out = Vec::new();
        if comp.contains(&Rat::one()) {
            out.push(IntervalComp::point(self.value_at_one.clone()));
        }
        // the half-open part of the component below 1
        let below = IntervalComp::try_new(
            comp.lo.clone(),
            comp.hi.clone().min(Rat::one()),
            comp.lo_open,
            comp.hi_open || comp.hi >= Rat::one(),
        );
        let below = match below {
            Some(c) => c,
            None => return canonicalize(out),
        };
        for i in 0..self.pieces.len() {
            let domain = IntervalComp::half_open(
                self.breakpoints[i].clone(),
                self.breakpoints[i + 1].clone(),
            );
            if let Some(d) = below.intersect(&domain) {
                out.push(d.affine_image(&self.pieces[i].slope, &self.pieces[i].intercept));
            }
        }
        canonicalize(out)
    }

    /// Exact preimage of an interval component.
    pub fn preimage_of(&self, comp: &IntervalComp) -> Vec<IntervalComp> {
        let mut out = Vec::new();
        if comp.contains(&self.value_at_one) {
            out.push(IntervalComp::point(Rat::one()));
        }
        for i in 0..self.pieces.len() {
            let domain = IntervalComp::half_open(
                self.breakpoints[i].clone(),
                self.breakpoints[i + 1].clone(),
            );
            let piece = &self.pieces[i];
            if piece.slope.is_zero() {
                if comp.contains(&piece.intercept) {
                    out.push(domain);
                }
            } else {
                let pre = comp.affine_preimage(&piece.slope, &piece.intercept);
                if let Some(d) = pre.intersect(&domain) {
                    out.push(d);
                }
            }
        }
        canonicalize(out)
    }

    /// Exact set of fixed points, as interval components.
    pub fn fixed_components(&self) -> Vec<IntervalComp> {
        let mut out = Vec::new();
        if self.value_at_one.is_one() {
            out.push(IntervalComp::point(Rat::one()));
        }
        for i in 0..self.pieces.len() {
            let domain = IntervalComp::half_open(
                self.breakpoints[i].clone(),
                self.breakpoints[i + 1].clone(),
            );
            let piece = &self.pieces[i];
            if piece.slope.is_one() {
                if piece.intercept.is_zero() {
                    out.push(domain);
                }
            } else {
                let x = &piece.intercept / (Rat::one() - &piece.slope);
                if domain.contains(&x) {
                    out.push(IntervalComp::point(x));
                }
            }
        }
        canonicalize(out)
    }

    pub fn image_of_unit(&self) -> Vec<IntervalComp> {
        self.image_of(&IntervalComp::closed(Rat::zero(), Rat::one()))
    }

    pub fn is_surjective(&self) -> bool {
        let img = self.image_of_unit();
        img.len() == 1 && img[0] == IntervalComp::closed(Rat::zero(), Rat::one())
    }

    pub fn is_injective(&self) -> bool {
        if self.pieces.iter().any(|p| p.slope.is_zero()) {
            return false;
        }
        let mut images: Vec<IntervalComp> = Vec::new();
        for i in 0..self.pieces.len() {
            let domain = IntervalComp::half_open(
                self.breakpoints[i].clone(),
                self.breakpoints[i + 1].clone(),
            );
            images.push(domain.affine_image(&self.pieces[i].slope, &self.pieces[i].intercept));
        }
        for (i, a) in images.iter().enumerate() {
            for b in images.iter().skip(i + 1) {
                if a.intersect(b).is_some() {
                    return false;
                }
            }
            if a.contains(&self.value_at_one) {
                return false;
            }
        }
        true
    }

    pub fn is_continuous(&self) -> bool {
        for i in 1..self.pieces.len() {
            let x = &self.breakpoints[i];
            if self.pieces[i - 1].apply(x) != self.pieces[i].apply(x) {
                return false;
            }
        }
        self.pieces.last().unwrap().apply(&Rat::one()) == self.value_at_one
    }

    pub fn is_feeble_open(&self) -> bool {
        self.pieces.iter().all(|p| !p.slope.is_zero())
    }

    pub fn is_isometry(&self) -> bool {
        self.is_identity() || self.is_flip()
    }

    fn is_flip(&self) -> bool {
        self.pieces.len() == 1
            && self.pieces[0] == Affine::new(-Rat::one(), Rat::one())
            && self.value_at_one.is_zero()
    }

    /// Exact inverse for representable bijections: all pieces increasing, or
    /// the reflection x -> 1 - x.
    pub fn invert(&self) -> Result<PLMap> {
        if !self.is_injective() {
            return Err(NdsError::NotInvertible("not injective".into()));
        }
        if !self.is_surjective() {
            return Err(NdsError::NotInvertible("not surjective".into()));
        }
        if self.is_flip() {
            return Ok(self.clone());
        }
        if self.pieces.iter().any(|p| p.slope.is_negative()) {
            return Err(NdsError::NotInvertible(
                "inverse of a map with decreasing pieces is not piecewise-representable".into(),
            ));
        }
        // all pieces strictly increasing: images tile [0,1) and f(1) = 1
        let mut segs: Vec<(Rat, Rat, Affine)> = Vec::with_capacity(self.pieces.len());
        for i in 0..self.pieces.len() {
            let piece = &self.pieces[i];
            let lo = piece.apply(&self.breakpoints[i]);
            let hi = piece.apply(&self.breakpoints[i + 1]);
            let inv = Affine::new(Rat::one() / &piece.slope, -&piece.intercept / &piece.slope);
            segs.push((lo, hi, inv));
        }
        segs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut bp = Vec::with_capacity(segs.len() + 1);
        let mut pieces = Vec::with_capacity(segs.len());
        bp.push(Rat::zero());
        for (i, (lo, hi, inv)) in segs.iter().enumerate() {
            if lo != &bp[i] {
                return Err(NdsError::NotInvertible(
                    "piece images do not tile [0,1)".into(),
                ));
            }
            bp.push(hi.clone());
            pieces.push(inv.clone());
        }
        if !self.value_at_one.is_one() {
            return Err(NdsError::NotInvertible(
                "inverse of the endpoint value is not representable".into(),
            ));
        }
        PLMap::with_value_at_one(bp, pieces, Rat::one())
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pl[")?;
        for i in 0..self.pieces.len() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "[{},{}): {}x+{}",
                fmt_rat(&self.breakpoints[i]),
                fmt_rat(&self.breakpoints[i + 1]),
                fmt_rat(&self.pieces[i].slope),
                fmt_rat(&self.pieces[i].intercept),
            )?;
        }
        write!(f, "; 1 -> {}]", fmt_rat(&self.value_at_one))
    }
}

/// Finite self-map given by a table of target indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    pub table: Vec<usize>,
}

impl FiniteMap {
    pub fn new(table: Vec<usize>) -> Result<FiniteMap> {
        let n = table.len();
        if n == 0 {
            return Err(NdsError::Parse("finite map table must be nonempty".into()));
        }
        if table.iter().any(|&t| t >= n) {
            return Err(NdsError::Parse(
                "finite map table entry out of range".into(),
            ));
        }
        Ok(FiniteMap { table })
    }

    pub fn identity(n: usize) -> FiniteMap {
        FiniteMap {
            table: (0..n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// self(other(x)).
    pub fn after(&self, other: &FiniteMap) -> Result<FiniteMap> {
        if self.size() != other.size() {
            return Err(NdsError::SpaceMismatch(
                "finite maps of different sizes".into(),
            ));
        }
        Ok(FiniteMap {
            table: other.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.size()];
        for &t in &self.table {
            if seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        self.is_injective() // finite sets: injective iff surjective
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn invert(&self) -> Result<FiniteMap> {
        if !self.is_injective() {
            return Err(NdsError::NotInvertible(
                "finite table is not injective".into(),
            ));
        }
        let mut inv = vec![0; self.size()];
        for (i, &t) in self.table.iter().enumerate() {
            inv[t] = i;
        }
        Ok(FiniteMap { table: inv })
    }
}

/// Exact description of one self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSpec {
    Pl(PLMap),
    /// x -> x + steps*alpha + offset (mod 1) with alpha = (sqrt5 - 1)/2.
    Rotation {
        steps: i64,
        offset: Rat,
    },
    Finite(FiniteMap),
    /// y(i) = x(i + power).
    Shift {
        power: i64,
    },
    Identity,
    /// Right-to-left composition: `list[0]` applied last.
    Composite(Vec<MapSpec>),
    Inverse(Box<MapSpec>),
}

/// Default piece budget for exact flattening of piecewise compositions.
pub const DEFAULT_PIECE_BUDGET: usize = 1 << 14;

/// Structural flags reported by `analyze`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapFlags {
    pub continuous: bool,
    pub surjective: bool,
    pub injective: bool,
    pub feeble_open: bool,
    pub isometry: bool,
}

impl MapSpec {
    pub fn rotation(steps: i64) -> MapSpec {
        MapSpec::Rotation {
            steps,
            offset: Rat::zero(),
        }
    }

    /// Space kind the map acts on; None when it fits any space.
    pub fn space_kind(&self) -> Result<Option<SpaceKind>> {
        match self {
            MapSpec::Pl(_) => Ok(Some(SpaceKind::Interval)),
            MapSpec::Rotation { .. } => Ok(Some(SpaceKind::Circle)),
            MapSpec::Finite(_) => Ok(Some(SpaceKind::Finite)),
            MapSpec::Shift { .. } => Ok(Some(SpaceKind::Shift)),
            MapSpec::Identity => Ok(None),
            MapSpec::Inverse(m) => m.space_kind(),
            MapSpec::Composite(list) => {
                let mut kind = None;
                for m in list {
                    match (kind, m.space_kind()?) {
                        (None, k) => kind = k,
                        (Some(_), None) => {}
                        (Some(a), Some(b)) if a == b => {}
                        (Some(a), Some(b)) => {
                            return Err(NdsError::HeterogeneousWindow(format!(
                                "{a} composed with {b}"
                            )))
                        }
                    }
                }
                Ok(kind)
            }
        }
    }

    /// Exact image point.
    pub fn eval(&self, x: &Point) -> Result<Point> {
        match self {
            MapSpec::Identity => Ok(x.clone()),
            MapSpec::Pl(m) => Ok(Point::Interval(m.eval(x.as_interval()?))),
            MapSpec::Rotation { steps, offset } => match x {
                Point::Circle { base, steps: m } => {
                    let b = base + offset;
                    Ok(Point::circle(b, m + steps))
                }
                other => Err(NdsError::SpaceMismatch(format!(
                    "rotation applied to {} point",
                    other.kind()
                ))),
            },
            MapSpec::Finite(t) => {
                let i = x.as_finite()?;
                if i >= t.size() {
                    return Err(NdsError::SpaceMismatch(format!(
                        "point index {i} outside table of size {}",
                        t.size()
                    )));
                }
                Ok(Point::Finite(t.apply(i)))
            }
            MapSpec::Shift { power } => Ok(Point::Seq(x.as_seq()?.shifted(*power))),
            MapSpec::Composite(list) => {
                let mut p = x.clone();
                for m in list.iter().rev() {
                    p = m.eval(&p)?;
                }
                Ok(p)
            }
            MapSpec::Inverse(m) => m.invert()?.eval(x),
        }
    }

    /// Reduce to a single non-composite map. Piecewise compositions flatten
    /// exactly within the piece budget.
    pub fn flatten(&self, piece_budget: usize) -> Result<MapSpec> {
        match self {
            MapSpec::Identity => Ok(MapSpec::Identity),
            MapSpec::Pl(m) => Ok(MapSpec::Pl(m.clone())),
            MapSpec::Rotation { steps, offset } => Ok(MapSpec::Rotation {
                steps: *steps,
                offset: offset - offset.floor(),
            }),
            MapSpec::Finite(t) => Ok(MapSpec::Finite(t.clone())),
            MapSpec::Shift { power } => Ok(MapSpec::Shift { power: *power }),
            MapSpec::Inverse(m) => m.flatten(piece_budget)?.invert(),
            MapSpec::Composite(list) => {
                if list.is_empty() {
                    return Err(NdsError::Parse("empty composite".into()));
                }
                self.space_kind()?; // reject heterogeneous windows early
                let mut acc = list.last().unwrap().flatten(piece_budget)?;
                for m in list.iter().rev().skip(1) {
                    acc = compose_flat(&m.flatten(piece_budget)?, &acc, piece_budget)?;
                }
                Ok(acc)
            }
        }
    }

    /// Pointwise identity test after flattening.
    pub fn is_identity_map(&self, piece_budget: usize) -> Result<bool> {
        Ok(match self.flatten(piece_budget)? {
            MapSpec::Identity => true,
            MapSpec::Pl(m) => m.is_identity(),
            MapSpec::Rotation { steps, offset } => steps == 0 && offset.is_zero(),
            MapSpec::Finite(t) => t.is_identity(),
            MapSpec::Shift { power } => power == 0,
            _ => false,
        })
    }

    /// Exact structural flags. Composites are flattened first.
    pub fn analyze(&self) -> Result<MapFlags> {
        let all = MapFlags {
            continuous: true,
            surjective: true,
            injective: true,
            feeble_open: true,
            isometry: true,
        };
        Ok(match self.flatten(DEFAULT_PIECE_BUDGET)? {
            MapSpec::Identity => all,
            MapSpec::Rotation { .. } => all,
            MapSpec::Shift { power } => MapFlags {
                isometry: power == 0,
                ..all
            },
            MapSpec::Finite(t) => {
                let bij = t.is_injective();
                MapFlags {
                    continuous: true,
                    surjective: bij,
                    injective: bij,
                    feeble_open: true,
                    // exact under the discrete metric; custom tables are
                    // checked by SpaceSpec-aware callers
                    isometry: bij,
                }
            }
            MapSpec::Pl(m) => MapFlags {
                continuous: m.is_continuous(),
                surjective: m.is_surjective(),
                injective: m.is_injective(),
                feeble_open: m.is_feeble_open(),
                isometry: m.is_isometry(),
            },
            _ => unreachable!("flatten returns a primitive map"),
        })
    }

    /// Exact inverse; the result is a primitive spec, so double inversion
    /// normalizes back to the flattened original.
    pub fn invert(&self) -> Result<MapSpec> {
        match self {
            MapSpec::Identity => Ok(MapSpec::Identity),
            MapSpec::Rotation { steps, offset } => Ok(MapSpec::Rotation {
                steps: -steps,
                offset: {
                    let o = -offset;
                    &o - o.floor()
                },
            }),
            MapSpec::Shift { power } => Ok(MapSpec::Shift { power: -power }),
            MapSpec::Finite(t) => Ok(MapSpec::Finite(t.invert()?)),
            MapSpec::Pl(m) => Ok(MapSpec::Pl(m.invert()?)),
            MapSpec::Inverse(m) => m.flatten(DEFAULT_PIECE_BUDGET),
            MapSpec::Composite(_) => self.flatten(DEFAULT_PIECE_BUDGET)?.invert(),
        }
    }
}

/// Flatten the composition outer âˆ˜ inner of two primitive specs.
pub fn compose_flat(outer: &MapSpec, inner: &MapSpec, piece_budget: usize) -> Result<MapSpec> {
    use MapSpec::*;
    Ok(match (outer, inner) {
        (Identity, m) | (m, Identity) => m.clone(),
        (Pl(f), Pl(g)) => Pl(f.compose(g, piece_budget)?),
        (
            Rotation {
                steps: s1,
                offset: o1,
            },
            Rotation {
                steps: s2,
                offset: o2,
            },
        ) => {
            let o = o1 + o2;
            Rotation {
                steps: s1 + s2,
                offset: &o - o.floor(),
            }
        }
        (Finite(f), Finite(g)) => Finite(f.after(g)?),
        (Shift { power: a }, Shift { power: b }) => Shift { power: a + b },
        (a, b) => {
            return Err(NdsError::HeterogeneousWindow(format!(
                "cannot compose {:?} kind with {:?} kind",
                a.space_kind()?,
                b.space_kind()?
            )))
        }
    })
}

/// Result of a commutation check.
#[derive(Debug, Clone)]
pub struct CommuteCheck {
    pub commutes: bool,
    pub exact: bool,
    pub witness: Option<Point>,
}

/// Do a and b commute? Exact for flattenable pairs; falls back to sampled
/// evidence at the given points otherwise.
pub fn commutes(a: &MapSpec, b: &MapSpec, samples: &[Point]) -> Result<CommuteCheck> {
    let ka = a.space_kind()?;
    let kb = b.space_kind()?;
    if let (Some(x), Some(y)) = (ka, kb) {
        if x != y {
            return Err(NdsError::SpaceMismatch(format!(
                "commutation of {x} map with {y} map"
            )));
        }
    }
    let ab = MapSpec::Composite(vec![a.clone(), b.clone()]).flatten(DEFAULT_PIECE_BUDGET);
    let ba = MapSpec::Composite(vec![b.clone(), a.clone()]).flatten(DEFAULT_PIECE_BUDGET);
    match (ab, ba) {
        (Ok(ab), Ok(ba)) => {
            if maps_equal(&ab, &ba)? {
                Ok(CommuteCheck {
                    commutes: true,
                    exact: true,
                    witness: None,
                })
            } else {
                Ok(CommuteCheck {
                    commutes: false,
                    exact: true,
                    witness: disagreement_witness(&ab, &ba)?,
                })
            }
        }
        _ => {
            // sampled evidence
            for p in samples {
                let lhs = a.eval(&b.eval(p)?)?;
                let rhs = b.eval(&a.eval(p)?)?;
                if lhs != rhs {
                    return Ok(CommuteCheck {
                        commutes: false,
                        exact: false,
                        witness: Some(p.clone()),
                    });
                }
            }
            Ok(CommuteCheck {
                commutes: true,
                exact: false,
                witness: None,
            })
        }
    }
}

/// Pointwise equality of flattened primitive specs.
pub fn maps_equal(a: &MapSpec, b: &MapSpec) -> Result<bool> {
    use MapSpec::*;
    Ok(match (a, b) {
        (Identity, Identity) => true,
        (Identity, other) | (other, Identity) => other.is_identity_map(DEFAULT_PIECE_BUDGET)?,
        (Pl(f), Pl(g)) => f == g, // both normalized by construction
        (
            Rotation {
                steps: s1,
                offset: o1,
            },
            Rotation {
                steps: s2,
                offset: o2,
            },
        ) => s1 == s2 && o1 == o2,
        (Finite(f), Finite(g)) => f == g,
        (Shift { power: p }, Shift { power: q }) => p == q,
        _ => false,
    })
}

/// A point where two flattened maps differ, preferring breakpoints.
fn disagreement_witness(a: &MapSpec, b: &MapSpec) -> Result<Option<Point>> {
    if let (MapSpec::Pl(f), MapSpec::Pl(g)) = (a, b) {
        let mut candidates: Vec<Rat> = f
            .breakpoints()
            .iter()
            .chain(g.breakpoints().iter())
            .cloned()
            .collect();
        candidates.sort();
        candidates.dedup();
        let mids: Vec<Rat> = candidates
            .windows(2)
            .map(|w| (&w[0] + &w[1]) / Rat::from_integer(2.into()))
            .collect();
        candidates.extend(mids);
        candidates.sort();
        for x in candidates {
            if f.eval(&x) != g.eval(&x) {
                return Ok(Some(Point::Interval(x)));
            }
        }
        return Ok(None);
    }
    if let (MapSpec::Finite(f), MapSpec::Finite(g)) = (a, b) {
        for i in 0..f.size() {
            if f.apply(i) != g.apply(i) {
                return Ok(Some(Point::Finite(i)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    pub fn half_map() -> PLMap {
        PLMap::single(rat(1, 2), rat(0, 1)).unwrap()
    }

    /// 2x on [0,1/2), constant 1 on [1/2,1].
    pub fn clamped_double() -> PLMap {
        PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::constant(rat(1, 1)),
            ],
        )
        .unwrap()
    }

    /// 2x on [0,1/2), 2x-1 on [1/2,1].
    pub fn doubling() -> PLMap {
        PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::new(rat(2, 1), rat(-1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_uses_right_piece_at_breakpoints() {
        let g = doubling();
        assert_eq!(g.eval(&rat(1, 2)), rat(0, 1)); // right piece: 2x-1
        assert_eq!(g.eval(&rat(1, 4)), rat(1, 2));
        assert_eq!(g.eval(&rat(1, 1)), rat(1, 1));
        let h = half_map();
        assert_eq!(h.eval(&rat(1, 2)), rat(1, 4));
    }

    #[test]
    fn clamped_double_undoes_half() {
        // composition is the identity on all of [0,1], including x = 1
        let comp = clamped_double().compose(&half_map(), 100).unwrap();
        assert!(comp.is_identity());
    }

    #[test]
    fn doubling_after_half_differs_at_one_only() {
        let comp = doubling().compose(&half_map(), 100).unwrap();
        assert!(!comp.is_identity());
        assert_eq!(comp.eval(&rat(1, 1)), rat(0, 1));
        assert_eq!(comp.eval(&rat(3, 4)), rat(3, 4));
        assert!(!comp.is_continuous());
    }

    #[test]
    fn composition_matches_sequential_evaluation() {
        let f = doubling();
        let g = clamped_double();
        let comp = f.compose(&g, 100).unwrap();
        for k in 0..=64u32 {
            let x = rat(k as i64, 64);
            assert_eq!(comp.eval(&x), f.eval(&g.eval(&x)), "at x = {k}/64");
        }
    }

    #[test]
    fn analyze_flags_match_structure() {
        let f1 = MapSpec::Pl(half_map()).analyze().unwrap();
        assert!(!f1.surjective);
        assert!(f1.feeble_open && f1.injective && f1.continuous);

        let f2 = MapSpec::Pl(clamped_double()).analyze().unwrap();
        assert!(f2.surjective);
        assert!(!f2.feeble_open); // constant piece
        assert!(!f2.injective);
        assert!(f2.continuous);

        let f3 = MapSpec::Pl(doubling()).analyze().unwrap();
        assert!(f3.surjective);
        assert!(f3.feeble_open);
        assert!(!f3.continuous); // jump at 1/2 under the right-open convention
        assert!(!f3.injective);

        let id = MapSpec::Identity.analyze().unwrap();
        assert!(id.continuous && id.surjective && id.injective && id.feeble_open && id.isometry);
    }

    #[test]
    fn rotations_compose_and_invert() {
        let w = MapSpec::Composite(vec![MapSpec::rotation(-1), MapSpec::rotation(1)]);
        assert!(w.is_identity_map(100).unwrap());
        let inv = MapSpec::rotation(1).invert().unwrap();
        assert_eq!(inv, MapSpec::rotation(-1));
        let p = Point::circle(rat(0, 1), 0);
        let q = MapSpec::rotation(1).eval(&p).unwrap();
        assert_eq!(q, Point::circle(rat(0, 1), 1));
        assert_eq!(inv.eval(&q).unwrap(), p);
    }

    #[test]
    fn finite_cycle_inverts_to_reverse_cycle() {
        let cycle = FiniteMap::new(vec![1, 2, 0]).unwrap();
        let inv = cycle.invert().unwrap();
        assert_eq!(inv.table, vec![2, 0, 1]);
        assert!(cycle.after(&inv).unwrap().is_identity());
        let spec = MapSpec::Finite(cycle);
        assert_eq!(spec.eval(&Point::Finite(1)).unwrap(), Point::Finite(2));
    }

    #[test]
    fn clamped_double_is_not_invertible() {
        let err = MapSpec::Pl(clamped_double()).invert().unwrap_err();
        assert!(matches!(err, NdsError::NotInvertible(_)));
    }

    #[test]
    fn double_inversion_normalizes() {
        let flip = PLMap::single(rat(-1, 1), rat(1, 1)).unwrap();
        assert!(flip.is_isometry());
        let twice = flip.invert().unwrap().invert().unwrap();
        assert_eq!(twice, flip);
    }

    #[test]
    fn commutation_verdicts() {
        // rotations always commute
        let c = commutes(&MapSpec::rotation(1), &MapSpec::rotation(-1), &[]).unwrap();
        assert!(c.commutes && c.exact);
        // the half map and the doubling map do not; witness at 1/2
        let c = commutes(&MapSpec::Pl(half_map()), &MapSpec::Pl(doubling()), &[]).unwrap();
        assert!(!c.commutes && c.exact);
        assert_eq!(c.witness, Some(Point::Interval(rat(1, 2))));
        // identity commutes with everything
        let c = commutes(&MapSpec::Pl(doubling()), &MapSpec::Identity, &[]).unwrap();
        assert!(c.commutes && c.exact);
    }

    #[test]
    fn image_of_interval_components() {
        let g = doubling();
        // [1/4, 1/2] -> [1/2, 1) from the left piece plus {0} from the point 1/2
        let img = g.image_of(&IntervalComp::closed(rat(1, 4), rat(1, 2)));
        assert_eq!(
            img,
            vec![
                IntervalComp::point(rat(0, 1)),
                IntervalComp::half_open(rat(1, 2), rat(1, 1)),
            ]
        );
        // full preimage of [0, 1/4] under the half map
        let pre = half_map().preimage_of(&IntervalComp::closed(rat(0, 1), rat(1, 4)));
        assert_eq!(pre, vec![IntervalComp::closed(rat(0, 1), rat(1, 2))]);
    }

    #[test]
    fn fixed_components_of_doubling() {
        let fixed = doubling().fixed_components();
        assert_eq!(
            fixed,
            vec![
                IntervalComp::point(rat(0, 1)),
                IntervalComp::point(rat(1, 1))
            ]
        );
    }
}
