//! Points of the four supported space kinds.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{NdsError, Result};
use crate::scalar::{fmt_rat, Rat};
use crate::seq::SeqPoint;

/// Space kinds a map or point can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    Interval,
    Circle,
    Finite,
    Shift,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SpaceKind::Interval => "interval",
            SpaceKind::Circle => "circle",
            SpaceKind::Finite => "finite",
            SpaceKind::Shift => "shift",
        };
        write!(f, "{name}")
    }
}

/// An exact point of one of the supported spaces.
///
/// Circle points are `base + steps * alpha (mod 1)` with rational base in
/// [0, 1) and `alpha = (sqrt 5 - 1)/2`; equality is decidable componentwise
/// because alpha is irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Interval(Rat),
    Circle { base: Rat, steps: i64 },
    Finite(usize),
    Seq(SeqPoint),
}

impl Point {
    pub fn interval(x: Rat) -> Result<Point> {
        if x < Rat::zero() || x > Rat::one() {
            return Err(NdsError::Parse(format!(
                "interval point {} outside [0,1]",
                fmt_rat(&x)
            )));
        }
        Ok(Point::Interval(x))
    }

    pub fn circle(base: Rat, steps: i64) -> Point {
        let folded = &base - base.floor();
        Point::Circle {
            base: folded,
            steps,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Point::Interval(_) => SpaceKind::Interval,
            Point::Circle { .. } => SpaceKind::Circle,
            Point::Finite(_) => SpaceKind::Finite,
            Point::Seq(_) => SpaceKind::Shift,
        }
    }

    pub fn as_interval(&self) -> Result<&Rat> {
        match self {
            Point::Interval(x) => Ok(x),
            other => Err(NdsError::SpaceMismatch(format!(
                "expected interval point, got {} point",
                other.kind()
            ))),
        }
    }

    pub fn as_finite(&self) -> Result<usize> {
        match self {
            Point::Finite(i) => Ok(*i),
            other => Err(NdsError::SpaceMismatch(format!(
                "expected finite point, got {} point",
                other.kind()
            ))),
        }
    }

    pub fn as_seq(&self) -> Result<&SeqPoint> {
        match self {
            Point::Seq(s) => Ok(s),
            other => Err(NdsError::SpaceMismatch(format!(
                "expected shift point, got {} point",
                other.kind()
            ))),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Interval(x) => write!(f, "{}", fmt_rat(x)),
            Point::Circle { base, steps } => {
                if *steps == 0 {
                    write!(f, "{}", fmt_rat(base))
                } else {
                    write!(f, "{}+{}a", fmt_rat(base), steps)
                }
            }
            Point::Finite(i) => write!(f, "{i}"),
            Point::Seq(s) => write!(f, "{s}"),
        }
    }
}
