//! Metric spaces and open balls.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{NdsError, Result};
use crate::interval::IntervalComp;
use crate::point::{Point, SpaceKind};
use crate::region::{CircleRegion, Cylinder, RegionSet};
use crate::scalar::{pow2, Quad, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteMetric {
    /// d(i, j) = 1 for i != j.
    Discrete,
    /// Symmetric table of pairwise distances.
    Table(Vec<Vec<Rat>>),
}

/// One of the four supported metric spaces.
///
/// The circle uses the arc metric (diameter 1/2) and owns the fixed
/// irrational angle `alpha = (sqrt 5 - 1)/2` that rotation maps step by.
/// The shift space is the full two-sided binary shift with
/// `d(x, y) = 2^(-k)`, `k = min{ |i| : x_i != y_i }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    UnitInterval,
    Circle,
    Finite {
        size: usize,
        labels: Option<Vec<String>>,
        metric: FiniteMetric,
    },
    Shift,
}

impl SpaceSpec {
    pub fn finite_discrete(size: usize) -> SpaceSpec {
        SpaceSpec::Finite {
            size,
            labels: None,
            metric: FiniteMetric::Discrete,
        }
    }

    pub fn finite_labeled(labels: &[&str]) -> SpaceSpec {
        SpaceSpec::Finite {
            size: labels.len(),
            labels: Some(labels.iter().map(|s| s.to_string()).collect()),
            metric: FiniteMetric::Discrete,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            SpaceSpec::UnitInterval => SpaceKind::Interval,
            SpaceSpec::Circle => SpaceKind::Circle,
            SpaceSpec::Finite { .. } => SpaceKind::Finite,
            SpaceSpec::Shift => SpaceKind::Shift,
        }
    }

    pub fn diameter(&self) -> Rat {
        match self {
            SpaceSpec::UnitInterval => Rat::one(),
            SpaceSpec::Circle => Rat::new(BigInt::one(), BigInt::from(2)),
            SpaceSpec::Shift => Rat::one(),
            SpaceSpec::Finite { size, metric, .. } => match metric {
                FiniteMetric::Discrete => {
                    if *size > 1 {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                }
                FiniteMetric::Table(t) => {
                    let mut best = Rat::zero();
                    for row in t {
                        for v in row {
                            if v > &best {
                                best = v.clone();
                            }
                        }
                    }
                    best
                }
            },
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.kind() != self.kind() {
            return Err(NdsError::SpaceMismatch(format!(
                "{} point in {} space",
                p.kind(),
                self.kind()
            )));
        }
        if let (SpaceSpec::Finite { size, .. }, Point::Finite(i)) = (self, p) {
            if i >= size {
                return Err(NdsError::SpaceMismatch(format!(
                    "state {i} outside space of size {size}"
                )));
            }
        }
        Ok(())
    }

    /// Exact metric distance.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<Scalar> {
        self.check_point(x)?;
        self.check_point(y)?;
        match (self, x, y) {
            (SpaceSpec::UnitInterval, Point::Interval(a), Point::Interval(b)) => {
                let d = a - b;
                Ok(Scalar::Rat(d.abs()))
            }
            (
                SpaceSpec::Circle,
                Point::Circle { base: a, steps: m },
                Point::Circle { base: b, steps: n },
            ) => {
                let diff = Quad::with_alpha_steps(&(a - b), m - n).mod1();
                // arc distance: min(t, 1 - t)
                let half = Rat::new(BigInt::one(), BigInt::from(2));
                if diff.cmp_rat(&half) == std::cmp::Ordering::Greater {
                    Ok(Scalar::from_quad(Quad::from_rat(Rat::one()).sub(&diff)))
                } else {
                    Ok(Scalar::from_quad(diff))
                }
            }
            (SpaceSpec::Finite { metric, .. }, Point::Finite(i), Point::Finite(j)) => {
                match metric {
                    FiniteMetric::Discrete => {
                        Ok(Scalar::Rat(if i == j { Rat::zero() } else { Rat::one() }))
                    }
                    FiniteMetric::Table(t) => Ok(Scalar::Rat(t[*i][*j].clone())),
                }
            }
            (SpaceSpec::Shift, Point::Seq(a), Point::Seq(b)) => match a.first_difference(b) {
                None => Ok(Scalar::Rat(Rat::zero())),
                Some(k) => Ok(Scalar::Rat(pow2(-(k.unsigned_abs().min(1 << 20) as i32)))),
            },
            _ => unreachable!("check_point filters mismatches"),
        }
    }

    /// Open ball of radius eps as a region.
    ///
    /// For a circle point with a symbolic alpha component the ball is the
    /// rational-endpoint arc of radius eps/2 around a rational approximation
    /// within eps/2 of the point; it is contained in the true ball and
    /// contains the center.
    pub fn ball(&self, x: &Point, eps: &Rat) -> Result<RegionSet> {
        self.check_point(x)?;
        if !eps.is_positive() {
            return Err(NdsError::BadParameter(
                "ball radius must be positive".into(),
            ));
        }
        match (self, x) {
            (SpaceSpec::UnitInterval, Point::Interval(c)) => {
                let lo = c - eps;
                let hi = c + eps;
                let comp = IntervalComp::try_new(
                    lo.clone().max(Rat::zero()),
                    hi.clone().min(Rat::one()),
                    lo >= Rat::zero(),
                    hi <= Rat::one(),
                )
                .expect("ball around a valid point is nonempty");
                Ok(RegionSet::Intervals(vec![comp]))
            }
            (SpaceSpec::Circle, Point::Circle { base, steps }) => {
                let half = Rat::new(BigInt::one(), BigInt::from(2));
                let (center, radius) = if *steps == 0 {
                    (base.clone(), eps.clone())
                } else {
                    let two = Rat::from_integer(BigInt::from(2));
                    let tol = eps / &two;
                    let approx = approx_quad(&Quad::with_alpha_steps(base, *steps), &tol);
                    (approx, eps / two)
                };
                if radius > half {
                    return Ok(RegionSet::Arcs(CircleRegion::full()));
                }
                Ok(RegionSet::Arcs(CircleRegion::open_arc(
                    &center - &radius,
                    &center + &radius,
                )))
            }
            (SpaceSpec::Finite { size, metric, .. }, Point::Finite(i)) => {
                let mut set = std::collections::BTreeSet::new();
                for j in 0..*size {
                    let d = match metric {
                        FiniteMetric::Discrete => {
                            if *i == j {
                                Rat::zero()
                            } else {
                                Rat::one()
                            }
                        }
                        FiniteMetric::Table(t) => t[*i][j].clone(),
                    };
                    if &d < eps {
                        set.insert(j);
                    }
                }
                Ok(RegionSet::Indices(set))
            }
            (SpaceSpec::Shift, Point::Seq(s)) => {
                // d(x,y) < eps iff x and y agree on |i| <= t-1,
                // t = least j with 2^-j < eps
                let mut t: i64 = 0;
                while pow2(-(t as i32)) >= *eps {
                    t += 1;
                    if t > 4096 {
                        return Err(NdsError::BadParameter(
                            "ball radius too small for cylinder representation".into(),
                        ));
                    }
                }
                let mut cyl = Cylinder::new();
                for i in -(t - 1)..t {
                    cyl.fix(i, s.at(i));
                }
                Ok(RegionSet::Cylinders(vec![cyl]))
            }
            _ => unreachable!("check_point filters mismatches"),
        }
    }

    pub fn label_of(&self, index: usize) -> String {
        if let SpaceSpec::Finite {
            labels: Some(ls), ..
        } = self
        {
            if index < ls.len() {
                return ls[index].clone();
            }
        }
        index.to_string()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        if let SpaceSpec::Finite {
            labels: Some(ls), ..
        } = self
        {
            if let Some(i) = ls.iter().position(|l| l == label) {
                return Some(i);
            }
        }
        None
    }
}

/// Rational r with |q - r| < tol, via decimal truncation of the exact value.
fn approx_quad(q: &Quad, tol: &Rat) -> Rat {
    let mut digits: u32 = 1;
    let ten = Rat::from_integer(BigInt::from(10));
    let mut scale = ten.clone();
    while &(Rat::one() / &scale) >= tol {
        digits += 1;
        scale *= &ten;
        if digits > 10_000 {
            break;
        }
    }
    let scaled = Quad {
        a: &q.a * &scale,
        b: &q.b * &scale,
    };
    Rat::new(scaled.floor(), scale.to_integer())
}
