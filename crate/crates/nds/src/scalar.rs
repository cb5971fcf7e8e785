//! Exact scalar arithmetic.
//!
//! Two number kinds appear in this crate: plain rationals, and elements of
//! the quadratic field Q(sqrt 5) which carry the symbolic rotation angle
//! `alpha = (sqrt 5 - 1) / 2`. Both support exact comparison, so every
//! distance and threshold test in the crate is decidable with no floating
//! drift. Rationals serialize as `"p/q"` strings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{NdsError, Result};

pub type Rat = BigRational;

/// Rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// 2^k for possibly negative k.
pub fn pow2(k: i32) -> Rat {
    let one = BigInt::one();
    if k >= 0 {
        Rat::from_integer(one << k as usize)
    } else {
        Rat::new(one.clone(), one << (-k) as usize)
    }
}

/// Parse `"p/q"`, `"p"`, or a leading-minus variant into a rational in lowest terms.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| NdsError::Parse(format!("bad integer {t:?} in rational {text:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(NdsError::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Render a rational as `"p/q"` (or `"p"` when integral).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element `a + b*sqrt(5)` of Q(sqrt 5) with exact sign tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quad {
    pub a: Rat,
    pub b: Rat,
}

impl Quad {
    pub fn from_rat(a: Rat) -> Self {
        Quad { a, b: Rat::zero() }
    }

    /// `base + m * alpha` with `alpha = (sqrt 5 - 1)/2`.
    pub fn with_alpha_steps(base: &Rat, m: i64) -> Self {
        let half_m = rat(m, 2);
        Quad {
            a: base - &half_m,
            b: half_m,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn neg(&self) -> Quad {
        Quad {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn add(&self, other: &Quad) -> Quad {
        Quad {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    pub fn sub(&self, other: &Quad) -> Quad {
        Quad {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
    }

    pub fn add_rat(&self, r: &Rat) -> Quad {
        Quad {
            a: &self.a + r,
            b: self.b.clone(),
        }
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Signs differ: compare a^2 with 5 b^2. a + b*sqrt5 > 0 with a>0,b<0
        // iff a^2 > 5 b^2; with a<0,b>0 iff a^2 < 5 b^2.
        let a2 = &self.a * &self.a;
        let b2_5 = &self.b * &self.b * rat_int(5);
        let cmp = a2.cmp(&b2_5);
        match (sa, cmp) {
            (1, Ordering::Greater) => 1,
            (1, Ordering::Less) => -1,
            (-1, Ordering::Greater) => -1,
            (-1, Ordering::Less) => 1,
            // a^2 == 5 b^2 is impossible for rational a,b != 0 (sqrt5 irrational)
            _ => unreachable!("sqrt(5) is irrational"),
        }
    }

    pub fn cmp_quad(&self, other: &Quad) -> Ordering {
        match self.sub(other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp_quad(&Quad::from_rat(r.clone()))
    }

    pub fn abs(&self) -> Quad {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact floor. Terminates because `a + b*sqrt5` is irrational for b != 0.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let mut digits: u32 = 24;
        loop {
            let (lo, hi) = sqrt5_bounds(digits);
            let val_lo = &self.a + &self.b * if self.b.is_positive() { &lo } else { &hi };
            let val_hi = &self.a + &self.b * if self.b.is_positive() { &hi } else { &lo };
            let f_lo = val_lo.floor().to_integer();
            let f_hi = val_hi.floor().to_integer();
            if f_lo == f_hi {
                return f_lo;
            }
            digits *= 2;
        }
    }

    /// Reduce into [0, 1).
    pub fn mod1(&self) -> Quad {
        let f = Rat::from_integer(self.floor());
        Quad {
            a: &self.a - f,
            b: self.b.clone(),
        }
    }

    /// Decimal approximation for display only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 5f64.sqrt()
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Rational bounds lo <= sqrt5 <= hi accurate to `digits` decimal digits.
fn sqrt5_bounds(digits: u32) -> (Rat, Rat) {
    let scale = BigUint::from(10u32).pow(digits);
    let scaled = BigUint::from(5u32) * &scale * &scale;
    let root = scaled.sqrt();
    let lo = Rat::new(BigInt::from(root.clone()), BigInt::from(scale.clone()));
    let hi = Rat::new(BigInt::from(root + BigUint::one()), BigInt::from(scale));
    (lo, hi)
}

/// Exact metric value: a rational, or an element of Q(sqrt 5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(Rat),
    Quad(Quad),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar::Rat(r)
    }

    pub fn as_quad(&self) -> Quad {
        match self {
            Scalar::Rat(r) => Quad::from_rat(r.clone()),
            Scalar::Quad(q) => q.clone(),
        }
    }

    /// Normalizes a Quad with zero irrational part back to a rational.
    pub fn from_quad(q: Quad) -> Scalar {
        if q.is_rational() {
            Scalar::Rat(q.a)
        } else {
            Scalar::Quad(q)
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            Scalar::Rat(v) => v.cmp(r),
            Scalar::Quad(q) => q.cmp_rat(r),
        }
    }

    pub fn cmp_scalar(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            _ => self.as_quad().cmp_quad(&other.as_quad()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(q) => q.a.is_zero() && q.b.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Quad(q) => q.to_f64(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Quad(q) => write!(f, "{}+{}*sqrt5", fmt_rat(&q.a), fmt_rat(&q.b)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_rat("3/4").unwrap();
        assert_eq!(r, rat(3, 4));
        assert_eq!(fmt_rat(&r), "3/4");
        assert_eq!(parse_rat("-2/6").unwrap(), rat(-1, 3));
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn quad_sign_is_exact() {
        // alpha = (sqrt5 - 1)/2 ~ 0.618
        let alpha = Quad::with_alpha_steps(&Rat::zero(), 1);
        assert_eq!(alpha.sign(), 1);
        assert_eq!(alpha.cmp_rat(&rat(618, 1000)), Ordering::Greater);
        assert_eq!(alpha.cmp_rat(&rat(619, 1000)), Ordering::Less);
        // 2 - sqrt5 < 0, 3 - sqrt5 > 0
        assert_eq!(
            Quad {
                a: rat_int(2),
                b: rat_int(-1)
            }
            .sign(),
            -1
        );
        assert_eq!(
            Quad {
                a: rat_int(3),
                b: rat_int(-1)
            }
            .sign(),
            1
        );
    }

    #[test]
    fn quad_floor_and_mod1() {
        // 10 * alpha = 6.18...
        let x = Quad::with_alpha_steps(&Rat::zero(), 10);
        assert_eq!(x.floor(), BigInt::from(6));
        let m = x.mod1();
        assert_eq!(m.sign(), 1);
        assert_eq!(m.cmp_rat(&Rat::one()), Ordering::Less);
        // negative steps
        let y = Quad::with_alpha_steps(&Rat::zero(), -1);
        assert_eq!(y.floor(), BigInt::from(-1));
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), rat_int(8));
        assert_eq!(pow2(-2), rat(1, 4));
        assert_eq!(pow2(0), rat_int(1));
    }
}
