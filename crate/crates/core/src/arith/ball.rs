//! Midpoint–radius real arithmetic.
//!
//! A [`Ball`] is a pair `(mid, rad)` standing for the closed interval
//! `[mid - rad, mid + rad]`. The midpoint is an MPFR float rounded to nearest at
//! the ball's precision; the radius is a short float that is only ever rounded
//! up. Every operation returns a ball that contains the exact result for every
//! choice of points in the input intervals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::Float;

use super::rat::Rat;
use crate::error::{Error, Result};

/// Precision of the radius.
pub const RAD_PREC: u32 = 30;

macro_rules! up {
    ($e:expr) => {
        Float::with_val_round(RAD_PREC, $e, Round::Up).0
    };
}

macro_rules! down {
    ($e:expr) => {
        Float::with_val_round(RAD_PREC, $e, Round::Down).0
    };
}

#[derive(Clone)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

/// Bound on the error committed when `mid` was rounded to nearest.
fn rounding_err(mid: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return Float::new(RAD_PREC);
    }
    let mut e = up!(&*mid.as_abs());
    e >>= mid.prec();
    e
}

impl Ball {
    pub fn new(mid: Float, rad: Float) -> Self {
        debug_assert!(rad.is_finite() && rad >= 0);
        let rad = up!(&rad);
        Ball { mid, rad }
    }

    pub fn zero(prec: u32) -> Self {
        Ball {
            mid: Float::new(prec),
            rad: Float::new(RAD_PREC),
        }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, n, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_rat(x: &Rat, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, x.as_rational(), Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    /// Ball around an `f64`. The value is taken as exact.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, x, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn pi(prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn ln2(prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, Constant::Log2, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn euler_gamma(prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, Constant::Euler, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Same value re-rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = up!(&self.rad + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    /// Widen the radius by `err` (an absolute amount).
    pub fn add_error(&self, err: &Float) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: up!(&self.rad + err),
        }
    }

    pub fn add_error_f64(&self, err: f64) -> Ball {
        self.add_error(&up!(err))
    }

    /// Lower endpoint, rounded down at the midpoint precision.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec() + 8, &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up at the midpoint precision.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec() + 8, &self.mid + &self.rad, Round::Up).0
    }

    /// Strictly positive everywhere on the interval.
    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        let neg = Float::with_val(self.prec(), -&self.mid);
        neg > self.rad
    }

    pub fn excludes_zero(&self) -> bool {
        self.is_positive() || self.is_negative()
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rat(&self, x: &Rat) -> bool {
        self.lower() <= *x.as_rational() && self.upper() >= *x.as_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.excludes_zero()
    }

    pub fn contains_ball(&self, inner: &Ball) -> bool {
        self.lower() <= inner.lower() && inner.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Float {
        up!(&up!(&*self.mid.as_abs()) + &self.rad)
    }

    /// Lower bound on `|x|` over the interval (zero if the ball contains zero).
    pub fn mag_lower(&self) -> Float {
        let m = down!(&down!(&*self.mid.as_abs()) - &self.rad);
        if m < 0 {
            Float::new(RAD_PREC)
        } else {
            m
        }
    }

    /// Upper bound on `|a - b|` for `a` in self and `b` in other.
    pub fn dist_upper(&self, other: &Ball) -> Float {
        let p = self.prec().max(other.prec()) + 8;
        let hi = Float::with_val_round(p, &self.mid - &other.mid, Round::Up).0;
        let lo = Float::with_val_round(p, &self.mid - &other.mid, Round::Down).0;
        let d = up!(&*hi.as_abs()).max(&up!(&*lo.as_abs()));
        up!(&up!(&d + &self.rad) + &other.rad)
    }

    fn binop_prec(&self, other: &Ball) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let p = self.binop_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid + &other.mid, Round::Nearest);
        let rad = up!(&up!(&self.rad + &other.rad) + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        let p = self.binop_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid - &other.mid, Round::Nearest);
        let rad = up!(&up!(&self.rad + &other.rad) + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let p = self.binop_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid * &other.mid, Round::Nearest);
        let am = up!(&*self.mid.as_abs());
        let bm = up!(&*other.mid.as_abs());
        let mut rad = up!(&am * &other.rad);
        rad = up!(&rad + &up!(&bm * &self.rad));
        rad = up!(&rad + &up!(&self.rad * &other.rad));
        rad = up!(&rad + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn div_ball(&self, other: &Ball) -> Result<Ball> {
        let denom_low = other.mag_lower();
        if denom_low.is_zero() {
            return Err(Error::domain("division by an interval containing zero"));
        }
        let p = self.binop_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid / &other.mid, Round::Nearest);
        let am = up!(&*self.mid.as_abs());
        let bm_up = up!(&*other.mid.as_abs());
        let bm_down = down!(&*other.mid.as_abs());
        let num = up!(&up!(&am * &other.rad) + &up!(&bm_up * &self.rad));
        let den = down!(&bm_down * &denom_low);
        let rad = up!(&up!(&num / &den) + &rounding_err(&mid, ord));
        Ok(Ball { mid, rad })
    }

    pub fn neg_ball(&self) -> Ball {
        Ball {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Ball {
        if self.mid < 0 {
            self.neg_ball()
        } else {
            self.clone()
        }
    }

    pub fn add_rat(&self, x: &Rat) -> Ball {
        self.add_ball(&Ball::from_rat(x, self.prec()))
    }

    pub fn mul_rat(&self, x: &Rat) -> Ball {
        self.mul_ball(&Ball::from_rat(x, self.prec()))
    }

    pub fn mul_i64(&self, n: i64) -> Ball {
        self.mul_ball(&Ball::from_i64(n, self.prec()))
    }

    pub fn div_i64(&self, n: i64) -> Result<Ball> {
        self.div_ball(&Ball::from_i64(n, self.prec()))
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::from_i64(1, self.prec()).div_ball(self)
    }

    pub fn square(&self) -> Ball {
        self.mul_ball(self)
    }

    pub fn exp(&self) -> Ball {
        let p = self.prec();
        let mut mid = self.mid.clone();
        let ord = mid.exp_round(Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            // |e^x - e^m| <= e^m (e^r - 1)
            let mut em = up!(&self.mid);
            em.exp_round(Round::Up);
            let mut er = self.rad.clone();
            er.exp_m1_round(Round::Up);
            rad = up!(&rad + &up!(&em * &er));
        }
        debug_assert_eq!(mid.prec(), p);
        Ball { mid, rad }
    }

    pub fn ln(&self) -> Result<Ball> {
        if !self.is_positive() {
            return Err(Error::domain("logarithm of an interval not strictly positive"));
        }
        let mut mid = self.mid.clone();
        let ord = mid.ln_round(Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            // |ln x - ln m| <= r / (m - r)
            let low = down!(&down!(&self.mid) - &self.rad);
            rad = up!(&rad + &up!(&self.rad / &low));
        }
        Ok(Ball { mid, rad })
    }

    /// `ln(1 + x)`, accurate relative to `x` for small arguments.
    pub fn ln_1p(&self) -> Result<Ball> {
        let one = Ball::from_i64(1, self.prec());
        if !self.add_ball(&one).is_positive() {
            return Err(Error::domain("ln_1p of an interval reaching -1"));
        }
        let mut mid = self.mid.clone();
        let ord = mid.ln_1p_round(Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            // |ln(1+x) - ln(1+m)| <= r / (1 + m - r)
            let low = down!(&down!(&down!(&self.mid) + 1u32) - &self.rad);
            rad = up!(&rad + &up!(&self.rad / &low));
        }
        Ok(Ball { mid, rad })
    }

    pub fn sqrt(&self) -> Result<Ball> {
        if self.lower() < 0 {
            return Err(Error::domain("square root of an interval reaching below zero"));
        }
        let mut mid = self.mid.clone();
        let ord = mid.sqrt_round(Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            // |sqrt x - sqrt m| <= r / sqrt m
            let mut sm = down!(&self.mid);
            sm.sqrt_round(Round::Down);
            if sm.is_zero() {
                let mut sr = self.rad.clone();
                sr.sqrt_round(Round::Up);
                rad = up!(&rad + &sr);
            } else {
                rad = up!(&rad + &up!(&self.rad / &sm));
            }
        }
        Ok(Ball { mid, rad })
    }

    pub fn sin(&self) -> Ball {
        let mut mid = self.mid.clone();
        let ord = mid.sin_round(Round::Nearest);
        let rad = up!(&self.rad + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn cos(&self) -> Ball {
        let mut mid = self.mid.clone();
        let ord = mid.cos_round(Round::Nearest);
        let rad = up!(&self.rad + &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn powi(&self, n: i64) -> Result<Ball> {
        let mut acc = Ball::from_i64(1, self.prec());
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// `x^q` for rational `q`. Non-integer exponents need a positive base.
    pub fn pow_rat(&self, q: &Rat) -> Result<Ball> {
        if let Some(n) = q.to_i64() {
            return self.powi(n);
        }
        if *q == Rat::new(1, 2) {
            return self.sqrt();
        }
        if !self.is_positive() {
            return Err(Error::domain("non-integer power of an interval not strictly positive"));
        }
        Ok(self.ln()?.mul_rat(q).exp())
    }

    /// Sum of a sequence of balls, accumulated left to right.
    pub fn sum<'a, I: IntoIterator<Item = &'a Ball>>(prec: u32, items: I) -> Ball {
        items.into_iter().fold(Ball::zero(prec), |acc, x| acc.add_ball(x))
    }
}

macro_rules! ball_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$impl_fn(&rhs)
            }
        }
        impl $trait<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$impl_fn(&rhs)
            }
        }
    };
}

ball_binop!(Add, add, add_ball);
ball_binop!(Sub, sub, sub_ball);
ball_binop!(Mul, mul, mul_ball);

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

/// Splits `x` into `(negative, digits, exp)` with `x = 0.digits * 10^exp`.
fn decimal_parts(x: &Float, digits: usize, round: Round) -> (bool, String, i32) {
    let (neg, s, exp) = x.to_sign_string_exp_round(10, Some(digits), round);
    (neg, s, exp.unwrap_or(0))
}

fn format_positional(neg: bool, digits: &str, exp: i32) -> String {
    let sign = if neg { "-" } else { "" };
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if (-5..=21).contains(&exp) {
        if exp <= 0 {
            format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
        } else {
            let e = exp as usize;
            if digits.len() <= e {
                format!("{sign}{digits}{}", "0".repeat(e - digits.len()))
            } else {
                format!("{sign}{}.{}", &digits[..e], &digits[e..])
            }
        }
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{}", exp - 1)
        } else {
            format!("{sign}{head}.{tail}e{}", exp - 1)
        }
    }
}

/// Radius with two significant digits in scientific notation, rounded up.
pub(crate) fn format_rad(rad: &Float) -> String {
    if rad.is_zero() {
        return "0".to_string();
    }
    let (_, d, exp) = decimal_parts(rad, 2, Round::Up);
    let (head, tail) = d.split_at(1);
    format!("{head}.{tail}e{}", exp - 1)
}

impl Ball {
    /// Number of significant decimal digits of the midpoint that the radius
    /// certifies, at least one.
    pub fn certified_digits(&self) -> usize {
        let max_digits = (self.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize + 1;
        if self.mid.is_zero() {
            return 1;
        }
        if self.rad.is_zero() {
            return max_digits;
        }
        let (_, _, em) = decimal_parts(&self.mid, 1, Round::Down);
        let (_, _, er) = decimal_parts(&self.rad, 1, Round::Up);
        let d = em - er;
        d.clamp(1, max_digits as i32) as usize
    }

    /// Midpoint printed to [`Ball::certified_digits`] significant digits.
    pub fn mid_string(&self) -> String {
        if self.mid.is_zero() {
            return "0".to_string();
        }
        let (neg, d, e) = decimal_parts(&self.mid, self.certified_digits(), Round::Nearest);
        format_positional(neg, &d, e)
    }

    pub fn rad_string(&self) -> String {
        format_rad(&self.rad)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.mid_string(), self.rad_string())
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ball({} ± {})",
            self.mid.to_string_radix(10, Some(30)),
            self.rad_string()
        )
    }
}
