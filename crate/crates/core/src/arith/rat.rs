use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Exact rational number, always normalized (positive denominator, lowest terms).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(Rational);

impl Rat {
    /// Builds `num/den`.
    ///
    /// Panics if `den` is zero; use [`Rat::try_new`] for untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    pub fn try_new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        Ok(Rat(Rational::from((num, den))))
    }

    pub fn from_integers(num: Integer, den: Integer) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rat(Rational::from((num, den))))
    }

    pub fn int(n: i64) -> Self {
        Rat(Rational::from(n))
    }

    pub fn zero() -> Self {
        Rat(Rational::new())
    }

    pub fn one() -> Self {
        Rat::int(1)
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn is_positive(&self) -> bool {
        *self.0.numer() > 0
    }

    pub fn is_negative(&self) -> bool {
        *self.0.numer() < 0
    }

    pub fn abs(&self) -> Rat {
        Rat(Rational::from(self.0.abs_ref()))
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        Ok(Rat(Rational::from(self.0.recip_ref())))
    }

    pub fn floor(&self) -> Integer {
        Integer::from(self.0.floor_ref())
    }

    pub fn ceil(&self) -> Integer {
        Integer::from(self.0.ceil_ref())
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_floor(&self) -> Rat {
        self - &Rat::from(self.floor())
    }

    /// Integer value if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn pow(&self, exp: u32) -> Rat {
        Rat(Rational::from(rug::ops::Pow::pow(&self.0, exp)))
    }

    /// Integer power, negative exponents allowed for non-zero bases.
    pub fn powi(&self, exp: i64) -> Result<Rat> {
        let magnitude = u32::try_from(exp.unsigned_abs()).map_err(|_| Error::domain("exponent too large"))?;
        let p = self.pow(magnitude);
        if exp < 0 {
            p.recip()
        } else {
            Ok(p)
        }
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(Rat(Rational::from(&self.0 / &rhs.0)))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::int(n.into())
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Self {
        Rat(Rational::from(n))
    }
}

impl From<Integer> for Rat {
    fn from(n: Integer) -> Self {
        Rat(Rational::from(n))
    }
}

impl From<Rational> for Rat {
    fn from(r: Rational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `n`, `-n`, `p/q` and `-p/q` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let valid = |t: &str, signed: bool| {
            let digits = if signed {
                t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t)
            } else {
                t
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(bad());
        }
        let num: Integer = num.trim_start_matches('+').parse().map_err(|_| bad())?;
        let den: Integer = den.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rat(Rational::from((num, den))))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(Rational::from(&self.0 $op &rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(Rational::from(&self.0 $op &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    /// Panics on division by zero, like integer division.
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(Rational::from(-&self.0))
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Exact power sum `Σ x^j` over `xs`.
pub fn rat_pow_sum(xs: &[Rat], j: u32) -> Rat {
    xs.iter().map(|x| x.pow(j)).sum()
}
