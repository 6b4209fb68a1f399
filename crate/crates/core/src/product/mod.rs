//! Wallis-type products `Π_{k≥start} [Π(k+a_j) / Π(k+b_j)]^{E(k)}`.

mod eval;
mod moments;

use std::fmt;

pub use eval::{eval_product, eval_product_with, partial_log_sum, EvalOptions, EvalReport};
pub(crate) use eval::{log_sum_general, FactorSet};
pub(crate) use moments::moments_of;
pub use moments::{check_moments, MomentOrder, MomentReport};

use crate::arith::Rat;
use crate::error::{Error, Result};

/// Parameter lists, exponent polynomial and start index of one product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    a: Vec<Rat>,
    b: Vec<Rat>,
    exponent: Vec<Rat>,
    start: u32,
}

impl ProductSpec {
    /// Validates and builds a spec. `exponent` holds `c_0, c_1, …` of
    /// `E(k) = Σ c_m k^m`; trailing zero coefficients are dropped.
    pub fn new(a: Vec<Rat>, b: Vec<Rat>, exponent: Vec<Rat>, start: u32) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidSpec(format!(
                "parameter lists must be non-empty and equally long (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if start > 1 {
            return Err(Error::InvalidSpec(format!("start must be 0 or 1, got {start}")));
        }
        let floor = Rat::int(-(start as i64));
        for x in a.iter().chain(&b) {
            if *x <= floor {
                return Err(Error::InvalidSpec(format!(
                    "parameter {x} makes the factor k{} vanish or change sign for some k >= {start}",
                    signed(x)
                )));
            }
        }
        let exponent = trim(exponent);
        check_exponent(&exponent, start)?;
        Ok(ProductSpec { a, b, exponent, start })
    }

    /// Type-I product (`E = 1`).
    pub fn type1(a: Vec<Rat>, b: Vec<Rat>, start: u32) -> Result<Self> {
        Self::new(a, b, vec![Rat::one()], start)
    }

    /// Type-II product (`E = k`).
    pub fn type2(a: Vec<Rat>, b: Vec<Rat>, start: u32) -> Result<Self> {
        Self::new(a, b, vec![Rat::zero(), Rat::one()], start)
    }

    pub fn a(&self) -> &[Rat] {
        &self.a
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn exponent(&self) -> &[Rat] {
        &self.exponent
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> usize {
        self.exponent.len().saturating_sub(1)
    }

    /// `E(k)`, an integer for every valid spec.
    pub fn exponent_at(&self, k: i64) -> Rat {
        poly_eval(&self.exponent, &Rat::int(k))
    }

    /// Largest `|a_j|`, `|b_j|`.
    pub fn max_param(&self) -> Rat {
        self.a.iter().chain(&self.b).map(Rat::abs).max().unwrap_or_default()
    }

    /// `Π(k+a_j) / Π(k+b_j)`, exact.
    pub fn ratio_at(&self, k: i64) -> Rat {
        ratio_at(&self.a, &self.b, k)
    }

    /// Same spec with both lists sorted.
    pub fn sorted(&self) -> Self {
        let mut s = self.clone();
        s.a.sort();
        s.b.sort();
        s
    }

    /// Exponent equal to `binom_exponent(n)` for some `n`, if any.
    pub fn binomial_level(&self) -> Option<u32> {
        let n = self.degree() as u32 + 1;
        (binom_exponent(n) == self.exponent).then_some(n)
    }
}

impl fmt::Debug for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProductSpec {
    /// `prod_{k>=1} [(k)(k+3) / ((k+1)(k+2))]^(k)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = |xs: &[Rat]| xs.iter().map(|x| format!("(k{})", signed(x))).collect::<String>();
        write!(
            f,
            "prod_{{k>={}}} [{} / ({})]^({})",
            self.start,
            factors(&self.a),
            factors(&self.b),
            poly_string(&self.exponent)
        )
    }
}

fn signed(x: &Rat) -> String {
    if x.is_zero() {
        String::new()
    } else if x.is_negative() {
        format!("{x}")
    } else {
        format!("+{x}")
    }
}

/// `c0 + c1*k + c2*k^2`, zero terms omitted.
pub fn poly_string(c: &[Rat]) -> String {
    let mut parts = Vec::new();
    for (m, cm) in c.iter().enumerate() {
        if cm.is_zero() {
            continue;
        }
        let mono = match m {
            0 => String::new(),
            1 => "k".to_string(),
            _ => format!("k^{m}"),
        };
        let coef = if m > 0 && *cm == Rat::one() {
            String::new()
        } else if m > 0 {
            format!("{cm}*")
        } else {
            cm.to_string()
        };
        parts.push(format!("{coef}{mono}"));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

pub(crate) fn ratio_at(a: &[Rat], b: &[Rat], k: i64) -> Rat {
    let k = Rat::int(k);
    let mut num = Rat::one();
    for x in a {
        num *= &(&k + x);
    }
    let mut den = Rat::one();
    for x in b {
        den *= &(&k + x);
    }
    num / den
}

pub(crate) fn poly_eval(c: &[Rat], k: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, cm| acc * k + cm)
}

fn trim(mut c: Vec<Rat>) -> Vec<Rat> {
    while c.len() > 1 && c.last().is_some_and(Rat::is_zero) {
        c.pop();
    }
    if c.is_empty() {
        c.push(Rat::zero());
    }
    c
}

/// Integer-valued on `start..` (checked on `d+1` consecutive points, which
/// determines an integer-valued polynomial) and non-negative for every
/// `k ≥ start`: points up to the Cauchy root bound are checked one by one,
/// beyond it the sign is the leading coefficient's.
fn check_exponent(c: &[Rat], start: u32) -> Result<()> {
    let d = c.len() - 1;
    let s = start as i64;
    for k in s..=s + d as i64 + 1 {
        if !poly_eval(c, &Rat::int(k)).is_integer() {
            return Err(Error::InvalidSpec(format!(
                "exponent {} is not an integer at k = {k}",
                poly_string(c)
            )));
        }
    }
    let lead = &c[d];
    if lead.is_negative() {
        return Err(Error::InvalidSpec(format!(
            "exponent {} is eventually negative",
            poly_string(c)
        )));
    }
    if d > 0 {
        let bound = c[..d].iter().map(|x| (x / lead).abs()).max().unwrap_or_default() + Rat::one();
        let upto = match bound.ceil().to_i64() {
            Some(u) if u <= 1 << 20 => u,
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "exponent {} has coefficients too large to certify its sign",
                    poly_string(c)
                )))
            }
        };
        for k in s..=upto.max(s) {
            if poly_eval(c, &Rat::int(k)).is_negative() {
                return Err(Error::InvalidSpec(format!(
                    "exponent {} is negative at k = {k}",
                    poly_string(c)
                )));
            }
        }
    }
    Ok(())
}

/// Power sums must agree through this order: `deg E + 1`.
pub fn required_order(spec: &ProductSpec) -> usize {
    spec.degree() + 1
}

/// Coefficients of `k(k+1)…(k+n−2) / (n−1)!`, the exponent of a Type-n product.
pub fn binom_exponent(n: u32) -> Vec<Rat> {
    assert!(n >= 1, "binom_exponent needs n >= 1");
    let mut poly = vec![Rat::one()];
    for i in 0..(n as i64 - 1) {
        // multiply by (k + i) / (i + 1)
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (m, cm) in poly.iter().enumerate() {
            next[m + 1] += cm;
            next[m] += &(cm * &Rat::int(i));
        }
        let scale = Rat::new(1, i + 1);
        poly = next.into_iter().map(|x| x * &scale).collect();
    }
    trim(poly)
}

/// Concatenates the parameter lists of two products sharing exponent and start.
pub fn multiply_specs(s1: &ProductSpec, s2: &ProductSpec) -> Result<ProductSpec> {
    if s1.exponent != s2.exponent || s1.start != s2.start {
        return Err(Error::IncompatibleSpecs(format!(
            "exponents ({} vs {}) and starts ({} vs {}) must agree",
            poly_string(&s1.exponent),
            poly_string(&s2.exponent),
            s1.start,
            s2.start
        )));
    }
    let cat = |x: &[Rat], y: &[Rat]| x.iter().chain(y).cloned().collect::<Vec<_>>();
    ProductSpec::new(cat(&s1.a, &s2.a), cat(&s1.b, &s2.b), s1.exponent.clone(), s1.start)
}
