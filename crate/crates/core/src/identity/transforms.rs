//! Structural transforms between products, and product generators.

use std::collections::BTreeMap;
use std::fmt;

use super::form::ClosedForm;
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::{Error, Result};
use crate::product::{check_moments, log_sum_general, EvalOptions, FactorSet, ProductSpec};
use crate::special::lngamma;

/// Removes elements common to both lists (as multisets). Falls back to the
/// identity `[1] / [1]` when nothing is left.
pub fn cancel_common(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut a: Vec<Rat> = a.to_vec();
    let mut b: Vec<Rat> = b.to_vec();
    a.sort();
    b.sort();
    let (mut i, mut j) = (0, 0);
    let (mut ka, mut kb) = (Vec::new(), Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                ka.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                kb.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    ka.extend_from_slice(&a[i..]);
    kb.extend_from_slice(&b[j..]);
    if ka.is_empty() {
        return (vec![Rat::one()], vec![Rat::one()]);
    }
    (ka, kb)
}

/// Same product with common factors removed.
pub fn reduced(spec: &ProductSpec) -> Result<ProductSpec> {
    let (a, b) = cancel_common(spec.a(), spec.b());
    ProductSpec::new(a, b, spec.exponent().to_vec(), spec.start())
}

/// Type-I product from `k = 0` rewritten to start at `k = 1`.
fn start_at_one(spec: &ProductSpec) -> Result<ProductSpec> {
    if spec.start() == 1 {
        return Ok(spec.clone());
    }
    let shift = |v: &[Rat]| v.iter().map(|x| x - &Rat::one()).collect::<Vec<_>>();
    ProductSpec::new(shift(spec.a()), shift(spec.b()), spec.exponent().to_vec(), 1)
}

fn is_type1(spec: &ProductSpec) -> bool {
    spec.exponent() == [Rat::one()]
}

fn is_type2(spec: &ProductSpec) -> bool {
    spec.exponent() == [Rat::zero(), Rat::one()]
}

fn require_order(spec: &ProductSpec, order: usize) -> Result<()> {
    if let Some(bad) = check_moments(spec, order).first_failure() {
        return Err(Error::ConstraintViolation(format!(
            "power sums must agree through order {order}; {bad}"
        )));
    }
    Ok(())
}

/// Type-II product with the same value as a Type-I product: with
/// `g(k) = Π(k+a)/Π(k+b)`, `Π_{k≥1} [g(k)/g(k+1)]^k = Π_{k≥1} g(k)`.
pub fn analogue_type2(spec: &ProductSpec) -> Result<ProductSpec> {
    if !is_type1(spec) {
        return Err(Error::InvalidTransform(
            "the analogue finder takes a Type-I product (E = 1)".into(),
        ));
    }
    require_order(spec, 1)?;
    let s = start_at_one(spec)?;
    let plus1 = |v: &[Rat]| v.iter().map(|x| x + &Rat::one()).collect::<Vec<_>>();
    let a: Vec<Rat> = s.a().iter().cloned().chain(plus1(s.b())).collect();
    let b: Vec<Rat> = plus1(s.a()).into_iter().chain(s.b().iter().cloned()).collect();
    let (a, b) = cancel_common(&a, &b);
    let out = ProductSpec::type2(a, b, 1)?;
    require_order(&out, 2)?;
    Ok(out)
}

/// `Π Γ(r + num_j) / Π Γ(r + den_j)`, a ratio of Gamma values in the
/// free variable `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTemplate {
    pub num: Vec<Rat>,
    pub den: Vec<Rat>,
}

impl GammaTemplate {
    /// `ln` of the template at `r`.
    pub fn ln_at(&self, r: i64, ctx: &PrecCtx) -> Result<Ball> {
        let w = ctx.prec_bits();
        let mut acc = Ball::zero(w);
        let shift = Rat::int(r);
        for x in &self.num {
            acc = acc.add_ball(&lngamma(&Ball::from_rat(&(x + &shift), w), ctx)?);
        }
        for x in &self.den {
            acc = acc.sub_ball(&lngamma(&Ball::from_rat(&(x + &shift), w), ctx)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for GammaTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[Rat]| -> Vec<String> {
            let mut counts: BTreeMap<&Rat, u32> = BTreeMap::new();
            for x in v {
                *counts.entry(x).or_default() += 1;
            }
            counts
                .into_iter()
                .map(|(x, c)| {
                    let g = if x.is_zero() {
                        "Gamma(r)".to_string()
                    } else if x.is_negative() {
                        format!("Gamma(r-{})", x.abs())
                    } else {
                        format!("Gamma(r+{x})")
                    };
                    if c == 1 {
                        g
                    } else {
                        format!("{g}^{c}")
                    }
                })
                .collect()
        };
        let num = side(&self.num);
        let den = side(&self.den);
        let n = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => f.write_str(&n),
            1 => write!(f, "{n}/{}", den[0]),
            _ => write!(f, "{n} / ({})", den.join("*")),
        }
    }
}

/// Result of splitting a Type-II product into `Π_{r≥0} R(r)`.
#[derive(Debug, Clone)]
pub struct DoubleProduct {
    source: ProductSpec,
    /// `R(r) = Π_{k≥1} ratio(k+r)`, evaluated by the Type-I theorem.
    pub template: GammaTemplate,
    /// Every Gamma value pairs with one at an integer distance.
    pub reducible: bool,
    /// When reducible, the Type-I product `Π_{r≥0} R(r)`.
    pub reduced: Option<ProductSpec>,
}

/// `Π_{k≥1} ratio(k)^k = Π_{r≥0} Π_{k≥1} ratio(k+r)`. The inner product is
/// `Π Γ(r+1+b) / Π Γ(r+1+a)`; when the arguments pair off at integer
/// distances, `R(r)` is a rational function and the outer product is
/// Type-I.
pub fn double_product_reduce(spec: &ProductSpec) -> Result<DoubleProduct> {
    if !is_type2(spec) {
        return Err(Error::InvalidTransform(
            "the double product takes a Type-II product (E = k)".into(),
        ));
    }
    require_order(spec, 2)?;
    // E(0) = 0, so start 0 and start 1 give the same product
    let plus1 = |v: &[Rat]| v.iter().map(|x| x + &Rat::one()).collect::<Vec<_>>();
    let template = GammaTemplate {
        num: plus1(spec.b()),
        den: plus1(spec.a()),
    };
    let reduced = pair_off(&template)?;
    Ok(DoubleProduct {
        source: spec.clone(),
        reducible: reduced.is_some(),
        reduced,
        template,
    })
}

/// Groups template arguments by fractional part; each group must hold as
/// many numerator as denominator entries. Sorted entries are paired and
/// `Γ(r+x)/Γ(r+y)` with `x − y = m` becomes `Π_{i<m} (r+y+i)` (or its
/// reciprocal).
fn pair_off(t: &GammaTemplate) -> Result<Option<ProductSpec>> {
    let mut groups: BTreeMap<Rat, (Vec<Rat>, Vec<Rat>)> = BTreeMap::new();
    for x in &t.num {
        groups.entry(x.fract_floor()).or_default().0.push(x.clone());
    }
    for x in &t.den {
        groups.entry(x.fract_floor()).or_default().1.push(x.clone());
    }
    let mut lin_num = Vec::new();
    let mut lin_den = Vec::new();
    for (_, (mut n, mut d)) in groups {
        if n.len() != d.len() {
            return Ok(None);
        }
        n.sort();
        d.sort();
        for (x, y) in n.iter().zip(&d) {
            let (lo, hi, out) = if x > y {
                (y, x, &mut lin_num)
            } else {
                (x, y, &mut lin_den)
            };
            let mut v = lo.clone();
            while v < *hi {
                out.push(v.clone());
                v += &Rat::one();
            }
        }
    }
    if lin_num.len() != lin_den.len() {
        return Err(Error::ConstraintViolation(
            "paired factors do not balance; the order-1 condition fails".into(),
        ));
    }
    let (a, b) = if lin_num.is_empty() {
        (vec![Rat::one()], vec![Rat::one()])
    } else {
        cancel_common(&lin_num, &lin_den)
    };
    let spec = ProductSpec::type1(a, b, 0)?;
    require_order(&spec, 1)?;
    Ok(Some(spec))
}

impl DoubleProduct {
    /// `ln` of the original product computed as `Σ_{r≤R} ln R(r)` plus the
    /// certified remainder `Σ_{m≥R+2} (m−R−1) ln ratio(m)`.
    pub fn eval_residual_log(&self, r_max: u32, ctx: &PrecCtx) -> Result<Ball> {
        let w = ctx.prec_bits() + 32;
        let wctx = PrecCtx::bits(w);
        let mut head = Ball::zero(w);
        for r in 0..=r_max as i64 {
            head = head.add_ball(&self.template.ln_at(r, &wctx)?);
        }
        let rr = r_max as i64;
        let exponent = [Rat::int(-rr - 1), Rat::one()];
        let f = FactorSet {
            a: self.source.a(),
            b: self.source.b(),
            exponent: &exponent,
            start: rr + 2,
        };
        let (partial, tail, _) = log_sum_general(&f, 2, &EvalOptions::default(), w)?;
        Ok(head.add_ball(&partial).add_ball(&tail).with_prec(ctx.prec_bits() + 8))
    }

    /// Value of the original product through the residual route.
    pub fn eval_residual(&self, r_max: u32, ctx: &PrecCtx) -> Result<Ball> {
        let v = self.eval_residual_log(r_max, ctx)?.exp();
        ctx.check(&v)?;
        Ok(v)
    }
}

/// `Π_{n≥0} (n+2^{−k})(n+1−2^{−k}) / ((n+2^{−k−1})(n+1−2^{−k−1})) = 2cos(π/2^{k+1})`,
/// by reflection `sin(π/2^k) / sin(π/2^{k+1})`.
pub fn gen_radical(k: u32) -> Result<(ProductSpec, ClosedForm)> {
    if k == 0 || k > 60 {
        return Err(Error::InvalidTarget(format!(
            "radical level must be in 1..=60, got {k}"
        )));
    }
    let x = Rat::new(1, 1i64 << k);
    let y = Rat::new(1, 1i64 << (k + 1));
    let spec = ProductSpec::type1(vec![x.clone(), Rat::one() - &x], vec![y.clone(), Rat::one() - &y], 0)?;
    let cf = ClosedForm::div(ClosedForm::SinPi(x), ClosedForm::SinPi(y));
    Ok((spec, cf))
}

/// `Π_{n≥1} (n+1)(n+(p−q)/q) / (n(n+p/q)) = p/q`.
pub fn gen_rational(p: i64, q: i64) -> Result<(ProductSpec, ClosedForm)> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidTarget(format!(
            "p and q must be positive integers, got {p}/{q}"
        )));
    }
    let spec = ProductSpec::type1(
        vec![Rat::one(), Rat::new(p - q, q)],
        vec![Rat::zero(), Rat::new(p, q)],
        1,
    )?;
    Ok((spec, ClosedForm::rat(Rat::new(p, q))))
}
