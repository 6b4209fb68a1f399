//! Mathematical constants, memoized per precision.

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::RwLock;

use super::zeta::{hurwitz_zeta_deriv, pow2};
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Pi,
    E,
    EulerGamma,
    Ln2,
    Catalan,
    LnGlaisher,
}

/// Memo of `(constant, prec_bits) -> Ball`; concurrent readers, exclusive
/// insertion. A racing duplicate computation is harmless: both threads
/// produce the same ball and the second insert is a no-op overwrite.
#[derive(Default)]
pub struct ConstantCache {
    values: RwLock<HashMap<(Constant, u32), Ball>>,
}

impl ConstantCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static ConstantCache {
        static CACHE: OnceLock<ConstantCache> = OnceLock::new();
        CACHE.get_or_init(ConstantCache::new)
    }

    pub fn get(&self, c: Constant, prec: u32) -> Result<Ball> {
        if let Some(v) = self.values.read().get(&(c, prec)) {
            return Ok(v.clone());
        }
        let v = compute(c, prec)?;
        self.values.write().insert((c, prec), v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.read().is_empty()
    }
}

fn compute(c: Constant, prec: u32) -> Result<Ball> {
    let w = prec + 24;
    let v = match c {
        Constant::Pi => Ball::pi(w),
        Constant::E => Ball::from_i64(1, w).exp(),
        Constant::EulerGamma => Ball::euler_gamma(w),
        Constant::Ln2 => Ball::ln2(w),
        Constant::Catalan => catalan(w)?,
        Constant::LnGlaisher => ln_glaisher(w)?,
    };
    Ok(v.with_prec(prec + 4))
}

/// `K = (π/8) ln(2+√3) + (3/8) Σ_{n≥0} (n!)² / ((2n)! (2n+1)²)`.
///
/// Consecutive terms shrink by at least 4, so the tail after the last
/// term kept is at most a third of it.
fn catalan(w: u32) -> Result<Ball> {
    let eps = pow2(-(w as i64) - 4);
    let mut t = Ball::from_i64(1, w);
    let mut sum = Ball::zero(w);
    let mut n: i64 = 0;
    loop {
        sum = sum.add_ball(&t);
        // t_{n+1} = t_n (n+1)(2n+1) / (2 (2n+3)²)
        t = t.mul_rat(&Rat::new((n + 1) * (2 * n + 1), 2 * (2 * n + 3) * (2 * n + 3)));
        n += 1;
        let tail = t.mag();
        if tail < eps {
            let mut bound = tail;
            bound *= 2;
            sum = sum.add_error(&bound);
            break;
        }
    }
    let sqrt3 = Ball::from_i64(3, w).sqrt()?;
    let head = Ball::pi(w).div_i64(8)?.mul_ball(&sqrt3.add_rat(&Rat::int(2)).ln()?);
    Ok(head.add_ball(&sum.mul_rat(&Rat::new(3, 8))))
}

/// `ln A = (γ + ln 2π)/12 − ζ′(2)/(2π²)`.
fn ln_glaisher(w: u32) -> Result<Ball> {
    let ctx = PrecCtx::bits(w);
    let pi = Ball::pi(w);
    let d2 = hurwitz_zeta_deriv(&Rat::int(2), &Ball::from_i64(1, w), &ctx)?;
    let ln2pi = pi.mul_i64(2).ln()?;
    let first = Ball::euler_gamma(w).add_ball(&ln2pi).div_i64(12)?;
    let second = d2.div_ball(&pi.square().mul_i64(2))?;
    Ok(first.sub_ball(&second))
}

pub fn const_pi(ctx: &PrecCtx) -> Ball {
    ConstantCache::global()
        .get(Constant::Pi, ctx.prec_bits())
        .expect("pi never fails")
}

pub fn const_e(ctx: &PrecCtx) -> Ball {
    ConstantCache::global()
        .get(Constant::E, ctx.prec_bits())
        .expect("e never fails")
}

pub fn const_gamma(ctx: &PrecCtx) -> Ball {
    ConstantCache::global()
        .get(Constant::EulerGamma, ctx.prec_bits())
        .expect("gamma never fails")
}

pub fn const_ln2(ctx: &PrecCtx) -> Ball {
    ConstantCache::global()
        .get(Constant::Ln2, ctx.prec_bits())
        .expect("ln 2 never fails")
}

pub fn const_catalan(ctx: &PrecCtx) -> Ball {
    ConstantCache::global()
        .get(Constant::Catalan, ctx.prec_bits())
        .expect("Catalan series never fails")
}

pub fn const_ln_glaisher(ctx: &PrecCtx) -> Result<Ball> {
    ConstantCache::global().get(Constant::LnGlaisher, ctx.prec_bits())
}

pub fn const_glaisher(ctx: &PrecCtx) -> Result<Ball> {
    Ok(const_ln_glaisher(ctx)?.exp())
}

/// `ln` of the limit-definition quotient at a finite `n`:
/// `(n/2) ln 2π + (n²/2 − 1/12) ln n − 3n²/4 + 1/12 − ln G(n+1)`,
/// with `ln G(n+1) = Σ_{k<n} (n−k) ln k`. Certified for that finite `n`
/// only; the distance to `ln A` is `O(1/n²)` and not bounded here.
pub fn ln_glaisher_limit(n: u32, ctx: &PrecCtx) -> Result<Ball> {
    let w = ctx.prec_bits() + 2 * (32 - n.leading_zeros()) + 8;
    let nn = n as i64;
    let mut ln_g = Ball::zero(w);
    for k in 2..nn {
        ln_g = ln_g.add_ball(&Ball::from_i64(k, w).ln()?.mul_i64(nn - k));
    }
    let ln_n = Ball::from_i64(nn, w).ln()?;
    let ln2pi = Ball::pi(w).mul_i64(2).ln()?;
    let n2 = Rat::int(nn * nn);
    let v = ln2pi
        .mul_rat(&Rat::new(nn, 2))
        .add_ball(&ln_n.mul_rat(&(&n2 / &Rat::int(2) - Rat::new(1, 12))))
        .add_rat(&(Rat::new(1, 12) - &n2 * &Rat::new(3, 4)))
        .sub_ball(&ln_g);
    Ok(v)
}
