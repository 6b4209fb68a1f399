//! `ln Γ` on the positive real axis.

use super::bernoulli::bernoulli;
use super::constants::const_pi;
use super::zeta::pow2;
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::{Error, Result};

/// `ln Γ(x)` for an interval `x` strictly inside `(0, ∞)`.
///
/// Shifts the argument up to `z ≥ N` with one logarithm of the product
/// `x (x+1) … (x+s−1)`, then sums the Stirling series. For real `z > 0` the
/// series remainder is bounded by the first omitted term.
pub fn lngamma(x: &Ball, ctx: &PrecCtx) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::domain("lngamma needs a strictly positive argument"));
    }
    let prec = ctx.prec_bits();
    let w = prec + 24;
    let x = x.with_prec(w.max(x.prec()));
    let threshold = 20f64.max((0.12 * w as f64).ceil() + 1.0);

    let lo = x.lower().to_f64();
    let (z, shift_ln) = if lo < threshold {
        let steps = (threshold - lo).ceil() as i64;
        let mut prod = x.clone();
        for j in 1..steps {
            prod = prod.mul_ball(&x.add_rat(&Rat::int(j)));
        }
        (x.add_rat(&Rat::int(steps)), Some(prod.ln()?))
    } else {
        (x.clone(), None)
    };

    let mut v = stirling(&z, w)?;
    if let Some(s) = shift_ln {
        v = v.sub_ball(&s);
    }
    Ok(v.with_prec(prec + 8))
}

/// `(z−½) ln z − z + ½ ln 2π + Σ_k B_2k / (2k(2k−1) z^{2k−1})`.
fn stirling(z: &Ball, w: u32) -> Result<Ball> {
    let eps = pow2(-(w as i64) - 2);
    let ln_z = z.ln()?;
    let half_ln2pi = const_pi(&PrecCtx::bits(w)).mul_i64(2).ln()?.mul_rat(&Rat::new(1, 2));
    let mut v = z
        .add_rat(&Rat::new(-1, 2))
        .mul_ball(&ln_z)
        .sub_ball(z)
        .add_ball(&half_ln2pi);

    let inv_z = z.recip()?;
    let inv_z2 = inv_z.square();
    let mut pw = inv_z; // z^{-(2k-1)}
    for k in 1..=(4 * w as i64) {
        let c = bernoulli(2 * k as usize) / Rat::int(2 * k * (2 * k - 1));
        let term = pw.mul_rat(&c);
        let m = term.mag();
        if m < eps {
            return Ok(v.add_error(&m));
        }
        v = v.add_ball(&term);
        pw = pw.mul_ball(&inv_z2);
    }
    Err(Error::ToleranceNotMet {
        achieved: f64::INFINITY,
        target: eps.to_f64(),
        prec_bits: w,
    })
}

/// `Γ(z) Γ(1−z) sin(πz) / π − 1` at the fractional part of `z`.
pub fn check_reflection(z: &Rat, ctx: &PrecCtx) -> Result<Ball> {
    if z.is_integer() {
        return Err(Error::domain(format!("reflection needs a non-integer, got {z}")));
    }
    let r = z.fract_floor();
    let w = ctx.prec_bits() + 16;
    let wctx = PrecCtx::bits(w);
    let pi = const_pi(&wctx);
    let lg = lngamma(&Ball::from_rat(&r, w), &wctx)?.add_ball(&lngamma(&Ball::from_rat(&(Rat::one() - &r), w), &wctx)?);
    let s = pi.mul_rat(&r).sin();
    let v = lg.exp().mul_ball(&s).div_ball(&pi)?.add_rat(&Rat::int(-1));
    Ok(v.with_prec(ctx.prec_bits()))
}
