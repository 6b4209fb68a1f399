//! Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (a+k)^{-s}` and its `s`-derivative by
//! Euler–Maclaurin summation with an explicit remainder bound.

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::RwLock;
use rug::{Float, Integer};

use super::bernoulli::bernoulli;
use crate::arith::{Ball, PrecCtx, Rat, RAD_PREC};
use crate::error::{Error, Result};

/// `ζ(s, a)` for rational `s > 1` and positive `a`.
pub fn hurwitz_zeta(s: &Rat, a: &Ball, ctx: &PrecCtx) -> Result<Ball> {
    euler_maclaurin(s, a, false, ctx.prec_bits())
}

/// `∂ζ(s, a)/∂s = -Σ ln(a+k) (a+k)^{-s}` for rational `s > 1`.
pub fn hurwitz_zeta_deriv(s: &Rat, a: &Ball, ctx: &PrecCtx) -> Result<Ball> {
    Ok(-euler_maclaurin(s, a, true, ctx.prec_bits())?)
}

/// `ζ'(-1) = 1/12 - ln A`.
pub fn zeta_deriv_at_minus1(ctx: &PrecCtx) -> Result<Ball> {
    let ln_a = super::constants::const_ln_glaisher(ctx)?;
    Ok(Ball::from_rat(&Rat::new(1, 12), ln_a.prec()) - ln_a)
}

type ZetaKey = (Rat, Rat, u32);

fn zeta_cache() -> &'static RwLock<HashMap<ZetaKey, Ball>> {
    static CACHE: OnceLock<RwLock<HashMap<ZetaKey, Ball>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized `ζ(s, a)` at exact rational `a`; the workhorse of every tail
/// correction, which asks for the same handful of values over and over.
pub(crate) fn hurwitz_zeta_rat(s: &Rat, a: &Rat, prec: u32) -> Result<Ball> {
    let key = (s.clone(), a.clone(), prec);
    if let Some(v) = zeta_cache().read().get(&key) {
        return Ok(v.clone());
    }
    let v = euler_maclaurin(s, &Ball::from_rat(a, prec + 16), false, prec)?;
    zeta_cache().write().insert(key, v.clone());
    Ok(v)
}

/// `(a+k)^{-s}`, by repeated multiplication when `s` is an integer.
fn neg_power(y: &Ball, s: &Rat) -> Result<Ball> {
    match s.to_i64() {
        Some(n) => y.powi(-n),
        None => Ok(y.ln()?.mul_rat(&-s).exp()),
    }
}

/// Upper bound on `2^e` as a radius-precision float.
pub(crate) fn pow2(e: i64) -> Float {
    let e = e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
    Float::with_val(RAD_PREC, Float::i_exp(1, e))
}

fn euler_maclaurin(s: &Rat, a: &Ball, with_log: bool, prec: u32) -> Result<Ball> {
    if *s <= Rat::one() {
        return Err(Error::domain(format!("zeta needs s > 1, got {s}")));
    }
    if !a.is_positive() {
        return Err(Error::domain("zeta needs a positive shift a"));
    }
    let w = prec + 16;
    // Relative target: ζ(s, a) ≥ ∫_a^∞ x^{−s} dx = a^{1−s}/(s−1). Tail
    // corrections multiply ζ(j, K+1) by power sums that grow like M^j, so
    // an absolute 2^{−w} would swamp the tiny values at large j.
    let log2_lower = if with_log {
        0.0
    } else {
        let s_f = s.to_f64();
        ((1.0 - s_f) * a.lower().to_f64().log2() - (s_f - 1.0).log2()).min(0.0)
    };
    let eps = pow2(-(w as i64) - 4 + log2_lower.floor() as i64);
    let mut n = (w as u64 / 4).max(8);
    while n <= 1 << 22 {
        if let Some(v) = em_attempt(s, a, with_log, n, w, &eps)? {
            return Ok(v.with_prec(prec + 8));
        }
        n *= 2;
    }
    Err(Error::ToleranceNotMet {
        achieved: f64::INFINITY,
        target: eps.to_f64(),
        prec_bits: prec,
    })
}

/// One Euler–Maclaurin pass with `n` explicit terms. `None` if the
/// correction terms stop shrinking before the remainder drops below `eps`.
fn em_attempt(s: &Rat, a: &Ball, with_log: bool, n: u64, w: u32, eps: &Float) -> Result<Option<Ball>> {
    let a = a.with_prec(w.max(a.prec()));
    let mut total = Ball::zero(w);
    for k in 0..n {
        let y = a.add_rat(&Rat::from(k));
        let mut t = neg_power(&y, s)?;
        if with_log {
            t = t.mul_ball(&y.ln()?);
        }
        total = total.add_ball(&t);
    }

    let x = a.add_rat(&Rat::from(n));
    let ln_x = x.ln()?;
    let x_s = neg_power(&x, s)?;
    let x_1s = x_s.mul_ball(&x);
    let s1 = s - &Rat::one();
    let inv_s1 = s1.recip()?;

    // ∫_n^∞ f and f(n)/2
    let integral = if with_log {
        x_1s.mul_ball(&ln_x.mul_rat(&inv_s1).add_rat(&inv_s1.pow(2)))
    } else {
        x_1s.mul_rat(&inv_s1)
    };
    let mut half = x_s.mul_rat(&Rat::new(1, 2));
    if with_log {
        half = half.mul_ball(&ln_x);
    }
    total = total.add_ball(&integral).add_ball(&half);

    let inv_x2 = x.square().recip()?;
    let mut pw = x_1s.mul_ball(&inv_x2); // X^{1-s-2j}
    let mut poch = Rat::one(); // (s)_m
    let mut harm = Rat::zero(); // Σ_{i<m} 1/(s+i)
    let mut m = 0i64;
    let mut fact = Integer::from(1); // (2j)!
    let mut prev_bound: Option<Float> = None;
    for j in 1..=(4 * w as usize + 16) {
        // advance to m = 2j-1
        while m < 2 * j as i64 - 1 {
            let si = s + &Rat::int(m);
            poch *= &si;
            harm += &si.recip()?;
            m += 1;
        }
        let poch_odd = poch.clone();
        let harm_odd = harm.clone();
        let s_odd = s + &Rat::int(m);
        let poch_even = &poch_odd * &s_odd;
        let harm_even = &harm_odd + &s_odd.recip()?;
        fact *= (2 * j - 1) as u64;
        fact *= (2 * j) as u64;
        let coef = bernoulli(2 * j) / Rat::from(fact.clone());

        let p1 = s + &Rat::int(2 * j as i64 - 1); // p - 1 with p = s + 2j
        let base = pw.mul_rat(&(coef.abs() * poch_even.clone()));
        let bound = if with_log {
            let inv = p1.recip()?;
            let lx = ln_x.abs().add_rat(&harm_even);
            base.mul_ball(&lx.mul_rat(&inv).add_rat(&inv.pow(2)))
        } else {
            base.mul_rat(&p1.recip()?)
        }
        .mag();
        if let Some(prev) = &prev_bound {
            if j > 3 && bound >= *prev {
                return Ok(None);
            }
        }

        let mut term = pw.mul_rat(&(coef * poch_odd));
        if with_log {
            term = term.mul_ball(&ln_x.sub_ball(&Ball::from_rat(&harm_odd, w)));
        }
        total = total.add_ball(&term);
        // the remainder after term j is bounded through f^(2j)
        if bound < *eps {
            return Ok(Some(total.add_error(&bound)));
        }
        prev_bound = Some(bound);
        pw = pw.mul_ball(&inv_x2);
        // keep m in step with the Pochhammer bookkeeping for the next term
        poch = poch_even;
        harm = harm_even;
        m += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrecCtx {
        PrecCtx::bits(p)
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        for p in [64, 128, 256] {
            let z = hurwitz_zeta(&Rat::int(2), &Ball::from_i64(1, p), &ctx(p)).unwrap();
            let pi = Ball::pi(p + 32);
            let target = pi.square().div_i64(6).unwrap();
            assert!(z.overlaps(&target), "{z:?}");
            assert!(z.rad_f64() < 2f64.powi(8 - p as i32));
        }
    }

    #[test]
    fn zeta_four_and_half_shift() {
        let p = 128;
        let z = hurwitz_zeta(&Rat::int(4), &Ball::from_i64(1, p), &ctx(p)).unwrap();
        let target = Ball::pi(p + 32).powi(4).unwrap().div_i64(90).unwrap();
        assert!(z.overlaps(&target));
        // ζ(2, 1/2) = 3 ζ(2) = π²/2
        let h = hurwitz_zeta(&Rat::int(2), &Ball::from_rat(&Rat::new(1, 2), p), &ctx(p)).unwrap();
        assert!(h.overlaps(&Ball::pi(p + 32).square().div_i64(2).unwrap()));
    }

    #[test]
    fn tiny_values_keep_relative_accuracy() {
        // ζ(40, 89) ≈ 89^{-40}: an absolute error target would leave no digits
        let z = hurwitz_zeta_rat(&Rat::int(40), &Rat::int(89), 128).unwrap();
        assert!(z.is_positive());
        let head = Ball::from_i64(89, 160).powi(-40).unwrap();
        let rel = z.rad_f64() / head.mid_f64();
        assert!(rel < 1e-35, "relative radius {rel:e}");
        assert!(z.sub_ball(&head).is_positive());
    }

    #[test]
    fn telescoping_term() {
        let p = 128;
        for (s, a) in [
            (Rat::int(2), Rat::new(1, 3)),
            (Rat::new(7, 2), Rat::new(5, 4)),
            (Rat::int(9), Rat::int(3)),
        ] {
            let a_ball = Ball::from_rat(&a, p);
            let z0 = hurwitz_zeta(&s, &a_ball, &ctx(p)).unwrap();
            let z1 = hurwitz_zeta(&s, &a_ball.add_rat(&Rat::one()), &ctx(p)).unwrap();
            let term = neg_power(&a_ball, &s).unwrap();
            assert!(z0.sub_ball(&z1).overlaps(&term), "s={s} a={a}");
        }
    }

    #[test]
    fn derivative_at_two() {
        // finite-difference oracle on the zeta values themselves
        let p = 160;
        let d = hurwitz_zeta_deriv(&Rat::int(2), &Ball::from_i64(1, p), &ctx(p)).unwrap();
        let h = Rat::new(1, 1 << 20);
        let up = hurwitz_zeta(&(Rat::int(2) + h.clone()), &Ball::from_i64(1, p), &ctx(p)).unwrap();
        let dn = hurwitz_zeta(&(Rat::int(2) - h.clone()), &Ball::from_i64(1, p), &ctx(p)).unwrap();
        let fd = up.sub_ball(&dn).mul_rat(&(Rat::int(1 << 19)));
        // central difference error ~ h² ζ'''(2)/6 < 1e-11
        assert!((fd.mid_f64() - d.mid_f64()).abs() < 1e-10);
        assert!((d.mid_f64() + 0.937_548_254_315_843_8).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = 64;
        assert!(hurwitz_zeta(&Rat::one(), &Ball::from_i64(1, p), &ctx(p)).is_err());
        assert!(hurwitz_zeta(&Rat::int(2), &Ball::zero(p), &ctx(p)).is_err());
        assert!(hurwitz_zeta(&Rat::int(2), &Ball::from_i64(-1, p), &ctx(p)).is_err());
    }
}
