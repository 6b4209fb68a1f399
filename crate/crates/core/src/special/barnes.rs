//! `ln G` for the Barnes G-function on the positive real axis.

use super::constants::{const_gamma, const_ln_glaisher, const_pi};
use super::gamma::lngamma;
use super::zeta::{hurwitz_zeta_rat, pow2};
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::{Error, Result};

/// Explicit factors of the Weierstrass product before the zeta tail.
const WEIERSTRASS_TERMS: i64 = 64;

/// `ln G(x)` for an interval `x` strictly inside `(0, ∞)`.
///
/// `G(z+1) = Γ(z) G(z)` moves the argument to `1 + z` with `z ∈ (0, 1]`,
/// where the Weierstrass product
/// `G(1+z) = (2π)^{z/2} e^{−(z+z²(1+γ))/2} Π_n (1+z/n)^n e^{z²/(2n) − z}`
/// is summed in log form for `n ≤ N` and through Hurwitz zeta values beyond.
pub fn barnes_lng(x: &Ball, ctx: &PrecCtx) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::domain("barnes_lng needs a strictly positive argument"));
    }
    let prec = ctx.prec_bits();
    let w = prec + 24;
    let wctx = PrecCtx::bits(w);
    let x = x.with_prec(w.max(x.prec()));

    // x = 1 + z + m with z in (0, 1]
    let m = x.mid().to_f64().ceil() as i64 - 2;
    let z = x.add_rat(&Rat::int(-1 - m));
    let mut v = lng_one_plus(&z, w)?;
    if m > 0 {
        // ln G(y + m) = ln G(y) + Σ_{j<m} ln Γ(y + j), y = 1 + z
        for j in 0..m {
            v = v.add_ball(&lngamma(&z.add_rat(&Rat::int(1 + j)), &wctx)?);
        }
    } else {
        // ln G(y) = ln G(y + 1) − ln Γ(y)
        for j in m..0 {
            v = v.sub_ball(&lngamma(&z.add_rat(&Rat::int(1 + j)), &wctx)?);
        }
    }
    Ok(v.with_prec(prec + 8))
}

/// `ln G(1 + z)` for `|z| ≤ 2` (used with `z ∈ (0, 1]`).
fn lng_one_plus(z: &Ball, w: u32) -> Result<Ball> {
    let n = WEIERSTRASS_TERMS;
    let w = w + 16;
    let wctx = PrecCtx::bits(w);
    let pi = const_pi(&wctx);
    let gamma = const_gamma(&wctx);
    let z = z.with_prec(w);
    let z2 = z.square();

    let mut v = pi.mul_i64(2).ln()?.mul_ball(&z).mul_rat(&Rat::new(1, 2));
    let quad = z.add_ball(&z2.mul_ball(&gamma.add_rat(&Rat::one())));
    v = v.sub_ball(&quad.mul_rat(&Rat::new(1, 2)));

    for k in 1..=n {
        let t = z
            .div_i64(k)?
            .ln_1p()?
            .mul_i64(k)
            .sub_ball(&z)
            .add_ball(&z2.div_i64(2 * k)?);
        v = v.add_ball(&t);
    }

    // Σ_{j≥3} (−1)^{j−1} z^j / j · ζ(j−1, N+1)
    let eps = pow2(-(w as i64) - 4);
    let q = z.mag().to_f64() / (n + 1) as f64;
    if q >= 0.5 {
        return Err(Error::domain("ln G series argument outside its reduction window"));
    }
    let a = Rat::int(n + 1);
    let mut zj = z2.mul_ball(&z);
    for j in 3i64.. {
        let zeta = hurwitz_zeta_rat(&Rat::int(j - 1), &a, w)?;
        let mut t = zj.mul_ball(&zeta).div_i64(j)?;
        if j % 2 == 0 {
            t = t.neg_ball();
        }
        v = v.add_ball(&t);
        // remainder beyond j: C (N+1) q^{j+1} / ((j+1)(1−q)), C = 1 + (N+1)/(j−1)
        let c = 1.0 + (n + 1) as f64 / (j - 1) as f64;
        let log2_rem = ((c * (n + 1) as f64) / ((j + 1) as f64 * (1.0 - q))).log2() + (j + 1) as f64 * q.log2();
        if log2_rem < -(w as f64) - 6.0 {
            let mut rem = pow2(log2_rem.ceil() as i64 + 1);
            if rem > eps {
                rem = eps.clone();
            }
            return Ok(v.add_error(&rem));
        }
        zj = zj.mul_ball(&z);
    }
    unreachable!()
}

/// Log-domain residual of
/// `G(2z) = e^{−1/4} A³ 2^{2z²−3z+11/12} π^{1/2−z} G(z) G(z+1/2)² G(z+1)`.
pub fn check_g_duplication(z: &Rat, ctx: &PrecCtx) -> Result<Ball> {
    if !z.is_positive() {
        return Err(Error::domain("duplication check needs z > 0"));
    }
    let w = ctx.prec_bits() + 16;
    let wctx = PrecCtx::bits(w);
    let lng = |r: Rat| barnes_lng(&Ball::from_rat(&r, w), &wctx);
    let half = Rat::new(1, 2);

    let lhs = lng(z * &Rat::int(2))?;
    let ln2 = Ball::ln2(w);
    let ln_pi = const_pi(&wctx).ln()?;
    let two_pow = &(z * z) * &Rat::int(2) - z * &Rat::int(3) + Rat::new(11, 12);
    let rhs = const_ln_glaisher(&wctx)?
        .mul_i64(3)
        .add_rat(&Rat::new(-1, 4))
        .add_ball(&ln2.mul_rat(&two_pow))
        .add_ball(&ln_pi.mul_rat(&(&half - z)))
        .add_ball(&lng(z.clone())?)
        .add_ball(&lng(z + &half)?.mul_i64(2))
        .add_ball(&lng(z + &Rat::one())?);
    Ok(lhs.sub_ball(&rhs).with_prec(ctx.prec_bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::constants::const_catalan;
    use proptest::prelude::*;

    fn ctx(p: u32) -> PrecCtx {
        PrecCtx::bits(p)
    }

    #[test]
    fn integer_points() {
        let c = ctx(128);
        for (x, expect) in [(1, 1i64), (2, 1), (3, 1), (4, 2), (5, 12), (6, 288)] {
            let v = barnes_lng(&Ball::from_i64(x, 128), &c).unwrap();
            assert!(v.overlaps(&Ball::from_i64(expect, 160).ln().unwrap()), "G({x}) = {v}");
            assert!(v.rad_f64() < 1e-33);
        }
    }

    #[test]
    fn g_half_special_value() {
        // ln(2^{1/24} e^{1/8} A^{−3/2} π^{−1/4})
        let p = 128;
        let c = ctx(p + 16);
        let expect = Ball::ln2(p + 16)
            .mul_rat(&Rat::new(1, 24))
            .add_rat(&Rat::new(1, 8))
            .sub_ball(&const_ln_glaisher(&c).unwrap().mul_rat(&Rat::new(3, 2)))
            .sub_ball(&Ball::pi(p + 16).ln().unwrap().mul_rat(&Rat::new(1, 4)));
        let v = barnes_lng(&Ball::from_rat(&Rat::new(1, 2), p), &ctx(p)).unwrap();
        assert!(v.overlaps(&expect), "{v} vs {expect}");
    }

    #[test]
    fn quarter_values_sum() {
        // ln G(1/4) + ln G(3/4) = −(9/4) ln A − (3/4) ln Γ(1/4) − (1/4) ln Γ(3/4) + 3/16
        let p = 128;
        let c = ctx(p + 16);
        let q1 = Ball::from_rat(&Rat::new(1, 4), p + 16);
        let q3 = Ball::from_rat(&Rat::new(3, 4), p + 16);
        let k_over_pi = const_catalan(&c).div_ball(&Ball::pi(p + 16)).unwrap();
        let ln_a = const_ln_glaisher(&c).unwrap();
        let g1 = ln_a
            .mul_rat(&Rat::new(-9, 8))
            .sub_ball(&lngamma(&q1, &c).unwrap().mul_rat(&Rat::new(3, 4)))
            .add_rat(&Rat::new(3, 32))
            .sub_ball(&k_over_pi.mul_rat(&Rat::new(1, 4)));
        let g3 = ln_a
            .mul_rat(&Rat::new(-9, 8))
            .sub_ball(&lngamma(&q3, &c).unwrap().mul_rat(&Rat::new(1, 4)))
            .add_rat(&Rat::new(3, 32))
            .add_ball(&k_over_pi.mul_rat(&Rat::new(1, 4)));
        let v1 = barnes_lng(&q1, &ctx(p)).unwrap();
        let v3 = barnes_lng(&q3, &ctx(p)).unwrap();
        assert!(v1.overlaps(&g1));
        assert!(v3.overlaps(&g3));
        assert!(v1.add_ball(&v3).overlaps(&g1.add_ball(&g3)));
    }

    #[test]
    fn duplication_residuals() {
        let c = ctx(128);
        for z in [Rat::new(1, 2), Rat::new(3, 4), Rat::one(), Rat::new(5, 3)] {
            let r = check_g_duplication(&z, &c).unwrap();
            assert!(r.contains_zero(), "z = {z}: {r}");
            assert!(r.rad_f64() < 1e-30);
        }
    }

    #[test]
    fn large_argument() {
        // ln G(12) = Σ_{k=1}^{10} ln k!
        let p = 128;
        let mut acc = Ball::zero(p + 32);
        let mut f = Ball::from_i64(1, p + 32);
        for k in 1..=10 {
            f = f.mul_i64(k);
            acc = acc.add_ball(&f.ln().unwrap());
        }
        let v = barnes_lng(&Ball::from_i64(12, p), &ctx(p)).unwrap();
        assert!(v.overlaps(&acc));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn recurrence(n in 1i64..1000, d in 1i64..100) {
            let x = Rat::new(n, d);
            prop_assume!(x <= Rat::int(10));
            let c = ctx(96);
            let xb = Ball::from_rat(&x, 96);
            let r = barnes_lng(&xb.add_rat(&Rat::one()), &c).unwrap()
                .sub_ball(&barnes_lng(&xb, &c).unwrap())
                .sub_ball(&lngamma(&xb, &c).unwrap());
            prop_assert!(r.contains_zero(), "x = {}: {}", x, r);
        }
    }
}
