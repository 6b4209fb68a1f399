//! Certified evaluation of closed forms.

use super::form::{Atom, ClosedForm, Monomial};
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::{Error, Result};
use crate::special::{barnes_lng, const_catalan, const_e, const_gamma, const_ln_glaisher, const_pi, lngamma};

/// Evaluates the canonical form of `cf` and checks the radius against the
/// context tolerance. Surviving `Γ_n` (`n ≥ 3`) atoms are rejected.
pub fn eval_closed_form(cf: &ClosedForm, ctx: &PrecCtx) -> Result<Ball> {
    let m = cf.canonical()?;
    let v = eval_monomial(&m, ctx)?;
    ctx.check(&v)?;
    Ok(v)
}

/// Value of a canonical monomial, computed as `sign · exp(Σ e·ln atom)`.
pub fn eval_monomial(m: &Monomial, ctx: &PrecCtx) -> Result<Ball> {
    let w = ctx.prec_bits() + 32;
    let wctx = PrecCtx::bits(w);
    if m.coeff().is_zero() {
        return Ok(Ball::zero(ctx.prec_bits()));
    }
    let mut log = Ball::from_rat(&m.coeff().abs(), w).ln()?;
    for (atom, e) in m.factors() {
        let l = ln_atom(atom, &wctx)?;
        log = log.add_ball(&l.mul_rat(e));
    }
    let v = log.exp();
    let v = if m.coeff().is_negative() { v.neg_ball() } else { v };
    Ok(v.with_prec(ctx.prec_bits()))
}

fn ln_atom(a: &Atom, ctx: &PrecCtx) -> Result<Ball> {
    let w = ctx.prec_bits();
    match a {
        Atom::Radical(p) => Ball::from_rat(&Rat::from(p.clone()), w).ln(),
        Atom::E => Ok(Ball::from_i64(1, w)),
        Atom::Pi => const_pi(ctx).ln(),
        Atom::EulerGamma => const_gamma(ctx).ln(),
        Atom::Catalan => const_catalan(ctx).ln(),
        Atom::Glaisher => const_ln_glaisher(ctx),
        Atom::Exp(m) => eval_monomial(m, ctx),
        Atom::Gamma(r) => lngamma(&Ball::from_rat(r, w), ctx),
        Atom::BarnesG(r) => barnes_lng(&Ball::from_rat(r, w), ctx),
        Atom::MultiGamma(n, r) => Err(Error::IrreducibleClosedForm(format!(
            "Gamma_{n}({r}) has no evaluator; reduce to levels 1 and 2 first"
        ))),
        Atom::SinPi(r) => const_pi(ctx).mul_rat(r).sin().ln(),
    }
}

/// Evaluates the tree as written, without canonicalization. Independent of
/// the reduction tables, so it serves as a cross-check of them.
pub fn eval_tree(cf: &ClosedForm, ctx: &PrecCtx) -> Result<Ball> {
    let w = ctx.prec_bits();
    Ok(match cf {
        ClosedForm::Rat(r) => Ball::from_rat(r, w),
        ClosedForm::Pi => const_pi(ctx),
        ClosedForm::E => const_e(ctx),
        ClosedForm::EulerGamma => const_gamma(ctx),
        ClosedForm::Catalan => const_catalan(ctx),
        ClosedForm::Glaisher => const_ln_glaisher(ctx)?.exp(),
        ClosedForm::GammaAt(r) => gamma_at(r, ctx)?,
        ClosedForm::BarnesGAt(r) => barnes_at(r, ctx)?,
        ClosedForm::MultiGammaAt { level: 1, arg } => gamma_at(arg, ctx)?,
        ClosedForm::MultiGammaAt { level: 2, arg } => barnes_at(arg, ctx)?.recip()?,
        ClosedForm::MultiGammaAt { level, arg } => {
            return Err(Error::IrreducibleClosedForm(format!(
                "Gamma_{level}({arg}) has no evaluator"
            )))
        }
        ClosedForm::SinPi(r) => const_pi(ctx).mul_rat(r).sin(),
        ClosedForm::Mul(v) => {
            let mut acc = Ball::from_i64(1, w);
            for f in v {
                acc = acc.mul_ball(&eval_tree(f, ctx)?);
            }
            acc
        }
        ClosedForm::Pow(b, q) => eval_tree(b, ctx)?.pow_rat(q)?,
        ClosedForm::Exp(x) => eval_tree(x, ctx)?.exp(),
    })
}

fn gamma_at(r: &Rat, ctx: &PrecCtx) -> Result<Ball> {
    let w = ctx.prec_bits();
    if r.is_positive() {
        return Ok(lngamma(&Ball::from_rat(r, w), ctx)?.exp());
    }
    if r.is_integer() {
        return Err(Error::domain(format!("Gamma has a pole at {r}")));
    }
    // Γ(r) = π / (sin(πr) Γ(1−r))
    let pi = const_pi(ctx);
    let g = lngamma(&Ball::from_rat(&(Rat::one() - r), w), ctx)?.exp();
    pi.div_ball(&pi.mul_rat(r).sin().mul_ball(&g))
}

fn barnes_at(r: &Rat, ctx: &PrecCtx) -> Result<Ball> {
    if !r.is_positive() {
        return Err(Error::domain(format!(
            "G is only evaluated at positive arguments, got {r}"
        )));
    }
    Ok(barnes_lng(&Ball::from_rat(r, ctx.prec_bits()), ctx)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn wallis_value() {
        let ctx = PrecCtx::bits(128);
        let cf: ClosedForm = "Gamma(1/2)*Gamma(3/2)/Gamma(1)^2".parse().unwrap();
        let v = eval_closed_form(&cf, &ctx).unwrap();
        let half_pi = const_pi(&ctx).div_i64(2).unwrap();
        assert!(v.overlaps(&half_pi));
        assert!(v.rad_f64() < 1e-30);
    }

    #[test]
    fn canonical_and_raw_routes_agree() {
        let ctx = PrecCtx::bits(128);
        for s in [
            "G(1/4)",
            "G(3/4)*G(5/4)",
            "Gamma(-1/3)*Gamma(4/3)",
            "sinpi(7/10)/sinpi(3/10)",
            "Gamma_2(5/2)",
            "8*A^12 / (e*pi^3*2^(1/3))",
            "exp(2*K/pi)",
            "G(2/3)^2*Gamma(1/3)",
        ] {
            let cf: ClosedForm = s.parse().unwrap();
            let a = eval_closed_form(&cf, &ctx).unwrap();
            let b = eval_tree(&cf, &ctx).unwrap();
            assert!(a.add_error_f64(1e-30).overlaps(&b), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn known_values() {
        let ctx = PrecCtx::bits(96);
        // golden ratio
        let phi = eval_closed_form(&"2*sinpi(3/10)".parse().unwrap(), &ctx).unwrap();
        let five = Ball::from_i64(5, 96).sqrt().unwrap();
        assert!(phi.overlaps(&five.add_rat(&Rat::one()).div_i64(2).unwrap()));
        // exp(2K/π) ≈ 1.791...
        let v = eval_closed_form(&"exp(2*K/pi)".parse().unwrap(), &ctx).unwrap();
        assert!((v.mid_f64() - 1.7916228).abs() < 1e-6);
        let neg = eval_closed_form(&ClosedForm::rat(r(-4, 5)), &ctx).unwrap();
        assert!(neg.contains_rat(&r(-4, 5)));
    }

    #[test]
    fn multigamma_is_irreducible() {
        let ctx = PrecCtx::bits(64);
        let cf: ClosedForm = "Gamma_3(1/3)".parse().unwrap();
        assert!(matches!(
            eval_closed_form(&cf, &ctx),
            Err(Error::IrreducibleClosedForm(_))
        ));
        assert!(matches!(eval_tree(&cf, &ctx), Err(Error::IrreducibleClosedForm(_))));
    }

    #[test]
    fn tolerance_is_enforced() {
        let ctx = PrecCtx::new(24, 1e-20).unwrap();
        let cf: ClosedForm = "pi".parse().unwrap();
        assert!(matches!(
            eval_closed_form(&cf, &ctx),
            Err(Error::ToleranceNotMet { .. })
        ));
    }
}
