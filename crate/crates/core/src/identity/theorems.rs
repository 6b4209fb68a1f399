//! Closed forms of whole products through the multiple Gamma functions.
//!
//! With `binom_n(k) = k(k+1)…(k+n−2)/(n−1)!`,
//! `Π_{k≥1} [Π(k+a_j)/Π(k+b_j)]^{binom_n(k)} = Π Γ_n(1+b_j) / Π Γ_n(1+a_j)`
//! whenever the power sums agree through order `n`. A general exponent is
//! split over this basis and the pieces multiplied.

use std::collections::BTreeMap;

use super::form::ClosedForm;
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::product::{binom_exponent, check_moments, required_order, ProductSpec};

/// Coefficients `β_1, β_2, …` with `E = Σ β_n binom_n`.
pub fn binomial_decomposition(exponent: &[Rat]) -> Vec<Rat> {
    let mut rest: Vec<Rat> = exponent.to_vec();
    let mut beta = vec![Rat::zero(); rest.len()];
    for n in (1..=rest.len()).rev() {
        let basis = binom_exponent(n as u32);
        let lead = basis.last().cloned().unwrap_or_else(Rat::one);
        let c = &rest[n - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (m, bm) in basis.iter().enumerate() {
            rest[m] -= &(&c * bm);
        }
        beta[n - 1] = c;
    }
    beta
}

/// The theorem's right-hand side as written, before any simplification.
pub fn theorem_form(spec: &ProductSpec) -> Result<ClosedForm> {
    let order = required_order(spec);
    let report = check_moments(spec, order);
    if let Some(bad) = report.first_failure() {
        return Err(Error::ConstraintViolation(format!(
            "no closed form: the power sums must agree through order {order}; {bad}"
        )));
    }
    // exponent of Γ_n(x) for each (n, x)
    let mut powers: BTreeMap<(u32, Rat), Rat> = BTreeMap::new();
    let shift = if spec.start() == 0 && spec.exponent() == [Rat::one()] {
        // E = 1 from k = 0: Π Γ(b) / Π Γ(a) directly
        Rat::zero()
    } else {
        Rat::one()
    };
    for (i, beta) in binomial_decomposition(spec.exponent()).iter().enumerate() {
        if beta.is_zero() {
            continue;
        }
        let n = i as u32 + 1;
        for x in spec.b() {
            *powers.entry((n, x + &shift)).or_insert_with(Rat::zero) += beta;
        }
        for x in spec.a() {
            *powers.entry((n, x + &shift)).or_insert_with(Rat::zero) -= beta;
        }
    }
    let mut num = Vec::new();
    let mut den = Vec::new();
    if spec.start() == 0 && shift == Rat::one() {
        let e0 = spec.exponent_at(0);
        if !e0.is_zero() {
            num.push(ClosedForm::rat(spec.ratio_at(0)).pow(e0));
        }
    }
    for ((n, x), e) in powers {
        if e.is_zero() {
            continue;
        }
        let (atom, e) = match n {
            1 => (ClosedForm::GammaAt(x), e),
            2 => (ClosedForm::BarnesGAt(x), -e),
            _ => (ClosedForm::MultiGammaAt { level: n, arg: x }, e),
        };
        let f = if e == Rat::one() { atom } else { atom.pow(e) };
        if f_is_positive(&f) {
            num.push(f);
        } else {
            den.push(f);
        }
    }
    num.extend(den);
    Ok(match num.len() {
        0 => ClosedForm::int(1),
        1 => num.pop().unwrap(),
        _ => ClosedForm::Mul(num),
    })
}

fn f_is_positive(f: &ClosedForm) -> bool {
    match f {
        ClosedForm::Pow(_, e) => e.is_positive(),
        _ => true,
    }
}

/// Canonical closed form of the product.
pub fn closed_form(spec: &ProductSpec) -> Result<ClosedForm> {
    theorem_form(spec)?.reduce()
}

/// Type-I: `E = 1`.
pub fn closed_form_type1(spec: &ProductSpec) -> Result<ClosedForm> {
    closed_form_typen(spec, 1)
}

/// Type-II: `E = k`.
pub fn closed_form_type2(spec: &ProductSpec) -> Result<ClosedForm> {
    closed_form_typen(spec, 2)
}

/// Type-n: `E = binom_n(k)`.
pub fn closed_form_typen(spec: &ProductSpec, n: u32) -> Result<ClosedForm> {
    if n == 0 {
        return Err(Error::InvalidSpec("product type must be at least 1".into()));
    }
    if spec.exponent() != binom_exponent(n) {
        return Err(Error::InvalidSpec(format!(
            "a Type-{n} product needs the exponent {}",
            crate::product::poly_string(&binom_exponent(n))
        )));
    }
    closed_form(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::eval::eval_closed_form;
    use crate::product::eval_product;
    use crate::PrecCtx;

    fn rats(xs: &[&str]) -> Vec<Rat> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn spec(a: &[&str], b: &[&str], e: &[&str], start: u32) -> ProductSpec {
        ProductSpec::new(rats(a), rats(b), rats(e), start).unwrap()
    }

    #[test]
    fn decomposition() {
        // k² = 2·binom_3 − binom_2
        assert_eq!(binomial_decomposition(&rats(&["0", "0", "1"])), rats(&["0", "-1", "2"]));
        assert_eq!(binomial_decomposition(&rats(&["1"])), rats(&["1"]));
        assert_eq!(binomial_decomposition(&rats(&["3", "1"])), rats(&["3", "1"]));
    }

    #[test]
    fn wallis() {
        let s = spec(&["0", "0"], &["-1/2", "1/2"], &["1"], 1);
        let raw = theorem_form(&s).unwrap();
        assert_eq!(raw.raw_string(), "Gamma(1/2)*Gamma(3/2)*Gamma(1)^(-2)");
        assert_eq!(closed_form(&s).unwrap().to_string(), "pi/2");
    }

    #[test]
    fn worked_examples() {
        let cases = [
            (spec(&["3/10", "7/10"], &["1/6", "5/6"], &["1"], 0), "2*sinpi(3/10)"),
            (
                spec(
                    &["-1/4", "-1/4", "-1/4", "3/4"],
                    &["-3/4", "1/4", "1/4", "1/4"],
                    &["0", "1"],
                    1,
                ),
                "exp(2*K/pi)",
            ),
            (
                spec(
                    &["1/3", "5/3", "5/3", "7/3"],
                    &["2/3", "4/3", "4/3", "8/3"],
                    &["0", "1"],
                    1,
                ),
                "4/5",
            ),
            (
                spec(
                    &["-1/2", "-1/2", "1/4", "3/4"],
                    &["-3/4", "-1/4", "1/2", "1/2"],
                    &["0", "1"],
                    1,
                ),
                "2^(1/2)",
            ),
            (
                spec(
                    &["0", "0", "0", "3/2", "3/2", "3/2"],
                    &["-1/2", "1/2", "1/2", "1", "1", "2"],
                    &["0", "0", "1"],
                    1,
                ),
                "8*A^12 / (e*pi^3*2^(1/3))",
            ),
            (
                spec(
                    &["0", "0", "0", "3/2", "3/2", "3/2"],
                    &["-1/2", "1/2", "1/2", "1", "1", "2"],
                    &["0", "1"],
                    1,
                ),
                "pi^2/8",
            ),
        ];
        for (s, want) in cases {
            assert_eq!(closed_form(&s).unwrap().to_string(), want, "{s}");
        }
    }

    #[test]
    fn closed_forms_match_numerics() {
        let ctx = PrecCtx::bits(128);
        for s in [
            spec(
                &["0", "0", "0", "3/2", "3/2", "3/2"],
                &["-1/2", "1/2", "1/2", "1", "1", "2"],
                &["0", "0", "1"],
                1,
            ),
            spec(&["1/3", "1/3", "4/3"], &["0", "1", "1"], &["1"], 1),
            spec(&["1/5", "1/2", "3/2", "9/5"], &["1", "1", "1/3", "5/3"], &["1"], 1),
            spec(
                &["0", "0", "0", "3/2", "3/2", "3/2"],
                &["-1/2", "1/2", "1/2", "1", "1", "2"],
                &["2", "1", "1"],
                1,
            ),
        ] {
            let cf = closed_form(&s).unwrap();
            let v = eval_closed_form(&cf, &ctx).unwrap();
            let p = eval_product(&s, &ctx).unwrap().value;
            assert!(v.add_error_f64(1e-30).overlaps(&p), "{s}: {cf} = {v} vs {p}");
        }
    }

    #[test]
    fn violation_is_reported() {
        let s = spec(&["0", "1"], &["1/2", "1/3"], &["1"], 1);
        assert!(matches!(closed_form(&s), Err(Error::ConstraintViolation(_))));
        let s = spec(&["1", "2"], &["0", "3"], &["0", "1"], 1);
        assert!(matches!(closed_form(&s), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn type3_specs() {
        let t3 = binom_exponent(3);
        let s = ProductSpec::new(
            rats(&["1/3", "5/3", "5/3", "7/3"]),
            rats(&["2/3", "4/3", "4/3", "8/3"]),
            t3.clone(),
            1,
        );
        // order-3 power sums differ here
        assert!(matches!(
            closed_form_typen(&s.unwrap(), 3),
            Err(Error::ConstraintViolation(_))
        ));
        let s = ProductSpec::new(
            rats(&["0", "0", "0", "3/2", "3/2", "3/2"]),
            rats(&["-1/2", "1/2", "1/2", "1", "1", "2"]),
            t3.clone(),
            1,
        )
        .unwrap();
        let cf = closed_form_typen(&s, 3).unwrap();
        assert!(cf.is_fully_reduced().unwrap());
        let expected: ClosedForm = "1 / (pi^(3/2)*G(1/2)^4)".parse().unwrap();
        assert_eq!(cf, expected.reduce().unwrap());
        assert!(matches!(closed_form_typen(&s, 2), Err(Error::InvalidSpec(_))));
        // {0,4,7,11} and {1,2,9,10} share power sums through order 3
        let s = ProductSpec::new(
            rats(&["0", "4/7", "1", "11/7"]),
            rats(&["1/7", "2/7", "9/7", "10/7"]),
            t3,
            1,
        )
        .unwrap();
        let cf = closed_form_typen(&s, 3).unwrap();
        assert!(!cf.is_fully_reduced().unwrap());
        assert!(cf.to_string().contains("Gamma_3(1/7)"), "{cf}");
        assert!(closed_form_typen(&s, 0).is_err());
        let w = ProductSpec::type1(rats(&["0", "0"]), rats(&["-1/2", "1/2"]), 1).unwrap();
        assert_eq!(closed_form_type1(&w).unwrap().to_string(), "pi/2");
        assert!(closed_form_type2(&w).is_err());
    }
}
