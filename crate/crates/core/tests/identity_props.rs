use proptest::prelude::*;
use wallis::identity::{
    analogue_type2, closed_form_type1, closed_form_type2, double_product_reduce, eval_closed_form, ClosedForm,
};
use wallis::product::{eval_product, ProductSpec};
use wallis::{PrecCtx, Rat};

fn ctx() -> PrecCtx {
    PrecCtx::new(128, 1e-28).unwrap()
}

/// Rational in (−1/2, 4] with denominator at most 12.
fn param() -> impl Strategy<Value = Rat> {
    (1i64..=12).prop_flat_map(|d| ((-d / 2 + 1)..=(4 * d)).prop_map(move |n| Rat::new(n, d)))
}

fn in_range(x: &Rat) -> bool {
    *x > Rat::new(-1, 2) && *x <= Rat::int(4)
}

/// Type-I spec: the last `b` closes the order-1 sum.
fn type1_spec() -> impl Strategy<Value = ProductSpec> {
    (1usize..=3, any::<bool>())
        .prop_flat_map(|(m, zero_start)| {
            (
                prop::collection::vec(param(), m + 1),
                prop::collection::vec(param(), m),
                Just(zero_start),
            )
        })
        .prop_filter_map("closing parameter out of range", |(a, mut b, zero_start)| {
            let last = a.iter().sum::<Rat>() - b.iter().sum::<Rat>();
            if !in_range(&last) {
                return None;
            }
            b.push(last);
            let start = if zero_start && a.iter().chain(&b).all(Rat::is_positive) {
                0
            } else {
                1
            };
            ProductSpec::type1(a, b, start).ok()
        })
}

/// `a = X ∪ (Y+t)`, `b = (X+t) ∪ Y` with `|X| = |Y|`, `ΣX = ΣY`, which
/// matches power sums through order 2.
fn type2_spec(dens: &'static [i64]) -> impl Strategy<Value = ProductSpec> {
    let p = move || {
        prop::sample::select(dens).prop_flat_map(|d| ((-d / 2 + 1)..=(3 * d)).prop_map(move |n| Rat::new(n, d)))
    };
    (1usize..=2)
        .prop_flat_map(move |m| (prop::collection::vec(p(), m + 1), prop::collection::vec(p(), m), p()))
        .prop_filter_map("out of range", |(x, mut y, t)| {
            let last = x.iter().sum::<Rat>() - y.iter().sum::<Rat>();
            if !in_range(&last) || t.is_zero() {
                return None;
            }
            y.push(last);
            let a: Vec<Rat> = x.iter().cloned().chain(y.iter().map(|v| v + &t)).collect();
            let b: Vec<Rat> = x.iter().map(|v| v + &t).chain(y.iter().cloned()).collect();
            if a.iter().chain(&b).any(|v| *v <= Rat::int(-1) || *v > Rat::int(4)) {
                return None;
            }
            ProductSpec::type2(a, b, 1).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn type1_round_trip(spec in type1_spec()) {
        let c = ctx();
        let cf = closed_form_type1(&spec).unwrap();
        let v = eval_closed_form(&cf, &c).unwrap();
        let p = eval_product(&spec, &c).unwrap().value;
        prop_assert!(v.overlaps(&p), "{spec}: {cf} = {v} vs {p}");
    }

    #[test]
    fn analogue_equivalence(spec in type1_spec()) {
        let c = ctx();
        let t2 = analogue_type2(&spec).unwrap();
        let lhs = eval_product(&spec, &c).unwrap().value;
        let rhs = eval_product(&t2, &c).unwrap().value;
        prop_assert!(lhs.overlaps(&rhs), "{spec} vs {t2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn type2_round_trip(spec in type2_spec(&[1, 2, 4])) {
        let c = ctx();
        let cf = closed_form_type2(&spec).unwrap();
        let v = eval_closed_form(&cf, &c).unwrap();
        let p = eval_product(&spec, &c).unwrap().value;
        prop_assert!(v.overlaps(&p), "{spec}: {cf} = {v} vs {p}");
    }

    #[test]
    fn type2_residual_route(spec in type2_spec(&[3, 5, 6])) {
        let c = ctx();
        let d = double_product_reduce(&spec).unwrap();
        let p = eval_product(&spec, &c).unwrap().value;
        let r = d.eval_residual(8, &c).unwrap();
        prop_assert!(r.overlaps(&p), "{spec}: {r} vs {p}");
        if let Some(reduced) = &d.reduced {
            let q = eval_product(reduced, &c).unwrap().value;
            prop_assert!(q.overlaps(&p), "{spec} reduced to {reduced}");
        }
    }
}

fn atom() -> impl Strategy<Value = ClosedForm> {
    let arg = (1i64..12, 2i64..13)
        .prop_map(|(n, d)| Rat::new(n, d))
        .prop_filter("sinpi vanishes at integers", |r| !r.is_integer());
    prop_oneof![
        (1i64..30).prop_map(ClosedForm::int),
        Just(ClosedForm::Pi),
        Just(ClosedForm::E),
        Just(ClosedForm::EulerGamma),
        Just(ClosedForm::Catalan),
        Just(ClosedForm::Glaisher),
        arg.clone().prop_map(ClosedForm::GammaAt),
        arg.clone().prop_map(ClosedForm::BarnesGAt),
        arg.clone().prop_map(|r| ClosedForm::MultiGammaAt { level: 3, arg: r }),
        // sin(πr) > 0 keeps fractional powers real
        arg.clone().prop_map(|r| ClosedForm::SinPi(r.fract_floor())),
        arg.prop_map(|r| ClosedForm::mul(vec![ClosedForm::rat(r), ClosedForm::Catalan, ClosedForm::Pi.recip()]).exp()),
    ]
}

fn tree() -> impl Strategy<Value = ClosedForm> {
    prop::collection::vec((atom(), -3i64..=3, 1i64..=3), 1..6)
        .prop_map(|fs| ClosedForm::mul(fs.into_iter().map(|(a, p, q)| a.pow(Rat::new(p, q))).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Printing then parsing recovers the canonical monomial, so distinct
    /// canonical forms print distinctly.
    #[test]
    fn print_is_injective(t in tree(), u in tree()) {
        let m = t.canonical().unwrap();
        let n = u.canonical().unwrap();
        let (sm, sn) = (m.to_string(), n.to_string());
        prop_assert_eq!(sm.parse::<ClosedForm>().unwrap().canonical().unwrap(), m.clone());
        prop_assert_eq!(sm == sn, m == n);
    }

    #[test]
    fn canonical_form_is_stable(t in tree()) {
        let once = t.reduce().unwrap();
        prop_assert_eq!(once.reduce().unwrap(), once.clone());
        prop_assert_eq!(once.to_string(), t.to_string());
    }
}
