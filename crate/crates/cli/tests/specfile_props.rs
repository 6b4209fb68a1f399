use proptest::prelude::*;
use wallis::product::{binom_exponent, ProductSpec};
use wallis::Rat;
use wallis_cli::specfile::{parse_exponent, render_exponent, SpecFile};

fn rat() -> impl Strategy<Value = Rat> {
    (1i64..=16).prop_flat_map(|d| (0i64..=5 * d).prop_map(move |n| Rat::new(n, d)))
}

fn signed_rat() -> impl Strategy<Value = Rat> {
    (1i64..=9, -30i64..=30).prop_map(|(d, n)| Rat::new(n, d))
}

fn exponent() -> impl Strategy<Value = Vec<Rat>> {
    prop_oneof![
        (1u32..=5).prop_map(binom_exponent),
        Just(vec![Rat::int(0), Rat::int(0), Rat::one()]),
        // non-negative on k ≥ 0 so any spec accepts it
        prop::collection::vec((0i64..=9, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d)), 1..=4),
    ]
}

fn spec_file() -> impl Strategy<Value = SpecFile> {
    (1usize..=4, exponent(), 0u32..=1, any::<bool>())
        .prop_flat_map(|(n, e, start, with_expect)| {
            (
                prop::collection::vec(rat(), n),
                prop::collection::vec(rat(), n),
                Just(e),
                Just(start),
                Just(with_expect),
            )
        })
        .prop_filter_map("invalid spec", |(a, b, e, start, with_expect)| {
            let spec = ProductSpec::new(a, b, e, start).ok()?;
            let f = SpecFile::new(spec);
            Some(if with_expect {
                f.with_expect("8*A^12 / (e*pi^3*2^(1/3))")
            } else {
                f
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(f in spec_file()) {
        let text = f.render();
        let back = SpecFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        // and the CRLF form reads the same
        prop_assert_eq!(SpecFile::parse(&text.replace('\n', "\r\n")).unwrap(), f);
    }

    #[test]
    fn exponent_text_round_trips(mut c in prop::collection::vec(signed_rat(), 1..=5)) {
        while c.len() > 1 && c.last().unwrap().is_zero() {
            c.pop();
        }
        let text = render_exponent(&c);
        let mut back = parse_exponent(&text, 1, 1).unwrap();
        while back.len() > 1 && back.last().unwrap().is_zero() {
            back.pop();
        }
        prop_assert_eq!(back, c, "{}", text);
    }
}
