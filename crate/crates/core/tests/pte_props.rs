use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallis::product::check_moments;
use wallis::pte::{pte_search, pte_to_spec, PTEQuery, PTESolution};
use wallis::Rat;

/// Known solutions of order 1, 2 and 3.
const SEEDS: &[(u32, &[i64], &[i64])] = &[
    (1, &[0, 3], &[1, 2]),
    (2, &[0, 4, 5], &[1, 2, 6]),
    (2, &[0, 3, 5, 6], &[1, 2, 4, 7]),
    (3, &[0, 4, 7, 11], &[1, 2, 9, 10]),
];

fn power_sums_agree(a: &[i64], b: &[i64], order: u32) -> bool {
    (1..=order).all(|j| a.iter().map(|x| x.pow(j)).sum::<i64>() == b.iter().map(|x| x.pow(j)).sum::<i64>())
}

#[test]
fn planted_solutions_are_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..40 {
        let &(order, a, b) = SEEDS.choose(&mut rng).unwrap();
        // random affine image with positive integer scale, then reflect half the time
        let scale = rng.gen_range(1..=2);
        let shift = rng.gen_range(0..=3);
        let reflect = rng.gen_bool(0.5);
        let top = 11 * scale + shift;
        let map = |v: &[i64]| -> Vec<i64> {
            v.iter()
                .map(|x| {
                    let y = scale * x + shift;
                    if reflect {
                        top - y
                    } else {
                        y
                    }
                })
                .collect()
        };
        let (pa, pb) = (map(a), map(b));
        let height = *pa.iter().chain(&pb).max().unwrap() as u32 + rng.gen_range(0..=2);
        let planted = PTESolution::canonical(&pa, &pb).unwrap();
        let got = pte_search(&PTEQuery::new(order, a.len() as u32, height));
        assert!(
            got.contains(&planted),
            "planted {pa:?} | {pb:?} not found at height {height}"
        );
    }
}

#[test]
fn emitted_solutions_pass_exact_checks() {
    for (o, s, h) in [(1, 2, 8), (2, 3, 10), (2, 4, 8), (3, 4, 12)] {
        let got = pte_search(&PTEQuery::new(o, s, h));
        assert!(!got.is_empty(), "order {o} size {s} height {h}");
        for sol in &got {
            assert!(power_sums_agree(&sol.a, &sol.b, o));
            let spec = pte_to_spec(sol, o, &Rat::one(), &Rat::zero()).unwrap();
            assert!(check_moments(&spec, o as usize).satisfies(o as usize));
        }
    }
}

fn solution() -> impl Strategy<Value = PTESolution> {
    (1u32..=2, 0usize..64).prop_filter_map("no solution at this index", |(order, idx)| {
        let all = pte_search(&PTEQuery::new(order, order + 1, 9));
        all.get(idx % all.len().max(1)).cloned()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent(a in prop::collection::vec(-20i64..20, 2..6), b in prop::collection::vec(-20i64..20, 2..6)) {
        if let Some(s) = PTESolution::canonical(&a, &b) {
            let t = PTESolution::canonical(&s.a, &s.b).unwrap();
            prop_assert_eq!(t, s);
        }
    }

    #[test]
    fn affine_images_keep_the_constraint(sol in solution(), p in 1i64..20, q in 1i64..20, s in -5i64..20, t in 1i64..12) {
        let n = sol.matched_order;
        let scale = Rat::new(p, q);
        let shift = Rat::new(s, t);
        match pte_to_spec(&sol, n, &scale, &shift) {
            Ok(spec) => prop_assert!(check_moments(&spec, n as usize).satisfies(n as usize)),
            Err(e) => prop_assert!(shift <= Rat::int(-1), "unexpected rejection: {e}"),
        }
    }
}
