use std::fmt;

use super::ProductSpec;
use crate::arith::{rat_pow_sum, Rat};

/// Power sums of order `j` on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentOrder {
    pub j: u32,
    pub sum_a: Rat,
    pub sum_b: Rat,
    pub equal: bool,
}

impl MomentOrder {
    /// `Σ a^j − Σ b^j`.
    pub fn difference(&self) -> Rat {
        &self.sum_a - &self.sum_b
    }
}

impl fmt::Display for MomentOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equal {
            write!(f, "order {}: OK", self.j)
        } else {
            write!(f, "order {}: FAIL ({} ≠ {})", self.j, self.sum_a, self.sum_b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub orders: Vec<MomentOrder>,
    /// Largest `n` with every order `j ≤ n` matched.
    pub max_matched_order: usize,
}

impl MomentReport {
    pub fn satisfies(&self, order: usize) -> bool {
        self.max_matched_order >= order
    }

    /// First unmatched order, if any.
    pub fn first_failure(&self) -> Option<&MomentOrder> {
        self.orders.iter().find(|o| !o.equal)
    }
}

/// Exact comparison of `Σ a^j` and `Σ b^j` for `j = 1..=j_max`.
pub fn check_moments(spec: &ProductSpec, j_max: usize) -> MomentReport {
    moments_of(spec.a(), spec.b(), j_max)
}

pub(crate) fn moments_of(a: &[Rat], b: &[Rat], j_max: usize) -> MomentReport {
    let orders: Vec<MomentOrder> = (1..=j_max as u32)
        .map(|j| {
            let sum_a = rat_pow_sum(a, j);
            let sum_b = rat_pow_sum(b, j);
            let equal = sum_a == sum_b;
            MomentOrder { j, sum_a, sum_b, equal }
        })
        .collect();
    let max_matched_order = orders.iter().take_while(|o| o.equal).count();
    MomentReport {
        orders,
        max_matched_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rats(xs: &[&str]) -> Vec<Rat> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn wallis_constants() {
        let s = ProductSpec::type1(rats(&["0", "0"]), rats(&["-1/2", "1/2"]), 1).unwrap();
        let m = check_moments(&s, 3);
        assert!(m.orders[0].equal);
        assert!(!m.orders[1].equal);
        assert_eq!(m.orders[1].sum_a, Rat::zero());
        assert_eq!(m.orders[1].sum_b, Rat::new(1, 2));
        assert_eq!(m.max_matched_order, 1);
        assert_eq!(m.orders[1].to_string(), "order 2: FAIL (0 ≠ 1/2)");
    }

    #[test]
    fn catalan_exponential_constants() {
        let a = rats(&["-1/4", "-1/4", "-1/4", "3/4"]);
        let b = rats(&["-3/4", "1/4", "1/4", "1/4"]);
        let m = moments_of(&a, &b, 4);
        assert_eq!(m.max_matched_order, 2);
        // Σa³ = (−3 + 27)/64, Σb³ = (−27 + 3)/64
        assert_eq!(m.orders[2].sum_a, Rat::new(24, 64));
        assert_eq!(m.orders[2].sum_b, Rat::new(-24, 64));
    }

    proptest! {
        #[test]
        fn identical_lists_match_every_order(xs in prop::collection::vec((0i64..40, 1i64..12), 1..6)) {
            let a: Vec<Rat> = xs.iter().map(|&(n, d)| Rat::new(n, d)).collect();
            let s = ProductSpec::type1(a.clone(), a, 1).unwrap();
            let m = check_moments(&s, 6);
            prop_assert_eq!(m.max_matched_order, 6);
            prop_assert!(m.first_failure().is_none());
        }

        #[test]
        fn max_order_consistent(xs in prop::collection::vec(-5i64..6, 2..5), ys in prop::collection::vec(-5i64..6, 2..5)) {
            prop_assume!(xs.len() == ys.len());
            let a: Vec<Rat> = xs.iter().map(|&x| Rat::int(x)).collect();
            let b: Vec<Rat> = ys.iter().map(|&x| Rat::int(x)).collect();
            let m = moments_of(&a, &b, 5);
            for o in &m.orders[..m.max_matched_order] {
                prop_assert!(o.equal);
            }
            if let Some(o) = m.orders.get(m.max_matched_order) {
                prop_assert!(!o.equal);
            }
        }
    }
}
