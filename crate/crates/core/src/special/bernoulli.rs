use std::sync::OnceLock;

use parking_lot::RwLock;
use rug::Integer;

use crate::arith::Rat;

/// Exact Bernoulli numbers `B_m` (convention `B_1 = -1/2`), extended on demand.
pub struct BernoulliTable {
    values: RwLock<Vec<Rat>>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: RwLock::new(vec![Rat::one(), Rat::new(-1, 2)]),
        }
    }

    /// Process-wide table shared by every evaluation routine.
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(BernoulliTable::new)
    }

    pub fn get(&self, m: usize) -> Rat {
        if let Some(b) = self.values.read().get(m) {
            return b.clone();
        }
        let mut values = self.values.write();
        extend(&mut values, m);
        values[m].clone()
    }

    pub fn len(&self) -> usize {
        self.values.read().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

/// `Σ_{k=0}^{m} C(m+1, k) B_k = 0`, solved for `B_m`.
fn extend(values: &mut Vec<Rat>, upto: usize) {
    while values.len() <= upto {
        let m = values.len();
        if m % 2 == 1 {
            values.push(Rat::zero());
            continue;
        }
        let mut binom = Integer::from(1); // C(m+1, 0)
        let mut acc = Rat::zero();
        for (k, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += &(b * &Rat::from(binom.clone()));
            }
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        values.push(-acc / Rat::int(m as i64 + 1));
    }
}

pub fn bernoulli(m: usize) -> Rat {
    BernoulliTable::global().get(m)
}
