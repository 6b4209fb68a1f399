//! Search for pairs of integer multisets with equal power sums
//! (Prouhet–Tarry–Escott solutions) and their conversion to products.

use std::collections::{BTreeSet, HashMap};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::product::{binom_exponent, check_moments, ProductSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PTEQuery {
    /// Power sums must agree for exponents `1..=order`.
    pub order: u32,
    /// Elements per side.
    pub size: u32,
    /// Entries are drawn from `0..=height`.
    pub height: u32,
    /// Maximum number of solutions returned.
    pub limit: usize,
}

impl PTEQuery {
    pub fn new(order: u32, size: u32, height: u32) -> Self {
        PTEQuery {
            order,
            size,
            height,
            limit: usize::MAX,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    /// Equal-size disjoint solutions need `order < size`.
    pub fn is_satisfiable(&self) -> bool {
        self.order >= 1 && self.size >= 2 && self.height >= 1 && self.order < self.size
    }
}

/// Disjoint sorted sides with `min = 0`, oriented so `a < b`, and the
/// lexicographically least image under reflection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PTESolution {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    /// Largest `j` with equal power sums through order `j`.
    pub matched_order: u32,
}

impl PTESolution {
    /// Builds the canonical representative of `(a, b)`; `None` when the
    /// sides differ in size or coincide as multisets.
    pub fn canonical(a: &[i64], b: &[i64]) -> Option<PTESolution> {
        if a.len() != b.len() {
            return None;
        }
        let (a, b) = remove_common(a, b);
        if a.is_empty() {
            return None;
        }
        let matched_order = matched_order(&a, &b);
        let refl = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let best = [orient(&a, &b), orient(&refl(&a), &refl(&b))]
            .into_iter()
            .min()
            .unwrap();
        Some(PTESolution {
            a: best.0,
            b: best.1,
            matched_order,
        })
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }
}

fn remove_common(a: &[i64], b: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j) = (0, 0);
    let (mut ka, mut kb) = (Vec::new(), Vec::new());
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            ka.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            kb.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    ka.extend_from_slice(&a[i..]);
    kb.extend_from_slice(&b[j..]);
    (ka, kb)
}

/// Shift to `min = 0`, sort, order the two sides.
fn orient(a: &[i64], b: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let m = a.iter().chain(b).copied().min().unwrap_or(0);
    let mut a: Vec<i64> = a.iter().map(|x| x - m).collect();
    let mut b: Vec<i64> = b.iter().map(|x| x - m).collect();
    a.sort_unstable();
    b.sort_unstable();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn to_rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::int(x)).collect()
}

fn matched_order(a: &[i64], b: &[i64]) -> u32 {
    let report = crate::product::moments_of(&to_rats(a), &to_rats(b), a.len());
    report.max_matched_order as u32
}

/// All canonical solutions within the query bounds, sorted. Every
/// multiset of `size` entries from `0..=height` is bucketed by its vector
/// of power sums; pairs inside a bucket are solutions.
pub fn pte_search(q: &PTEQuery) -> Vec<PTESolution> {
    if !q.is_satisfiable() || q.limit == 0 {
        return Vec::new();
    }
    let mut buckets: HashMap<Vec<u128>, Vec<Vec<i64>>> = HashMap::new();
    let mut cur = Vec::with_capacity(q.size as usize);
    multisets(q.size as usize, 0, q.height as i64, &mut cur, &mut |m| {
        buckets.entry(power_sums(m, q.order)).or_default().push(m.to_vec());
    });
    let mut found = BTreeSet::new();
    for group in buckets.values() {
        for (i, x) in group.iter().enumerate() {
            for y in &group[i + 1..] {
                if disjoint(x, y) {
                    if let Some(s) = PTESolution::canonical(x, y) {
                        debug_assert!(s.matched_order >= q.order);
                        found.insert(s);
                    }
                }
            }
        }
    }
    found.into_iter().take(q.limit).collect()
}

fn multisets(k: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        multisets(k, x, hi, cur, f);
        cur.pop();
    }
}

fn power_sums(m: &[i64], order: u32) -> Vec<u128> {
    (1..=order)
        .map(|j| m.iter().map(|&x| (x as u128).pow(j)).sum())
        .collect()
}

/// Sorted inputs.
fn disjoint(x: &[i64], y: &[i64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Type-n product with `a = scale·sol.a + shift`, `b = scale·sol.b + shift`,
/// starting at `k = 1`. Power-sum equality survives affine maps, so the
/// constraint holds through order `n`.
pub fn pte_to_spec(sol: &PTESolution, n: u32, scale: &Rat, shift: &Rat) -> Result<ProductSpec> {
    if n == 0 || n > sol.matched_order {
        return Err(Error::ConstraintViolation(format!(
            "solution matches power sums through order {}, not {n}",
            sol.matched_order
        )));
    }
    if !scale.is_positive() {
        return Err(Error::InvalidTransform(format!("scale must be positive, got {scale}")));
    }
    let map = |v: &[i64]| v.iter().map(|&x| &(&Rat::int(x) * scale) + shift).collect::<Vec<_>>();
    let spec = ProductSpec::new(map(&sol.a), map(&sol.b), binom_exponent(n), 1)
        .map_err(|e| Error::InvalidTransform(format!("affine image is not a valid product: {e}")))?;
    debug_assert!(check_moments(&spec, n as usize).satisfies(n as usize));
    Ok(spec)
}
