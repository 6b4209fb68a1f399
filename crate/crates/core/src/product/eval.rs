use rayon::prelude::*;

use super::moments::moments_of;
use super::{poly_eval, ratio_at, required_order, ProductSpec};
use crate::arith::{Ball, PrecCtx, Rat};
use crate::error::{Error, Result};
use crate::special::{hurwitz_zeta_rat, pow2};

/// Terms per chunk of the partial sum. Chunks are summed left to right and
/// then combined pairwise in a fixed tree, in both sequential and parallel
/// mode, so the two modes give bit-identical balls.
const CHUNK: i64 = 512;

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    /// Last explicit index `K`; raised if needed so that `K + 1 > 2 max|param|`.
    pub terms: Option<u64>,
    pub parallel: bool,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    /// `Σ_{k=start}^{K} E(k) ln ratio(k)`.
    pub log_partial: Ball,
    /// Certified value of `Σ_{k>K} E(k) ln ratio(k)`.
    pub tail: Ball,
    pub log_value: Ball,
    pub value: Ball,
    pub k_used: u64,
    pub constraint_order_used: usize,
}

/// Parameters of a log-sum `Σ_{k≥start} E(k) ln ratio(k)`; unlike
/// [`ProductSpec`] the start index is unrestricted.
pub(crate) struct FactorSet<'a> {
    pub a: &'a [Rat],
    pub b: &'a [Rat],
    pub exponent: &'a [Rat],
    pub start: i64,
}

impl<'a> FactorSet<'a> {
    fn of(spec: &'a ProductSpec) -> Self {
        FactorSet {
            a: spec.a(),
            b: spec.b(),
            exponent: spec.exponent(),
            start: spec.start() as i64,
        }
    }

    fn max_param(&self) -> Rat {
        self.a.iter().chain(self.b).map(Rat::abs).max().unwrap_or_default()
    }
}

pub fn eval_product(spec: &ProductSpec, ctx: &PrecCtx) -> Result<EvalReport> {
    eval_product_with(spec, ctx, &EvalOptions::default())
}

pub fn eval_product_with(spec: &ProductSpec, ctx: &PrecCtx, opts: &EvalOptions) -> Result<EvalReport> {
    let order = required_order(spec);
    let moments = moments_of(spec.a(), spec.b(), order);
    if let Some(bad) = moments.first_failure() {
        return Err(Error::ConstraintViolation(format!(
            "exponent of degree {} needs power sums equal through order {order}; {bad}",
            spec.degree()
        )));
    }
    let (log_partial, tail, k_used) = log_sum_general(&FactorSet::of(spec), order, opts, ctx.prec_bits())?;
    let prec = ctx.prec_bits();
    let log_value = log_partial.add_ball(&tail);
    let value = log_value.exp().with_prec(prec + 8);
    ctx.check(&value)?;
    Ok(EvalReport {
        log_partial: log_partial.with_prec(prec + 8),
        tail: tail.with_prec(prec + 8),
        log_value: log_value.with_prec(prec + 8),
        value,
        k_used,
        constraint_order_used: order,
    })
}

/// `Σ_{k=start}^{K} E(k) ln ratio(k)` with no tail and no constraint check;
/// shows what a truncated product does when the power sums do not match.
pub fn partial_log_sum(spec: &ProductSpec, k_max: u64, ctx: &PrecCtx) -> Result<Ball> {
    let w = working_prec(ctx.prec_bits(), k_max);
    partial(&FactorSet::of(spec), k_max as i64, w, true)
}

fn working_prec(prec: u32, k_max: u64) -> u32 {
    prec + 32 + 2 * (64 - k_max.leading_zeros())
}

/// Partial sum up to `K` and certified tail, assuming power sums agree
/// through `order`.
pub(crate) fn log_sum_general(
    f: &FactorSet<'_>,
    order: usize,
    opts: &EvalOptions,
    prec: u32,
) -> Result<(Ball, Ball, u64)> {
    let m = f.max_param();
    let m_ceil = m.ceil().to_u64().unwrap_or(u64::MAX / 8);
    let floor_k = (2 * m.floor().to_u64().unwrap_or(u64::MAX / 8) + 1).max(f.start.max(0) as u64);
    let k = opts.terms.unwrap_or_else(|| 64.max(4 * m_ceil)).max(floor_k);
    let w = working_prec(prec, k);
    let partial = partial(f, k as i64, w, opts.parallel)?;
    let tail = tail(f, order, k, &m, w)?;
    Ok((partial, tail, k))
}

fn term(f: &FactorSet<'_>, k: i64, w: u32) -> Result<Ball> {
    let e = poly_eval(f.exponent, &Rat::int(k));
    if e.is_zero() {
        return Ok(Ball::zero(w));
    }
    let d = ratio_at(f.a, f.b, k) - Rat::one();
    Ok(Ball::from_rat(&d, w).ln_1p()?.mul_rat(&e))
}

fn partial(f: &FactorSet<'_>, k_max: i64, w: u32, parallel: bool) -> Result<Ball> {
    if k_max < f.start {
        return Ok(Ball::zero(w));
    }
    let chunks: Vec<(i64, i64)> = (f.start..=k_max)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK - 1).min(k_max)))
        .collect();
    let sum_chunk = |&(lo, hi): &(i64, i64)| -> Result<Ball> {
        let mut acc = Ball::zero(w);
        for k in lo..=hi {
            acc = acc.add_ball(&term(f, k, w)?);
        }
        Ok(acc)
    };
    let sums: Vec<Ball> = if parallel {
        chunks.par_iter().map(sum_chunk).collect::<Result<_>>()?
    } else {
        chunks.iter().map(sum_chunk).collect::<Result<_>>()?
    };
    Ok(tree_sum(sums, w))
}

fn tree_sum(mut v: Vec<Ball>, w: u32) -> Ball {
    if v.is_empty() {
        return Ball::zero(w);
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|p| match p {
                [x, y] => x.add_ball(y),
                [x] => x.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    v.pop().unwrap()
}

/// `Σ_{k>K} E(k) Σ_{j>r} (−1)^{j−1} ΔS_j / (j k^j)` with `ΔS_j = Σa^j − Σb^j`,
/// resummed as `Σ_j (−1)^{j−1} (ΔS_j / j) Σ_m c_m ζ(j−m, K+1)` and cut at
/// `j = J` with the geometric bound
/// `2iC (1 + (K+1)/(J−d)) (K+1)^d q^{J+1} / ((J+1)(1−q))`,
/// `q = M/(K+1)`, `C = Σ|c_m|`, `M = max|param|`.
fn tail(f: &FactorSet<'_>, order: usize, k: u64, m: &Rat, w: u32) -> Result<Ball> {
    let mut out = Ball::zero(w);
    if m.is_zero() {
        return Ok(out);
    }
    let d = f.exponent.len() - 1;
    let kp1 = Rat::from(k + 1);
    let q = (m / &kp1).to_f64();
    debug_assert!(q < 0.5 + 1e-12);
    let i = f.a.len() as f64;
    let c_abs: f64 = f.exponent.iter().map(|c| c.abs().to_f64()).sum::<f64>() * (1.0 + 1e-12);
    let log2_k1 = ((k + 1) as f64).log2();

    let mut pa: Vec<Rat> = f.a.to_vec();
    let mut pb: Vec<Rat> = f.b.to_vec();
    let mut j = 1usize;
    loop {
        if j > order {
            let ds: Rat = pa.iter().sum::<Rat>() - pb.iter().sum::<Rat>();
            if !ds.is_zero() {
                let mut z = Ball::zero(w);
                for (mm, c) in f.exponent.iter().enumerate() {
                    if !c.is_zero() {
                        let s = Rat::int((j - mm) as i64);
                        z = z.add_ball(&hurwitz_zeta_rat(&s, &kp1, w)?.mul_rat(c));
                    }
                }
                let mut coef = ds / Rat::int(j as i64);
                if j % 2 == 0 {
                    coef = -coef;
                }
                out = out.add_ball(&z.mul_rat(&coef));
            }
            if j > d + 1 {
                let jf = j as f64;
                let log2_bound =
                    (2.0 * i * c_abs * (1.0 + (k + 1) as f64 / (jf - d as f64)) / ((jf + 1.0) * (1.0 - q))).log2()
                        + d as f64 * log2_k1
                        + (jf + 1.0) * q.log2();
                if log2_bound < -(w as f64) - 8.0 {
                    return Ok(out.add_error(&pow2(log2_bound.ceil() as i64 + 1)));
                }
            }
        }
        for x in pa.iter_mut().zip(f.a) {
            *x.0 *= x.1;
        }
        for x in pb.iter_mut().zip(f.b) {
            *x.0 *= x.1;
        }
        j += 1;
    }
}
