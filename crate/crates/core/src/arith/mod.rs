//! Exact rationals and precision-tracked reals.

mod ball;
mod rat;

pub use ball::{Ball, RAD_PREC};
pub use rat::{rat_pow_sum, Rat};

use crate::error::{Error, Result};

/// Working precision and requested final absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecCtx {
    prec_bits: u32,
    target_abs_tol: f64,
}

impl PrecCtx {
    pub const MIN_PREC: u32 = 16;

    pub fn new(prec_bits: u32, target_abs_tol: f64) -> Result<Self> {
        if prec_bits < Self::MIN_PREC {
            return Err(Error::InvalidSpec(format!(
                "precision {prec_bits} below the minimum of {} bits",
                Self::MIN_PREC
            )));
        }
        if !(target_abs_tol > 0.0 && target_abs_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "tolerance must be positive and finite, got {target_abs_tol}"
            )));
        }
        Ok(PrecCtx {
            prec_bits,
            target_abs_tol,
        })
    }

    /// Precision-only context; the tolerance is `2^(4 - prec)`.
    pub fn bits(prec_bits: u32) -> Self {
        let prec_bits = prec_bits.max(Self::MIN_PREC);
        PrecCtx {
            prec_bits,
            target_abs_tol: 2f64.powi(4 - prec_bits as i32),
        }
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec_bits
    }

    pub fn target_abs_tol(&self) -> f64 {
        self.target_abs_tol
    }

    pub fn with_prec(&self, prec_bits: u32) -> Self {
        PrecCtx {
            prec_bits: prec_bits.max(Self::MIN_PREC),
            target_abs_tol: self.target_abs_tol,
        }
    }

    pub fn doubled(&self) -> Self {
        self.with_prec(self.prec_bits.saturating_mul(2))
    }

    /// `Err(ToleranceNotMet)` when `value` is wider than the target.
    pub fn check(&self, value: &Ball) -> Result<()> {
        let achieved = value.rad_f64();
        if achieved > self.target_abs_tol {
            return Err(Error::ToleranceNotMet {
                achieved,
                target: self.target_abs_tol,
                prec_bits: self.prec_bits,
            });
        }
        Ok(())
    }
}

impl Default for PrecCtx {
    fn default() -> Self {
        PrecCtx {
            prec_bits: 128,
            target_abs_tol: 1e-25,
        }
    }
}

/// Runs `f` at the context precision, doubling it after each
/// `ToleranceNotMet` until `cap_bits` is exceeded.
pub fn with_escalation<T>(ctx: &PrecCtx, cap_bits: u32, mut f: impl FnMut(&PrecCtx) -> Result<T>) -> Result<T> {
    let mut cur = *ctx;
    loop {
        match f(&cur) {
            Err(Error::ToleranceNotMet { .. }) if cur.prec_bits() * 2 <= cap_bits => {
                cur = cur.doubled();
            }
            other => return other,
        }
    }
}
