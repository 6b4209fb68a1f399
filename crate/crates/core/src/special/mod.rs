//! Special functions and constants with certified error bounds.

mod barnes;
mod bernoulli;
mod constants;
mod gamma;
mod zeta;

pub use barnes::{barnes_lng, check_g_duplication};
pub use bernoulli::{bernoulli, BernoulliTable};
pub use constants::{
    const_catalan, const_e, const_gamma, const_glaisher, const_ln2, const_ln_glaisher, const_pi, ln_glaisher_limit,
    Constant, ConstantCache,
};
pub use gamma::{check_reflection, lngamma};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_deriv, zeta_deriv_at_minus1};

pub(crate) use zeta::{hurwitz_zeta_rat, pow2};
