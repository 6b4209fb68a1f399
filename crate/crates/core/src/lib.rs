pub mod arith;
pub mod error;
pub mod identity;
pub mod product;
pub mod pte;
pub mod special;

pub use arith::{rat_pow_sum, Ball, PrecCtx, Rat};
pub use error::{Error, Result};
