//! Closed forms: construction, canonical printing, parsing and evaluation,
//! plus the product theorems and transforms that produce them.

mod eval;
mod form;
mod parse;
mod theorems;
mod transforms;

pub use eval::{eval_closed_form, eval_monomial, eval_tree};
pub use form::{print_closed_form, Atom, ClosedForm, Monomial};
pub use parse::parse_closed_form;
pub use theorems::{
    binomial_decomposition, closed_form, closed_form_type1, closed_form_type2, closed_form_typen, theorem_form,
};
pub use transforms::{
    analogue_type2, cancel_common, double_product_reduce, gen_radical, gen_rational, reduced, DoubleProduct,
    GammaTemplate,
};
