//! Standalone identities: the Serre polynomial identity and its rational
//! form, Hall-Littlewood polynomials, and the q-difference lemmas.

mod diff;
mod hall_littlewood;
mod serre;

pub use diff::{diff1_check, diff2_check, diff_lemma_suite, pascal_check};
pub use hall_littlewood::{
    factorial_v_lambda, hl_combination, hl_expand, hl_poly, parse_tuple, v_lambda, Partition,
};
pub use serre::{ser2_expression, ser2_summand, ser3_check, serre_coefficient_check};
