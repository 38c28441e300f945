//! The coefficient ring `Q[q^{1/2}, q^{-1/2}]`, univariate series over it, and
//! q-combinatorics.

mod combinat;
mod rat;
mod scalar;
mod series;

pub use combinat::{
    d_q, d_q_iterate, pochhammer_scalar, pochhammer_x, q_binom, q_binom_theorem_check,
    q_binom_vanishing_check, q_fact, q_int, q_minus_q_inv, q_power_binomial,
};
pub use scalar::{sign_pow, QScalar};
pub use series::UniPoly;
