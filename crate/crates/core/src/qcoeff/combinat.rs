//! Symmetric q-integers, q-binomials, q-binomial functions and the
//! q-difference operator.

use crate::error::Result;
use crate::qcoeff::{QScalar, UniPoly};
use crate::verdict::Verdict;

/// The symmetric q-integer `[k] = (q^k - q^{-k}) / (q - q^{-1})`.
pub fn q_int(k: i64) -> QScalar {
    let n = k.abs();
    let sign = if k < 0 { -1 } else { 1 };
    QScalar::from_terms((0..n).map(|j| {
        (
            2 * (n - 1 - 2 * j),
            num_rational::BigRational::from_integer(sign.into()),
        )
    }))
}

/// `[k]! = [1][2]...[k]`.
pub fn q_fact(k: u32) -> QScalar {
    (1..=k as i64).fold(QScalar::one(), |acc, j| &acc * &q_int(j))
}

/// The symmetric q-binomial, zero outside `0 <= r <= n`.
pub fn q_binom(n: u32, r: i64) -> QScalar {
    if r < 0 || r > n as i64 {
        return QScalar::zero();
    }
    let r = r as u32;
    q_fact(n)
        .exact_div(&(&q_fact(r) * &q_fact(n - r)))
        .expect("q-binomial quotient is a Laurent polynomial")
}

/// `q - q^{-1}`.
pub fn q_minus_q_inv() -> QScalar {
    &QScalar::q_pow(1) - &QScalar::q_pow(-1)
}

/// The finite Pochhammer product `(c x; q^2)_n = prod_{k<n} (1 - c q^{2k} x)`
/// with `c = q^{half_exp/2}`.
pub fn pochhammer_x(half_exp: i64, n: u32) -> UniPoly {
    (0..n as i64).fold(UniPoly::one(), |acc, k| {
        let factor = &UniPoly::one() - &UniPoly::monomial(QScalar::s_pow(half_exp + 4 * k), 1);
        &acc * &factor
    })
}

/// The scalar Pochhammer `(a; q^2)_n`.
pub fn pochhammer_scalar(a: &QScalar, n: u32) -> QScalar {
    (0..n as i64).fold(QScalar::one(), |acc, k| {
        &acc * &(&QScalar::one() - &a.shift(4 * k))
    })
}

/// The q-binomial function `(1 - x)^a_{q^2}`.
///
/// For `a >= 0` this is the exact polynomial `(q^{1-a} x; q^2)_a` and `order`
/// is ignored. For `a < 0` it is the expansion of
/// `1 / prod_{j<|a|} (1 - q^{a+1+2j} x)` truncated after `x^order`.
pub fn q_power_binomial(a: i64, order: u32) -> UniPoly {
    if a >= 0 {
        return pochhammer_x(2 * (1 - a), a as u32);
    }
    let k = -a;
    let order = order as i64;
    let mut acc = UniPoly::one().truncate(order);
    for j in 0..k {
        let ratio = 2 * (a + 1 + 2 * j);
        let geometric = UniPoly::from_terms((0..=order).map(|t| (t, QScalar::s_pow(ratio * t))))
            .truncate(order);
        acc = &acc * &geometric;
    }
    acc
}

/// Checks `sum_r [n; r] (-z)^r = (q^{1-n} z; q^2)_n` as polynomials in `z`.
pub fn q_binom_theorem_check(n: u32) -> Verdict {
    let lhs = UniPoly::from_terms(
        (0..=n as i64).map(|r| (r, q_binom(n, r).scale_int(if r % 2 == 0 { 1 } else { -1 }))),
    );
    let rhs = pochhammer_x(2 * (1 - n as i64), n);
    if lhs == rhs {
        Verdict::pass()
    } else {
        Verdict::fail(format!("n={n}: lhs = {lhs}, rhs = {rhs}"))
    }
}

/// Checks `sum_r [n; r] (-q^i)^r = 0` for every `i` in `1-n, 3-n, ..., n-1`.
pub fn q_binom_vanishing_check(n: u32) -> Verdict {
    let n_i = n as i64;
    let poly = UniPoly::from_terms(
        (0..=n_i).map(|r| (r, q_binom(n, r).scale_int(if r % 2 == 0 { 1 } else { -1 }))),
    );
    for i in (1 - n_i..=n_i - 1).step_by(2) {
        let value = poly.eval_at_monomial(2 * i);
        if !value.is_zero() {
            return Verdict::fail(format!("n={n}, i={i}: value {value}"));
        }
    }
    Verdict::pass()
}

/// The q-difference operator `(f(qx) - f(q^{-1}x)) / ((q - q^{-1}) x)`.
pub fn d_q(f: &UniPoly) -> Result<UniPoly> {
    let diff = &f.scale_variable(2) - &f.scale_variable(-2);
    Ok(diff.div_coefficients(&q_minus_q_inv())?.shift_exponent(-1))
}

/// `n`-fold application of [`d_q`].
pub fn d_q_iterate(f: &UniPoly, n: u32) -> Result<UniPoly> {
    let mut g = f.clone();
    for _ in 0..n {
        g = d_q(&g)?;
    }
    Ok(g)
}
