//! The polynomial identities behind the Serre relation.

use itertools::Itertools;

use crate::polyring::{q_shifted_product, MultiPoly, Var};
use crate::qcoeff::{pochhammer_scalar, q_binom, QScalar};
use crate::verdict::Verdict;

/// `prod_{i<j} (z_i - c z_j)`.
fn twisted_vandermonde(m: usize, c: &QScalar) -> MultiPoly {
    let pairs: Vec<(Var, Var, QScalar)> = (1..=m)
        .tuple_combinations()
        .map(|(i, j)| (Var::Z(i), Var::Z(j), c.clone()))
        .collect();
    q_shifted_product(m, &pairs)
}

/// `sum_r [m; r] prod_{a<=r} (w - c z_a) prod_{a>r} (z_a - c w)`.
fn binomial_part(m: u32, c: &QScalar) -> MultiPoly {
    let mu = m as usize;
    let terms: Vec<MultiPoly> = (0..=mu)
        .map(|r| {
            let pairs: Vec<(Var, Var, QScalar)> = (1..=mu)
                .map(|a| {
                    if a <= r {
                        (Var::W, Var::Z(a), c.clone())
                    } else {
                        (Var::Z(a), Var::W, c.clone())
                    }
                })
                .collect();
            q_shifted_product(mu, &pairs).scale(&q_binom(m, r as i64))
        })
        .collect();
    crate::polyring::sum_polys(mu, terms.iter())
}

/// The summand of the Serre identity before antisymmetrisation:
/// `sum_r [m; r] prod_{a<=r} (w - q^{1-m} z_a) prod_{a>r} (z_a - q^{1-m} w) prod_{i<j} (z_i - q^{-2} z_j)`.
pub fn ser2_summand(m: u32) -> MultiPoly {
    &binomial_part(m, &QScalar::q_pow(1 - m as i64))
        * &twisted_vandermonde(m as usize, &QScalar::q_pow(-2))
}

/// The fully expanded alternating sum over `S_m` of [`ser2_summand`]; the
/// identity asserts it is zero.
pub fn ser2_expression(m: u32) -> MultiPoly {
    assert!(m >= 1, "ser2_expression needs m >= 1");
    ser2_summand(m).antisymmetrize()
}

/// The rational identity
/// `sum_sigma sigma . sum_r [m; r] prod (w - q^{m-1} z_a) prod (z_a - q^{m-1} w) prod_{i<j} (z_i - q^2 z_j)/(z_i - z_j) = 0`.
///
/// Multiplying by the Vandermonde turns each `sigma`-term into the signed
/// permutation of the numerator, so the cleared form is the antisymmetrised
/// numerator. That numerator is also checked to be exactly the `q -> q^{-1}`
/// image of [`ser2_summand`] (relating constant 1), so the cleared form is the
/// bar image of [`ser2_expression`].
pub fn ser3_check(m: u32) -> Verdict {
    assert!(m >= 1, "ser3_check needs m >= 1");
    let mu = m as usize;
    let numerator = &binomial_part(m, &QScalar::q_pow(m as i64 - 1))
        * &twisted_vandermonde(mu, &QScalar::q_pow(2));
    let cleared = numerator.antisymmetrize();
    if !cleared.is_zero() {
        return Verdict::fail(format!("cleared Ser3 (m={m}) = {cleared}"));
    }
    let bar = ser2_summand(m).bar();
    if numerator != bar {
        return Verdict::fail(format!(
            "Ser3 numerator differs from bar(Ser2 summand) for m={m}: {}",
            &numerator - &bar
        ));
    }
    Verdict::pass()
}

/// The `w^0` coefficient of the Serre identity: it equals
/// `z_1 ... z_m (q^{2-2m}; q^2)_m antisym(prod_{i<j} (z_i - q^{-2} z_j))`, and
/// the Pochhammer factor vanishes through its factor `1 - q^0`.
pub fn serre_coefficient_check(m: u32) -> Verdict {
    assert!(m >= 1, "serre_coefficient_check needs m >= 1");
    let mu = m as usize;
    let extracted = ser2_summand(m).coefficient_of(Var::W, 0).antisymmetrize();
    let poch = pochhammer_scalar(&QScalar::q_pow(2 - 2 * m as i64), m);
    let mut z_all = vec![1; mu];
    z_all.push(0);
    let displayed = twisted_vandermonde(mu, &QScalar::q_pow(-2))
        .antisymmetrize()
        .mul_monomial(&z_all, &poch);
    if extracted != displayed {
        return Verdict::fail(format!(
            "w^0 coefficient (m={m}) {extracted} differs from {displayed}"
        ));
    }
    // the binomial theorem step: sum_r [m; r] (-q^{1-m})^r = (q^{2-2m}; q^2)_m
    let sum: QScalar = (0..=m as i64)
        .map(|r| {
            q_binom(m, r)
                .shift(2 * r * (1 - m as i64))
                .scale_int(if r % 2 == 0 { 1 } else { -1 })
        })
        .sum();
    if sum != poch {
        return Verdict::fail(format!("binomial sum {sum} differs from Pochhammer {poch}"));
    }
    // factor k = m-1 of (q^{2-2m}; q^2)_m is 1 - q^{2-2m+2(m-1)} = 1 - q^0
    let vanishing = &QScalar::one() - &QScalar::q_pow(2 - 2 * m as i64 + 2 * (m as i64 - 1));
    if !vanishing.is_zero() || !poch.is_zero() {
        return Verdict::fail(format!("Pochhammer factor {poch} is not zero"));
    }
    Verdict::pass()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ser2_small() {
        for m in 1..=3 {
            assert!(ser2_expression(m).is_zero(), "m = {m}");
        }
        // the summand itself is not zero
        assert!(!ser2_summand(2).is_zero());
    }

    #[test]
    fn ser3_small() {
        for m in 1..=3 {
            let v = ser3_check(m);
            assert!(v.holds, "{:?}", v.witness);
        }
    }

    #[test]
    fn serre_coefficient_small() {
        for m in 1..=3 {
            let v = serre_coefficient_check(m);
            assert!(v.holds, "{:?}", v.witness);
        }
    }
}
