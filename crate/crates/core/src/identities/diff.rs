//! The q-difference lemmas used to resolve the exchange relations.

use crate::harness::{RelationReport, Witness};
use crate::qcoeff::{
    d_q, d_q_iterate, q_binom, q_int, q_minus_q_inv, q_power_binomial, QScalar, UniPoly,
};
use crate::verdict::Verdict;

/// `D_q (1 - x)^a_{q^2} = -[a] (1 - x)^{a-1}_{q^2}`. For `a < 0` both sides are
/// compared as series through `x^order - 1`.
pub fn diff1_check(a: i64, order: u32) -> Verdict {
    let lhs = match d_q(&q_power_binomial(a, order)) {
        Ok(p) => p,
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let mut rhs = q_power_binomial(a - 1, order).scale(&-q_int(a));
    if let Some(o) = lhs.order() {
        rhs = rhs.truncate(o);
    }
    if lhs == rhs {
        Verdict::pass()
    } else {
        Verdict::fail(format!("a={a}: D_q gives {lhs}, expected {rhs}"))
    }
}

/// The closed form
/// `D_q^n f(x) = ((q - q^{-1}) x)^{-n} sum_i (-1)^i q^{(n-1)(2i-n)/2} [n; i] f(q^{n-2i} x)`
/// against `n` applications of `D_q`.
pub fn diff2_check(n: u32, f: &UniPoly) -> Verdict {
    let iterated = match d_q_iterate(f, n) {
        Ok(p) => p,
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let ni = n as i64;
    let mut sum = UniPoly::zero();
    for i in 0..=ni {
        // (n-1)(2i-n) is even, so the power of q is an integer
        let e = (ni - 1) * (2 * i - ni) / 2;
        let c = q_binom(n, i)
            .shift(2 * e)
            .scale_int(if i % 2 == 0 { 1 } else { -1 });
        sum = &sum + &f.scale_variable(2 * (ni - 2 * i)).scale(&c);
    }
    let closed = match sum.div_coefficients(&q_minus_q_inv().pow(n)) {
        Ok(p) => p.shift_exponent(-ni),
        Err(e) => return Verdict::fail(e.to_string()),
    };
    if closed == iterated {
        Verdict::pass()
    } else {
        Verdict::fail(format!(
            "n={n}, f={f}: iterated {iterated}, closed form {closed}"
        ))
    }
}

/// The Pascal rule `[n; i] = q^{-i} [n-1; i] + q^{n-i} [n-1; i-1]` used in the
/// inductive step of the closed form.
pub fn pascal_check(n: u32) -> Verdict {
    for i in 0..=n as i64 {
        let lhs = q_binom(n, i);
        let rhs =
            &q_binom(n - 1, i).shift(-2 * i) + &q_binom(n - 1, i - 1).shift(2 * (n as i64 - i));
        if lhs != rhs {
            return Verdict::fail(format!("n={n}, i={i}: {lhs} vs {rhs}"));
        }
    }
    Verdict::pass()
}

/// Both lemmas for `1 <= n <= n_max`: the first on `(1 - x)^{+-n}`, the
/// second on monomials `x^k`, `0 <= k <= n_max`, and on `(1 - x)^k`.
pub fn diff_lemma_suite(n_max: u32) -> RelationReport {
    let mut cases: Vec<(String, Verdict)> = Vec::new();
    let order = n_max + 2;
    for n in 1..=n_max as i64 {
        cases.push((format!("diff1 a={n}"), diff1_check(n, order)));
        cases.push((format!("diff1 a={}", -n), diff1_check(-n, order)));
    }
    for n in 1..=n_max {
        cases.push((format!("pascal n={n}"), pascal_check(n)));
        for k in 0..=n_max as i64 {
            let mono = UniPoly::monomial(QScalar::one(), k);
            cases.push((format!("diff2 n={n} x^{k}"), diff2_check(n, &mono)));
            let binom = q_power_binomial(k, 0);
            cases.push((format!("diff2 n={n} (1-x)^{k}"), diff2_check(n, &binom)));
        }
    }
    let mut report = RelationReport::new("DIFF");
    report.instances_checked = cases.len() as u64;
    for (label, v) in cases {
        if !v.holds {
            report.record_failure(Witness {
                word: label,
                input: "-".into(),
                expected: "equal".into(),
                actual: v.witness.unwrap_or_default(),
            });
        }
    }
    report
}
