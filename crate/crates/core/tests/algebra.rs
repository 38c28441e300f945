//! Ring laws for the coefficient field and the polynomial ring, checked
//! against evaluation at rational points.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qkm::polyring::{MultiPoly, Var};
use qkm::qcoeff::{q_binom, q_fact, q_int};
use qkm::{Error, QScalar};

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-6i64..=6, -20i64..=20, 1i64..=6), 0..5)
        .prop_map(|ts| QScalar::from_terms(ts.into_iter().map(|(e, n, d)| (e, big(n, d)))))
}

// numerators near the top of i64 push products through the wide paths
fn wide_scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-3i64..=3, any::<i64>(), 1i64..=i64::MAX), 1..4)
        .prop_map(|ts| QScalar::from_terms(ts.into_iter().map(|(e, n, d)| (e, big(n, d)))))
}

fn at(x: &QScalar, s: i64) -> BigRational {
    x.eval_at_rational(&big(s, 1)).unwrap()
}

proptest! {
    #[test]
    fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in wide_scalar(), b in wide_scalar(), s in prop::sample::select(vec![-3i64, 2, 5])) {
        prop_assert_eq!(at(&(&a * &b), s), at(&a, s) * at(&b, s));
        prop_assert_eq!(at(&(&a + &b), s), at(&a, s) + at(&b, s));
    }

    #[test]
    fn exact_division_inverts_multiplication(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn bar_is_an_involutive_ring_map(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn text_round_trips(a in wide_scalar()) {
        let back: QScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn polynomial_text_round_trips(ts in prop::collection::vec((prop::collection::vec(-2i32..=3, 3), scalar()), 0..5)) {
        let p = MultiPoly::from_terms(2, ts);
        prop_assert_eq!(MultiPoly::parse(2, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn symmetrisation(ts in prop::collection::vec((prop::collection::vec(0i32..=3, 4), scalar()), 0..4)) {
        let p = MultiPoly::from_terms(3, ts);
        prop_assert!(p.symmetrize().is_symmetric());
        prop_assert!(p.symmetrize().antisymmetrize().is_zero());
        let alt = p.antisymmetrize();
        if !alt.is_zero() {
            // alternants are divisible by the Vandermonde
            let v = MultiPoly::vandermonde(3);
            let quot = alt.exact_div(&v).unwrap();
            prop_assert_eq!(&quot * &v, alt);
        }
    }
}

#[test]
fn q_numbers_match_their_definitions() {
    // [k] at q = 4 (s = 2) is (4^k - 4^-k) / (4 - 1/4)
    for k in -4i64..=6 {
        let q = big(4, 1);
        let want = (q.pow(k as i32) - q.pow(-k as i32)) / (q.clone() - q.recip());
        assert_eq!(at(&q_int(k), 2), want, "[{k}]");
    }
    assert_eq!(q_fact(3), &(&q_int(2) * &q_int(3)) * &q_int(1));
    assert_eq!(
        q_binom(4, 2),
        q_fact(4).exact_div(&(&q_fact(2) * &q_fact(2))).unwrap()
    );
    assert!(q_binom(3, 5).is_zero());
    assert!(q_binom(3, -1).is_zero());
}

#[test]
fn division_errors() {
    let a = &QScalar::q_pow(1) + &QScalar::one();
    assert_eq!(a.exact_div(&QScalar::zero()), Err(Error::DivisionByZero));
    assert!(matches!(
        QScalar::one().exact_div(&a),
        Err(Error::InexactDivision(_))
    ));
    // monomials are units in the Laurent ring, binomials are not
    let z1 = MultiPoly::var(2, Var::Z(1));
    let z2 = MultiPoly::var(2, Var::Z(2));
    assert!(z1.exact_div(&z2).is_ok());
    assert!((&z1 + &z2).exact_div(&(&z1 - &z2)).is_err());
}

#[test]
fn malformed_text_is_rejected() {
    for bad in ["q^", "1*q^x", "1/0", "+"] {
        assert!(bad.parse::<QScalar>().is_err(), "{bad}");
    }
    assert!(MultiPoly::parse(2, "z3").is_err());
}
