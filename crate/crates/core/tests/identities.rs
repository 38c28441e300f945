//! Hall-Littlewood expansions and the Serre identities at small sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qkm::identities::{
    factorial_v_lambda, hl_combination, hl_expand, hl_poly, ser2_expression, ser2_summand,
    serre_coefficient_check, v_lambda, Partition,
};
use qkm::polyring::MultiPoly;
use qkm::{Error, QScalar};

fn scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-2i64..=2, -5i64..=5), 1..3).prop_map(|ts| {
        QScalar::from_terms(
            ts.into_iter()
                .map(|(e, n)| (2 * e, BigRational::from_integer(BigInt::from(n)))),
        )
    })
}

fn partition(max_size: u32, max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0i64..=max_size as i64, max_len)
        .prop_map(|v| Partition::new(v).unwrap())
        .prop_filter("size bound", move |p| p.size() <= max_size)
}

proptest! {
    #[test]
    fn expansion_recovers_combinations(
        m in 1usize..=3,
        parts in prop::collection::vec((partition(4, 3), scalar()), 1..4),
    ) {
        let mut p = MultiPoly::zero(m);
        for (lambda, c) in &parts {
            if lambda.len() <= m {
                p = &p + &hl_poly(&lambda.padded(0), m).unwrap().scale(c);
            }
        }
        let coeffs = hl_expand(&p, m).unwrap();
        prop_assert_eq!(hl_combination(&coeffs, m).unwrap(), p);
        for (lambda, c) in &coeffs {
            prop_assert!(lambda.len() <= m);
            prop_assert!(!c.is_zero());
        }
    }

    #[test]
    fn partition_text_round_trips(p in partition(8, 5)) {
        if !p.is_empty() {
            prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        }
    }

    #[test]
    fn hl_polynomials_are_monic_and_symmetric(lambda in partition(4, 3), extra in 0usize..=1) {
        let m = lambda.len().max(1) + extra;
        let p = hl_poly(&lambda.padded(0), m).unwrap();
        prop_assert!(p.is_symmetric());
        let mut lead = lambda.padded(m);
        lead.push(0);
        prop_assert!(p.coeff(&lead).is_one());
        prop_assert_eq!(p.leading_term().map(|(e, _)| e.clone()), Some(lead));
    }
}

#[test]
fn normalisations_differ_beyond_two_parts() {
    // the multiplicity normalisation is what makes P_{1,1,1} monic in three
    // variables; the factorial one differs from it
    let lambda = Partition::new(vec![1, 1, 1]).unwrap();
    let p = hl_poly(&lambda.padded(0), 3).unwrap();
    assert!(p.coeff(&[1, 1, 1, 0]).is_one());
    assert_ne!(v_lambda(&lambda.padded(3), 3), factorial_v_lambda(&lambda));
}

#[test]
fn expansion_rejects_bad_input() {
    let z1 = MultiPoly::var(2, qkm::polyring::Var::Z(1));
    assert!(matches!(hl_expand(&z1, 2), Err(Error::Domain(_))));
    assert!(matches!(
        hl_expand(&z1, 3),
        Err(Error::ArityMismatch { .. })
    ));
    let w = MultiPoly::var(2, qkm::polyring::Var::W);
    assert!(hl_expand(&w, 2).is_err());
}

#[test]
fn serre_identities_small() {
    // at m = 1 the two binomial terms already cancel before antisymmetrising
    assert!(ser2_summand(1).is_zero());
    for m in 1..=3 {
        assert!(m == 1 || !ser2_summand(m).is_zero());
        assert!(ser2_expression(m).is_zero(), "m={m}");
        assert!(serre_coefficient_check(m).holds, "m={m}");
    }
}
