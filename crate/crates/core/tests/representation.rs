//! The lattice, the Fock module, vertex operators and the harness from the
//! outside.

use proptest::prelude::*;

use qkm::fock::{enumerate_basis, FockBasisKey, FockVector, Mode};
use qkm::harness::{run_suite, verify_relation, RelationTag, Report, SuiteConfig};
use qkm::lattice::{CartanData, RootVector};
use qkm::vertex::{ModeSpec, Sign, VertexRep};
use qkm::{Error, QScalar};

fn a2() -> CartanData {
    CartanData::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
}

fn invariant(m: Vec<Vec<i64>>) -> Option<&'static str> {
    match CartanData::new(m) {
        Err(Error::InvalidCartan { invariant, .. }) => Some(invariant),
        _ => None,
    }
}

#[test]
fn cartan_validation_names_the_invariant() {
    assert_eq!(invariant(vec![vec![2, -1], vec![-2, 2]]), Some("symmetry"));
    assert_eq!(invariant(vec![vec![2, 1], vec![1, 2]]), Some("sign"));
    assert_eq!(invariant(vec![vec![1]]), Some("diagonal"));
    assert_eq!(invariant(vec![vec![2, 0]]), Some("shape"));
    assert!(CartanData::new(vec![vec![2, -3], vec![-3, 2]]).is_ok());
}

#[test]
fn cartan_file_round_trips() {
    let c = a2();
    assert_eq!(CartanData::from_json(&c.to_json()).unwrap(), c);
    let text = r#"{"rank": 2, "matrix": [[2, -1], [-1, 2]]}"#;
    assert_eq!(CartanData::from_json(text).unwrap(), c);
    let wrong_rank = r#"{"rank": 3, "matrix": [[2, -1], [-1, 2]]}"#;
    assert!(CartanData::from_json(wrong_rank).is_err());
}

fn root_vector() -> impl Strategy<Value = RootVector> {
    prop::collection::vec(-3i64..=3, 2).prop_map(RootVector)
}

proptest! {
    #[test]
    fn cocycle_twists_commutation(a in root_vector(), b in root_vector()) {
        let c = a2();
        let twist = c.cocycle(&a, &b).unwrap() * c.cocycle(&b, &a).unwrap();
        let expected = if c.pairing(&a, &b).unwrap() % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(twist, expected);
    }

    #[test]
    fn x_modes_are_linear(
        picks in prop::collection::vec((0usize..50, -3i64..=3), 1..4),
        n in -2i64..=2,
        plus in any::<bool>(),
    ) {
        let c = a2();
        let rep = VertexRep::new(&c);
        let keys = enumerate_basis(&c, 2, 1);
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let mut v = FockVector::zero();
        let mut images = FockVector::zero();
        for (k, coeff) in picks {
            let key = keys[k % keys.len()].clone();
            let coeff = QScalar::from_int(coeff);
            v.add_term(key.clone(), coeff.clone());
            let image = rep.x_mode(0, sign, n, &FockVector::basis(key)).unwrap();
            images.add_scaled(&image, &coeff);
        }
        prop_assert_eq!(rep.x_mode(0, sign, n, &v).unwrap(), images);
    }
}

#[test]
fn lowest_modes_on_the_vacuum() {
    // X^+(z) |0> = exp(sum_n a(-n)/[n] q^{-n/2} z^n) e^alpha, so the z^0 and
    // z^1 coefficients are e^alpha and q^{-1/2} a(-1) e^alpha
    let c = CartanData::new(vec![vec![2]]).unwrap();
    let rep = VertexRep::new(&c);
    let vac = FockVector::vacuum(1);
    let alpha = RootVector(vec![1]);
    let e_alpha = FockBasisKey::new(vec![], alpha.clone()).unwrap();
    let a1_e_alpha = FockBasisKey::new(vec![Mode { root: 0, n: 1 }], alpha).unwrap();
    assert_eq!(
        rep.x_mode(0, Sign::Plus, -1, &vac).unwrap(),
        FockVector::basis(e_alpha)
    );
    assert_eq!(
        rep.x_mode(0, Sign::Plus, -2, &vac).unwrap(),
        FockVector::term(a1_e_alpha, QScalar::s_pow(-1))
    );
    // modes above the lattice power annihilate the vacuum
    assert!(rep.x_mode(0, Sign::Plus, 0, &vac).unwrap().is_zero());
}

#[test]
fn heisenberg_modes_commute_as_expected() {
    // [a_1(1), a_1(-1)] = [2]/1 at level one, so a_1(1) a_1(-1) |0> = [2] |0>
    let c = CartanData::new(vec![vec![2]]).unwrap();
    let rep = VertexRep::new(&c);
    let word = [
        ModeSpec::A { root: 0, n: 1 },
        ModeSpec::A { root: 0, n: -1 },
    ];
    let got = rep.apply_word(&word, &FockVector::vacuum(1)).unwrap();
    let two = &QScalar::s_pow(2) + &QScalar::s_pow(-2);
    assert_eq!(got, FockVector::term(FockBasisKey::vacuum(1), two));
}

#[test]
fn basis_enumeration_counts() {
    // rank 1, degree <= 2: partitions 1 + 1 + 2, three lattice points
    let c = CartanData::new(vec![vec![2]]).unwrap();
    assert_eq!(enumerate_basis(&c, 2, 1).len(), 12);
    // rank 2: 1 + 2 + 5 states on nine lattice points
    assert_eq!(enumerate_basis(&a2(), 2, 1).len(), 72);
    assert!(FockBasisKey::new(vec![Mode { root: 0, n: 0 }], RootVector(vec![0])).is_err());
}

fn small_config(relations: Vec<RelationTag>) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(a2());
    cfg.degree_cap = 1;
    cfg.relations = relations;
    cfg
}

#[test]
fn report_json_round_trips_byte_identically() {
    let report = run_suite(&small_config(vec![RelationTag::R2, RelationTag::R8])).unwrap();
    let text = report.to_json();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), text);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let mut one = small_config(vec![RelationTag::R6, RelationTag::R7Printed]);
    one.workers = 1;
    let mut two = one.clone();
    two.workers = 2;
    let a = run_suite(&one).unwrap().without_timing();
    let b = run_suite(&two).unwrap().without_timing();
    assert_eq!(a, b);
}

#[test]
fn printed_exchange_form_is_refuted() {
    let report = run_suite(&small_config(vec![RelationTag::R7, RelationTag::R7Printed])).unwrap();
    assert!(report.relation("R7").unwrap().passed());
    let printed = report.relation("R7_PRINTED").unwrap();
    assert!(!printed.passed());
    assert!(!printed.witnesses.is_empty());
}

#[test]
fn serre_cost_guard() {
    let c = CartanData::new(vec![vec![2, -4], vec![-4, 2]]).unwrap();
    let cfg = SuiteConfig::new(c);
    assert!(matches!(
        verify_relation(&cfg, RelationTag::Serre),
        Err(Error::CostGuard(_))
    ));
}

#[test]
fn invalid_configurations() {
    let mut cfg = small_config(vec![]);
    assert!(matches!(run_suite(&cfg), Err(Error::InvalidConfig(_))));
    cfg.relations = vec![RelationTag::R2];
    cfg.mode_range = 0;
    assert!(matches!(run_suite(&cfg), Err(Error::InvalidConfig(_))));
    assert!("R11".parse::<RelationTag>().is_err());
    assert_eq!("serre".parse::<RelationTag>().unwrap(), RelationTag::Serre);
}
