//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every check is exact.
//!
//! Values that the library derives (Gaussian binomials, iterated q-derivatives,
//! Schur polynomials, T3 partial fractions) are compared against oracles
//! built here from first principles rather than through the library.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use qkm::fock::enumerate_basis;
use qkm::harness::{
    run_suite, serre_tuples, t3_coefficients, verify_relation, verify_t3, RelationTag, SuiteConfig,
    SERRE_TUPLES,
};
use qkm::identities::{
    diff1_check, diff2_check, hl_combination, hl_expand, hl_poly, ser2_expression, ser3_check,
    Partition,
};
use qkm::lattice::CartanData;
use qkm::polyring::MultiPoly;
use qkm::qcoeff::{d_q_iterate, q_binom, q_binom_theorem_check, q_binom_vanishing_check};
use qkm::{QScalar, UniPoly};

const SUITE_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn cartan(rows: &[&[i64]]) -> CartanData {
    CartanData::new(rows.iter().map(|r| r.to_vec()).collect()).expect("valid test matrix")
}

fn a1() -> CartanData {
    cartan(&[&[2]])
}

fn a2() -> CartanData {
    cartan(&[&[2, -1], &[-1, 2]])
}

fn b2() -> CartanData {
    cartan(&[&[2, -2], &[-2, 2]])
}

fn b3() -> CartanData {
    cartan(&[&[2, -3], &[-3, 2]])
}

fn orthogonal() -> CartanData {
    cartan(&[&[2, 0], &[0, 2]])
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `[k]` at a rational `q`, straight from `(q^k - q^-k) / (q - q^-1)`.
fn q_int_at(k: i64, q: &BigRational) -> BigRational {
    let qk = q.pow(k as i32);
    (qk.clone() - qk.recip()) / (q.clone() - q.recip())
}

/// Gaussian binomial `[n; r]` at `q` as `prod_{k=1}^r [n-k+1]/[k]`.
fn gauss_at(n: i64, r: i64, q: &BigRational) -> BigRational {
    if r < 0 || r > n {
        return BigRational::zero();
    }
    (1..=r).fold(BigRational::one(), |acc, k| {
        acc * q_int_at(n - k + 1, q) / q_int_at(k, q)
    })
}

fn ser2() -> Outcome {
    for m in 1..=5 {
        let p = ser2_expression(m);
        if !p.is_zero() {
            return Outcome::new(false, format!("m={m} leaves {} terms", p.len()));
        }
    }
    Outcome::new(true, "m=1..5 identically zero")
}

fn ser3() -> Outcome {
    for m in 1..=5 {
        let v = ser3_check(m);
        if !v.holds {
            return Outcome::new(false, v.witness.unwrap_or_default());
        }
    }
    Outcome::new(true, "m=1..5, cleared form zero and equal to the bar image")
}

fn binomial() -> Outcome {
    for n in 0..=10 {
        for v in [q_binom_theorem_check(n), q_binom_vanishing_check(n)] {
            if !v.holds {
                return Outcome::new(false, format!("n={n}: {}", v.witness.unwrap_or_default()));
            }
        }
    }
    // q = 4, so q^{1/2} = 2 is rational
    let s = rat(2);
    let q = rat(4);
    for n in 0..=10i64 {
        for r in 0..=n {
            let got = q_binom(n as u32, r).eval_at_rational(&s).unwrap();
            if got != gauss_at(n, r, &q) {
                return Outcome::new(false, format!("[{n}; {r}] at q=4 is {got}"));
            }
        }
    }
    Outcome::new(
        true,
        "theorem and vanishing for n<=10, values match the product formula",
    )
}

fn difference() -> Outcome {
    for a in 1..=8i64 {
        for a in [a, -a] {
            let v = diff1_check(a, 12);
            if !v.holds {
                return Outcome::new(false, v.witness.unwrap_or_default());
            }
        }
    }
    for n in 1..=5u32 {
        for k in 0..=8i64 {
            let xk = UniPoly::monomial(QScalar::one(), k);
            let v = diff2_check(n, &xk);
            if !v.holds {
                return Outcome::new(false, v.witness.unwrap_or_default());
            }
            // D_q^n x^k = [k][k-1]..[k-n+1] x^{k-n}, checked at q = 4
            let got = d_q_iterate(&xk, n).unwrap();
            let falling =
                (0..n as i64).fold(BigRational::one(), |acc, t| acc * q_int_at(k - t, &rat(4)));
            let expected_deg = k - n as i64;
            let ok = if falling.is_zero() {
                got.is_zero()
            } else {
                got.terms().count() == 1
                    && got.coeff(expected_deg).eval_at_rational(&rat(2)).unwrap() == falling
            };
            if !ok {
                return Outcome::new(false, format!("D_q^{n} x^{k} = {got}"));
            }
        }
    }
    Outcome::new(true, "diff1 for |a|<=8, diff2 for n<=5 on x^k, k<=8")
}

fn relation_suite() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, c) in [("A1", a1()), ("A2", a2()), ("a=-2", b2()), ("a=-3", b3())] {
        let mut cfg = SuiteConfig::new(c);
        cfg.relations = vec![
            RelationTag::R2,
            RelationTag::R3,
            RelationTag::R4,
            RelationTag::R5,
            RelationTag::R6,
            RelationTag::R7,
            RelationTag::R8,
        ];
        let start = Instant::now();
        let report = match run_suite(&cfg) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("{name}: {e}")),
        };
        let took = start.elapsed();
        if !report.all_pass() {
            pass = false;
            let failing: Vec<&str> = report
                .relations
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.relation.as_str())
                .collect();
            details.push(format!("{name} fails {failing:?}"));
        } else if took > SUITE_BUDGET {
            pass = false;
            details.push(format!("{name} took {took:?}"));
        } else {
            details.push(format!("{name} {:.1}s", took.as_secs_f64()));
        }
    }
    Outcome::new(pass, details.join(", "))
}

fn serre() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for c in [orthogonal(), a2(), b2(), b3()] {
        let m = (1 - c.entry(0, 1)) as usize;
        let tuples = serre_tuples(m, 2, SERRE_TUPLES);
        let keys = enumerate_basis(&c, 2, 1).len() as u64;
        let cfg = SuiteConfig::new(c);
        let start = Instant::now();
        let report = match verify_relation(&cfg, RelationTag::Serre) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("m={m}: {e}")),
        };
        // two ordered root pairs, two signs
        let expected = 2 * 2 * tuples.len() as u64 * keys;
        if tuples.len() < 5 || report.instances_checked != expected {
            pass = false;
            details.push(format!(
                "m={m}: {} tuples, {} of {expected} instances",
                tuples.len(),
                report.instances_checked
            ));
        } else if !report.passed() {
            pass = false;
            details.push(format!("m={m} fails: {:?}", report.witnesses.first()));
        } else {
            details.push(format!(
                "m={m} {}x{keys} {:.1}s",
                tuples.len(),
                start.elapsed().as_secs_f64()
            ));
        }
    }
    Outcome::new(pass, details.join(", "))
}

/// The prefactors as first determined; any change is a regression.
fn pinned_prefactor(a: i64) -> (&'static str, &'static str) {
    match a {
        -2 => ("1", "s=0: 1"),
        -3 => ("-1*q^-1 + 1*q^1", "s=1: 1; s=-1: -1"),
        _ => unreachable!(),
    }
}

fn t3() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (c, a) in [(orthogonal(), 0), (a2(), -1), (b2(), -2), (b3(), -3)] {
        let cfg = SuiteConfig::new(c);
        let report = match verify_t3(&cfg, 0, 1) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("a={a}: {e}")),
        };
        if !report.passed() {
            pass = false;
            details.push(format!("a={a} fails: {:?}", report.witnesses.first()));
            continue;
        }
        if a <= -2 {
            let (norm, coeffs) = pinned_prefactor(a);
            let recorded_norm = report
                .resolved_constants
                .get(&format!("a={a} normaliser N"));
            let recorded = report.resolved_constants.get(&format!("a={a} N*c_s"));
            if recorded_norm.map(String::as_str) != Some(norm)
                || recorded.map(String::as_str) != Some(coeffs)
            {
                pass = false;
                details.push(format!("a={a} recorded {recorded_norm:?} / {recorded:?}"));
                continue;
            }
            // c_s must be the partial-fraction coefficient of 1/prod_t (z - q^t w) at
            // z = q^s w, i.e. c_s prod_{t != s} (q^s - q^t) = 1; checked at q = 4
            let q = rat(4);
            let (n_scalar, cs) = t3_coefficients(a);
            let n_val = n_scalar.eval_at_rational(&rat(2)).unwrap();
            let ss: Vec<i64> = cs.iter().map(|(s, _)| *s).collect();
            for (s, c) in &cs {
                let prod = ss
                    .iter()
                    .filter(|t| *t != s)
                    .fold(BigRational::one(), |acc, t| {
                        acc * (q.pow(*s as i32) - q.pow(*t as i32))
                    });
                let c_val = c.eval_at_rational(&rat(2)).unwrap() / &n_val;
                if c_val * prod != BigRational::one() {
                    pass = false;
                    details.push(format!("a={a} s={s} is not a partial fraction"));
                }
            }
            details.push(format!("a={a} N={norm} [{coeffs}]"));
        } else {
            details.push(format!("a={a}"));
        }
    }
    Outcome::new(pass, details.join(", "))
}

/// Schur polynomial in `m` variables from semistandard tableaux.
fn schur(lambda: &[u32], m: usize) -> MultiPoly {
    fn fill(
        m: usize,
        cells: &[(usize, usize)],
        at: usize,
        grid: &mut Vec<Vec<usize>>,
        acc: &mut BTreeMap<Vec<i32>, i64>,
    ) {
        if at == cells.len() {
            let mut e = vec![0i32; m + 1];
            for row in grid.iter() {
                for v in row {
                    e[*v - 1] += 1;
                }
            }
            *acc.entry(e).or_default() += 1;
            return;
        }
        let (r, c) = cells[at];
        let left = if c > 0 { grid[r][c - 1] } else { 1 };
        let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in left.max(above)..=m {
            grid[r].push(v);
            fill(m, cells, at + 1, grid, acc);
            grid[r].pop();
        }
    }
    let cells: Vec<(usize, usize)> = lambda
        .iter()
        .enumerate()
        .flat_map(|(r, len)| (0..*len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid = vec![Vec::new(); lambda.len()];
    let mut acc = BTreeMap::new();
    fill(m, &cells, 0, &mut grid, &mut acc);
    MultiPoly::from_terms(m, acc.into_iter().map(|(e, n)| (e, QScalar::from_int(n))))
}

/// The monomial symmetric polynomial `m_lambda` in `m` variables.
fn monomial_symmetric(lambda: &Partition, m: usize) -> MultiPoly {
    let mut base = lambda.padded(m);
    base.push(0);
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::new();
    for perm in itertools::Itertools::permutations(0..m, m) {
        let mut e: Vec<i32> = perm.iter().map(|i| base[*i]).collect();
        e.push(0);
        if seen.insert(e.clone()) {
            terms.push((e, QScalar::one()));
        }
    }
    MultiPoly::from_terms(m, terms)
}

fn hall_littlewood() -> Outcome {
    let z = |m: usize, i: usize| MultiPoly::var(m, qkm::polyring::Var::Z(i));
    let q2 = QScalar::q_pow(2);
    let small = [
        (hl_poly(&[1], 2).unwrap(), &z(2, 1) + &z(2, 2)),
        (hl_poly(&[1, 1], 2).unwrap(), &z(2, 1) * &z(2, 2)),
        (
            hl_poly(&[2], 2).unwrap(),
            &(&(&z(2, 1) * &z(2, 1)) + &(&z(2, 2) * &z(2, 2)))
                + &(&z(2, 1) * &z(2, 2)).scale(&(&QScalar::one() - &q2)),
        ),
    ];
    if let Some((got, want)) = small.iter().find(|(g, w)| g != w) {
        return Outcome::new(false, format!("small case {got} != {want}"));
    }
    let mut expansions = 0;
    for m in 1..=4usize {
        for size in 0..=5u32 {
            for lambda in Partition::all_of(size).into_iter().filter(|l| l.len() <= m) {
                // P_lambda expands to itself, and m_lambda round trips
                let p = hl_poly(&lambda.padded(0), m).unwrap();
                let coeffs = hl_expand(&p, m).unwrap();
                let single = coeffs.len() == 1 && coeffs.get(&lambda).is_some_and(QScalar::is_one);
                let mono = monomial_symmetric(&lambda, m);
                let back = hl_combination(&hl_expand(&mono, m).unwrap(), m).unwrap();
                if !single || back != mono {
                    return Outcome::new(
                        false,
                        format!("round trip fails for {lambda} in {m} variables"),
                    );
                }
                expansions += 2;
            }
        }
    }
    for m in 1..=4usize {
        for size in 0..=4u32 {
            for lambda in Partition::all_of(size).into_iter().filter(|l| l.len() <= m) {
                let at_zero = hl_poly(&lambda.padded(0), m).unwrap().map_coeffs(|c| {
                    QScalar::from_rational(c.eval_at_zero().expect("polynomial in q"))
                });
                if at_zero != schur(lambda.parts(), m) {
                    return Outcome::new(
                        false,
                        format!("P_{lambda}(q=0) is not the Schur polynomial in {m} variables"),
                    );
                }
            }
        }
    }
    Outcome::new(
        true,
        format!("small cases, {expansions} round trips, Schur limit for |lambda|<=4"),
    )
}

fn mutation() -> Outcome {
    let mut cfg = SuiteConfig::new(a1());
    cfg.relations = vec![RelationTag::R6, RelationTag::R8, RelationTag::Serre];
    let control = run_suite(&cfg).expect("control run");
    cfg.convention.flip_half_power = true;
    let mutated = run_suite(&cfg).expect("mutated run");
    let caught: Vec<&str> = mutated
        .relations
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.relation.as_str())
        .collect();
    let pass = control.all_pass() && !caught.is_empty();
    Outcome::new(pass, format!("flipped half power caught by {caught:?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("ser2", ser2),
        ("ser3", ser3),
        ("q-binomial", binomial),
        ("difference", difference),
        ("relation-suite", relation_suite),
        ("serre", serre),
        ("t3", t3),
        ("hall-littlewood", hall_littlewood),
        ("mutation", mutation),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {name:<16} {} ({:.1}s)",
            out.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!out.pass);
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
