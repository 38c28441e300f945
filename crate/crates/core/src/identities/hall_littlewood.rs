//! Hall-Littlewood polynomials `P_lambda(z; q^2)` and expansions in them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{q_shifted_product, MultiPoly, Var};
use crate::qcoeff::{q_fact, QScalar};

/// A weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts and drops zeros; negative parts are rejected.
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if let Some(bad) = parts.iter().find(|p| **p < 0) {
            return Err(Error::Parse(format!("negative part {bad} in partition")));
        }
        let mut parts: Vec<u32> = parts
            .into_iter()
            .filter(|p| *p > 0)
            .map(|p| p as u32)
            .collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The exponent vector padded with zeros to `m` entries.
    pub fn padded(&self, m: usize) -> Vec<i32> {
        let mut v: Vec<i32> = self.0.iter().map(|p| *p as i32).collect();
        v.resize(m.max(v.len()), 0);
        v
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<i64> {
    fn from(p: Partition) -> Self {
        p.0.into_iter().map(i64::from).collect()
    }
}

/// `2,1,1`; the empty partition prints as `0`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.0.iter().join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_tuple(s)?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("`{s}` is not weakly decreasing")));
        }
        Partition::new(parts)
    }
}

/// Parses a comma-separated integer tuple such as `2,1,1` or `1,-1,0`.
pub fn parse_tuple(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("malformed part `{}` in `{s}`", t.trim())))
        })
        .collect()
}

/// `v_n(t) = prod_{j=1}^n (1 - t^j)/(1 - t)` at `t = q^2`.
fn v_n(n: usize) -> QScalar {
    (1..=n as i64).fold(QScalar::one(), |acc, j| {
        let geometric: QScalar = (0..j).map(|k| QScalar::q_pow(2 * k)).sum();
        &acc * &geometric
    })
}

/// The normalisation `v_lambda(q^2) = prod_i v_{m_i}(q^2)` over the
/// multiplicities `m_i` of each value among the `m` exponents, zeros
/// included. It makes `P_lambda` monic.
pub fn v_lambda(exponents: &[i32], m: usize) -> QScalar {
    let mut padded = exponents.to_vec();
    padded.resize(m.max(padded.len()), 0);
    padded
        .iter()
        .counts()
        .values()
        .fold(QScalar::one(), |acc, k| &acc * &v_n(*k))
}

/// The alternative normalisation `q^{sum binom(lambda_i, 2)} prod_i [lambda_i]!`.
/// It does not make `P_lambda` monic in general; kept for comparison.
pub fn factorial_v_lambda(lambda: &Partition) -> QScalar {
    let e: i64 = lambda
        .parts()
        .iter()
        .map(|p| (*p as i64) * (*p as i64 - 1) / 2)
        .sum();
    lambda
        .parts()
        .iter()
        .fold(QScalar::q_pow(e), |acc, p| &acc * &q_fact(*p))
}

/// `P_lambda(z_1..z_m; q^2) = antisym(z^lambda prod_{i<j} (z_i - q^2 z_j)) / vandermonde / v_lambda`.
///
/// `exponents` may be any integer tuple of length at most `m`; partitions
/// give the usual Hall-Littlewood polynomials, other tuples the same formula
/// applied verbatim.
pub fn hl_poly(exponents: &[i32], m: usize) -> Result<MultiPoly> {
    if exponents.len() > m {
        return Err(Error::Domain(format!(
            "{} parts do not fit in {m} variables",
            exponents.len()
        )));
    }
    let mut exps = exponents.to_vec();
    exps.resize(m + 1, 0);
    let pairs: Vec<(Var, Var, QScalar)> = (1..=m)
        .tuple_combinations()
        .map(|(i, j)| (Var::Z(i), Var::Z(j), QScalar::q_pow(2)))
        .collect();
    let twisted = q_shifted_product(m, &pairs).mul_monomial(&exps, &QScalar::one());
    let alternant = twisted.antisymmetrize();
    let symmetric = alternant.exact_div(&MultiPoly::vandermonde(m))?;
    let v = v_lambda(exponents, m);
    Ok(symmetric.map_coeffs(|c| c.exact_div(&v).expect("v_lambda divides every coefficient")))
}

/// Expands a symmetric polynomial in `z_1..z_m` in Hall-Littlewood
/// polynomials by repeatedly subtracting the lexicographically largest
/// monomial. Each `P_lambda` is monic with every other monomial below `z^lambda`
/// in dominance order, hence in lex order, so the loop terminates.
pub fn hl_expand(p: &MultiPoly, m: usize) -> Result<BTreeMap<Partition, QScalar>> {
    if p.arity() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            found: p.arity(),
        });
    }
    if !p.is_symmetric() {
        return Err(Error::Domain(
            "hl_expand needs a symmetric polynomial".into(),
        ));
    }
    if p.terms()
        .any(|(e, _)| e[m] != 0 || e.iter().any(|x| *x < 0))
    {
        return Err(Error::Domain(
            "hl_expand needs a polynomial in z_1..z_m only".into(),
        ));
    }
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some((e, c)) = rest.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        let lambda = Partition::new(e[..m].iter().map(|x| *x as i64).collect())?;
        let basis = hl_poly(&lambda.padded(0), m)?;
        rest = &rest - &basis.scale(&c);
        out.insert(lambda, c);
    }
    Ok(out)
}

/// `sum_lambda c_lambda P_lambda`.
pub fn hl_combination(coeffs: &BTreeMap<Partition, QScalar>, m: usize) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(m);
    for (lambda, c) in coeffs {
        acc = &acc + &hl_poly(&lambda.padded(0), m)?.scale(c);
    }
    Ok(acc)
}
