//! Exact Laurent polynomials in `s = q^{1/2}` with rational coefficients.
//!
//! Every coefficient that appears anywhere in the representation lives in
//! this ring. Exponents are stored in half-units of `q`, so the stored
//! exponent `n` stands for `q^{n/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rat::Rat;

use crate::error::{Error, Result};

/// An element of `Q[q^{1/2}, q^{-1/2}]` in canonical form.
///
/// Terms are sorted by ascending half-exponent and no stored coefficient is
/// zero, so structural equality is mathematical equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QScalar {
    terms: Vec<(i64, Rat)>,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rat(Rat::int(c), 0)
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^{half_exp/2}`.
    pub fn monomial(c: BigRational, half_exp: i64) -> Self {
        Self::from_rat(Rat::from_big(c), half_exp)
    }

    fn from_rat(c: Rat, half_exp: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            QScalar {
                terms: vec![(half_exp, c)],
            }
        }
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        Self::s_pow(2 * n)
    }

    /// `q^{half_exp/2}`.
    pub fn s_pow(half_exp: i64) -> Self {
        Self::from_rat(Rat::one(), half_exp)
    }

    /// Builds a canonical value from arbitrary `(half_exp, coeff)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut map: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_default();
            *slot = slot.add(&Rat::from_big(c));
        }
        QScalar {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// `(half_exp, coeff)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c.to_big()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term of a monomial, if this value is one.
    pub fn as_monomial(&self) -> Option<(i64, BigRational)> {
        self.single().map(|(e, c)| (e, c.to_big()))
    }

    fn single(&self) -> Option<(i64, &Rat)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((*e, c)),
            _ => None,
        }
    }

    /// Coefficient of `q^{half_exp/2}`.
    pub fn coeff(&self, half_exp: i64) -> BigRational {
        self.terms
            .binary_search_by_key(&half_exp, |(e, _)| *e)
            .map(|i| self.terms[i].1.to_big())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_half_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Multiplies by the rational constant `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        self.scale_rat(&Rat::from_big(c.clone()))
    }

    fn scale_rat(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QScalar {
            terms: self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale_rat(&Rat::int(c))
    }

    /// Multiplies by `q^{half_exp/2}`.
    pub fn shift(&self, half_exp: i64) -> Self {
        QScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + half_exp, c.clone()))
                .collect(),
        }
    }

    /// The bar involution `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        QScalar {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient in the Laurent ring; fails when the remainder is nonzero.
    pub fn exact_div(&self, den: &QScalar) -> Result<QScalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((e, c)) = den.single() {
            let inv = c.recip();
            return Ok(QScalar {
                terms: self
                    .terms
                    .iter()
                    .map(|(x, a)| (x - e, a.mul(&inv)))
                    .collect(),
            });
        }
        // Dense long division on the normalised polynomials in s.
        let a_lo = self.min_half_exp().unwrap();
        let b_lo = den.min_half_exp().unwrap();
        let a_deg = (self.max_half_exp().unwrap() - a_lo) as usize;
        let b_deg = (den.max_half_exp().unwrap() - b_lo) as usize;
        if a_deg < b_deg {
            return Err(Error::InexactDivision(format!("({self}) / ({den})")));
        }
        let mut rem = vec![Rat::zero(); a_deg + 1];
        for (e, c) in &self.terms {
            rem[(e - a_lo) as usize] = c.clone();
        }
        let mut b = vec![Rat::zero(); b_deg + 1];
        for (e, c) in &den.terms {
            b[(e - b_lo) as usize] = c.clone();
        }
        let lead_inv = b[b_deg].recip();
        let mut quot = vec![Rat::zero(); a_deg - b_deg + 1];
        for k in (0..=a_deg - b_deg).rev() {
            let t = rem[k + b_deg].mul(&lead_inv);
            if t.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    rem[k + j] = rem[k + j].sub(&t.mul(bj));
                }
            }
            quot[k] = t;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision(format!("({self}) / ({den})")));
        }
        let shift = a_lo - b_lo;
        Ok(QScalar {
            terms: quot
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 + shift, c))
                .collect(),
        })
    }

    /// Evaluates at `q^{1/2} = s`. Only used as an independent spot check.
    pub fn eval_at_rational(&self, s: &BigRational) -> Result<BigRational> {
        if s.is_zero() {
            return Err(Error::Domain("evaluation point q^(1/2) = 0".into()));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c.to_big() * s.pow(*e as i32))
            .fold(BigRational::zero(), |acc, x| acc + x))
    }

    /// The value at `q = 0`, defined only when no negative powers occur.
    pub fn eval_at_zero(&self) -> Option<BigRational> {
        match self.min_half_exp() {
            Some(e) if e < 0 => None,
            _ => Some(self.coeff(0)),
        }
    }

    fn add_terms(&self, other: &QScalar, negate: bool) -> QScalar {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate {
                    a[i].1.sub(&b[j].1)
                } else {
                    a[i].1.add(&b[j].1)
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        QScalar { terms: out }
    }

    /// Clears denominators and convolves the integer numerators, reducing
    /// once per output coefficient. `None` if anything leaves `i128`.
    fn mul_cleared(&self, other: &QScalar, lo: i64, hi: i64) -> Option<QScalar> {
        let (na, da) = cleared(&self.terms)?;
        let (nb, db) = cleared(&other.terms)?;
        let mut dense = vec![0i128; (hi - lo + 1) as usize];
        for ((ea, _), x) in self.terms.iter().zip(&na) {
            for ((eb, _), y) in other.terms.iter().zip(&nb) {
                let slot = &mut dense[(ea + eb - lo) as usize];
                *slot = slot.checked_add(x.checked_mul(*y)?)?;
            }
        }
        let d = da.checked_mul(db)?;
        Some(QScalar {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, n)| *n != 0)
                .map(|(k, n)| (k as i64 + lo, Rat::from_i128(n, d)))
                .collect(),
        })
    }

    fn mul_terms(&self, other: &QScalar) -> QScalar {
        if self.is_zero() || other.is_zero() {
            return QScalar::zero();
        }
        if let Some((e, c)) = other.single() {
            return QScalar {
                terms: self.terms.iter().map(|(x, a)| (x + e, a.mul(c))).collect(),
            };
        }
        if let Some((e, c)) = self.single() {
            return QScalar {
                terms: other.terms.iter().map(|(x, a)| (x + e, a.mul(c))).collect(),
            };
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms.last().unwrap().0 + other.terms.last().unwrap().0;
        if let Some(out) = self.mul_cleared(other, lo, hi) {
            return out;
        }
        let mut dense = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = &mut dense[(ea + eb - lo) as usize];
                *slot = slot.add(&ca.mul(cb));
            }
        }
        QScalar {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 + lo, c))
                .collect(),
        }
    }
}

/// Integer numerators over a common denominator, when all terms are small.
fn cleared(terms: &[(i64, Rat)]) -> Option<(Vec<i128>, i128)> {
    let mut d: i128 = 1;
    for (_, c) in terms {
        let cd = c.small()?.1 as i128;
        d = (d / d.gcd(&cd)).checked_mul(cd)?;
    }
    let nums = terms
        .iter()
        .map(|(_, c)| {
            let (n, cd) = c.small().expect("checked above");
            (n as i128).checked_mul(d / cd as i128)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((nums, d))
}

impl From<i64> for QScalar {
    fn from(c: i64) -> Self {
        QScalar::from_int(c)
    }
}

impl From<BigRational> for QScalar {
    fn from(c: BigRational) -> Self {
        QScalar::from_rational(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &'b QScalar) -> QScalar {
                let f: fn(&QScalar, &QScalar) -> QScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &'b QScalar) -> QScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_terms(b, false));
forward_binop!(Sub, sub, |a, b| a.add_terms(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_terms(b));

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = self.add_terms(rhs, false);
    }
}

impl AddAssign<QScalar> for QScalar {
    fn add_assign(&mut self, rhs: QScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = self.add_terms(rhs, true);
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = self.mul_terms(rhs);
    }
}

impl Sum for QScalar {
    fn sum<I: Iterator<Item = QScalar>>(iter: I) -> QScalar {
        iter.fold(QScalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a QScalar> for QScalar {
    fn sum<I: Iterator<Item = &'a QScalar>>(iter: I) -> QScalar {
        iter.fold(QScalar::zero(), |acc, x| acc + x)
    }
}

/// Canonical text: ascending exponents, `c*q^n`, `c*q^(n/2)` or a bare
/// constant, joined by ` + `.
impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                e if e % 2 == 0 => write!(f, "{c}*q^{}", e / 2)?,
                e => write!(f, "{c}*q^({e}/2)")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

fn parse_q_power(s: &str) -> Result<i64> {
    let bad = || Error::Parse(format!("bad power of q `{s}`"));
    let body = s.strip_prefix("q^").ok_or_else(bad)?;
    if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
        let (n, d) = inner.split_once('/').ok_or_else(bad)?;
        if d.trim() != "2" {
            return Err(bad());
        }
        n.trim().parse().map_err(|_| bad())
    } else {
        let n: i64 = body.trim().parse().map_err(|_| bad())?;
        Ok(2 * n)
    }
}

impl FromStr for QScalar {
    type Err = Error;

    /// Parses the canonical text form. A bare `q^n` term is accepted as
    /// `1*q^n`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut terms = Vec::new();
        for term in s.split(" + ") {
            let term = term.trim();
            let (c, e) = if let Some((c, p)) = term.split_once('*') {
                (parse_rational(c)?, parse_q_power(p.trim())?)
            } else if term.starts_with("q^") {
                (BigRational::one(), parse_q_power(term)?)
            } else if let Some(rest) = term.strip_prefix("-q^") {
                (-BigRational::one(), parse_q_power(&format!("q^{rest}"))?)
            } else {
                (parse_rational(term)?, 0)
            };
            terms.push((e, c));
        }
        Ok(QScalar::from_terms(terms))
    }
}

/// Sign helper used throughout: `(-1)^k`.
pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
