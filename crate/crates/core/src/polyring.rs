//! Sparse multivariate Laurent polynomials in `z_1..z_m, w` over [`QScalar`],
//! with the symmetric-group action on the `z` variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qcoeff::QScalar;

/// A variable of a [`MultiPoly`]. `Z(k)` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Z(usize),
    W,
}

/// A Laurent polynomial in `m` variables `z_1..z_m` and a distinguished `w`.
///
/// Exponent vectors have length `m + 1`, with `w` last. Terms are kept in a
/// sorted map and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Vec<i32>, QScalar>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, QScalar::one())
    }

    pub fn constant(arity: usize, c: QScalar) -> Self {
        Self::monomial(arity, vec![0; arity + 1], c)
    }

    pub fn monomial(arity: usize, exps: Vec<i32>, c: QScalar) -> Self {
        assert_eq!(exps.len(), arity + 1, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { arity, terms }
    }

    pub fn var(arity: usize, v: Var) -> Self {
        let mut exps = vec![0; arity + 1];
        exps[Self::index(arity, v)] = 1;
        Self::monomial(arity, exps, QScalar::one())
    }

    fn index(arity: usize, v: Var) -> usize {
        match v {
            Var::Z(k) => {
                assert!(k >= 1 && k <= arity, "variable z{k} out of range");
                k - 1
            }
            Var::W => arity,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, QScalar)>>(arity: usize, terms: I) -> Self {
        let mut acc: HashMap<Vec<i32>, QScalar> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), arity + 1, "exponent vector length");
            *acc.entry(e).or_default() += c;
        }
        MultiPoly {
            arity,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Number of `z` variables.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> QScalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Leading term in the lexicographic order `z_1 > z_2 > ... > w`.
    pub fn leading_term(&self) -> Option<(&Vec<i32>, &QScalar)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&QScalar) -> QScalar) -> Self {
        MultiPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    /// Applies the bar involution `q -> q^{-1}` to every coefficient.
    pub fn bar(&self) -> Self {
        self.map_coeffs(QScalar::bar)
    }

    pub fn mul_monomial(&self, exps: &[i32], c: &QScalar) -> Self {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), x * c))
                .filter(|(_, x): &(Vec<i32>, QScalar)| !x.is_zero())
                .collect(),
        }
    }

    /// Total degree of each term, if the polynomial is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<i32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous components keyed by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.iter().sum())
                .or_insert_with(|| MultiPoly::zero(self.arity))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// Renames `z_i -> z_{sigma(i)}`, with `sigma` given 0-based as the image
    /// of each index. The variable `w` is fixed.
    pub fn permute(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: sigma.len(),
            });
        }
        let mut seen = vec![false; self.arity];
        for &s in sigma {
            if s >= self.arity || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Domain(format!("{sigma:?} is not a permutation")));
            }
        }
        Ok(self.permute_unchecked(sigma))
    }

    fn permute_unchecked(&self, sigma: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = e.clone();
                for (i, &s) in sigma.iter().enumerate() {
                    out[s] = e[i];
                }
                (out, c.clone())
            })
            .collect();
        MultiPoly {
            arity: self.arity,
            terms,
        }
    }

    fn signed_orbit_sum(&self, alternating: bool) -> Self {
        let perms: Vec<Vec<usize>> = (0..self.arity).permutations(self.arity).collect();
        let parts: Vec<MultiPoly> = perms
            .par_iter()
            .map(|sigma| {
                let p = self.permute_unchecked(sigma);
                if alternating && permutation_sign(sigma) < 0 {
                    -&p
                } else {
                    p
                }
            })
            .collect();
        sum_polys(self.arity, parts.iter())
    }

    /// `sum_{sigma in S_m} sigma . p`.
    pub fn symmetrize(&self) -> Self {
        self.signed_orbit_sum(false)
    }

    /// `sum_{sigma in S_m} (-1)^{l(sigma)} sigma . p`.
    pub fn antisymmetrize(&self) -> Self {
        self.signed_orbit_sum(true)
    }

    /// Invariance under every adjacent transposition.
    pub fn is_symmetric(&self) -> bool {
        (0..self.arity.saturating_sub(1)).all(|i| {
            let mut sigma: Vec<usize> = (0..self.arity).collect();
            sigma.swap(i, i + 1);
            self.permute_unchecked(&sigma) == *self
        })
    }

    /// The coefficient of `v^exponent`, as a polynomial in the remaining
    /// variables (same arity, exponent of `v` set to zero).
    pub fn coefficient_of(&self, v: Var, exponent: i32) -> Self {
        let idx = Self::index(self.arity, v);
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[idx] == exponent)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[idx] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    fn min_exponents(&self) -> Vec<i32> {
        let mut lo = vec![i32::MAX; self.arity + 1];
        for e in self.terms.keys() {
            for (l, x) in lo.iter_mut().zip(e) {
                *l = (*l).min(*x);
            }
        }
        lo
    }

    /// Exact quotient `self / den` in the Laurent polynomial ring.
    ///
    /// Both operands are shifted to honest polynomials with no monomial
    /// content, then divided by leading terms in lex order. A nonzero
    /// remainder, or a leading coefficient that does not divide exactly in
    /// `Q[q^{1/2}, q^{-1/2}]`, is an inexact-division error.
    pub fn exact_div(&self, den: &MultiPoly) -> Result<MultiPoly> {
        if self.arity != den.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: den.arity,
            });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(MultiPoly::zero(self.arity));
        }
        let num_lo = self.min_exponents();
        let den_lo = den.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let mut rem = self.mul_monomial(&neg(&num_lo), &QScalar::one());
        let d = den.mul_monomial(&neg(&den_lo), &QScalar::one());
        let (d_lead_e, d_lead_c) = d
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        let mut quotient: Vec<(Vec<i32>, QScalar)> = Vec::new();
        let inexact = || Error::InexactDivision(format!("({self}) / ({den})"));
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let shift: Vec<i32> = e.iter().zip(&d_lead_e).map(|(a, b)| a - b).collect();
            if shift.iter().any(|s| *s < 0) {
                return Err(inexact());
            }
            let t = c.exact_div(&d_lead_c).map_err(|_| inexact())?;
            rem = &rem - &d.mul_monomial(&shift, &t);
            quotient.push((shift, t));
        }
        let offset: Vec<i32> = num_lo.iter().zip(&den_lo).map(|(a, b)| a - b).collect();
        Ok(MultiPoly::from_terms(self.arity, quotient).mul_monomial(&offset, &QScalar::one()))
    }

    /// The classical Vandermonde product `prod_{i<j} (z_i - z_j)`.
    pub fn vandermonde(arity: usize) -> Self {
        let pairs: Vec<(Var, Var, QScalar)> = (1..=arity)
            .tuple_combinations()
            .map(|(i, j)| (Var::Z(i), Var::Z(j), QScalar::one()))
            .collect();
        q_shifted_product(arity, &pairs)
    }
}

/// `(-1)^{inversions}` of a 0-based permutation.
pub fn permutation_sign(sigma: &[usize]) -> i64 {
    let inversions = sigma
        .iter()
        .tuple_combinations()
        .filter(|(a, b)| a > b)
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sums polynomials of a common arity through one accumulation map.
pub fn sum_polys<'a, I: IntoIterator<Item = &'a MultiPoly>>(arity: usize, polys: I) -> MultiPoly {
    let mut acc: HashMap<Vec<i32>, QScalar> = HashMap::new();
    for p in polys {
        assert_eq!(p.arity, arity, "arity mismatch in sum");
        for (e, c) in &p.terms {
            match acc.get_mut(e) {
                Some(slot) => *slot += c,
                None => {
                    acc.insert(e.clone(), c.clone());
                }
            }
        }
    }
    MultiPoly {
        arity,
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

/// The expanded product `prod (u - c v)` over the given triples.
pub fn q_shifted_product(arity: usize, pairs: &[(Var, Var, QScalar)]) -> MultiPoly {
    pairs.iter().fold(MultiPoly::one(arity), |acc, (u, v, c)| {
        let factor = &MultiPoly::var(arity, *u) - &MultiPoly::var(arity, *v).scale(c);
        &acc * &factor
    })
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        sum_polys(self.arity, [self, rhs])
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in product");
        let mut acc: HashMap<Vec<i32>, QScalar> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        MultiPoly {
            arity: self.arity,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

fn render_monomial(arity: usize, e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (i, x) in e.iter().enumerate() {
        let name = if i == arity {
            "w".to_string()
        } else {
            format!("z{}", i + 1)
        };
        match x {
            0 => {}
            1 => parts.push(name),
            x => parts.push(format!("{name}^{x}")),
        }
    }
    parts.join(" ")
}

/// Monomials in descending lex order, `z1^a z2^b w^c`, coefficients in
/// canonical scalar form (parenthesised when they have several terms).
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono = render_monomial(self.arity, e);
            let coeff = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coeff}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.arity)
    }
}

/// Splits on ` + ` outside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0 && text[i..].starts_with(" + ") => {
                out.push(&text[start..i]);
                start = i + 3;
                i += 2;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&text[start..]);
    out
}

fn parse_monomial(arity: usize, text: &str) -> Result<Vec<i32>> {
    let mut exps = vec![0; arity + 1];
    for factor in text.split_whitespace() {
        let bad = || Error::Parse(format!("bad monomial factor `{factor}`"));
        let (name, power) = match factor.split_once('^') {
            Some((n, p)) => (n, p.parse::<i32>().map_err(|_| bad())?),
            None => (factor, 1),
        };
        let slot = if name == "w" {
            arity
        } else {
            let k: usize = name
                .strip_prefix('z')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            if k == 0 || k > arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: k,
                });
            }
            k - 1
        };
        exps[slot] += power;
    }
    Ok(exps)
}

impl MultiPoly {
    /// Parses the canonical text written by `Display`, e.g.
    /// `z1^2 + (1 + -1*q^2)*z1 z2 + z2^2`.
    pub fn parse(arity: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for term in split_top_level(text) {
            let term = term.trim();
            let (coeff, mono) = if let Some(rest) = term.strip_prefix('(') {
                // coefficients may hold q^(1/2), so match the outer parenthesis
                let mut depth = 1;
                let close = rest
                    .char_indices()
                    .find(|&(_, ch)| {
                        depth += match ch {
                            '(' => 1,
                            ')' => -1,
                            _ => 0,
                        };
                        depth == 0
                    })
                    .map(|(at, _)| at)
                    .ok_or_else(|| Error::Parse(format!("unbalanced `(` in `{term}`")))?;
                let (c, tail) = (&rest[..close], &rest[close + 1..]);
                let mono = match tail.strip_prefix('*') {
                    Some(m) => m,
                    None if tail.is_empty() => "",
                    None => return Err(Error::Parse(format!("bad term `{term}`"))),
                };
                (c.parse::<QScalar>()?, mono)
            } else if term.starts_with('z') || term.starts_with('w') {
                (QScalar::one(), term)
            } else {
                match term.find("*z").or_else(|| term.find("*w")) {
                    Some(at) => (term[..at].parse::<QScalar>()?, &term[at + 1..]),
                    None => (term.parse::<QScalar>()?, ""),
                }
            };
            terms.push((parse_monomial(arity, mono)?, coeff));
        }
        Ok(MultiPoly::from_terms(arity, terms))
    }
}
