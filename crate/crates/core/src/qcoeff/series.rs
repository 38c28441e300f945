//! Univariate Laurent polynomials and truncated power series over [`QScalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::qcoeff::QScalar;

/// A Laurent polynomial in one formal variable `x`, optionally truncated.
///
/// When `order` is `Some(n)` the value is only known modulo `x^{n+1}` and no
/// term above `x^n` is stored. Mixing values of different orders keeps the
/// smaller order. Truncated values are assumed to have nonnegative valuation.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: BTreeMap<i64, QScalar>,
    order: Option<i64>,
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(QScalar::one())
    }

    pub fn constant(c: QScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * x^e`.
    pub fn monomial(c: QScalar, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        UniPoly {
            coeffs,
            order: None,
        }
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Self::monomial(QScalar::one(), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, QScalar)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, QScalar> = BTreeMap::new();
        for (e, c) in terms {
            let slot = coeffs.entry(e).or_default();
            *slot += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniPoly {
            coeffs,
            order: None,
        }
    }

    /// Drops every term above `x^order` and records the truncation.
    pub fn truncate(mut self, order: i64) -> Self {
        let order = min_order(self.order, Some(order)).unwrap();
        self.coeffs.retain(|e, _| *e <= order);
        self.order = Some(order);
        self
    }

    fn with_order(mut self, order: Option<i64>) -> Self {
        if let Some(o) = order {
            self = self.truncate(o);
        }
        self
    }

    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> QScalar {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QScalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        UniPoly::from_terms(self.coeffs.iter().map(|(e, x)| (*e, x * c))).with_order(self.order)
    }

    /// Multiplies by `x^k`.
    pub fn shift_exponent(&self, k: i64) -> Self {
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
            order: self.order.map(|o| o + k),
        }
    }

    /// Substitutes `x -> q^{half_exp/2} x`.
    pub fn scale_variable(&self, half_exp: i64) -> Self {
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c.shift(e * half_exp)))
                .collect(),
            order: self.order,
        }
    }

    /// Divides every coefficient exactly by `d`.
    pub fn div_coefficients(&self, d: &QScalar) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            coeffs.insert(*e, c.exact_div(d)?);
        }
        Ok(UniPoly {
            coeffs,
            order: self.order,
        })
    }

    /// Value at `x = q^{half_exp/2}`; only meaningful for untruncated values.
    pub fn eval_at_monomial(&self, half_exp: i64) -> QScalar {
        self.coeffs.iter().map(|(e, c)| c.shift(e * half_exp)).sum()
    }

    /// Substitutes a scalar for `x`; the polynomial must not have negative
    /// exponents.
    pub fn eval(&self, at: &QScalar) -> QScalar {
        let mut out = QScalar::zero();
        for (e, c) in &self.coeffs {
            debug_assert!(*e >= 0);
            out += c * &at.pow(*e as u32);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = UniPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn bar(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.bar())).collect(),
            order: self.order,
        }
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        UniPoly::from_terms(
            self.coeffs
                .iter()
                .chain(rhs.coeffs.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
        .with_order(min_order(self.order, rhs.order))
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
            order: self.order,
        }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        let order = min_order(self.order, rhs.order);
        let mut out: BTreeMap<i64, QScalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                let e = ea + eb;
                if order.is_some_and(|o| e > o) {
                    continue;
                }
                *out.entry(e).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        UniPoly { coeffs: out, order }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let coeff = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match e {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}*x")?,
                e => write!(f, "{coeff}*x^{e}")?,
            }
        }
        if let Some(o) = self.order {
            write!(f, " + O(x^{})", o + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_takes_the_smaller_order() {
        let a = (&UniPoly::one() + &UniPoly::x()).truncate(3);
        let b = (&UniPoly::one() + &UniPoly::x()).truncate(1);
        let p = &a * &b;
        assert_eq!(p.order(), Some(1));
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff(1), QScalar::from_int(2));
    }

    #[test]
    fn scale_variable_substitutes_q_power() {
        let p = &UniPoly::x() + &UniPoly::monomial(QScalar::one(), 2);
        let s = p.scale_variable(2);
        assert_eq!(s.coeff(1), QScalar::q_pow(1));
        assert_eq!(s.coeff(2), QScalar::q_pow(2));
    }

    #[test]
    fn eval_at_monomial_agrees_with_eval() {
        let p = UniPoly::from_terms([(0, QScalar::one()), (2, QScalar::from_int(-3))]);
        assert_eq!(p.eval_at_monomial(2), p.eval(&QScalar::q_pow(1)));
    }
}
