//! The vertex-operator representation on the Fock module.
//!
//! `X_i^+-(z) = E_-(z) E_+(z) e^{+-alpha_i} z^{+-a_i(0)}` with
//!
//! ```text
//! E_-(z) = exp( +- sum_n a_i(-n)/[n] q^{-+n/2} z^n )
//! E_+(z) = exp( -+ sum_n a_i(n)/[n]  q^{-+n/2} z^{-n} )
//! ```
//!
//! and `X_i^+-(z) = sum_n X_i^+-(n) z^{-n-1}`.

mod engine;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fock::{self, check_root, heisenberg_ratio, FockBasisKey, FockVector};
use crate::lattice::CartanData;
use crate::qcoeff::{q_minus_q_inv, q_power_binomial, QScalar, UniPoly};

pub(crate) use engine::{expand_annihilation, ExpSeries, Factor, NormalProduct};
pub use engine::{Convention, Sign};

/// A single operator that can be applied to Fock vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeSpec {
    /// `X_root^sign(n)`.
    X { root: usize, sign: Sign, n: i64 },
    /// `psi_{root, m}`, `m >= 0`.
    Psi { root: usize, m: i64 },
    /// `phi_{root, m}`, `m <= 0`.
    Phi { root: usize, m: i64 },
    /// `a_root(n)`, including the zero mode.
    A { root: usize, n: i64 },
    /// `K_root^power`.
    K { root: usize, power: i64 },
    /// `q^{power d}`.
    Grading { power: i64 },
    /// Mode `n` of the composite `X^sign_{i+j, r}`.
    Composite {
        i: usize,
        j: usize,
        sign: Sign,
        r: i64,
        n: i64,
    },
}

/// Roots print 1-based.
impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModeSpec::X { root, sign, n } => write!(f, "X{}_{}({n})", sign.symbol(), root + 1),
            ModeSpec::Psi { root, m } => write!(f, "psi_{},{m}", root + 1),
            ModeSpec::Phi { root, m } => write!(f, "phi_{},{m}", root + 1),
            ModeSpec::A { root, n } => write!(f, "a_{}({n})", root + 1),
            ModeSpec::K { root, power } => write!(f, "K_{}^{power}", root + 1),
            ModeSpec::Grading { power } => write!(f, "q^({power}d)"),
            ModeSpec::Composite { i, j, sign, r, n } => {
                write!(f, "X{}_({}+{},r={r})({n})", sign.symbol(), i + 1, j + 1)
            }
        }
    }
}

/// Renders an operator word, leftmost operator first.
pub fn render_word(word: &[ModeSpec]) -> String {
    word.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// The representation for a fixed Cartan matrix, with caches for the
/// products it has been asked about.
pub struct VertexRep {
    cartan: CartanData,
    convention: Convention,
    products: Mutex<HashMap<Vec<Factor>, Arc<NormalProduct>>>,
    phi_series: Vec<Mutex<ExpSeries>>,
}

impl VertexRep {
    pub fn new(cartan: &CartanData) -> Self {
        Self::with_convention(cartan, Convention::default())
    }

    pub fn with_convention(cartan: &CartanData, convention: Convention) -> Self {
        VertexRep {
            cartan: cartan.clone(),
            convention,
            products: Mutex::new(HashMap::new()),
            phi_series: (0..cartan.rank())
                .map(|_| Mutex::new(ExpSeries::new()))
                .collect(),
        }
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub(crate) fn product(&self, factors: &[Factor]) -> Arc<NormalProduct> {
        let mut cache = self.products.lock().unwrap();
        cache
            .entry(factors.to_vec())
            .or_insert_with(|| {
                Arc::new(NormalProduct::new(
                    &self.cartan,
                    factors.to_vec(),
                    self.convention,
                ))
            })
            .clone()
    }

    /// `X_i^sign(n) v`.
    pub fn x_mode(&self, i: usize, sign: Sign, n: i64, v: &FockVector) -> Result<FockVector> {
        check_root(i, &self.cartan)?;
        let p = self.product(&[Factor::plain(i, sign, 0)]);
        Ok(p.coefficient_vec(v, &[-n - 1]))
    }

    /// `psi_{i,m} v` for `m >= 0`.
    pub fn psi_mode(&self, i: usize, m: i64, v: &FockVector) -> Result<FockVector> {
        check_root(i, &self.cartan)?;
        if m < 0 {
            return Err(Error::Domain(format!("psi_{},{m} needs m >= 0", i + 1)));
        }
        let qq = q_minus_q_inv();
        let shift = |j: usize, n: u32| {
            vec![(
                0usize,
                &qq * &heisenberg_ratio(self.cartan.entry(i, j), n as i64),
            )]
        };
        v.flat_map_keys(|key| {
            let k = QScalar::q_pow(self.cartan.pairing_simple(i, key.lattice()));
            let mut out = FockVector::zero();
            for term in expand_annihilation(key.modes(), 1, &shift) {
                if term.exps[0] == -m {
                    out.add_term(
                        FockBasisKey::from_sorted(term.modes, key.lattice().clone()),
                        &term.coeff * &k,
                    );
                }
            }
            Ok(out)
        })
    }

    /// `phi_{i,m} v` for `m <= 0`.
    pub fn phi_mode(&self, i: usize, m: i64, v: &FockVector) -> Result<FockVector> {
        check_root(i, &self.cartan)?;
        if m > 0 {
            return Err(Error::Domain(format!("phi_{},{m} needs m <= 0", i + 1)));
        }
        let coeff = {
            let mut series = self.phi_series[i].lock().unwrap();
            series.coeff((-m) as usize, &|n| {
                let n = n as i64;
                vec![(i, -(&QScalar::q_pow(n) - &QScalar::q_pow(-n)))]
            })
        };
        v.flat_map_keys(|key| {
            let k = QScalar::q_pow(-self.cartan.pairing_simple(i, key.lattice()));
            let mut out = FockVector::zero();
            for (ms, c) in coeff.iter() {
                out.add_term(
                    FockBasisKey::from_sorted(
                        fock::merge_modes(key.modes(), ms),
                        key.lattice().clone(),
                    ),
                    c * &k,
                );
            }
            Ok(out)
        })
    }

    /// Mode `n` of `X^sign_{i+j,r}(z) = :X_i(z) X_j(z q^{a+2r+1}): z^{a+1}`
    /// with `a = (alpha_i|alpha_j)` and `0 <= r <= -a-1`.
    pub fn composite_mode(
        &self,
        i: usize,
        j: usize,
        sign: Sign,
        r: i64,
        n: i64,
        v: &FockVector,
    ) -> Result<FockVector> {
        check_root(i, &self.cartan)?;
        check_root(j, &self.cartan)?;
        let a = self.cartan.entry(i, j);
        if r < 0 || r > -a - 1 {
            return Err(Error::Domain(format!(
                "composite index r={r} outside 0..={} for (alpha_{}|alpha_{}) = {a}",
                -a - 1,
                i + 1,
                j + 1
            )));
        }
        let p = self.product(&[
            Factor::plain(i, sign, 0),
            Factor {
                root: j,
                sign,
                var: 0,
                shift_half: 2 * (a + 2 * r + 1),
            },
        ]);
        Ok(p.coefficient_vec(v, &[-n - a - 2]))
    }

    pub fn apply(&self, mode: &ModeSpec, v: &FockVector) -> Result<FockVector> {
        match *mode {
            ModeSpec::X { root, sign, n } => self.x_mode(root, sign, n, v),
            ModeSpec::Psi { root, m } => self.psi_mode(root, m, v),
            ModeSpec::Phi { root, m } => self.phi_mode(root, m, v),
            ModeSpec::A { root, n: 0 } => fock::zero_mode_act(root, v, &self.cartan),
            ModeSpec::A { root, n } => fock::heisenberg_act(root, n, v, &self.cartan),
            ModeSpec::K { root, power } => fock::k_act(root, power, v, &self.cartan),
            ModeSpec::Grading { power } => Ok(fock::grading_act(power, v, &self.cartan)),
            ModeSpec::Composite { i, j, sign, r, n } => self.composite_mode(i, j, sign, r, n, v),
        }
    }

    /// Applies `word` right to left, so `word[0]` acts last.
    pub fn apply_word(&self, word: &[ModeSpec], v: &FockVector) -> Result<FockVector> {
        let mut cur = v.clone();
        for m in word.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(m, &cur)?;
        }
        Ok(cur)
    }
}

/// `X_i^sign(n) v` in the standard convention.
pub fn x_mode_act(
    i: usize,
    sign: Sign,
    n: i64,
    v: &FockVector,
    cartan: &CartanData,
) -> Result<FockVector> {
    VertexRep::new(cartan).x_mode(i, sign, n, v)
}

/// `psi_{i,m}` for `m >= 0` or `phi_{i,m}` for `m <= 0`.
pub fn psi_phi_mode_act(
    i: usize,
    which: HalfCurrent,
    m: i64,
    v: &FockVector,
    cartan: &CartanData,
) -> Result<FockVector> {
    let rep = VertexRep::new(cartan);
    match which {
        HalfCurrent::Psi => rep.psi_mode(i, m, v),
        HalfCurrent::Phi => rep.phi_mode(i, m, v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfCurrent {
    Psi,
    Phi,
}

pub fn composite_mode_act(
    i: usize,
    j: usize,
    sign: Sign,
    r: i64,
    n: i64,
    v: &FockVector,
    cartan: &CartanData,
) -> Result<FockVector> {
    VertexRep::new(cartan).composite_mode(i, j, sign, r, n, v)
}

/// The contraction `X_i^e(z) X_j^f(w) = z^{e f a} c(w/z) :X_i(z) X_j(w):`
/// with `a = (alpha_i|alpha_j)`; returns `c(x)` through `x^order`.
///
/// `c(x) = (1 - q^{-e} x)^a_{q^2}` when the signs agree and `(1 - x)^{-a}_{q^2}`
/// when they differ.
pub fn contraction_series(
    i: usize,
    j: usize,
    signs: (Sign, Sign),
    order: u32,
    cartan: &CartanData,
) -> Result<UniPoly> {
    check_root(i, cartan)?;
    check_root(j, cartan)?;
    let a = cartan.entry(i, j);
    let series = if signs.0 == signs.1 {
        q_power_binomial(a, order).scale_variable(-2 * signs.0.value())
    } else {
        q_power_binomial(-a, order)
    };
    Ok(if series.order().is_some() {
        series
    } else {
        series.truncate(order as i64)
    })
}

/// The power of `z` in [`contraction_series`].
pub fn contraction_z_power(i: usize, j: usize, signs: (Sign, Sign), cartan: &CartanData) -> i64 {
    signs.0.value() * signs.1.value() * cartan.entry(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RootVector;

    fn a1() -> CartanData {
        CartanData::new(vec![vec![2]]).unwrap()
    }

    fn key(lattice: Vec<i64>) -> FockVector {
        FockVector::basis(FockBasisKey::new(vec![], RootVector(lattice)).unwrap())
    }

    #[test]
    fn x_plus_on_vacuum() {
        let c = a1();
        let rep = VertexRep::new(&c);
        let vac = FockVector::vacuum(1);
        // X^+(z) 1 = e^alpha (1 + ...), leading mode z^0 -> n = -1
        assert_eq!(rep.x_mode(0, Sign::Plus, -1, &vac).unwrap(), key(vec![1]));
        assert!(rep.x_mode(0, Sign::Plus, 0, &vac).unwrap().is_zero());
        let next = rep.x_mode(0, Sign::Plus, -2, &vac).unwrap();
        let expected = FockVector::term(
            FockBasisKey::new(vec![fock::Mode { root: 0, n: 1 }], RootVector(vec![1])).unwrap(),
            QScalar::s_pow(-1),
        );
        assert_eq!(next, expected);
    }

    #[test]
    fn psi_zero_is_k() {
        let c = a1();
        let rep = VertexRep::new(&c);
        let v = key(vec![1]);
        assert_eq!(rep.psi_mode(0, 0, &v).unwrap(), v.scale(&QScalar::q_pow(2)));
        assert_eq!(
            rep.phi_mode(0, 0, &v).unwrap(),
            v.scale(&QScalar::q_pow(-2))
        );
        assert!(rep.psi_mode(0, -1, &v).is_err());
        assert!(rep.phi_mode(0, 1, &v).is_err());
    }

    #[test]
    fn composite_range_is_checked() {
        let c = CartanData::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let rep = VertexRep::new(&c);
        let vac = FockVector::vacuum(2);
        assert!(rep.composite_mode(0, 1, Sign::Plus, 0, 0, &vac).is_ok());
        assert!(matches!(
            rep.composite_mode(0, 1, Sign::Plus, 1, 0, &vac),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn contraction_examples() {
        let c = a1();
        let same = contraction_series(0, 0, (Sign::Plus, Sign::Plus), 4, &c).unwrap();
        // (1 - x)(1 - q^{-2} x)
        let expected = (&(&UniPoly::one() - &UniPoly::x())
            * &(&UniPoly::one() - &UniPoly::monomial(QScalar::q_pow(-2), 1)))
            .truncate(4);
        assert_eq!(same, expected);
        assert_eq!(contraction_z_power(0, 0, (Sign::Plus, Sign::Minus), &c), -2);
    }
}
