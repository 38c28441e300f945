//! Matrix coefficients of normally ordered products of vertex operators.
//!
//! A [`NormalProduct`] is `:X_{i_1}^{e_1}(q^{h_1/2} z_{v_1}) ... X_{i_k}^{e_k}(q^{h_k/2} z_{v_k}):`
//! with every factor attached to one of a few formal variables. Acting on a
//! basis key it splits into a lattice part, an annihilation part (a Taylor
//! shift of the creation generators) and a creation part (an exponential of
//! linear forms), and a single coefficient is extracted without ever
//! expanding the full generating series.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::fock::{merge_modes, FockBasisKey, FockVector, Mode};
use crate::lattice::{CartanData, RootVector};
use crate::qcoeff::{q_int, QScalar};

/// The sign of a vertex operator, `X^+` or `X^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Knobs on the vertex-operator formula. The default is the correct
/// construction; `flip_half_power` replaces `q^{-+n/2}` by `q^{+-n/2}` in
/// both exponentials and exists so the harness can be shown to catch a
/// wrong convention.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Convention {
    pub flip_half_power: bool,
}

/// One factor `X_root^sign(q^{shift_half/2} z_var)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Factor {
    pub root: usize,
    pub sign: Sign,
    pub var: usize,
    pub shift_half: i64,
}

impl Factor {
    pub fn plain(root: usize, sign: Sign, var: usize) -> Self {
        Factor {
            root,
            sign,
            var,
            shift_half: 0,
        }
    }
}

pub(crate) type Monomials = HashMap<Vec<Mode>, QScalar>;

/// Coefficients of `exp(sum_n L_n z^n)` where each `L_n` is a linear form
/// in the generators `a_r(-n)/[n]`, grown on demand by the recursion
/// `d P_d = sum_n n L_n P_{d-n}`.
pub(crate) struct ExpSeries {
    forms: Vec<Vec<(usize, QScalar)>>,
    coeffs: Vec<Arc<Monomials>>,
}

impl ExpSeries {
    pub fn new() -> Self {
        let mut unit = Monomials::new();
        unit.insert(Vec::new(), QScalar::one());
        ExpSeries {
            forms: Vec::new(),
            coeffs: vec![Arc::new(unit)],
        }
    }

    /// Coefficient of `z^d`; `form(n)` lists `(root, c)` for `L_n`.
    pub fn coeff(
        &mut self,
        d: usize,
        form: &dyn Fn(u32) -> Vec<(usize, QScalar)>,
    ) -> Arc<Monomials> {
        while self.forms.len() < d {
            let n = self.forms.len() as u32 + 1;
            self.forms
                .push(form(n).into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        while self.coeffs.len() <= d {
            let deg = self.coeffs.len();
            let mut next = Monomials::new();
            for n in 1..=deg {
                let lin = &self.forms[n - 1];
                if lin.is_empty() {
                    continue;
                }
                for (mons, c) in self.coeffs[deg - n].iter() {
                    for (root, lc) in lin {
                        let mode = Mode {
                            root: *root,
                            n: n as u32,
                        };
                        let key = merge_modes(mons, &[mode]);
                        let val = (c * lc).scale_int(n as i64);
                        accumulate(&mut next, key, val);
                    }
                }
            }
            let inv = BigRational::new(BigInt::from(1), BigInt::from(deg));
            let next = next
                .into_iter()
                .map(|(k, c)| (k, c.scale(&inv)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            self.coeffs.push(Arc::new(next));
        }
        self.coeffs[d].clone()
    }
}

fn accumulate<K: std::hash::Hash + Eq>(map: &mut HashMap<K, QScalar>, key: K, val: QScalar) {
    if val.is_zero() {
        return;
    }
    let slot = map.entry(key).or_default();
    *slot += val;
}

/// One term of an annihilation expansion: the surviving generators, the
/// powers of each variable produced, and a coefficient.
#[derive(Debug, Clone)]
pub(crate) struct AnnTerm {
    pub exps: Vec<i64>,
    pub modes: Vec<Mode>,
    pub coeff: QScalar,
}

/// Applies the shift `y_{j,n} -> y_{j,n} + sum_v shift(j, n)[v] z_v^{-n}` to
/// the monomial `modes`.
pub(crate) fn expand_annihilation(
    modes: &[Mode],
    nvars: usize,
    shift: &dyn Fn(usize, u32) -> Vec<(usize, QScalar)>,
) -> Vec<AnnTerm> {
    let mut acc: HashMap<(Vec<i64>, Vec<Mode>), QScalar> = HashMap::new();
    acc.insert((vec![0; nvars], Vec::new()), QScalar::one());
    for (mode, group) in &modes.iter().chunk_by(|m| **m) {
        let e = group.count();
        let shifts: Vec<(usize, QScalar)> = shift(mode.root, mode.n)
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        // distribute the e copies: t[0] stay, t[k+1] go to shifts[k]
        let splits = compositions(e, shifts.len() + 1);
        let mut next: HashMap<(Vec<i64>, Vec<Mode>), QScalar> = HashMap::new();
        for t in &splits {
            let mut factor = QScalar::from_rational(multinomial(t));
            let mut dexp = vec![0i64; nvars];
            for (k, (var, c)) in shifts.iter().enumerate() {
                if t[k + 1] > 0 {
                    factor = &factor * &c.pow(t[k + 1] as u32);
                    dexp[*var] -= (mode.n as i64) * t[k + 1] as i64;
                }
            }
            let kept = vec![mode; t[0]];
            for ((exps, ms), c) in &acc {
                let exps2: Vec<i64> = exps.iter().zip(&dexp).map(|(a, b)| a + b).collect();
                let ms2 = merge_modes(ms, &kept);
                accumulate(&mut next, (exps2, ms2), c * &factor);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|((exps, modes), coeff)| AnnTerm { exps, modes, coeff })
        .collect()
}

/// All `parts`-tuples of nonnegative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn multinomial(t: &[usize]) -> BigRational {
    let mut num = BigInt::from(1);
    let mut k = 0u64;
    for &part in t {
        for j in 1..=part as u64 {
            k += 1;
            num = num * BigInt::from(k) / BigInt::from(j);
        }
    }
    BigRational::from_integer(num)
}

/// `[a n] / (n [n])`, the pairing of `a_i(n)/[n]` with `a_j(-n)/[n]` when
/// `(alpha_i|alpha_j) = a`.
pub(crate) fn pairing_ratio(a: i64, n: u32) -> QScalar {
    let n = n as i64;
    q_int(a * n)
        .exact_div(&q_int(n))
        .expect("[an]/[n] is a Laurent polynomial")
        .scale(&BigRational::new(BigInt::from(1), BigInt::from(n)))
}

// the expansion cache is dropped wholesale past this many mode lists
const ANNIHILATION_CACHE_LIMIT: usize = 1 << 14;

/// A normally ordered product of vertex operators in `nvars` variables.
pub(crate) struct NormalProduct {
    cartan: CartanData,
    factors: Vec<Factor>,
    nvars: usize,
    convention: Convention,
    creation: Vec<Mutex<ExpSeries>>,
    annihilation: Mutex<HashMap<Vec<Mode>, Arc<Vec<AnnTerm>>>>,
}

impl NormalProduct {
    pub fn new(cartan: &CartanData, factors: Vec<Factor>, convention: Convention) -> Self {
        let nvars = factors.iter().map(|f| f.var + 1).max().unwrap_or(0);
        NormalProduct {
            cartan: cartan.clone(),
            factors,
            nvars,
            convention,
            creation: (0..nvars).map(|_| Mutex::new(ExpSeries::new())).collect(),
            annihilation: Mutex::new(HashMap::new()),
        }
    }

    /// Half-exponent of the `q^{-+n/2}` factor for a factor of sign `e`.
    fn half_power(&self, e: i64, n: i64) -> i64 {
        if self.convention.flip_half_power {
            e * n
        } else {
            -e * n
        }
    }

    fn creation_form(&self, var: usize, n: u32) -> Vec<(usize, QScalar)> {
        let mut by_root: HashMap<usize, QScalar> = HashMap::new();
        for f in self.factors.iter().filter(|f| f.var == var) {
            let e = f.sign.value();
            let n = n as i64;
            let c = QScalar::s_pow(self.half_power(e, n) + f.shift_half * n).scale_int(e);
            accumulate(&mut by_root, f.root, c);
        }
        by_root.into_iter().sorted_by_key(|(r, _)| *r).collect()
    }

    fn annihilation_shift(&self, j: usize, n: u32) -> Vec<(usize, QScalar)> {
        let mut by_var: HashMap<usize, QScalar> = HashMap::new();
        for f in &self.factors {
            let e = f.sign.value();
            let a = self.cartan.entry(f.root, j);
            if a == 0 {
                continue;
            }
            let ni = n as i64;
            let c = (&pairing_ratio(a, n)
                * &QScalar::s_pow(self.half_power(e, ni) - f.shift_half * ni))
                .scale_int(-e);
            accumulate(&mut by_var, f.var, c);
        }
        by_var.into_iter().sorted_by_key(|(v, _)| *v).collect()
    }

    fn annihilation_terms(&self, modes: &[Mode]) -> Arc<Vec<AnnTerm>> {
        if let Some(hit) = self.annihilation.lock().unwrap().get(modes) {
            return hit.clone();
        }
        let terms = Arc::new(expand_annihilation(modes, self.nvars, &|j, n| {
            self.annihilation_shift(j, n)
        }));
        let mut cache = self.annihilation.lock().unwrap();
        if cache.len() >= ANNIHILATION_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(modes.to_vec(), terms.clone());
        terms
    }

    fn creation_coeff(&self, var: usize, d: usize) -> Arc<Monomials> {
        let mut series = self.creation[var].lock().unwrap();
        series.coeff(d, &|n| self.creation_form(var, n))
    }

    /// Lattice data for `key`: per-variable `z` powers, the `q` half-power
    /// from the shifted arguments, the cocycle sign and the new lattice part.
    fn lattice_part(&self, beta: &RootVector) -> (Vec<i64>, i64, i64, RootVector) {
        let mut zpow = vec![0i64; self.nvars];
        let mut half = 0i64;
        for f in &self.factors {
            let p = f.sign.value() * self.cartan.pairing_simple(f.root, beta);
            zpow[f.var] += p;
            half += f.shift_half * p;
        }
        let mut sign = 1;
        let mut cur = beta.clone();
        for f in self.factors.iter().rev() {
            let step = RootVector::simple(self.cartan.rank(), f.root).scaled(f.sign.value());
            sign *= self.cartan.cocycle_unchecked(&step, &cur);
            cur = &step + &cur;
        }
        (zpow, half, sign, cur)
    }

    /// Coefficient of `prod_v z_v^{target[v]}` in the product applied to
    /// `key`.
    pub fn coefficient(&self, key: &FockBasisKey, target: &[i64]) -> FockVector {
        self.coefficient_vec(&FockVector::basis(key.clone()), target)
    }

    /// Coefficient applied to a general vector.
    ///
    /// The annihilation part runs first on every key and the results are
    /// merged by what the creation part still has to supply (lattice, degree
    /// per variable, surviving generators). Only then are the creation
    /// monomials multiplied in, once per merged remainder.
    pub fn coefficient_vec(&self, v: &FockVector, target: &[i64]) -> FockVector {
        debug_assert_eq!(target.len(), self.nvars);
        type Remainder = (RootVector, Vec<usize>, Vec<Mode>);
        let mut lattices: HashMap<RootVector, (Vec<i64>, QScalar, RootVector)> = HashMap::new();
        let mut reduced: HashMap<Remainder, QScalar> = HashMap::new();
        for (key, c) in v.iter() {
            let (zpow, prefactor, lattice) =
                lattices.entry(key.lattice().clone()).or_insert_with(|| {
                    let (zpow, half, sign, lattice) = self.lattice_part(key.lattice());
                    (zpow, QScalar::s_pow(half).scale_int(sign), lattice)
                });
            let scaled = c * &*prefactor;
            'terms: for term in self.annihilation_terms(key.modes()).iter() {
                let mut degrees = Vec::with_capacity(self.nvars);
                for v in 0..self.nvars {
                    let d = target[v] - zpow[v] - term.exps[v];
                    if d < 0 {
                        continue 'terms;
                    }
                    degrees.push(d as usize);
                }
                let id = (lattice.clone(), degrees, term.modes.clone());
                accumulate(&mut reduced, id, &scaled * &term.coeff);
            }
        }
        let mut out: HashMap<FockBasisKey, QScalar> = HashMap::new();
        for ((lattice, degrees, modes), c) in reduced {
            if c.is_zero() {
                continue;
            }
            let mut partial: Vec<(Vec<Mode>, QScalar)> = vec![(modes, c)];
            for (v, d) in degrees.iter().enumerate() {
                let cre = self.creation_coeff(v, *d);
                let mut next = Vec::with_capacity(partial.len() * cre.len());
                for (ms, c) in &partial {
                    for (cm, cc) in cre.iter() {
                        next.push((merge_modes(ms, cm), c * cc));
                    }
                }
                partial = next;
            }
            for (ms, c) in partial {
                accumulate(&mut out, FockBasisKey::from_sorted(ms, lattice.clone()), c);
            }
        }
        out.into_iter().collect()
    }

    /// The smallest power of `z_var` that can occur when acting on `key`,
    /// used to bound finite sums over modes.
    pub fn min_exponent(&self, key: &FockBasisKey, var: usize) -> i64 {
        let (zpow, ..) = self.lattice_part(key.lattice());
        let deg: i64 = key.modes().iter().map(|m| m.n as i64).sum();
        zpow[var] - deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_and_multinomials() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(
            multinomial(&[1, 1, 2]),
            BigRational::from_integer(12.into())
        );
    }

    #[test]
    fn exp_series_of_single_generator() {
        // exp(y z) has z^2 coefficient y^2 / 2
        let mut s = ExpSeries::new();
        let form = |n: u32| {
            if n == 1 {
                vec![(0, QScalar::one())]
            } else {
                vec![]
            }
        };
        let c2 = s.coeff(2, &form);
        let key = vec![Mode { root: 0, n: 1 }; 2];
        assert_eq!(
            c2[&key],
            QScalar::from_rational(BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn pairing_ratio_values() {
        assert_eq!(
            pairing_ratio(2, 1),
            &QScalar::q_pow(1) + &QScalar::q_pow(-1)
        );
        assert_eq!(pairing_ratio(0, 3), QScalar::zero());
        // [4]/(2[2]) = (q^2 + q^-2)/2
        let expected =
            (&QScalar::q_pow(2) + &QScalar::q_pow(-2)).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(pairing_ratio(2, 2), expected);
    }
}
