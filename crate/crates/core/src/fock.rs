//! The level-one Fock module: a polynomial algebra in the creation modes
//! tensored with the twisted group algebra of the root lattice.
//!
//! A basis key stands for the normalised monomial
//! `prod a_i(-n)/[n]  (x)  e^beta`. Dividing each creation mode by `[n]` keeps
//! every matrix coefficient of the vertex operators inside
//! `Q[q^{1/2}, q^{-1/2}]`; for `n = 1` the normalisation is invisible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::{CartanData, RootVector};
use crate::qcoeff::{q_int, QScalar};

/// One creation generator `a_root(-n)/[n]`; `root` is 0-based, `n > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub root: usize,
    pub n: u32,
}

/// A basis vector of the Fock module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisKey {
    modes: Vec<Mode>,
    lattice: RootVector,
}

impl FockBasisKey {
    pub fn vacuum(rank: usize) -> Self {
        FockBasisKey {
            modes: Vec::new(),
            lattice: RootVector::zero(rank),
        }
    }

    pub fn new(mut modes: Vec<Mode>, lattice: RootVector) -> Result<Self> {
        if let Some(bad) = modes.iter().find(|m| m.n == 0) {
            return Err(Error::Domain(format!(
                "creation mode a_{}(0) is not a creation operator",
                bad.root + 1
            )));
        }
        if let Some(bad) = modes.iter().find(|m| m.root >= lattice.rank()) {
            return Err(Error::RankMismatch {
                expected: lattice.rank(),
                found: bad.root + 1,
            });
        }
        modes.sort_unstable();
        Ok(FockBasisKey { modes, lattice })
    }

    pub(crate) fn from_sorted(modes: Vec<Mode>, lattice: RootVector) -> Self {
        debug_assert!(modes.windows(2).all(|w| w[0] <= w[1]));
        FockBasisKey { modes, lattice }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn lattice(&self) -> &RootVector {
        &self.lattice
    }

    /// Sum of the mode numbers (the oscillator degree).
    pub fn degree(&self) -> u32 {
        self.modes.iter().map(|m| m.n).sum()
    }

    pub fn multiplicity(&self, mode: Mode) -> usize {
        self.modes.iter().filter(|m| **m == mode).count()
    }

    /// Eigenvalue of the grading operator `d`: minus the oscillator degree
    /// minus half the norm of the lattice part.
    pub fn grading(&self, cartan: &CartanData) -> i64 {
        let norm = cartan.pairing_unchecked(&self.lattice, &self.lattice);
        -(self.degree() as i64) - norm / 2
    }

    fn with_inserted(&self, mode: Mode) -> Self {
        let mut modes = self.modes.clone();
        let pos = modes.partition_point(|m| *m <= mode);
        modes.insert(pos, mode);
        FockBasisKey {
            modes,
            lattice: self.lattice.clone(),
        }
    }

    fn with_removed(&self, mode: Mode) -> Option<Self> {
        let pos = self.modes.iter().position(|m| *m == mode)?;
        let mut modes = self.modes.clone();
        modes.remove(pos);
        Some(FockBasisKey {
            modes,
            lattice: self.lattice.clone(),
        })
    }

    fn with_lattice(&self, lattice: RootVector) -> Self {
        FockBasisKey {
            modes: self.modes.clone(),
            lattice,
        }
    }
}

/// Merges two sorted mode lists.
pub(crate) fn merge_modes(a: &[Mode], b: &[Mode]) -> Vec<Mode> {
    a.iter().merge(b.iter()).copied().collect()
}

/// `a_1(-1)^2 a_2(-3) e[1,0]`, 1-based roots; the key stands for the
/// normalised monomial described in the module docs.
impl fmt::Display for FockBasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (mode, group) in &self.modes.iter().chunk_by(|m| **m) {
            let k = group.count();
            write!(f, "a_{}(-{})", mode.root + 1, mode.n)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
            write!(f, " ")?;
        }
        write!(f, "e{}", self.lattice)
    }
}

/// A finite linear combination of basis keys.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FockVector {
    entries: BTreeMap<FockBasisKey, QScalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(key: FockBasisKey) -> Self {
        Self::term(key, QScalar::one())
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::basis(FockBasisKey::vacuum(rank))
    }

    pub fn term(key: FockBasisKey, c: QScalar) -> Self {
        let mut v = FockVector::zero();
        v.add_term(key, c);
        v
    }

    pub fn add_term(&mut self, key: FockBasisKey, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&key) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &QScalar) {
        for (k, x) in &other.entries {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockBasisKey, &QScalar)> {
        self.entries.iter()
    }

    pub fn coeff(&self, key: &FockBasisKey) -> QScalar {
        self.entries.get(key).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = FockVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies `f` to every basis key and sums the results with the
    /// corresponding coefficients.
    pub fn flat_map_keys<F>(&self, mut f: F) -> Result<FockVector>
    where
        F: FnMut(&FockBasisKey) -> Result<FockVector>,
    {
        let mut out = FockVector::zero();
        for (k, c) in &self.entries {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl FromIterator<(FockBasisKey, QScalar)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockBasisKey, QScalar)>>(iter: I) -> Self {
        let mut out = FockVector::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &QScalar::one());
        out
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &QScalar::from_int(-1));
        out
    }
}

impl Neg for &FockVector {
    type Output = FockVector;
    fn neg(self) -> FockVector {
        self.scale(&QScalar::from_int(-1))
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (key, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{key}")?;
            } else if c.len() > 1 {
                write!(f, "({c})*{key}")?;
            } else {
                write!(f, "{c}*{key}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockVector({self})")
    }
}

/// `[(alpha_i|alpha_j) m] / m`, the Heisenberg structure constant divided
/// by `[m]`.
pub(crate) fn heisenberg_ratio(pairing: i64, m: i64) -> QScalar {
    q_int(pairing * m).scale(&BigRational::new(1.into(), m.into()))
}

/// Action of the Heisenberg mode `a_i(m)`, `m != 0`.
///
/// For `m < 0` this multiplies by `a_i(m) = [|m|] * (a_i(m)/[|m|])`; for
/// `m > 0` it differentiates, `a_i(m)` sending the normalised generator
/// `a_j(-m)/[m]` to `[(alpha_i|alpha_j) m] / m`.
pub fn heisenberg_act(i: usize, m: i64, v: &FockVector, cartan: &CartanData) -> Result<FockVector> {
    if m == 0 {
        return Err(Error::Domain(
            "a_i(0) is the zero mode; use zero_mode_act".into(),
        ));
    }
    check_root(i, cartan)?;
    let n = m.unsigned_abs() as u32;
    if m < 0 {
        let c = q_int(n as i64);
        return v.flat_map_keys(|k| {
            Ok(FockVector::term(
                k.with_inserted(Mode { root: i, n }),
                c.clone(),
            ))
        });
    }
    v.flat_map_keys(|k| {
        let mut out = FockVector::zero();
        for (mode, group) in &k.modes.iter().chunk_by(|x| **x) {
            if mode.n != n {
                continue;
            }
            let mult = group.count() as i64;
            let c = heisenberg_ratio(cartan.entry(i, mode.root), m).scale_int(mult);
            out.add_term(k.with_removed(mode).expect("mode present"), c);
        }
        Ok(out)
    })
}

/// `a_i(0) e^beta = (alpha_i | beta) e^beta`.
pub fn zero_mode_act(i: usize, v: &FockVector, cartan: &CartanData) -> Result<FockVector> {
    check_root(i, cartan)?;
    v.flat_map_keys(|k| {
        let p = cartan.pairing_simple(i, &k.lattice);
        Ok(FockVector::term(k.clone(), QScalar::from_int(p)))
    })
}

/// `K_i^power = q^{power * a_i(0)}`.
pub fn k_act(i: usize, power: i64, v: &FockVector, cartan: &CartanData) -> Result<FockVector> {
    check_root(i, cartan)?;
    v.flat_map_keys(|k| {
        let p = cartan.pairing_simple(i, &k.lattice);
        Ok(FockVector::term(k.clone(), QScalar::q_pow(power * p)))
    })
}

/// `q^{power * d}` for the grading operator `d`.
pub fn grading_act(power: i64, v: &FockVector, cartan: &CartanData) -> FockVector {
    v.flat_map_keys(|k| {
        Ok(FockVector::term(
            k.clone(),
            QScalar::q_pow(power * k.grading(cartan)),
        ))
    })
    .expect("grading is total")
}

/// Left multiplication by `e^a` in the twisted group algebra.
pub fn group_translate(a: &RootVector, v: &FockVector, cartan: &CartanData) -> Result<FockVector> {
    if a.rank() != cartan.rank() {
        return Err(Error::RankMismatch {
            expected: cartan.rank(),
            found: a.rank(),
        });
    }
    v.flat_map_keys(|k| {
        let sign = cartan.cocycle_unchecked(a, &k.lattice);
        Ok(FockVector::term(
            k.with_lattice(a + &k.lattice),
            QScalar::from_int(sign),
        ))
    })
}

pub(crate) fn check_root(i: usize, cartan: &CartanData) -> Result<()> {
    if i >= cartan.rank() {
        return Err(Error::Domain(format!(
            "root index {} out of range for rank {}",
            i + 1,
            cartan.rank()
        )));
    }
    Ok(())
}

/// All multisets of creation modes with total degree at most `cap`, each
/// sorted, in lexicographic order.
pub(crate) fn mode_multisets(rank: usize, cap: u32) -> Vec<Vec<Mode>> {
    fn extend(rank: usize, budget: u32, min: Mode, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
        out.push(cur.clone());
        for root in min.root..rank {
            let start = if root == min.root { min.n } else { 1 };
            for n in start..=budget {
                let m = Mode { root, n };
                cur.push(m);
                extend(rank, budget - n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(rank, cap, Mode { root: 0, n: 1 }, &mut Vec::new(), &mut out);
    out
}

/// Every basis key with oscillator degree at most `degree_cap` and lattice
/// coordinates in `[-lattice_box, lattice_box]`, ordered by degree, then
/// modes, then lattice vector.
pub fn enumerate_basis(
    cartan: &CartanData,
    degree_cap: u32,
    lattice_box: u32,
) -> Vec<FockBasisKey> {
    let rank = cartan.rank();
    let b = lattice_box as i64;
    let lattices: Vec<RootVector> = (0..rank)
        .map(|_| -b..=b)
        .multi_cartesian_product()
        .map(RootVector)
        .collect();
    let lattices = if rank == 0 {
        vec![RootVector::zero(0)]
    } else {
        lattices
    };
    let mut keys: Vec<FockBasisKey> = mode_multisets(rank, degree_cap)
        .into_iter()
        .flat_map(|modes| {
            lattices
                .iter()
                .map(move |l| FockBasisKey::from_sorted(modes.clone(), l.clone()))
        })
        .collect();
    keys.sort_by(|a, b| {
        (a.degree(), &a.modes, &a.lattice).cmp(&(b.degree(), &b.modes, &b.lattice))
    });
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> CartanData {
        CartanData::new(vec![vec![2]]).unwrap()
    }

    fn a2() -> CartanData {
        CartanData::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    #[test]
    fn annihilator_kills_vacuum() {
        let c = a1();
        let out = heisenberg_act(0, 1, &FockVector::vacuum(1), &c).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn annihilate_after_create() {
        let c = a1();
        let v = heisenberg_act(0, -1, &FockVector::vacuum(1), &c).unwrap();
        let out = heisenberg_act(0, 1, &v, &c).unwrap();
        assert_eq!(out, FockVector::vacuum(1).scale(&q_int(2)));
        let mismatched = heisenberg_act(0, 2, &v, &c).unwrap();
        assert!(mismatched.is_zero());
        assert!(matches!(
            heisenberg_act(0, 0, &v, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_modes_and_k() {
        let c = a2();
        assert!(zero_mode_act(0, &FockVector::vacuum(2), &c)
            .unwrap()
            .is_zero());
        let e2 = FockVector::basis(FockBasisKey::new(vec![], c.simple_root(1)).unwrap());
        assert_eq!(
            zero_mode_act(0, &e2, &c).unwrap(),
            e2.scale(&QScalar::from_int(-1))
        );
        let e1 = FockVector::basis(FockBasisKey::new(vec![], c.simple_root(0)).unwrap());
        assert_eq!(k_act(0, 1, &e1, &c).unwrap(), e1.scale(&QScalar::q_pow(2)));
    }

    #[test]
    fn twisted_translations() {
        let c = a2();
        let vac = FockVector::vacuum(2);
        let (r1, r2) = (c.simple_root(0), c.simple_root(1));
        let e1 = group_translate(&r1, &vac, &c).unwrap();
        assert_eq!(
            e1,
            FockVector::basis(FockBasisKey::new(vec![], r1.clone()).unwrap())
        );
        let ab = group_translate(&r1, &group_translate(&r2, &vac, &c).unwrap(), &c).unwrap();
        let ba = group_translate(&r2, &e1, &c).unwrap();
        assert_eq!(ab, -&ba);
        let twice = group_translate(&r1, &e1, &c).unwrap();
        assert_eq!(
            twice,
            FockVector::basis(FockBasisKey::new(vec![], r1.scaled(2)).unwrap())
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_basis(&a1(), 0, 0), vec![FockBasisKey::vacuum(1)]);
        let keys = enumerate_basis(&a1(), 2, 0);
        let rendered: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
        assert_eq!(
            rendered,
            ["e[0]", "a_1(-1) e[0]", "a_1(-1)^2 e[0]", "a_1(-2) e[0]"]
        );
        assert_eq!(enumerate_basis(&a2(), 1, 0).len(), 3);
        assert_eq!(enumerate_basis(&a2(), 2, 1).len(), 8 * 9);
    }

    #[test]
    fn key_rendering() {
        let k = FockBasisKey::new(
            vec![
                Mode { root: 1, n: 3 },
                Mode { root: 0, n: 1 },
                Mode { root: 0, n: 1 },
            ],
            RootVector(vec![1, 0]),
        )
        .unwrap();
        assert_eq!(k.to_string(), "a_1(-1)^2 a_2(-3) e[1,0]");
    }
}
