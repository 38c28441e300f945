//! Instance builders for each relation. An instance is one choice of
//! operator parameters; it is checked against every enumerated basis key.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fock::{self, FockBasisKey, FockVector};
use crate::qcoeff::{q_binom, q_fact, q_int, q_minus_q_inv, QScalar};
use crate::vertex::{contraction_series, ModeSpec, Sign, VertexRep};

use super::Factor;

pub(crate) type CheckFn =
    Box<dyn Fn(&FockBasisKey) -> Result<(FockVector, FockVector)> + Send + Sync>;

/// One parameter choice: `order` ranks witnesses, `word` names the check,
/// and `check` returns `(expected, actual)` for a basis key.
pub(crate) struct Instance {
    pub order: Vec<i64>,
    pub word: String,
    pub check: CheckFn,
}

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn sign_index(s: Sign) -> i64 {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

fn x(root: usize, sign: Sign, n: i64) -> ModeSpec {
    ModeSpec::X { root, sign, n }
}

fn modes(range: i64) -> impl Iterator<Item = i64> + Clone {
    -range..=range
}

fn nonzero_modes(range: i64) -> impl Iterator<Item = i64> + Clone {
    (-range..=range).filter(|k| *k != 0)
}

fn word(rep: &VertexRep, w: &[ModeSpec], key: &FockBasisKey) -> Result<FockVector> {
    rep.apply_word(w, &FockVector::basis(key.clone()))
}

/// `[a_i(k), a_j(l)] = delta_{k+l,0} [(alpha_i|alpha_j) k]/k [k]`.
pub(crate) fn r2(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        for (k, m) in nonzero_modes(range).cartesian_product(nonzero_modes(range)) {
            let rep = rep.clone();
            let (ai, aj) = (ModeSpec::A { root: i, n: k }, ModeSpec::A { root: j, n: m });
            let scalar = if k + m == 0 {
                &fock::heisenberg_ratio(rep.cartan().entry(i, j), k) * &q_int(k)
            } else {
                QScalar::zero()
            };
            out.push(Instance {
                order: vec![i as i64, j as i64, k, m],
                word: format!("[{ai}, {aj}]"),
                check: Box::new(move |key| {
                    let actual = &word(&rep, &[ai, aj], key)? - &word(&rep, &[aj, ai], key)?;
                    Ok((FockVector::basis(key.clone()).scale(&scalar), actual))
                }),
            });
        }
    }
    out
}

/// `[a_i(k), K_j^{+-1}] = [q^{+-d}, K_j^{+-1}] = 0`.
pub(crate) fn r3(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        for power in [1, -1] {
            let kj = ModeSpec::K { root: j, power };
            for k in nonzero_modes(range) {
                let rep = rep.clone();
                let ai = ModeSpec::A { root: i, n: k };
                out.push(Instance {
                    order: vec![0, i as i64, j as i64, power, k],
                    word: format!("[{ai}, {kj}]"),
                    check: Box::new(move |key| {
                        Ok((word(&rep, &[kj, ai], key)?, word(&rep, &[ai, kj], key)?))
                    }),
                });
            }
            if i == 0 {
                let rep = rep.clone();
                let d = ModeSpec::Grading { power };
                out.push(Instance {
                    order: vec![1, 0, j as i64, power, 0],
                    word: format!("[{d}, {kj}]"),
                    check: Box::new(move |key| {
                        Ok((word(&rep, &[kj, d], key)?, word(&rep, &[d, kj], key)?))
                    }),
                });
            }
        }
    }
    out
}

/// `q^d x_{ik} q^{-d} = q^k x_{ik}` for `X^+-` and the Heisenberg modes.
pub(crate) fn r4(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let up = ModeSpec::Grading { power: 1 };
    let down = ModeSpec::Grading { power: -1 };
    let mut out = Vec::new();
    for i in 0..l {
        for k in modes(range) {
            let mut ops: Vec<(i64, ModeSpec)> = SIGNS
                .iter()
                .map(|s| (sign_index(*s), x(i, *s, k)))
                .collect();
            if k != 0 {
                ops.push((2, ModeSpec::A { root: i, n: k }));
            }
            for (tag, op) in ops {
                let rep = rep.clone();
                out.push(Instance {
                    order: vec![i as i64, tag, k],
                    word: format!("{up} {op} {down}"),
                    check: Box::new(move |key| {
                        let expected = word(&rep, &[op], key)?.scale(&QScalar::q_pow(k));
                        Ok((expected, word(&rep, &[up, op, down], key)?))
                    }),
                });
            }
        }
    }
    out
}

/// `K_i X_j^+-(k) K_i^{-1} = q^{+-(alpha_i|alpha_j)} X_j^+-(k)`.
pub(crate) fn r5(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        for sign in SIGNS {
            for k in modes(range) {
                let rep = rep.clone();
                let op = x(j, sign, k);
                let ki = ModeSpec::K { root: i, power: 1 };
                let kinv = ModeSpec::K { root: i, power: -1 };
                let c = QScalar::q_pow(sign.value() * rep.cartan().entry(i, j));
                out.push(Instance {
                    order: vec![i as i64, j as i64, sign_index(sign), k],
                    word: format!("{ki} {op} {kinv}"),
                    check: Box::new(move |key| {
                        let expected = word(&rep, &[op], key)?.scale(&c);
                        Ok((expected, word(&rep, &[ki, op, kinv], key)?))
                    }),
                });
            }
        }
    }
    out
}

/// `[a_i(k), X_j^+-(l)] = +- [(alpha_i|alpha_j) k]/k q^{-+|k|/2} X_j^+-(k+l)`.
pub(crate) fn r6(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        for sign in SIGNS {
            for (k, m) in nonzero_modes(range).cartesian_product(modes(range)) {
                let rep = rep.clone();
                let a = ModeSpec::A { root: i, n: k };
                let op = x(j, sign, m);
                let target = x(j, sign, k + m);
                let e = sign.value();
                let c = fock::heisenberg_ratio(rep.cartan().entry(i, j), k)
                    .shift(-e * k.abs())
                    .scale_int(e);
                out.push(Instance {
                    order: vec![i as i64, j as i64, sign_index(sign), k, m],
                    word: format!("[{a}, {op}]"),
                    check: Box::new(move |key| {
                        let expected = word(&rep, &[target], key)?.scale(&c);
                        let actual = &word(&rep, &[a, op], key)? - &word(&rep, &[op, a], key)?;
                        Ok((expected, actual))
                    }),
                });
            }
        }
    }
    out
}

/// Coefficients `(p, t) -> c` of `prod_r (z - c_r w)`, or of
/// `prod_r (w - c_r z)` when `swap` is set.
fn linear_product(cs: &[QScalar], swap: bool) -> Vec<((i64, i64), QScalar)> {
    let mut acc: BTreeMap<(i64, i64), QScalar> = BTreeMap::new();
    acc.insert((0, 0), QScalar::one());
    for c in cs {
        let mut next: BTreeMap<(i64, i64), QScalar> = BTreeMap::new();
        for ((p, t), v) in &acc {
            let (lead, trail) = if swap {
                ((*p, t + 1), (p + 1, *t))
            } else {
                ((p + 1, *t), (*p, t + 1))
            };
            *next.entry(lead).or_default() += v.clone();
            *next.entry(trail).or_default() -= &(v * c);
        }
        acc = next;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `sum_{p,t} c_{p,t} X_i(A+p) X_j(B+t)` applied to a key.
fn bilinear(
    rep: &VertexRep,
    poly: &[((i64, i64), QScalar)],
    first: (usize, i64),
    second: (usize, i64),
    sign: Sign,
    swap_order: bool,
    key: &FockBasisKey,
) -> Result<FockVector> {
    let mut out = FockVector::zero();
    for ((p, t), c) in poly {
        let xi = x(first.0, sign, first.1 + p);
        let xj = x(second.0, sign, second.1 + t);
        let w = if swap_order { [xj, xi] } else { [xi, xj] };
        out.add_scaled(&word(rep, &w, key)?, c);
    }
    Ok(out)
}

/// The exchange relation between `X_i^+-(z)` and `X_j^+-(w)` as implied by
/// the operator product expansion:
///
/// `prod_{r<-a} (z - q^{+-(a+2r)} w) X_i X_j + (-1)^{a+1} prod_{r<-a} (w - q^{+-(a+2r)} z) X_j X_i = 0`
/// for `i != j` and `(z - q^{+-2} w) X_i X_i + (w - q^{+-2} z) X_i X_i = 0`.
/// With `printed` set, the variant with `r` running to `-a+1`, exponents
/// `+-a + 2r` and a plain `+` is checked instead.
pub(crate) fn r7(rep: &Arc<VertexRep>, range: i64, printed: bool) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        let a = rep.cartan().entry(i, j);
        for sign in SIGNS {
            let e = sign.value();
            let (cs, second_sign): (Vec<QScalar>, i64) = if printed {
                (
                    (0..=(-a + 1))
                        .map(|r| QScalar::q_pow(e * a + 2 * r))
                        .collect(),
                    1,
                )
            } else if i == j {
                (vec![QScalar::q_pow(2 * e)], 1)
            } else {
                (
                    (0..-a).map(|r| QScalar::q_pow(e * (a + 2 * r))).collect(),
                    if (a + 1) % 2 == 0 { 1 } else { -1 },
                )
            };
            let p = Arc::new(linear_product(&cs, false));
            let q: Arc<Vec<_>> = Arc::new(
                linear_product(&cs, true)
                    .into_iter()
                    .map(|(k, c)| (k, c.scale_int(second_sign)))
                    .collect(),
            );
            for (ma, mb) in modes(range).cartesian_product(modes(range)) {
                let (rep, p, q) = (rep.clone(), p.clone(), q.clone());
                out.push(Instance {
                    order: vec![i as i64, j as i64, sign_index(sign), ma, mb],
                    word: format!(
                        "exchange X{s}_{}(z) X{s}_{}(w) at z^{} w^{}",
                        i + 1,
                        j + 1,
                        -ma - 1,
                        -mb - 1,
                        s = sign.symbol()
                    ),
                    check: Box::new(move |key| {
                        let lhs = bilinear(&rep, &p, (i, ma), (j, mb), sign, false, key)?;
                        let rhs = bilinear(&rep, &q, (i, ma), (j, mb), sign, true, key)?;
                        Ok((FockVector::zero(), &lhs + &rhs))
                    }),
                });
            }
        }
    }
    out
}

/// `(q - q^{-1}) [X_i^+(A), X_j^-(B)] = delta_ij (q^{(A-B)/2} psi_{i,A+B} - q^{(B-A)/2} phi_{i,A+B})`,
/// with `psi_M = 0` for `M < 0` and `phi_M = 0` for `M > 0`.
pub(crate) fn r8(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let qq = q_minus_q_inv();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        for (ma, mb) in modes(range).cartesian_product(modes(range)) {
            let (rep, qq) = (rep.clone(), qq.clone());
            let (xp, xm) = (x(i, Sign::Plus, ma), x(j, Sign::Minus, mb));
            out.push(Instance {
                order: vec![i as i64, j as i64, ma, mb],
                word: format!("(q - q^-1)[{xp}, {xm}]"),
                check: Box::new(move |key| {
                    let actual =
                        (&word(&rep, &[xp, xm], key)? - &word(&rep, &[xm, xp], key)?).scale(&qq);
                    let mut expected = FockVector::zero();
                    if i == j {
                        let m = ma + mb;
                        let v = FockVector::basis(key.clone());
                        if m >= 0 {
                            expected.add_scaled(&rep.psi_mode(i, m, &v)?, &QScalar::s_pow(ma - mb));
                        }
                        if m <= 0 {
                            expected
                                .add_scaled(&rep.phi_mode(i, m, &v)?, &-QScalar::s_pow(mb - ma));
                        }
                    }
                    Ok((expected, actual))
                }),
            });
        }
    }
    out
}

/// Deterministic Serre mode tuples `(n_1, ..., n_m, l)` inside the range,
/// starting with the all-zero tuple.
pub fn serre_tuples(m: usize, range: i64, count: usize) -> Vec<Vec<i64>> {
    let width = 2 * range + 1;
    let mut out: Vec<Vec<i64>> = vec![vec![0; m + 1], vec![-1.max(-range); m + 1]];
    let mut seed = 1i64;
    while out.len() < count && seed < 64 {
        let t: Vec<i64> = (0..=m as i64)
            .map(|r| (seed * (r + 1) + r * r).rem_euclid(width) - range)
            .collect();
        if !out.contains(&t) {
            out.push(t);
        }
        seed += 1;
    }
    out
}

/// The Serre sum on one key, organised over sub-multisets of the `X_i` modes
/// instead of over words. With `v` the key,
/// `A(T) = sum over distinct orderings of T of X_i(t_1) ... X_i(t_k) v`
/// satisfies `A(T) = sum_{t in T} X_i(t) A(T - t)`, and the partial sums
/// `E(U) = sum_{T in U} c_{m-|T|} (orderings of U - T) X_j(l) A(T)` satisfy
/// `E(U) = c_{m-|U|} X_j(l) A(U) + sum_{t in U} X_i(t) E(U - t)`. Each
/// distinct arrangement of the full tuple with `X_j` inserted is counted once.
struct SerreSum<'a> {
    rep: &'a VertexRep,
    key: &'a FockBasisKey,
    values: Vec<i64>,
    coeffs: Vec<QScalar>,
    i: usize,
    j: usize,
    sign: Sign,
    l: i64,
    a_memo: HashMap<Vec<usize>, FockVector>,
    e_memo: HashMap<Vec<usize>, FockVector>,
}

impl SerreSum<'_> {
    fn x(&self, root: usize, n: i64, v: &FockVector) -> Result<FockVector> {
        if v.is_zero() {
            return Ok(FockVector::zero());
        }
        self.rep.x_mode(root, self.sign, n, v)
    }

    fn a(&mut self, counts: &[usize]) -> Result<FockVector> {
        if let Some(v) = self.a_memo.get(counts) {
            return Ok(v.clone());
        }
        let mut total = if counts.iter().all(|c| *c == 0) {
            FockVector::basis(self.key.clone())
        } else {
            FockVector::zero()
        };
        for k in (0..counts.len()).filter(|&k| counts[k] > 0) {
            let mut rest = counts.to_vec();
            rest[k] -= 1;
            let inner = self.a(&rest)?;
            total = &total + &self.x(self.i, self.values[k], &inner)?;
        }
        self.a_memo.insert(counts.to_vec(), total.clone());
        Ok(total)
    }

    fn e(&mut self, counts: &[usize]) -> Result<FockVector> {
        if let Some(v) = self.e_memo.get(counts) {
            return Ok(v.clone());
        }
        let size: usize = counts.iter().sum();
        let c = self.coeffs[self.coeffs.len() - 1 - size].clone();
        let mut total = FockVector::zero();
        let right = self.a(counts)?;
        total.add_scaled(&self.x(self.j, self.l, &right)?, &c);
        for k in (0..counts.len()).filter(|&k| counts[k] > 0) {
            let mut rest = counts.to_vec();
            rest[k] -= 1;
            let inner = self.e(&rest)?;
            total = &total + &self.x(self.i, self.values[k], &inner)?;
        }
        self.e_memo.insert(counts.to_vec(), total.clone());
        Ok(total)
    }
}

/// `sum_{r, sigma} (-1)^r [m; r] X_i(n_s1) ... X_i(n_sr) X_j(l) X_i(n_s(r+1)) ... X_i(n_sm) = 0`.
/// Arrangements of a repeated tuple are summed once each; every arrangement
/// occurs equally often over the symmetric group, so the zero test is unchanged.
pub(crate) fn serre(
    rep: &Arc<VertexRep>,
    i: usize,
    j: usize,
    tuples: &[Vec<i64>],
) -> Result<Vec<Instance>> {
    let a = rep.cartan().entry(i, j);
    let m = (1 - a) as usize;
    if m > 4 {
        return Err(Error::CostGuard(format!(
            "Serre relation for (alpha_{}|alpha_{}) = {a} needs m = {m} > 4 factors; \
             lower the pairing or drop SERRE from the relation list",
            i + 1,
            j + 1
        )));
    }
    let coeffs: Vec<QScalar> = (0..=m as i64)
        .map(|r| q_binom(m as u32, r).scale_int(if r % 2 == 0 { 1 } else { -1 }))
        .collect();
    let mut out = Vec::new();
    for t in tuples {
        if t.len() != m + 1 {
            return Err(Error::InvalidConfig(format!(
                "Serre tuple {t:?} must have {} entries",
                m + 1
            )));
        }
        let (ns, l) = (&t[..m], t[m]);
        let counted = ns.iter().copied().counts();
        let values: Vec<i64> = counted.keys().copied().sorted().collect();
        let full: Vec<usize> = values.iter().map(|v| counted[v]).collect();
        for sign in SIGNS {
            let rep = rep.clone();
            let (values, full, coeffs) = (values.clone(), full.clone(), coeffs.clone());
            let mut order = vec![i as i64, j as i64, sign_index(sign)];
            order.extend(t);
            out.push(Instance {
                order,
                word: format!(
                    "Serre X{s}_{}{:?} X{s}_{}({l})",
                    i + 1,
                    ns,
                    j + 1,
                    s = sign.symbol()
                ),
                check: Box::new(move |key| {
                    let mut sum = SerreSum {
                        rep: &rep,
                        key,
                        values: values.clone(),
                        coeffs: coeffs.clone(),
                        i,
                        j,
                        sign,
                        l,
                        a_memo: HashMap::new(),
                        e_memo: HashMap::new(),
                    };
                    Ok((FockVector::zero(), sum.e(&full)?))
                }),
            });
        }
    }
    Ok(out)
}

/// The delta-function coefficients on the right of the exchange relation
/// for `(alpha_i|alpha_j) = a <= -2`, scaled by the normaliser
/// `N = (q - q^{-1})^n [n]!`, `n = -a - 2`.
///
/// The relation reads
/// `(z - q^{+-a} w) X_i(z) X_j(w) + (w - q^{+-a} z) X_j(w) X_i(z)
///   = sum_s c_s :X_i(z) X_j(w): z^{-1} w^{-n} delta(q^s w / z)`
/// over `s = n, n-2, ..., -n`, where for `s = n - 2r`
/// `c_s = (-1)^r q^{-binom(n,2) + r(n-1)} [n; r] / N`.
/// Returns `(N, [(s, N c_s)])`.
pub fn t3_coefficients(a: i64) -> (QScalar, Vec<(i64, QScalar)>) {
    let n = -a - 2;
    assert!(n >= 0, "t3_coefficients needs a <= -2");
    let norm = &q_minus_q_inv().pow(n as u32) * &q_fact(n as u32);
    let coeffs = (0..=n)
        .map(|r| {
            let s = n - 2 * r;
            let c = q_binom(n as u32, r)
                .shift(2 * (-(n * (n - 1) / 2) + r * (n - 1)))
                .scale_int(if r % 2 == 0 { 1 } else { -1 });
            (s, c)
        })
        .collect();
    (norm, coeffs)
}

/// Checks `N c_s prod_{t != s} (q^s - q^t) = N`, i.e. that the closed form is
/// the partial-fraction coefficient of `1 / prod_s (z - q^s w)`.
pub fn t3_coefficients_match_partial_fractions(a: i64) -> bool {
    let (norm, coeffs) = t3_coefficients(a);
    let ss: Vec<i64> = coeffs.iter().map(|(s, _)| *s).collect();
    coeffs.iter().all(|(s, c)| {
        let prod = ss
            .iter()
            .filter(|t| *t != s)
            .fold(QScalar::one(), |acc, t| {
                &acc * &(&QScalar::q_pow(*s) - &QScalar::q_pow(*t))
            });
        &prod * c == norm
    })
}

/// The exchange relations between `X_i^+-` and `X_j^+-`, `i != j`.
pub(crate) fn t3(rep: &Arc<VertexRep>, i: usize, j: usize, range: i64) -> Vec<Instance> {
    let a = rep.cartan().entry(i, j);
    let mut out = Vec::new();
    for sign in SIGNS {
        let e = sign.value();
        let qa = QScalar::q_pow(e * a);
        let rhs_data = if a <= -2 {
            let (norm, coeffs) = t3_coefficients(a);
            let products: Vec<(i64, QScalar, Arc<crate::vertex::NormalProduct>)> = coeffs
                .into_iter()
                .map(|(s, c)| {
                    let p = rep.product(&[
                        Factor::plain(i, sign, 0),
                        Factor {
                            root: j,
                            sign,
                            var: 0,
                            shift_half: -2 * s,
                        },
                    ]);
                    (s, c, p)
                })
                .collect();
            Some((norm, Arc::new(products)))
        } else {
            None
        };
        for (ma, mb) in modes(range).cartesian_product(modes(range)) {
            let rep = rep.clone();
            let qa = qa.clone();
            let rhs_data = rhs_data.clone();
            let (xi, xj) = (x(i, sign, ma), x(j, sign, mb));
            let label = if a == 0 {
                format!("[{xi}, {xj}]")
            } else {
                format!(
                    "(z - q^{}w) X{s}_{}(z) X{s}_{}(w) + (w - q^{}z) X{s}_{}(w) X{s}_{}(z) at z^{} w^{}",
                    e * a,
                    i + 1,
                    j + 1,
                    e * a,
                    j + 1,
                    i + 1,
                    -ma - 1,
                    -mb - 1,
                    s = sign.symbol()
                )
            };
            out.push(Instance {
                order: vec![sign_index(sign), ma, mb],
                word: label,
                check: Box::new(move |key| {
                    if a == 0 {
                        let actual = &word(&rep, &[xi, xj], key)? - &word(&rep, &[xj, xi], key)?;
                        return Ok((FockVector::zero(), actual));
                    }
                    let mut lhs = FockVector::zero();
                    let one = QScalar::one();
                    let neg_qa = -qa.clone();
                    lhs.add_scaled(&word(&rep, &[x(i, sign, ma + 1), xj], key)?, &one);
                    lhs.add_scaled(&word(&rep, &[xi, x(j, sign, mb + 1)], key)?, &neg_qa);
                    lhs.add_scaled(&word(&rep, &[x(j, sign, mb + 1), xi], key)?, &one);
                    lhs.add_scaled(&word(&rep, &[xj, x(i, sign, ma + 1)], key)?, &neg_qa);
                    match &rhs_data {
                        None => Ok((FockVector::zero(), lhs)),
                        Some((norm, products)) => {
                            let n = -a - 2;
                            let mut rhs = FockVector::zero();
                            for (s, c, p) in products.iter() {
                                let f = p.coefficient(key, &[n - ma - mb - 1]);
                                rhs.add_scaled(&f, &c.shift(2 * s * (n - mb - 1)));
                            }
                            Ok((rhs, lhs.scale(norm)))
                        }
                    }
                }),
            });
        }
    }
    out
}

/// `X_i^e(A) X_j^f(B) = sum_k g_k N[-A-1-c0+k, -B-1-k]` where `g` is the
/// contraction series, `z^{c0}` its prefactor and `N` the coefficients of
/// the normally ordered product; plus the reordering sign of `:X_i X_j:`.
pub(crate) fn ope(rep: &Arc<VertexRep>, range: i64) -> Vec<Instance> {
    let l = rep.cartan().rank();
    let mut out = Vec::new();
    for (i, j) in (0..l).cartesian_product(0..l) {
        let a = rep.cartan().entry(i, j);
        for (se, sf) in SIGNS.iter().copied().cartesian_product(SIGNS) {
            let normal = rep.product(&[Factor::plain(i, se, 0), Factor::plain(j, sf, 1)]);
            let reversed = rep.product(&[Factor::plain(j, sf, 1), Factor::plain(i, se, 0)]);
            let c0 = se.value() * sf.value() * a;
            for (ma, mb) in modes(range).cartesian_product(modes(range)) {
                let (rep_a, normal_a) = (rep.clone(), normal.clone());
                let (xi, xj) = (x(i, se, ma), x(j, sf, mb));
                out.push(Instance {
                    order: vec![
                        0,
                        i as i64,
                        j as i64,
                        sign_index(se),
                        sign_index(sf),
                        ma,
                        mb,
                    ],
                    word: format!("{xi} {xj}"),
                    check: Box::new(move |key| {
                        let actual = word(&rep_a, &[xi, xj], key)?;
                        let t_min = normal_a.min_exponent(key, 1);
                        let k_max = -mb - 1 - t_min;
                        let mut expected = FockVector::zero();
                        if k_max >= 0 {
                            let g =
                                contraction_series(i, j, (se, sf), k_max as u32, rep_a.cartan())?;
                            for (k, gk) in g.terms() {
                                let f = normal_a.coefficient(key, &[-ma - 1 - c0 + k, -mb - 1 - k]);
                                expected.add_scaled(&f, gk);
                            }
                        }
                        Ok((expected, actual))
                    }),
                });
                let (normal, reversed) = (normal.clone(), reversed.clone());
                let sign = QScalar::from_int(if a % 2 == 0 { 1 } else { -1 });
                out.push(Instance {
                    order: vec![
                        1,
                        i as i64,
                        j as i64,
                        sign_index(se),
                        sign_index(sf),
                        ma,
                        mb,
                    ],
                    word: format!(
                        ":X{}_{}(z) X{}_{}(w): at z^{ma} w^{mb}",
                        se.symbol(),
                        i + 1,
                        sf.symbol(),
                        j + 1
                    ),
                    check: Box::new(move |key| {
                        let lhs = normal.coefficient(key, &[ma, mb]);
                        let rhs = reversed.coefficient(key, &[ma, mb]).scale(&sign);
                        Ok((rhs, lhs))
                    }),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_products() {
        let p = linear_product(&[QScalar::q_pow(1)], false);
        assert_eq!(
            p,
            vec![((0, 1), -QScalar::q_pow(1)), ((1, 0), QScalar::one())]
        );
        let q = linear_product(&[QScalar::q_pow(1)], true);
        assert_eq!(
            q,
            vec![((0, 1), QScalar::one()), ((1, 0), -QScalar::q_pow(1))]
        );
        assert_eq!(linear_product(&[], false), vec![((0, 0), QScalar::one())]);
    }

    #[test]
    fn t3_closed_form_is_partial_fractions() {
        for a in -6..=-2 {
            assert!(t3_coefficients_match_partial_fractions(a), "a = {a}");
        }
        let (norm, cs) = t3_coefficients(-2);
        assert!(norm.is_one());
        assert_eq!(cs, vec![(0, QScalar::one())]);
    }

    #[test]
    fn serre_tuples_are_distinct_and_in_range() {
        let ts = serre_tuples(3, 2, 6);
        assert_eq!(ts.len(), 6);
        assert_eq!(ts[0], vec![0; 4]);
        assert!(ts.iter().flatten().all(|n| n.abs() <= 2));
        assert_eq!(ts.iter().unique().count(), 6);
    }
}
