//! Symmetric generalized Cartan matrices, the root lattice and the sign
//! cocycle of its twisted group algebra.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated symmetric generalized Cartan matrix.
///
/// `a_ii = 2` and `a_ij = a_ji <= 0` for `i != j`. The matrix doubles as the
/// Gram matrix of the bilinear form on the root lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CartanFile", into = "CartanFile")]
pub struct CartanData {
    matrix: Vec<Vec<i64>>,
}

/// On-disk shape of a Cartan matrix: `{"rank": l, "matrix": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CartanFile {
    rank: usize,
    matrix: Vec<Vec<i64>>,
}

impl TryFrom<CartanFile> for CartanData {
    type Error = Error;
    fn try_from(f: CartanFile) -> Result<Self> {
        if f.matrix.len() != f.rank {
            return Err(Error::InvalidCartan {
                invariant: "shape",
                detail: format!("rank {} but {} rows", f.rank, f.matrix.len()),
            });
        }
        CartanData::new(f.matrix)
    }
}

impl From<CartanData> for CartanFile {
    fn from(c: CartanData) -> Self {
        CartanFile {
            rank: c.rank(),
            matrix: c.matrix,
        }
    }
}

impl CartanData {
    // index loops read closer to a_ij / a_ji than iterator chains here
    #[allow(clippy::needless_range_loop)]
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let l = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != l {
                return Err(Error::InvalidCartan {
                    invariant: "shape",
                    detail: format!("row {} has {} entries, expected {l}", i + 1, row.len()),
                });
            }
        }
        for i in 0..l {
            if matrix[i][i] != 2 {
                return Err(Error::InvalidCartan {
                    invariant: "diagonal",
                    detail: format!("a_{0}{0} = {1}, expected 2", i + 1, matrix[i][i]),
                });
            }
        }
        for i in 0..l {
            for j in 0..l {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidCartan {
                        invariant: "symmetry",
                        detail: format!(
                            "a_{}{} = {} but a_{}{} = {}",
                            i + 1,
                            j + 1,
                            matrix[i][j],
                            j + 1,
                            i + 1,
                            matrix[j][i]
                        ),
                    });
                }
                if i != j && matrix[i][j] > 0 {
                    return Err(Error::InvalidCartan {
                        invariant: "sign",
                        detail: format!("a_{}{} = {} is positive", i + 1, j + 1, matrix[i][j]),
                    });
                }
            }
        }
        Ok(CartanData { matrix })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CartanFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        CartanData::try_from(file)
    }

    /// The rank-`l` matrix with every off-diagonal entry equal to `a`.
    pub fn uniform(rank: usize, a: i64) -> Result<Self> {
        CartanData::new(
            (0..rank)
                .map(|i| (0..rank).map(|j| if i == j { 2 } else { a }).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// `a_ij`, 0-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        RootVector::simple(self.rank(), i)
    }

    /// `(a | b) = a^T A b`.
    pub fn pairing(&self, a: &RootVector, b: &RootVector) -> Result<i64> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        Ok(self.pairing_unchecked(a, b))
    }

    pub(crate) fn pairing_unchecked(&self, a: &RootVector, b: &RootVector) -> i64 {
        let mut total = 0;
        for (i, ai) in a.0.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                total += ai * self.matrix[i][j] * bj;
            }
        }
        total
    }

    /// `(alpha_i | b)`.
    pub(crate) fn pairing_simple(&self, i: usize, b: &RootVector) -> i64 {
        b.0.iter().zip(&self.matrix[i]).map(|(x, a)| x * a).sum()
    }

    /// The bimultiplicative sign `eps(a, b)` normalised by `eps(alpha_i,
    /// alpha_j) = 1` for `i <= j` and `(-1)^{a_ij}` for `i > j`.
    pub fn cocycle(&self, a: &RootVector, b: &RootVector) -> Result<i64> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        Ok(self.cocycle_unchecked(a, b))
    }

    pub(crate) fn cocycle_unchecked(&self, a: &RootVector, b: &RootVector) -> i64 {
        let mut parity = 0i64;
        for i in 0..self.rank() {
            for j in 0..i {
                parity += a.0[i] * b.0[j] * self.matrix[i][j];
            }
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    fn check_rank(&self, v: &RootVector) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: v.rank(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("Cartan data serialises")
    }
}

/// An element of the root lattice in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        RootVector(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        self + &(-rhs)
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}
