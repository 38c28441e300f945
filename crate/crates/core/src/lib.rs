//! Exact vertex-operator representations of q-affinized Kac-Moody algebras
//! attached to symmetric generalized Cartan matrices.
//!
//! Everything is computed over `Q[q^{1/2}, q^{-1/2}]` with `q` kept formal, so
//! every relation check is an exact zero test.

pub mod error;
pub mod fock;
pub mod harness;
pub mod identities;
pub mod lattice;
pub mod polyring;
pub mod qcoeff;
pub mod verdict;
pub mod vertex;

pub use error::{Error, Result};
pub use qcoeff::{QScalar, UniPoly};
pub use verdict::Verdict;
