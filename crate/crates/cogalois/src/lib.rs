//! Exact arithmetic for Carlitz cyclotomic towers over F_q(T) and the
//! crossed-homomorphism enumeration of their Drinfeld cogalois modules.
//!
//! The crate provides, bottom up: finite fields and F_q[T] (including
//! desk-scale factorization and the polynomial Euler function), twisted
//! polynomials and the Carlitz module, the cyclotomic fields
//! L_n = k(Lambda_{P^n}) with their Galois groups as unit groups mod P^n,
//! cocycle (crossed-homomorphism) enumeration with a brute-force oracle,
//! decision procedures for radical/pure/coradical extensions, and the
//! class-number-two counterexample suite.
//!
//! Everything is exact: no floating point anywhere. Enumerations are
//! deterministic; with the `parallel` feature the candidate scans are
//! partitioned across threads and merged in index order, so output does not
//! depend on the worker count.

pub mod carlitz;
pub mod classnumber;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod factor;
pub mod field;
pub mod parse;
pub mod poly;
pub(crate) mod par;
pub mod rational;
pub mod residue;
pub mod tower;
pub mod twisted;

pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldOps, Fq, FqElem};
pub use poly::{cmp_graded, Poly, PolyRing, RtPoly, RtRing};
pub use rational::{RatField, RationalFunction};
pub use residue::{ResidueClass, ResidueRing};
