//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by exact-arithmetic and enumeration routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero inputs is undefined")]
    BothInputsZero,
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("operation requires a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial `{0}` is not irreducible")]
    NotIrreducible(String),
    #[error("polynomial `{0}` is not monic")]
    NotMonic(String),
    #[error("desk-scale exceeded for {what}: {actual} > {limit}")]
    DeskScaleExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },
    #[error("torsion level mismatch")]
    LevelMismatch,
    #[error("element does not belong to the expected field or ring")]
    FieldMismatch,
    #[error("empty input list")]
    EmptyInput,
    #[error("the given set is not a subgroup (not closed under the group law)")]
    NotASubgroup,
    #[error("cocycle is missing a value on a group element")]
    MissingGroupElement,
    #[error("the map is not a cocycle: relation fails at ({0}, {1})")]
    NotACocycle(String, String),
    #[error("linear system is inconsistent (input is not a valid cocycle image)")]
    InconsistentSystem,
    #[error("element is not in DrinT(L/K): C_{{P^n}} image is not in the base field")]
    NotInDrinT,
    #[error("Galois difference is not a torsion point (internal consistency failure)")]
    DifferenceNotTorsion,
    #[error("annihilator exponents are not coprime: gcd({0}, {1}) != 1")]
    NotCoprime(String, String),
    #[error("the class-number-two construction is specified only for q = 3 (got q = {0})")]
    UnsupportedField(u128),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
