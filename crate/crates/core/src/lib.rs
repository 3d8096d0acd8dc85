//! Companion bases for quivers of mutation type A and D.
//!
//! A companion basis of a quiver `Q` is a Z-basis `{gamma_x}` of the root
//! lattice consisting of roots such that `|(gamma_x, gamma_y)|` equals the
//! number of edges between `x` and `y`. This crate recognises quivers in the
//! mutation classes of `A_n` and `D_n`, labels them, writes down explicit
//! companion bases, and mutates bases along with their quivers.
//!
//! All arithmetic is exact. Root and matrix code is generic over
//! [`Scalar`]; the aliases below fix the usual choices.

pub mod classes;
pub mod companion;
pub mod error;
pub mod io;
pub mod linalg;
pub mod quiver;
pub mod root_lattice;
pub mod scalar;
pub mod triangulation;
pub mod type_a;
pub mod type_d;

pub use companion::{
    dimension_vectors, is_positive, mutate_basis, quasi_cartan_of, strings_oracle, verify, CompanionBasis, Direction,
    QuasiCartan, VerifyFailure,
};
pub use error::{Error, Result};
pub use quiver::{random_mutation_walk, Quiver, StringWalk};
pub use root_lattice::{CartanType, Family, Root};
pub use scalar::Scalar;
pub use triangulation::{quiver_from_triangulation, Triangulation};
pub use type_a::{companion_basis_type_a, is_type_a, label, ChoicePolicy, Labelling};
pub use type_d::{classify, companion_basis_type_d, label_type_d, TypeDKind, TypeDStructure};

/// Roots with 64-bit coefficients.
pub type Root64 = Root<i64>;
/// Roots with arbitrary-precision coefficients.
pub type BigRoot = Root<num_bigint::BigInt>;
/// Companion bases with 64-bit coefficients.
pub type Basis64 = CompanionBasis<i64>;
/// Companion bases with arbitrary-precision coefficients.
pub type BigBasis = CompanionBasis<num_bigint::BigInt>;
