//! Exact computer algebra for finite-dimensional Jacobi algebras and the
//! Lie-Rinehart structures they carry: tensor-square and 1-jet modules,
//! quotients by multiplication, right connection characters, curvature,
//! and the flat-connection (antipode) decision procedures — all over GF(p)
//! or the rationals, with no floating point anywhere.

pub mod algebra;
pub mod jacobi;
pub mod connections;
pub mod lie_rinehart;
pub mod field;
pub mod linalg;
pub mod report;

pub use algebra::{AlgElement, Algebra, AlgebraError, Derivation, Monomial, Presentation};
pub use connections::{antipode_verdict, canonical_jet_connection, connection_axiom_check, connection_from_dee, curvature_from_dee, dee_solution_space, obstruction_existence, obstruction_flatness, solution_set_s, solve_connection_generic, solve_flat_connection, AntipodeAnswer, AntipodeVerdict, ConnectError, ConnectionCharacter, DeeMap, ObstructionCertificate, ObstructionKind};
pub use field::{BitRow, DenseRow, Field, FieldDescriptor, Gf, Row};
pub use jacobi::{BracketRecipe, JacobiBracket, JacobiError, Verified};
pub use lie_rinehart::{ah_tensor_module, jet_descent_check, jet_module, kahler_differentials, AModule, AhData, JetData, LieRinehartStructure, Provenance, RinehartError};
pub use linalg::{solve_affine, AffineSubspace, Infeasibility, LinearSystem, Matrix, Subspace};
pub use report::{CheckScope, VerificationReport, Witness};

/// The rationals.
pub type Q = num_rational::BigRational;
/// GF(2); rows are bit-packed.
pub type F2 = field::Gf<2>;
pub type F3 = field::Gf<3>;
pub type F5 = field::Gf<5>;
pub type F7 = field::Gf<7>;
pub type F11 = field::Gf<11>;
pub type F13 = field::Gf<13>;
