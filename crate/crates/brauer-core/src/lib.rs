//! Gelfand-Tzetlin representations and subduction coefficients for the
//! Brauer centralizer algebra `B_f(x)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`shape`] — Young diagrams (integer partitions) and their box calculus.
//! * [`lattice`] — permutation lattices, the words over `Z \ {0}` that label
//!   paths in the Brauer Bratteli diagram and hence Gelfand-Tzetlin basis
//!   vectors; enumeration, transposition and the dimension formula.
//! * [`young`] — exact rational combinatorics on diagrams and lattices:
//!   hooks, the polynomial `P_λ(x)` whose value at `2n+1` is an `SO(2n+1)`
//!   irrep dimension, and the axial-distance machinery.
//! * [`rep`] — explicit symmetric matrices for the generators `g_i`, `e_i`
//!   acting on the Gelfand-Tzetlin basis of an irreducible module `[f, λ]`,
//!   with a relation-checking gate.
//! * [`grid`] — the subduction grid of node triples `<w; w1, w2>` for the
//!   restriction to `B_{f1}(x) × B_{f2}(x)`, its coupling layers and the
//!   subduction graph (DOT export).
//! * [`solver`] — assembly of the linear subduction system, nullspace
//!   computation (multiplicities), and structural verification passes.
//! * [`ortho`] — Gram/Sylvester orthonormalization across multiplicity
//!   copies and the Young-Yamanouchi phase convention.
//!
//! Everything combinatorial is exact (arbitrary-precision rationals); only
//! representation matrices and the nullspace computation use floating point,
//! generic over the [`Float`] scalar with [`Real`] (`f64`) as the default.

pub mod error;
pub mod grid;
pub mod json;
pub mod lattice;
pub mod ortho;
pub mod rep;
pub mod scalar;
pub mod shape;
pub mod solver;
pub mod young;

pub use error::{Error, Result};
pub use grid::{Configuration, GridNode, GridSignature, LatticePair, SubductionGrid};
pub use lattice::{PermutationLattice, Word};
pub use rep::{GtModule, RelationReport};
pub use scalar::Float;
pub use shape::Shape;
pub use solver::{SolutionBasis, SubductionSystem};
pub use young::{RationalParam, RationalPolynomial};

/// Default floating-point scalar for the numeric pipeline.
pub type Real = f64;

/// [`GtModule`] at the default scalar.
pub type RealGtModule = GtModule<Real>;
/// [`SubductionSystem`] at the default scalar.
pub type RealSubductionSystem = SubductionSystem<Real>;
/// [`SolutionBasis`] at the default scalar.
pub type RealSolutionBasis = SolutionBasis<Real>;
/// [`ortho::SdcTable`] at the default scalar.
pub type RealSdcTable = ortho::SdcTable<Real>;

/// Exact rational number used throughout the combinatorial layers.
pub type Rational = num::BigRational;
