// NaN inputs must fail range checks, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Simulation toolkit for Rydberg-blockade (PXP) dynamics on bipartite graphs:
//! constrained bases, sparse Hamiltonians, squeezed initial states, Krylov
//! propagation and the continuum scattering model for state revivals.
//!
//! The numerical core is generic over `f32`/`f64` through [`Real`]; the
//! aliases below fix the scalar for the common cases.

pub mod error;
pub mod expm;
pub mod graph;
pub mod hilbert;
pub mod operators;
pub mod oracle;
pub mod pipeline;
pub mod propagate;
pub mod quad;
pub mod scalar;
pub mod scatter;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use graph::{validate_bipartite, BipartiteGraph, GraphKind, Partition};
pub use hilbert::{enumerate_constrained_basis, Config, ConstrainedBasis};
pub use operators::{LinearOperator, SparseOperator, SpinSector};
pub use propagate::{Engine, EvolveOptions, Trajectory};
pub use scalar::{Real, C};
pub use scatter::{FormulaVariant, ScatterFunctionals, ScatterModel};
pub use states::{BasisTag, SqueezeMode, SqueezeSpec, StateVector};

pub type Complex64 = C<f64>;
pub type StateVector64 = StateVector<f64>;
pub type SparseOperator64 = SparseOperator<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type ScatterModel64 = ScatterModel<f64>;

pub type Complex32 = C<f32>;
pub type StateVector32 = StateVector<f32>;
pub type SparseOperator32 = SparseOperator<f32>;
pub type Trajectory32 = Trajectory<f32>;
pub type ScatterModel32 = ScatterModel<f32>;
