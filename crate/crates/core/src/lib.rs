//! Discrete Schrödinger operators on finite graphs with half-line tails.
//!
//! The crate builds the operator in either flavor, computes Wronskian chains of
//! solution pairs, the subspace `Λ_λ^∞` of tail data that extends to a global
//! solution, scattering matrices inside the band `|λ| < 2` and bound states
//! outside it. [`oracle`] holds brute-force references used by the tests.
//!
//! `no_std`; needs `alloc`.

#![no_std]

extern crate alloc;

pub mod chain;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod phase;
pub mod spectrum;
pub mod tol;
pub mod wronskian;

pub use nalgebra::{Complex, DMatrix};

pub use chain::{boundary, Chain0, Chain1};
pub use error::{Error, Result};
pub use graph::{build_graph, Edge, GraphSpec, OrientedEdge, TailedGraph, Vertex};
pub use operator::{
    apply, assemble, free_operator, restrict_to_base, BaseOperator, CouplingKey, Flavor, Layout, OperatorCoefficients,
    Overrides, Site, SiteFunction,
};
pub use oracle::{dense_solution_space, random_instance, truncated_spectrum, CorpusParams};
pub use phase::{
    decaying_plane, intersect, lagrangian_at_infinity, skew_product, solution_basis, tail_modes, Intersection,
    LagrangianFrame, MatchingSystem, PhaseVector, SolutionBasis, TailModes,
};
pub use spectrum::{
    bound_state_count, bound_state_scan, detector, morse_index, prop1_predicates, scattering_matrix, singular_eigenvalues, solution_space_dim,
    spectral_report, BoundState, BoundStateKind, Prop1Report, ScatteringMatrix, SingularEigenvalue, SpectralReport,
    Zone,
};
pub use wronskian::{tail_constants, wronskian, WronskianChain};
