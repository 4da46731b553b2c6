//! Exact machinery for integer linear systems over finite abelian groups.
//!
//! The crate covers four layers:
//!
//! * exact integer linear algebra: Smith/Hermite normal forms, unimodular
//!   and good-matrix completions ([`matrix`], [`normal_form`], [`completion`]);
//! * finite abelian groups with canonical subgroup bases and an exact
//!   congruence solver ([`group`], [`subgroup`], [`hom`]);
//! * hypergraph representations of systems `Mx = 0`: construction,
//!   instantiation and exact verification ([`system`], [`extension`],
//!   [`representation`]);
//! * Cayley hypergraphs, solution/copy counting, the homomorphism-density
//!   identity and removal-set symmetrization ([`hypergraph`]).
//!
//! All densities are exact rationals; decimal rendering happens only at the
//! command-line boundary.

pub mod book;
pub mod cli;
pub mod completion;
pub mod error;
pub mod group;
pub mod hom;
pub mod hypergraph;
pub mod io;
pub mod matrix;
pub mod normal_form;
pub mod oracle;
pub mod report;
pub mod extension;
pub mod representation;
pub mod subgroup;
pub mod system;

pub use error::{GroupError, HypergraphError, LiftError, LinAlgError, PipelineError};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use matrix::IntMatrix;
