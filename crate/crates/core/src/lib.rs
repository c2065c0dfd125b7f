//! Conduction on finite resistor networks and on finite cut/short
//! approximations of infinite lattices.
//!
//! The crate computes potentials, unit current flows and effective
//! resistances on finite multigraph networks, materializes cut and short
//! networks from implicit infinite lattices, runs swelling sequences whose
//! cut/short resistances bracket the infinite-lattice values from both sides,
//! and cross-checks the picture with Foster averaging, exhaustive
//! spanning-tree enumeration and seeded random-walk simulation.
//!
//! Highlights:
//!
//! - [`network`]: multigraphs with positive conductances, flows, potentials,
//!   divergence and energy.
//! - [`solve`]: grounded-Laplacian conjugate-gradient solves, effective
//!   resistance, Foster averages.
//! - [`spanning`]: exhaustive spanning-tree enumeration (tree probability =
//!   edge resistance on unit-conductance networks).
//! - [`lattice`]: implicit infinite lattices (grids, triangular, hexagonal,
//!   subdivided grid, regular tree, dumbbell join) with balls, boundaries and
//!   symmetry tables.
//! - [`approximation`]: cut/short networks, resistance brackets, resistance
//!   to infinity.
//! - [`flows`]: even, odd and ghost flows with their variational checks.
//! - [`walk`]: conductance-weighted random walks with seeded, reproducible
//!   trials.
//!
//! The `ohmnet` binary exposes the experiments as reproducible batch runs
//! with CSV/JSON output.

pub mod approximation;
pub mod edgelist;
pub mod error;
pub mod flows;
pub mod lattice;
pub mod network;
pub mod oracle;
pub mod report;
pub mod solve;
pub mod spanning;
pub mod walk;

pub use error::{Error, Result};
pub use network::{
    EdgeId, EdgeRecord, Flow, Network, Potential, SourceDistribution, VertexId,
};
pub use solve::{effective_resistance, foster_average, solve_potential, unit_current_flow,
    Preconditioner, ResistanceReport, SolveConfig};
pub use lattice::{LatticeKind, LatticeSpec, LatticeVertex, SwellingSequence, VertexSubset};
