//! Quantum-rank (QR) navigation of directed networks.
//!
//! A walker on a graph is described by a density matrix evolving under a
//! Lindblad master equation. The dissipators `|i><j|` carry the Google-matrix
//! rates, so the purely dissipative limit (`alpha = 1`) reproduces PageRank,
//! while the Hamiltonian (the symmetrized adjacency matrix) adds coherent
//! transport for `alpha < 1`. The diagonal of the unique stationary state
//! ranks the nodes.
//!
//! Modules:
//!
//! * [`netgraph`]: graphs, edge-list IO, ER/BA generators, transition and
//!   Google matrices.
//! * [`lindblad`]: density matrices, the Hamiltonian and the generator.
//! * [`solver`]: fixed-step integration to the stationary state,
//!   convergence times, spectral bounds.
//! * [`ranking`]: scores to rankings, Kendall concordance, rank shifts,
//!   degeneracy and neighbor profiles.
//! * [`experiments`]: the experiment drivers behind the `qrank` binary.

pub mod error;
pub mod experiments;
pub mod lindblad;
pub mod netgraph;
pub mod output;
pub mod ranking;
pub mod solver;

pub use error::{Error, Result};
pub use lindblad::{DenseLiouvillian, DensityMatrix, Hamiltonian, LindbladGenerator};
pub use netgraph::{DirectedGraph, GraphGenSpec, GraphModel, StochasticMatrix};
pub use ranking::{RankComparison, RankResult};
pub use solver::{IntegrationConfig, StationaryResult};

/// Complex scalar used for density matrices.
pub type C64 = num_complex::Complex64;
