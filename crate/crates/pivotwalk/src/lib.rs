//! Exact and Monte Carlo tooling for N-step self-avoiding walks on Z^d.
//!
//! The crate has three layers:
//!
//! - **Walks and samplers.** [`walk`] defines lattice steps and walks,
//!   [`symmetry`] the signed-permutation symmetry group of the lattice, and
//!   [`chain`] the pivot and pivot+ Markov chain samplers with seeded,
//!   substream-split randomness and parallel replica drivers.
//! - **Exact analysis.** [`enumeration`] materializes the whole walk space
//!   at desk scale (with an exact uniform reference sampler), and [`exact`]
//!   builds the chains' transition matrices with integer counts, checks
//!   symmetry, irreducibility, aperiodicity, and stationarity exactly, and
//!   tabulates convergence of both chains toward the uniform law.
//! - **Grouped-matrix calculus.** [`gmethod`] handles partition-structured
//!   nonnegative matrices: block stability, reductions, similarity,
//!   contraction coefficients, and product laws, generically over f64 and
//!   exact rationals.
//!
//! [`harness`] wires these into the `pivotwalk` command-line tool; the
//! `examples/` directory has one runnable example per capability.

pub mod chain;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod gmethod;
pub mod harness;
pub mod symmetry;
pub mod walk;

pub use chain::{ChainConfig, ChainRunner, Variant};
pub use enumeration::StateSpace;
pub use error::{Error, Result};
pub use exact::TransitionMatrix;
pub use symmetry::LatticeSymmetry;
pub use walk::{Step, Walk};
