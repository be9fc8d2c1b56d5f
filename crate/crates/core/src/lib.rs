//! Exact information-theoretic complexity measures for finite binary-node
//! stochastic dynamics.
//!
//! The library works with a pair (p, P): a distribution `p` over the joint
//! state of N binary (±1) nodes and a row-stochastic transition kernel `P`
//! over the same 2^N states. On top of that pair it provides
//!
//! * elementary primitives: state encoding, entropies, marginals, KL
//!   divergence between kernels ([`statespace`]),
//! * kernel generators: synchronous Boltzmann-machine dynamics, stationary
//!   distributions, deterministic (infinite-β) update maps and their
//!   attractor structure ([`dynamics`]),
//! * closed-form complexity measures: multi-information, mutual information,
//!   synergistic information, total information flow ([`measures`]),
//! * KL projections onto split (log-linear) kernel families by iterative
//!   scaling, including the geometric integrated information ([`infogeo`]),
//! * Hopfield autoassociative memory: Hebbian storage, complexity during
//!   learning, and complexity capacity over the stationary polytope
//!   ([`hopfield`]).
//!
//! All public quantities are reported in bits. Values are immutable after
//! construction and every operation is a pure function, so everything here is
//! safe to use from any number of threads.

pub mod dynamics;
pub mod error;
pub mod hopfield;
pub mod infogeo;
pub mod measures;
pub mod statespace;

pub use dynamics::{
    stationary_distribution, AttractorSet, BoltzmannMachine, DeterministicMap, WeightMatrix,
};
pub use error::{Error, Result};
pub use hopfield::{
    capacity_curve, complexity_capacity, learning_curve, CapacityCurveConfig, CapacityPoint,
    CapacityResult, LearningCurveConfig, LearningPoint, PatternSet,
};
pub use infogeo::{phi_g, phi_g_oracle, project, OracleConfig, ProjectionResult, SplitManifold};
pub use measures::{
    mutual_information, multi_information, synergistic_information, total_information_flow,
    MeasureReport,
};
pub use statespace::{kl_matrices, JointDist, MarginalTable, ProbVector, StochMatrix, SystemShape};
