//! Auditing proportional representation of clustering center selections.
//!
//! The crate checks whether a size-`k` selection of candidate centers gives
//! every sufficiently large, sufficiently close group of agents its fair
//! share of nearby centers. It provides:
//!
//! * the instance model with Euclidean and explicit metrics ([`instance`]),
//! * the default-coalition verifier, the small-`k` verifier for the
//!   anchored metric PJR+ axiom, and their fixed-level variants ([`verify`]),
//! * exhaustive reference oracles for cross-validation ([`oracle`]),
//! * approval-ballot analogues and the biclique reduction ([`approval`]),
//!   plus the embedding of approval profiles into metrics ([`embedding`]),
//! * the budgeted ball-growing selection rule ([`sear`]),
//! * instance generators, clustering baselines, and the synthetic
//!   experiment harness ([`gen`], [`baselines`], [`bench`]).

pub mod approval;
pub mod baselines;
pub mod bench;
pub mod embedding;
pub mod error;
pub mod gen;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod quota;
pub mod sear;
pub mod table;
pub mod verdict;
pub mod verify;

pub use error::{Error, MetricViolation, Result};
pub use instance::{Instance, Metric, Point, Selection};
pub use quota::QuotaCmp;
pub use table::{DistanceTable, Distances};
pub use verdict::{AuditReport, Axiom, Verdict, Witness};

/// Size limits for the exponential-time procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Agents (or voters) enumerated by subset-based oracles.
    pub max_exhaustive_agents: usize,
    /// `k` for the `2^k` sweeps.
    pub max_sweep_k: usize,
    /// Ball size for exhaustive submodular minimization.
    pub max_ball: usize,
    /// Vertices per side for the brute-force biclique search.
    pub max_biclique_side: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_exhaustive_agents: 16,
            max_sweep_k: 24,
            max_ball: 20,
            max_biclique_side: 16,
        }
    }
}
