//! Planning toolkit for tabletop pick-n-place rearrangement under running-buffer
//! objectives.
//!
//! An instance consists of a start and a goal arrangement of convex objects in a
//! rectangular workspace. Moving an object whose goal is still occupied requires
//! parking it at a buffer; the peak number of simultaneously occupied buffers is
//! the *running buffer* count of a plan, and the minimum over all plans is the
//! MRB of the instance.
//!
//! The crate is organised around the dependency-graph abstraction:
//!
//! - [`geometry`]: footprints, poses, exact pairwise overlap tests.
//! - [`depgraph`]: labeled (directed) and unlabeled (bipartite) dependency
//!   graphs, ordering evaluation, vertex separation.
//! - [`tore`]: exact MRB solvers for external-buffer problems (subset DP,
//!   depth-first DP, priority-queue search).
//! - [`sepplan`]: separator-based unlabeled planner with O(sqrt(n)) running
//!   buffers on uniform-disc instances.
//! - [`mip`]: joint total-buffer/running-buffer objective, solved by native
//!   branch-and-bound, plus an LP-format model exporter.
//! - [`trlb`]: in-place rearrangement with lazy internal-buffer allocation.
//! - [`instances`]: seeded generators and hand-built fixture instances.
//! - [`oracle`]: brute-force ground truth for small inputs.
//! - [`cli`]: the command-line front end used by the `rearrange` binary.
//!
//! Every solver is deterministic: identical seeds and inputs produce identical
//! reports, plans, and benchmark tables.

pub mod cli;
pub mod depgraph;
pub mod geometry;
pub mod instances;
pub mod mip;
pub mod oracle;
pub mod sepplan;
pub mod tore;
pub mod trlb;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("object id sets differ between start and goal arrangements")]
    MismatchedIds,
    #[error("instance exceeds solver capacity: {0}")]
    Capacity(String),
    #[error("generation failed in phase `{phase}`: {reason}")]
    Generation { phase: String, reason: String },
    #[error("graph carries no planar straight-line coordinates")]
    MissingCoordinates,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
