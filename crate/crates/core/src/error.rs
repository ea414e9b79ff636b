use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("negative cost {cost} on edge {tail}->{head}")]
    NegativeCost { tail: String, head: String, cost: String },
    #[error("negative node weight on {0:?}")]
    NegativeWeight(String),
    #[error("s and t must differ in atspp mode")]
    EqualEndpoints,
    #[error("atspp mode requires both s and t")]
    MissingEndpoints,
    #[error("node-weight mismatch on edge {tail}->{head}: cost {cost} but weights sum to {expected}")]
    NodeWeightMismatch { tail: String, head: String, cost: String, expected: String },
    #[error("instance has no vertices")]
    Empty,
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("no finite tour exists: {0}")]
    NoFiniteTour(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("walk does not cover vertex {0:?}")]
    CoverViolation(String),
    #[error("LP is malformed: {0}")]
    MalformedLp(String),
    #[error("relaxation is infeasible (Farkas certificate over {rows} rows)")]
    Infeasible { rows: usize, farkas: Vec<Rational> },
    #[error("LP is unbounded")]
    Unbounded,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("instance too large for exact computation: {n} vertices exceeds cap {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("bound audit failed: {0}")]
    BoundViolated(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
