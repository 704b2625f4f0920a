//! The set operator on payoff polygons and the iteration built on it.

mod certificate;
mod ic;
mod operator;
mod projection;
mod solver;

use thiserror::Error;

use crate::vertex_enum::VertexEnumError;

pub use certificate::{
    verify_enforceability, Certificate, Enforcement, Refusal, CERTIFICATE_TOLERANCE,
};
pub use ic::{ic_constraints, IcRow, IcSystem};
pub use operator::{
    apply_b, enforceable_payoffs, enum_options, BResult, Caps, ProfileSet, ProjectionMethod,
};
pub use solver::{solve, IterationTrace, Report, SolverConfig, StopReason, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApsError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("vertex enumeration for profile {0} exceeded the vertex cap")]
    Truncated(String),
    #[error(transparent)]
    VertexEnum(#[from] VertexEnumError),
}
