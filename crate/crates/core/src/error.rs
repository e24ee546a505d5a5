use thiserror::Error;

use crate::scalar::ScalarParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate cell intensity: f(mu_PV) = {0} is not positive")]
    DegenerateCellIntensity(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cyclic parameters infeasible: {0}")]
    InfeasibleCyclic(String),
    #[error("upstream parameters infeasible: {0}")]
    InfeasibleUpstream(String),
    #[error("invalid planar parameters: {0}")]
    InvalidPlanar(String),
    #[error("negative interior parameter: {0}")]
    NegativeInterior(String),
    #[error("invalid mixture shares: {0}")]
    InvalidShares(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("not a tessellation: {0}")]
    NotATessellation(String),
    #[error("non-convex cell: {0}")]
    NonConvexCell(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGeneratorParams(String),
    #[error(transparent)]
    Parse(#[from] ScalarParseError),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
