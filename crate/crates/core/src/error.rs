use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inputs not disjoint: polygons {0} and {1} overlap")]
    InputsNotDisjoint(u32, u32),
    #[error("general position violated: {0}")]
    GeneralPositionViolated(String),
    #[error("polygon {0} is not strictly inside the frame")]
    OutsideFrame(u32),
    #[error("degenerate separator")]
    DegenerateSeparator,
    #[error("cutting construction failed: {0}")]
    CuttingFailed(String),
    #[error("cut construction failed: {0}")]
    CutFailed(String),
    #[error("encoding failure: {0}")]
    EncodingFailure(String),
    #[error("caps exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("structural violation: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;
