use thiserror::Error;

/// Errors raised by every route in the crate.
///
/// Messages name the specific guard that fired (which theta argument landed on
/// the period lattice, which size cap was exceeded) so the CLI can report them
/// verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modular parameter: {0}")]
    InvalidTau(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("degenerate interpolation nodes: {0}")]
    DegenerateNodes(String),

    #[error("size cap exceeded for {route}: n = {n} > {cap}")]
    SizeCap {
        route: &'static str,
        n: usize,
        cap: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
