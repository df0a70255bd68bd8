use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid player index {index} (game has {players} players)")]
    InvalidPlayer { index: usize, players: usize },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("profile of player {player} has no mass above the support tolerance")]
    EmptySupport { player: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("solver did not converge after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical breakdown in iterative solver")]
    NumericalBreakdown,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
