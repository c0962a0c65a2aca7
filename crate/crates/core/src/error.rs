use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Every value `j <= m` of the row has been blocked.
    #[error("row {row} has no unblocked value left")]
    BoxDead { row: usize },
    #[error("every unassigned row is dead; Maker cannot move")]
    GameLost,
    #[error("element {0} is already assigned")]
    AlreadyAssigned(usize),
    #[error("rank {rank} exceeds payment row length {len}")]
    RankOutOfRange { rank: u32, len: usize },
    #[error("root {root} has no usable out-edge")]
    MakerStuck { root: usize },
    #[error("sorted edge stream exhausted")]
    NoEdge,
    #[error("minimax instance too large: {0}")]
    TooLarge(String),
    #[error("transcript schema version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
