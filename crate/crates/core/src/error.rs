use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty query set")]
    EmptyQuery,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("coincident sites")]
    CoincidentSites,
    #[error("duplicate point id {0}")]
    DuplicateId(usize),
    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),
    #[error("malformed tracks: {0}")]
    MalformedTracks(&'static str),
    #[error("quadrant and segment slope are inconsistent")]
    InconsistentCorner,
    #[error("query kind does not match the requested operation")]
    WrongQueryKind,
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("k must be at least 1")]
    InvalidK,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
