use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no unit constant term")]
    NoConstantTerm,
    #[error("operation word is empty")]
    EmptyWord,
    #[error("pair ({r}, {s}) is not in the domain of the Adem relation")]
    NotInadmissible { r: i64, s: i64 },
    #[error("symbol {position} would have lower index {index}; the word is zero by instability")]
    UnstableWord { position: usize, index: i64 },
    #[error("unsupported algebra flavor: {0}")]
    UnsupportedFlavor(String),
    #[error("lower index {index} is out of range for an E_{n} algebra")]
    IndexOutOfRange { index: i64, n: u32 },
    #[error("malformed identity arguments: {0}")]
    MalformedIdentityArgs(String),
    #[error("truncation cap {cap} is below the required degree {needed}")]
    CapTooSmall { needed: i64, cap: u32 },
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("graded piece of degree {0} is infinite-dimensional")]
    InfiniteGradedPiece(u32),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Usage(String),
}
