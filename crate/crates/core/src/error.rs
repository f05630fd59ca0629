use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DessinError {
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: String,
    },
    #[error("permutation degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group descriptor: {0}")]
    Validation(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("negative Möbius sum; the subgroup lattice is inconsistent")]
    NegativeResult,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no closed form for {0}")]
    UnsupportedFamily(String),
    #[error("invalid lattice record: {0}")]
    Corrupt(String),
}

pub type Result<T, E = DessinError> = std::result::Result<T, E>;
