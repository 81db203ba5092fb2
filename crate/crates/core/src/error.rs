use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("side length mismatch: {left} vs {right}")]
    SideMismatch { left: usize, right: usize },

    #[error("point ({i},{j}) is outside the triangle of side {n}")]
    OutsideDomain { i: usize, j: usize, n: usize },

    #[error("point ({i},{j}) has the wrong parity for this half-grid")]
    WrongParity { i: usize, j: usize },

    #[error("not a partition: {0:?}")]
    NotPartition(Vec<i64>),

    #[error("delta {delta:?} does not have the parity of {pi:?}")]
    ParityViolation { pi: Vec<i64>, delta: Vec<i64> },

    #[error("cut points must satisfy b < c")]
    BadCut,

    #[error("{0:?} is not in the parallelepiped of the given pair")]
    Incomparable(Vec<i64>),

    #[error("input is not a valid hive: {0}")]
    InvalidHive(String),

    #[error("input is not a valid skep: {0}")]
    InvalidSkep(String),

    #[error("free variable {0} has no finite interval")]
    Unbounded(String),

    #[error("fiber over the projected coordinates is infinite")]
    InfiniteFiber,

    #[error("negative value {0} in a function that must be nonnegative")]
    NegativeValue(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn same_len(a: &[i64], b: &[i64]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        })
    }
}
