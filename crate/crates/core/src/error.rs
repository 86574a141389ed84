use crate::lattice::LatticeError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("rank of the Mukai vector must be at least 1")]
    InvalidRho,
    #[error("n = dim M / 2 must be at least 1")]
    InvalidN,
    #[error("closed-form evaluation needs n = 1, got n = {n}")]
    DimensionMismatch { n: u32 },
    #[error("expansion order {order} is below the requested coefficient {n}")]
    OrderTooSmall { order: usize, n: usize },
    #[error("unknown reversion strategy {0:?}")]
    UnknownReverter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
