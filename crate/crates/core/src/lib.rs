//! Exact computations for tautological integrals over moduli spaces of
//! stable sheaves on K3 surfaces.
//!
//! * [`series`]: truncated power series over ℚ with exact powers,
//!   composition and reversion; [`reversion`] holds the selectable
//!   reversion strategies.
//! * [`lattice`]: the Mukai lattice, Gram ranks, span reduction and span
//!   isometries.
//! * [`segre_verlinde`]: Segre and Verlinde numbers and the exact check of
//!   the Segre–Verlinde variable change.
//! * [`reduction`]: reduction of integral data on `M` to the Hilbert scheme
//!   of points, and the closed form when `dim M = 2`.

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod reduction;
pub mod reversion;
pub mod segre_verlinde;
pub mod series;

pub use error::{Error, Result};
pub use lattice::{FingerprintMatrix, LatticeError, MukaiVector, QuadraticSpace, SpanIsometry};
pub use rational::Rational;
pub use reduction::{KClassInvariants, ModuliData, PairingList, ReductionTarget, ReductionWarning};
pub use segre_verlinde::{CorrespondenceReport, Engine, SegreParams, VerlindeParams};
pub use series::{SeriesError, TruncatedSeries};
