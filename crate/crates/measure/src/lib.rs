//! Exact measure-theoretic side of the laboratory: finite unions of closed
//! rational intervals with rational measure, the random and amoeba forcing
//! notions built on them, and the cover-repackaging construction behind the
//! summable-series argument. Everything is computed in `BigRational`; no
//! floating point enters any verdict.

pub mod dyadic;
pub mod error;
pub mod limsup;
pub mod random;

pub use dyadic::{semimetric, DyadicUnion};
pub use error::MeasureError;
pub use limsup::{limsup_cover, theta, theta_inv};
pub use random::{
    ccc_witness, AmoebaAvoid, AmoebaCond, AmoebaNotion, AvoidNull, RandomCond, RandomNotion,
};
