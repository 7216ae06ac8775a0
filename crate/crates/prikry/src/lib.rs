//! Conditions with a finite stem and a measure-one side set, and the
//! machinery that makes the classical arguments about them checkable at
//! desk scale.
//!
//! Side sets live in a closed algebra of ultimately periodic subsets of
//! the naturals ([`SetHandle`]), so unions, intersections, complements,
//! diagonal intersections, subset tests and min/max are all exact. A
//! [`MeasureOracle`] answers "is this handle measure one?" from a small
//! decision table plus the filter laws, and logs every answer so a run
//! can be audited after the fact. On top sit the poset itself
//! ([`PrikryNotion`], with the stem/side extension order and its
//! direct-extension refinement), the dense-set reduction that diagonalises
//! a family of chosen side sets into one ([`dense_reduce`]), the decision
//! procedure that settles a statement by shrinking the side set without
//! touching the stem ([`prikry_decide`]), iterated decisions along a
//! chain ([`decision_chain`]), the almost-containment criterion for
//! candidate generic sequences ([`mathias_check`]), and a homogeneous-set
//! search for colourings of small tuples ([`homogeneous_subset`]).

pub mod cond;
pub mod decide;
pub mod error;
pub mod handle;
pub mod mathias;
pub mod oracle;
pub mod ramsey;

pub use cond::{
    dense_reduce, prikry_leq, prikry_leq_star, DeepDense, DenseReduction, PrikryCond, PrikryNotion,
};
pub use decide::{
    decision_chain, prikry_decide, AtIndex, ChainOutcome, DecideCaps, DecideOutcome, DescentReport,
    NameOracle, PhiOracle, PhiVerdict, SplitCell,
};
pub use error::PrikryError;
pub use handle::{SetHandle, ENDPOINT_CAP, MODULUS_CAP};
pub use mathias::{mathias_check, MathiasVerdict};
pub use oracle::{audit_entries, AuditStats, Decision, MeasureOracle};
pub use ramsey::{homogeneous_subset, ramsey_bound};
