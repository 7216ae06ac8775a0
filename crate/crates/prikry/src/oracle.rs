//! A partial stand-in for a normal measure.
//!
//! The genuine object — a κ-complete normal ultrafilter — decides *every*
//! set. No finite device can, so the oracle answers from what it has: sets
//! with a bounded complement are IN, bounded sets are OUT, and everything
//! else is derived from an optional decision table. The table's IN sides
//! (and the complements of its OUT sides) are intersected into a single
//! `core`; a query is IN when it contains the core up to a bounded error,
//! OUT when it misses it up to a bounded error, and UNDECIDED otherwise.
//! That closure is exactly the filter generated by the table together with
//! the final segments, so answered queries automatically satisfy the filter
//! laws — which the post-hoc audit re-checks from the log rather than
//! trusting the construction.
//!
//! Every answer is appended to a single-writer log (interior mutability;
//! queries never mutate anything else, so reads between writes are safe to
//! share).

use crate::error::PrikryError;
use crate::handle::SetHandle;
use std::cell::RefCell;
use std::fmt;

/// Three-valued measure answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Decision {
    In,
    Out,
    Undecided,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::In => "IN",
            Decision::Out => "OUT",
            Decision::Undecided => "UNDECIDED",
        })
    }
}

/// The measure surrogate: base rules plus a decision-table closure.
#[derive(Debug)]
pub struct MeasureOracle {
    /// Intersection of every IN side of the table (complements of OUT
    /// sides included). `all()` when no table was supplied.
    core: SetHandle,
    table_len: usize,
    log: RefCell<Vec<(SetHandle, Decision)>>,
}

/// What a successful audit walked over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditStats {
    pub entries: usize,
    pub comparisons: usize,
}

impl MeasureOracle {
    /// Oracle with no table: only boundedness decides.
    pub fn plain() -> Self {
        MeasureOracle { core: SetHandle::all(), table_len: 0, log: RefCell::new(Vec::new()) }
    }

    /// Oracle extended by explicit decisions. Refuses tables whose IN sides
    /// intersect in a bounded set — such a table cannot be part of any
    /// filter containing the final segments.
    pub fn with_table(table: &[(SetHandle, bool)]) -> Result<Self, PrikryError> {
        let mut core = SetHandle::all();
        for (h, keep) in table {
            let side = if *keep { h.clone() } else { h.complement() };
            core = core.intersect(&side)?;
            if core.is_bounded() {
                return Err(PrikryError::OracleInconsistent(format!(
                    "decision table collapses at entry '{h}': the intersection of its IN sides is bounded"
                )));
            }
        }
        Ok(MeasureOracle { core, table_len: table.len(), log: RefCell::new(Vec::new()) })
    }

    pub fn table_len(&self) -> usize {
        self.table_len
    }

    /// Decides one set and logs the answer.
    pub fn decide(&self, h: &SetHandle) -> Result<Decision, PrikryError> {
        let diff = self.core.difference(h)?;
        let d = if diff.is_bounded() {
            Decision::In
        } else {
            let meet = self.core.intersect(h)?;
            if meet.is_bounded() { Decision::Out } else { Decision::Undecided }
        };
        self.log.borrow_mut().push((h.clone(), d));
        Ok(d)
    }

    /// Requires an IN answer; anything else is an error (UNDECIDED asks for
    /// a finer table, OUT marks the set unusable as a side set).
    pub fn require_in(&self, h: &SetHandle) -> Result<(), PrikryError> {
        match self.decide(h)? {
            Decision::In => Ok(()),
            Decision::Undecided => Err(PrikryError::OracleUndecided(format!(
                "no verdict for '{h}'; extend the decision table"
            ))),
            Decision::Out => {
                Err(PrikryError::Config(format!("side set '{h}' is measured OUT")))
            }
        }
    }

    /// Copy of the answer log, in query order.
    pub fn log_snapshot(&self) -> Vec<(SetHandle, Decision)> {
        self.log.borrow().clone()
    }

    pub fn queries(&self) -> usize {
        self.log.borrow().len()
    }

    /// Re-checks the filter laws over everything this oracle ever answered.
    pub fn audit(&self) -> Result<AuditStats, PrikryError> {
        audit_entries(&self.log.borrow())
    }
}

/// Filter-law audit over an answer log (usable on replayed logs too):
/// bounded sets must be OUT, co-bounded sets IN, no set both IN and OUT,
/// IN is upward closed and closed under the intersections present in the
/// log, and no set is IN together with its complement.
pub fn audit_entries(entries: &[(SetHandle, Decision)]) -> Result<AuditStats, PrikryError> {
    let mut comparisons = 0;
    for (h, d) in entries {
        match d {
            Decision::In if h.is_bounded() => {
                return Err(PrikryError::OracleInconsistent(format!("bounded set '{h}' was answered IN")));
            }
            Decision::Out if h.is_cofinite_tail() => {
                return Err(PrikryError::OracleInconsistent(format!(
                    "co-bounded set '{h}' was answered OUT"
                )));
            }
            _ => {}
        }
    }
    for (i, (h, dh)) in entries.iter().enumerate() {
        for (g, dg) in entries.iter().skip(i + 1) {
            comparisons += 1;
            if h == g && *dh != *dg && *dh != Decision::Undecided && *dg != Decision::Undecided {
                return Err(PrikryError::OracleInconsistent(format!(
                    "'{h}' was answered both {dh} and {dg}"
                )));
            }
            if *dh == Decision::In && *dg == Decision::Out && h.is_subset(g)? {
                return Err(PrikryError::OracleInconsistent(format!(
                    "IN is not upward closed: '{h}' is IN but its superset '{g}' is OUT"
                )));
            }
            if *dg == Decision::In && *dh == Decision::Out && g.is_subset(h)? {
                return Err(PrikryError::OracleInconsistent(format!(
                    "IN is not upward closed: '{g}' is IN but its superset '{h}' is OUT"
                )));
            }
            if *dh == Decision::In && *dg == Decision::In {
                if g == &h.complement() {
                    return Err(PrikryError::OracleInconsistent(format!(
                        "'{h}' and its complement were both answered IN"
                    )));
                }
                let meet = h.intersect(g)?;
                if meet.is_bounded() {
                    return Err(PrikryError::OracleInconsistent(format!(
                        "IN answers '{h}' and '{g}' intersect in the bounded set '{meet}'"
                    )));
                }
                if entries.iter().any(|(k, dk)| *dk == Decision::Out && *k == meet) {
                    return Err(PrikryError::OracleInconsistent(format!(
                        "IN answers '{h}' and '{g}' have their intersection '{meet}' answered OUT"
                    )));
                }
            }
        }
    }
    Ok(AuditStats { entries: entries.len(), comparisons })
}
