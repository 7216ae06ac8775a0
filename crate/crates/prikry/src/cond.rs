//! Conditions `(s, A)`: a finite strictly increasing stem and a measure-one
//! side set lying entirely above it.
//!
//! Two orders matter. Plain extension `(t, B) ≤ (s, A)` lets the stem grow
//! — `t` end-extends `s`, the new points come from `A`, and `B ⊆ A`. Direct
//! extension `≤*` freezes the stem and only shrinks the side set; it is the
//! order along which deciding chains are built, and `≤* ⊆ ≤` by definition.

use crate::error::PrikryError;
use crate::handle::SetHandle;
use crate::oracle::MeasureOracle;
use forcing_core::{DenseSet, Failure, ForcingNotion};
use std::fmt;

/// A stem together with its side set. Build through [`PrikryCond::new`]
/// (which consults the oracle) or [`PrikryCond::assemble`] (structure only).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrikryCond {
    pub stem: Vec<u64>,
    pub side: SetHandle,
}

impl PrikryCond {
    /// Structure checks only: the stem must be strictly increasing and the
    /// side set nonempty with `min(side) > max(stem)`.
    pub fn assemble(stem: Vec<u64>, side: SetHandle) -> Result<Self, PrikryError> {
        if stem.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PrikryError::Config(format!("stem {stem:?} is not strictly increasing")));
        }
        let min = side
            .min_elem()
            .ok_or_else(|| PrikryError::Config("a condition needs a nonempty side set".into()))?;
        if let Some(&top) = stem.last() {
            if min <= top {
                return Err(PrikryError::Config(format!(
                    "side set '{side}' reaches down to {min}, inside the stem (max {top})"
                )));
            }
        }
        Ok(PrikryCond { stem, side })
    }

    /// Full validation: structure plus `side` measured IN.
    pub fn new(stem: Vec<u64>, side: SetHandle, oracle: &MeasureOracle) -> Result<Self, PrikryError> {
        oracle.require_in(&side)?;
        Self::assemble(stem, side)
    }

    /// The largest stem entry as a dropping threshold: a side set for an
    /// extension of this stem must start above `max(stem)`.
    pub fn stem_ceiling(&self) -> u64 {
        self.stem.last().map_or(0, |t| t + 1)
    }

    /// Parses `(<1,3>, [5,inf))`; the sequence may be `<>`.
    pub fn parse(src: &str) -> Result<Self, PrikryError> {
        let inner = src
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| PrikryError::Config(format!("condition '{src}' is not parenthesized")))?;
        let open = inner.find('<').ok_or_else(|| PrikryError::Config("missing '<' in condition".into()))?;
        let close =
            inner.find('>').ok_or_else(|| PrikryError::Config("missing '>' in condition".into()))?;
        let seq = &inner[open + 1..close];
        let stem = if seq.trim().is_empty() {
            Vec::new()
        } else {
            seq.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|e| PrikryError::Config(format!("bad stem entry '{t}': {e}")))
                })
                .collect::<Result<Vec<u64>, _>>()?
        };
        let rest = inner[close + 1..]
            .trim_start()
            .strip_prefix(',')
            .ok_or_else(|| PrikryError::Config("missing ',' between stem and side set".into()))?;
        Self::assemble(stem, SetHandle::parse(rest)?)
    }
}

impl fmt::Display for PrikryCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stem: Vec<String> = self.stem.iter().map(u64::to_string).collect();
        write!(f, "(<{}>, {})", stem.join(","), self.side)
    }
}

/// Plain extension: `q`'s stem end-extends `p`'s, the added points lie in
/// `p`'s side set, and `q`'s side set shrinks `p`'s.
pub fn prikry_leq(q: &PrikryCond, p: &PrikryCond) -> Result<bool, PrikryError> {
    if q.stem.len() < p.stem.len() || q.stem[..p.stem.len()] != p.stem[..] {
        return Ok(false);
    }
    if !q.stem[p.stem.len()..].iter().all(|x| p.side.contains(*x)) {
        return Ok(false);
    }
    q.side.is_subset(&p.side)
}

/// Direct extension: same stem, smaller side set.
pub fn prikry_leq_star(q: &PrikryCond, p: &PrikryCond) -> Result<bool, PrikryError> {
    if q.stem != p.stem {
        return Ok(false);
    }
    q.side.is_subset(&p.side)
}

/// The forcing notion over a fixed measure oracle.
///
/// The [`ForcingNotion`] surface is infallible, so the handle-algebra cap
/// (which the bundled operations report as `SUBSET_UNDECIDABLE`) panics
/// here instead of silently mis-ordering; desk-scale side sets stay far
/// below it.
#[derive(Debug)]
pub struct PrikryNotion<'a> {
    pub oracle: &'a MeasureOracle,
}

impl ForcingNotion for PrikryNotion<'_> {
    type Cond = PrikryCond;

    fn top(&self) -> PrikryCond {
        PrikryCond { stem: Vec::new(), side: SetHandle::all() }
    }

    fn leq(&self, q: &PrikryCond, p: &PrikryCond) -> bool {
        prikry_leq(q, p).expect("side sets within the algebra cap")
    }

    fn encode(&self, p: &PrikryCond) -> String {
        p.to_string()
    }

    /// Extends the stem by one point of the side set (which of the first
    /// three is seed-determined) and drops the side set above it.
    fn extend_sampled(&self, p: &PrikryCond, seed: u64) -> PrikryCond {
        let picks = p.side.members_from(0, (seed % 3) as usize + 1);
        let Some(&alpha) = picks.last() else { return p.clone() };
        let mut stem = p.stem.clone();
        stem.push(alpha);
        let side = p.side.drop_below(alpha + 1).expect("side sets within the algebra cap");
        if side.is_empty() {
            return p.clone();
        }
        PrikryCond { stem, side }
    }

    /// Exact where the oracle is: conditions with nested stems are
    /// compatible iff the joint side set is measured IN, and `None` is
    /// returned when that call comes back UNDECIDED.
    fn decide_compat(&self, p: &PrikryCond, q: &PrikryCond) -> Option<Option<PrikryCond>> {
        let (short, long) = if p.stem.len() <= q.stem.len() { (p, q) } else { (q, p) };
        if long.stem[..short.stem.len()] != short.stem[..] {
            return Some(None);
        }
        if !long.stem[short.stem.len()..].iter().all(|x| short.side.contains(*x)) {
            return Some(None);
        }
        let joint = long
            .side
            .intersect(&short.side)
            .and_then(|h| h.drop_below(long.stem_ceiling()))
            .expect("side sets within the algebra cap");
        match self.oracle.decide(&joint).expect("side sets within the algebra cap") {
            crate::oracle::Decision::In => Some(Some(PrikryCond { stem: long.stem.clone(), side: joint })),
            crate::oracle::Decision::Out => Some(None),
            crate::oracle::Decision::Undecided => None,
        }
    }
}

/// The dense set of conditions whose stem is longer than `min_len` and
/// reaches above `above`. Its refiner pushes points of the side set into
/// the stem, so it succeeds on every condition the oracle accepts.
#[derive(Debug, Clone)]
pub struct DeepDense {
    pub min_len: usize,
    pub above: u64,
}

impl<'a> DenseSet<PrikryNotion<'a>> for DeepDense {
    fn id(&self) -> String {
        format!("deep:{},{}", self.min_len, self.above)
    }

    fn member(&self, _notion: &PrikryNotion<'a>, p: &PrikryCond) -> bool {
        p.stem.len() > self.min_len && p.stem.last().is_some_and(|t| *t > self.above)
    }

    fn refine(&self, notion: &PrikryNotion<'a>, p: &PrikryCond) -> Result<PrikryCond, Failure> {
        if self.member(notion, p) {
            return Ok(p.clone());
        }
        let needed = (self.min_len + 1).saturating_sub(p.stem.len()).max(1);
        let picks = p.side.members_from(self.above + 1, needed);
        if picks.len() < needed {
            return Err(PrikryError::Config(format!(
                "side set '{}' has fewer than {needed} points above {}",
                p.side, self.above
            ))
            .into());
        }
        let mut stem = p.stem.clone();
        stem.extend_from_slice(&picks);
        let side = p.side.drop_below(picks.last().unwrap() + 1)?;
        let q = PrikryCond::assemble(stem, side)?;
        Ok(q)
    }
}

/// One diagonal reduction step: per index stem, a chosen witness side set
/// (or the whole cardinal where none was found), diagonally intersected.
#[derive(Debug, Clone)]
pub struct DenseReduction {
    /// The diagonal intersection `A*` of the chosen family.
    pub handle: SetHandle,
    /// Per index stem: (stem, a witness was chosen, the reduced condition
    /// `(stem, A* minus the stem's reach)` lies in the dense set).
    pub audit: Vec<(Vec<u64>, bool, bool)>,
}

/// Builds the diagonal `A*` of per-stem witnesses and audits the reduction
/// property: wherever a witness was chosen, the single set `A*` must work
/// in its place. The converse direction needs no check — a reduced form
/// inside the dense set *is* an existence witness, so the audit records it.
///
/// `chooser` returns a side set `B` with `(stem, B)` in the dense set, or
/// `None` if it knows none; `d_member` is the dense set's membership test.
pub fn dense_reduce(
    oracle: &MeasureOracle,
    indices: &[Vec<u64>],
    chooser: &mut dyn FnMut(&[u64]) -> Option<SetHandle>,
    d_member: &mut dyn FnMut(&[u64], &SetHandle) -> bool,
) -> Result<DenseReduction, PrikryError> {
    let mut family: Vec<(Vec<u64>, SetHandle)> = Vec::new();
    let mut found: Vec<bool> = Vec::new();
    for s in indices {
        match chooser(s) {
            Some(b) => {
                oracle.require_in(&b)?;
                if !d_member(s, &b) {
                    return Err(PrikryError::Config(format!(
                        "chooser offered '{b}' at stem {s:?}, but that condition is outside the dense set"
                    )));
                }
                family.push((s.clone(), b));
                found.push(true);
            }
            None => {
                family.push((s.clone(), SetHandle::all()));
                found.push(false);
            }
        }
    }
    let handle = SetHandle::diagonal(&family)?;
    let mut audit = Vec::new();
    for (s, was_found) in indices.iter().zip(found) {
        let ceiling = s.last().map_or(0, |t| t + 1);
        let reduced = handle.drop_below(ceiling)?;
        let in_d = d_member(s, &reduced);
        if was_found && !in_d {
            return Err(PrikryError::OracleInconsistent(format!(
                "diagonal reduction audit fails at stem {s:?}: a witness exists but '{reduced}' is not one — the dense set is not open under direct extension"
            )));
        }
        audit.push((s.clone(), was_found || in_d, in_d));
    }
    Ok(DenseReduction { handle, audit })
}
