//! Straight-line terms over the primitive operations, with three leaf
//! symbols (a distinguished set δ, a parameter a, and a stage set), plus a
//! total enumeration of all well-formed terms by a single `u64` index.
//!
//! A term is a sequence of entries; the entry at position `k` is either a
//! leaf or applies a primitive operation to results at earlier positions.
//! The value of the term is the value of its last entry.

use std::fmt;

use forcing_core::HFSet;

use crate::error::GodelError;
use crate::ops::{f1, f2, f3, f4, f5, f6, f7, f8};

/// Tags of the unary primitives, in enumeration order.
const UNARY_TAGS: [u8; 5] = [2, 5, 6, 7, 8];
/// Tags of the binary primitives, in enumeration order.
const BINARY_TAGS: [u8; 3] = [1, 3, 4];

/// One slot of a straight-line term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermEntry {
    /// The distinguished leaf δ.
    Delta,
    /// The parameter leaf a.
    Param,
    /// The stage leaf (a level of the cumulative hierarchy).
    Stage,
    /// Apply unary primitive `i ∈ {2,5,6,7,8}` to the result at an earlier
    /// position.
    Unary(u8, usize),
    /// Apply binary primitive `i ∈ {1,3,4}` to results at earlier positions.
    Binary(u8, usize, usize),
}

/// A validated straight-line term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GodelTerm {
    entries: Vec<TermEntry>,
}

impl GodelTerm {
    /// Validate entry tags and the back-reference discipline (every
    /// reference points strictly earlier).
    pub fn new(entries: Vec<TermEntry>) -> Result<Self, GodelError> {
        if entries.is_empty() {
            return Err(GodelError::MalformedTerm("a term needs at least one entry".into()));
        }
        for (k, entry) in entries.iter().enumerate() {
            match *entry {
                TermEntry::Delta | TermEntry::Param | TermEntry::Stage => {}
                TermEntry::Unary(i, n) => {
                    if !UNARY_TAGS.contains(&i) {
                        return Err(GodelError::MalformedTerm(format!(
                            "entry {k}: {i} is not a unary primitive tag"
                        )));
                    }
                    if n >= k {
                        return Err(GodelError::MalformedTerm(format!(
                            "entry {k}: reference {n} is not strictly earlier"
                        )));
                    }
                }
                TermEntry::Binary(i, n, p) => {
                    if !BINARY_TAGS.contains(&i) {
                        return Err(GodelError::MalformedTerm(format!(
                            "entry {k}: {i} is not a binary primitive tag"
                        )));
                    }
                    if n >= k || p >= k {
                        return Err(GodelError::MalformedTerm(format!(
                            "entry {k}: references {n}, {p} must be strictly earlier"
                        )));
                    }
                }
            }
        }
        Ok(GodelTerm { entries })
    }

    pub fn entries(&self) -> &[TermEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validated terms are never empty
    }

    /// Evaluate with the three leaves bound to concrete sets.
    pub fn eval(&self, delta: &HFSet, param: &HFSet, stage: &HFSet) -> HFSet {
        let mut table: Vec<HFSet> = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let value = match *entry {
                TermEntry::Delta => delta.clone(),
                TermEntry::Param => param.clone(),
                TermEntry::Stage => stage.clone(),
                TermEntry::Unary(i, n) => {
                    let arg = &table[n];
                    match i {
                        2 => f2(arg),
                        5 => f5(arg),
                        6 => f6(arg),
                        7 => f7(arg),
                        8 => f8(arg),
                        _ => unreachable!("validated tag"),
                    }
                }
                TermEntry::Binary(i, n, p) => {
                    let (a, b) = (&table[n], &table[p]);
                    match i {
                        1 => f1(a, b),
                        3 => f3(a, b),
                        4 => f4(a, b),
                        _ => unreachable!("validated tag"),
                    }
                }
            };
            table.push(value);
        }
        table.pop().expect("nonempty term")
    }
}

impl fmt::Display for GodelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, entry) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            match *entry {
                TermEntry::Delta => write!(f, "0")?,
                TermEntry::Param => write!(f, "1")?,
                TermEntry::Stage => write!(f, "2")?,
                TermEntry::Unary(i, n) => write!(f, "({i}, {n})")?,
                TermEntry::Binary(i, n, p) => write!(f, "({i}, {n}, {p})")?,
            }
        }
        write!(f, "]")
    }
}

/// Number of admissible entries at position `k`: three leaves, five unary
/// primitives with `k` back-references each, three binary primitives with
/// `k²` reference pairs each.
pub fn slot_options(k: u64) -> u64 {
    3 + 5 * k + 3 * k * k
}

fn entry_to_digit(k: u64, entry: &TermEntry) -> u64 {
    match *entry {
        TermEntry::Delta => 0,
        TermEntry::Param => 1,
        TermEntry::Stage => 2,
        TermEntry::Unary(i, n) => {
            let tag = UNARY_TAGS.iter().position(|t| *t == i).expect("validated tag") as u64;
            3 + tag * k + n as u64
        }
        TermEntry::Binary(i, n, p) => {
            let tag = BINARY_TAGS.iter().position(|t| *t == i).expect("validated tag") as u64;
            3 + 5 * k + tag * k * k + (n as u64) * k + p as u64
        }
    }
}

fn digit_to_entry(k: u64, digit: u64) -> TermEntry {
    debug_assert!(digit < slot_options(k));
    match digit {
        0 => TermEntry::Delta,
        1 => TermEntry::Param,
        2 => TermEntry::Stage,
        d => {
            let d = d - 3;
            if d < 5 * k {
                TermEntry::Unary(UNARY_TAGS[(d / k) as usize], (d % k) as usize)
            } else {
                let d = d - 5 * k;
                TermEntry::Binary(
                    BINARY_TAGS[(d / (k * k)) as usize],
                    ((d % (k * k)) / k) as usize,
                    (d % k) as usize,
                )
            }
        }
    }
}

/// Index of a term in the total enumeration: terms are graded by length,
/// and within a length block the entries form a little-endian mixed-radix
/// numeral with radix `slot_options(k)` at position `k`.
pub fn term_index(term: &GodelTerm) -> Result<u64, GodelError> {
    let len = term.len() as u64;
    let mut start: u64 = 0;
    let mut block: u64 = 1;
    for l in 1..len {
        block = block
            .checked_mul(slot_options(l - 1))
            .ok_or_else(|| index_overflow(term))?;
        start = start.checked_add(block).ok_or_else(|| index_overflow(term))?;
    }
    let mut within: u64 = 0;
    for (k, entry) in term.entries().iter().enumerate().rev() {
        within = within
            .checked_mul(slot_options(k as u64))
            .and_then(|w| w.checked_add(entry_to_digit(k as u64, entry)))
            .ok_or_else(|| index_overflow(term))?;
    }
    start.checked_add(within).ok_or_else(|| index_overflow(term))
}

fn index_overflow(term: &GodelTerm) -> GodelError {
    GodelError::ScaleExceeded(format!("index of {term} does not fit in u64"))
}

/// The term at index `j`; total on all of `u64`.
pub fn term_at(j: u64) -> GodelTerm {
    let mut rem = j;
    let mut len: u64 = 1;
    loop {
        // Size of the block of length-`len` terms. If it overflows u64 the
        // block certainly covers every remaining index.
        let mut block: Option<u64> = Some(1);
        for k in 0..len {
            block = block.and_then(|b| b.checked_mul(slot_options(k)));
        }
        if block.is_none_or(|b| rem < b) {
            let mut entries = Vec::with_capacity(len as usize);
            for k in 0..len {
                let c = slot_options(k);
                entries.push(digit_to_entry(k, rem % c));
                rem /= c;
            }
            return GodelTerm::new(entries).expect("decoded digits are always well-formed");
        }
        rem -= block.expect("finite block when not covering");
        len += 1;
    }
}
