//! A closed, exactly decidable algebra of subsets of the index cardinal.
//!
//! Conditions and measure queries need sets of ordinals that can be
//! intersected, complemented, compared, and *decided* — membership, subset,
//! boundedness, min/max — with no approximation. The algebra of ultimately
//! periodic sets does all of that: a handle stores explicit membership below
//! a threshold and a residue pattern above it, and every boolean combination
//! of handles is again a handle (align thresholds, take the lcm of the
//! moduli). Interval atoms have modulus 1; `mod(m,r)` atoms supply genuine
//! periodicity, which is what measure-one parity splits need.
//!
//! Handles are kept canonical (minimal modulus, then minimal threshold), so
//! structural equality is set equality and the printed form round-trips
//! through [`SetHandle::parse`].

use crate::error::PrikryError;
use std::collections::BTreeSet;
use std::fmt;

/// Largest interval endpoint / explicit threshold a handle may carry.
pub const ENDPOINT_CAP: u64 = 4096;
/// Largest modulus a combination may reach before the algebra refuses.
pub const MODULUS_CAP: u64 = 5040;

/// An ultimately periodic set of ordinals (canonical form).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SetHandle {
    /// Membership below `threshold` is read off `low`.
    threshold: u64,
    /// Period of the tail pattern; at least 1.
    modulus: u64,
    /// Residues mod `modulus` that belong to the tail.
    residues: BTreeSet<u64>,
    /// Explicit members below `threshold`.
    low: BTreeSet<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl SetHandle {
    fn canon(mut self) -> Self {
        // Minimal period first: the tail indicator on Z_m collapses to the
        // smallest divisor d of m under which it is d-periodic.
        for d in 1..=self.modulus {
            if !self.modulus.is_multiple_of(d) {
                continue;
            }
            if (0..self.modulus).all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d))) {
                self.residues.retain(|r| *r < d);
                self.modulus = d;
                break;
            }
        }
        // Then pull the threshold down over every point the tail already
        // predicts correctly.
        while self.threshold > 0 {
            let b = self.threshold - 1;
            if self.low.contains(&b) == self.residues.contains(&(b % self.modulus)) {
                self.low.remove(&b);
                self.threshold = b;
            } else {
                break;
            }
        }
        self
    }

    /// The empty set.
    pub fn empty() -> Self {
        SetHandle { threshold: 0, modulus: 1, residues: BTreeSet::new(), low: BTreeSet::new() }
    }

    /// The whole index cardinal.
    pub fn all() -> Self {
        SetHandle { threshold: 0, modulus: 1, residues: BTreeSet::from([0]), low: BTreeSet::new() }
    }

    /// Closed interval `[a,b]`.
    pub fn interval(a: u64, b: u64) -> Result<Self, PrikryError> {
        if a > b {
            return Err(PrikryError::Config(format!("empty interval [{a},{b}]")));
        }
        if b > ENDPOINT_CAP {
            return Err(PrikryError::Config(format!(
                "interval endpoint {b} beyond the explicit window {ENDPOINT_CAP}"
            )));
        }
        Ok(SetHandle {
            threshold: b + 1,
            modulus: 1,
            residues: BTreeSet::new(),
            low: (a..=b).collect(),
        }
        .canon())
    }

    /// Final segment `[a,inf)`.
    pub fn final_segment(a: u64) -> Result<Self, PrikryError> {
        if a > ENDPOINT_CAP {
            return Err(PrikryError::Config(format!(
                "segment start {a} beyond the explicit window {ENDPOINT_CAP}"
            )));
        }
        Ok(SetHandle { threshold: a, modulus: 1, residues: BTreeSet::from([0]), low: BTreeSet::new() }.canon())
    }

    /// The residue class `{x : x ≡ r (mod m)}`.
    pub fn residue(m: u64, r: u64) -> Result<Self, PrikryError> {
        if m == 0 || m > MODULUS_CAP {
            return Err(PrikryError::Config(format!("modulus {m} outside 1..={MODULUS_CAP}")));
        }
        if r >= m {
            return Err(PrikryError::Config(format!("residue {r} not below modulus {m}")));
        }
        Ok(SetHandle { threshold: 0, modulus: m, residues: BTreeSet::from([r]), low: BTreeSet::new() }.canon())
    }

    /// Exact membership.
    pub fn contains(&self, x: u64) -> bool {
        if x < self.threshold {
            self.low.contains(&x)
        } else {
            self.residues.contains(&(x % self.modulus))
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self, PrikryError> {
        let m = lcm(self.modulus, other.modulus);
        if m > MODULUS_CAP {
            return Err(PrikryError::SubsetUndecidable(format!(
                "combined modulus {m} leaves the closed algebra (cap {MODULUS_CAP})"
            )));
        }
        let t = self.threshold.max(other.threshold);
        let low = (0..t).filter(|x| f(self.contains(*x), other.contains(*x))).collect();
        let residues = (0..m)
            .filter(|r| {
                f(
                    self.residues.contains(&(r % self.modulus)),
                    other.residues.contains(&(r % other.modulus)),
                )
            })
            .collect();
        Ok(SetHandle { threshold: t, modulus: m, residues, low }.canon())
    }

    pub fn union(&self, other: &Self) -> Result<Self, PrikryError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, PrikryError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self, PrikryError> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        SetHandle {
            threshold: self.threshold,
            modulus: self.modulus,
            residues: (0..self.modulus).filter(|r| !self.residues.contains(r)).collect(),
            low: (0..self.threshold).filter(|x| !self.low.contains(x)).collect(),
        }
        .canon()
    }

    /// Drops everything below `b`: `self ∖ [0,b)`.
    pub fn drop_below(&self, b: u64) -> Result<Self, PrikryError> {
        if b == 0 {
            return Ok(self.clone());
        }
        self.difference(&SetHandle::interval(0, b - 1)?)
    }

    pub fn is_empty(&self) -> bool {
        self.low.is_empty() && self.residues.is_empty()
    }

    /// Bounded means the periodic tail is empty.
    pub fn is_bounded(&self) -> bool {
        self.residues.is_empty()
    }

    /// True when the set contains a whole final segment (tail = everything).
    pub fn is_cofinite_tail(&self) -> bool {
        self.residues.len() as u64 == self.modulus
    }

    /// Exact subset test.
    pub fn is_subset(&self, other: &Self) -> Result<bool, PrikryError> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Least element, if any. (Named to stay clear of `Ord::min`, which
    /// method resolution would otherwise pick.)
    pub fn min_elem(&self) -> Option<u64> {
        if let Some(x) = self.low.first() {
            return Some(*x);
        }
        (self.threshold..self.threshold + self.modulus).find(|x| self.residues.contains(&(x % self.modulus)))
    }

    /// Greatest element of a bounded set; `None` means unbounded (or empty —
    /// check [`SetHandle::is_empty`] first).
    pub fn max_elem(&self) -> Option<u64> {
        if !self.residues.is_empty() {
            return None;
        }
        self.low.last().copied()
    }

    /// The first `count` members that are ≥ `start`, in increasing order.
    /// Stops early only if the set runs out (it is bounded).
    pub fn members_from(&self, start: u64, count: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(count);
        let mut x = start;
        while out.len() < count {
            if x >= self.threshold && self.residues.is_empty() {
                break;
            }
            if self.contains(x) {
                out.push(x);
            }
            x += 1;
        }
        out
    }

    /// Diagonal intersection of a finite indexed family: membership of `x`
    /// requires `x ∈ A_s` for every index `s` with `max(s) < x`. The empty
    /// sequence has `max = −∞`, so its set is required everywhere.
    pub fn diagonal(family: &[(Vec<u64>, SetHandle)]) -> Result<Self, PrikryError> {
        let mut acc = SetHandle::all();
        for (s, a) in family {
            let term = match s.iter().max() {
                None => a.clone(),
                Some(&m) => SetHandle::interval(0, m)?.union(a)?,
            };
            acc = acc.intersect(&term)?;
        }
        Ok(acc)
    }

    /// The defining formula of the diagonal intersection, checked pointwise.
    /// [`SetHandle::diagonal`] must agree with this on every probe.
    pub fn diagonal_member(family: &[(Vec<u64>, SetHandle)], x: u64) -> bool {
        family.iter().all(|(s, a)| match s.iter().max() {
            None => a.contains(x),
            Some(&m) => m >= x || a.contains(x),
        })
    }

    /// Parses the infix grammar: atoms `[a,b]`, `[a,inf)`, `mod(m,r)`,
    /// `even`, `odd`, `all`, `none`, and `diag(<s>:expr, ...)`; operators
    /// `~` (complement), `&`, `|`; parentheses.
    pub fn parse(src: &str) -> Result<Self, PrikryError> {
        let toks = tokenize(src)?;
        let mut p = Parser { toks, pos: 0 };
        let h = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(PrikryError::Config(format!("trailing input after set expression in '{src}'")));
        }
        Ok(h)
    }
}

impl fmt::Display for SetHandle {
    /// Canonical rendering; parses back to the same handle.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "none");
        }
        let mut parts: Vec<String> = Vec::new();
        // Explicit part, as maximal runs.
        let mut run: Option<(u64, u64)> = None;
        for &x in &self.low {
            match run {
                Some((a, b)) if x == b + 1 => run = Some((a, x)),
                Some((a, b)) => {
                    parts.push(format!("[{a},{b}]"));
                    run = Some((x, x));
                }
                None => run = Some((x, x)),
            }
        }
        if let Some((a, b)) = run {
            parts.push(format!("[{a},{b}]"));
        }
        // Periodic tail.
        if !self.residues.is_empty() {
            if self.is_cofinite_tail() {
                parts.push(format!("[{},inf)", self.threshold));
            } else {
                let mods: Vec<String> =
                    self.residues.iter().map(|r| format!("mod({},{r})", self.modulus)).collect();
                if self.threshold == 0 {
                    parts.extend(mods);
                } else if mods.len() == 1 {
                    parts.push(format!("[{},inf)&{}", self.threshold, mods[0]));
                } else {
                    parts.push(format!("[{},inf)&({})", self.threshold, mods.join("|")));
                }
            }
        }
        write!(f, "{}", parts.join("|"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, PrikryError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(u64::from(d)))
                        .ok_or_else(|| PrikryError::Config("number overflows".into()))?;
                    chars.next();
                }
                toks.push(Tok::Num(n));
            }
            'a'..='z' => {
                let mut w = String::new();
                while matches!(chars.peek(), Some('a'..='z')) {
                    w.push(chars.next().unwrap());
                }
                toks.push(Tok::Ident(w));
            }
            '[' | ']' | '(' | ')' | ',' | ':' | '<' | '>' | '~' | '&' | '|' => {
                toks.push(Tok::Sym(c));
                chars.next();
            }
            other => {
                return Err(PrikryError::Config(format!("unexpected character '{other}' in set expression")));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_sym(&mut self, c: char) -> Result<(), PrikryError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            other => Err(PrikryError::Config(format!("expected '{c}', found {other:?}"))),
        }
    }

    fn num(&mut self) -> Result<u64, PrikryError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            other => Err(PrikryError::Config(format!("expected a number, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<SetHandle, PrikryError> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(Tok::Sym('|'))) {
            self.pos += 1;
            acc = acc.union(&self.term()?)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SetHandle, PrikryError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Sym('&'))) {
            self.pos += 1;
            acc = acc.intersect(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SetHandle, PrikryError> {
        if matches!(self.peek(), Some(Tok::Sym('~'))) {
            self.pos += 1;
            return Ok(self.factor()?.complement());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SetHandle, PrikryError> {
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let h = self.expr()?;
                self.eat_sym(')')?;
                Ok(h)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.num()?;
                self.eat_sym(',')?;
                if matches!(self.peek(), Some(Tok::Ident(w)) if w == "inf") {
                    self.pos += 1;
                    self.eat_sym(')')?;
                    SetHandle::final_segment(a)
                } else {
                    let b = self.num()?;
                    self.eat_sym(']')?;
                    SetHandle::interval(a, b)
                }
            }
            Some(Tok::Ident(w)) => {
                self.pos += 1;
                match w.as_str() {
                    "all" => Ok(SetHandle::all()),
                    "none" => Ok(SetHandle::empty()),
                    "even" => SetHandle::residue(2, 0),
                    "odd" => SetHandle::residue(2, 1),
                    "mod" => {
                        self.eat_sym('(')?;
                        let m = self.num()?;
                        self.eat_sym(',')?;
                        let r = self.num()?;
                        self.eat_sym(')')?;
                        SetHandle::residue(m, r)
                    }
                    "diag" => {
                        self.eat_sym('(')?;
                        let mut family = Vec::new();
                        if !matches!(self.peek(), Some(Tok::Sym(')'))) {
                            loop {
                                family.push(self.diag_entry()?);
                                if matches!(self.peek(), Some(Tok::Sym(','))) {
                                    self.pos += 1;
                                } else {
                                    break;
                                }
                            }
                        }
                        self.eat_sym(')')?;
                        SetHandle::diagonal(&family)
                    }
                    other => Err(PrikryError::Config(format!("unknown set atom '{other}'"))),
                }
            }
            other => Err(PrikryError::Config(format!("expected a set atom, found {other:?}"))),
        }
    }

    fn diag_entry(&mut self) -> Result<(Vec<u64>, SetHandle), PrikryError> {
        self.eat_sym('<')?;
        let mut seq = Vec::new();
        if !matches!(self.peek(), Some(Tok::Sym('>'))) {
            loop {
                seq.push(self.num()?);
                if matches!(self.peek(), Some(Tok::Sym(','))) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.eat_sym('>')?;
        self.eat_sym(':')?;
        let h = self.expr()?;
        Ok((seq, h))
    }
}
