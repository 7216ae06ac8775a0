//! Hereditarily finite sets in canonical extensional form.
//!
//! An [`HFSet`] is a finite set of hereditarily finite sets, stored as a
//! `BTreeSet` so that equal sets have identical representations and a total
//! (structural) order is available for free. Ordered pairs are Kuratowski
//! pairs `(u,v) = {{u},{u,v}}` and n-tuples nest on the left:
//! `(u,v,w) = ((u,v),w)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::KernelError;

/// A hereditarily finite set with canonical (sorted, deduplicated) encoding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HFSet(BTreeSet<HFSet>);

impl HFSet {
    /// The empty set ∅.
    pub fn empty() -> Self {
        HFSet(BTreeSet::new())
    }

    /// `{x}`.
    pub fn singleton(x: HFSet) -> Self {
        HFSet(BTreeSet::from([x]))
    }

    /// The unordered pair `{u, v}` (a singleton when `u = v`).
    pub fn doubleton(u: HFSet, v: HFSet) -> Self {
        HFSet(BTreeSet::from([u, v]))
    }

    /// Builds a set from any iterator of elements; duplicates collapse.
    pub fn from_elements<I: IntoIterator<Item = HFSet>>(iter: I) -> Self {
        HFSet(iter.into_iter().collect())
    }

    /// The Kuratowski ordered pair `(u,v) = {{u},{u,v}}`.
    pub fn ordered_pair(u: HFSet, v: HFSet) -> Self {
        HFSet::doubleton(HFSet::singleton(u.clone()), HFSet::doubleton(u, v))
    }

    /// Left-nested tuple `(x0,...,x_{n-1}) = ((..(x0,x1)..), x_{n-1})`.
    /// A 1-tuple is the element itself.
    ///
    /// Panics on an empty slice.
    pub fn tuple(xs: &[HFSet]) -> Self {
        assert!(!xs.is_empty(), "tuple of arity 0");
        let mut acc = xs[0].clone();
        for x in &xs[1..] {
            acc = HFSet::ordered_pair(acc, x.clone());
        }
        acc
    }

    /// Decodes a Kuratowski pair, if this set is one.
    ///
    /// `{{u}}` decodes as `(u,u)`; `{{u},{u,v}}` as `(u,v)`. Anything else
    /// returns `None`.
    pub fn decode_pair(&self) -> Option<(HFSet, HFSet)> {
        let elems: Vec<&HFSet> = self.0.iter().collect();
        match elems.as_slice() {
            [a] => {
                // {{u}} = (u,u)
                let inner: Vec<&HFSet> = a.0.iter().collect();
                match inner.as_slice() {
                    [u] => Some(((*u).clone(), (*u).clone())),
                    _ => None,
                }
            }
            [a, b] => {
                // One of a,b is {u}, the other {u,v} with u from the singleton.
                let (sing, pair) = if a.0.len() == 1 && b.0.len() == 2 {
                    (a, b)
                } else if b.0.len() == 1 && a.0.len() == 2 {
                    (b, a)
                } else {
                    return None;
                };
                let u = sing.0.iter().next().unwrap();
                if !pair.0.contains(u) {
                    return None;
                }
                let v = pair.0.iter().find(|x| *x != u)?;
                Some((u.clone(), v.clone()))
            }
            _ => None,
        }
    }

    /// Decodes a left-nested triple `((u,v),w)`, if this set is one.
    pub fn decode_triple(&self) -> Option<(HFSet, HFSet, HFSet)> {
        let (uv, w) = self.decode_pair()?;
        let (u, v) = uv.decode_pair()?;
        Some((u, v, w))
    }

    /// Membership test `x ∈ self`.
    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.contains(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of (immediate) elements.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HFSet> {
        self.0.iter()
    }

    /// Inserts an element, keeping canonical form.
    pub fn insert(&mut self, x: HFSet) {
        self.0.insert(x);
    }

    /// Set-theoretic rank: `rank(∅) = 0`, `rank(x) = 1 + max rank of elements`.
    pub fn rank(&self) -> u32 {
        self.0.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }

    /// Binary union.
    pub fn union(&self, other: &HFSet) -> HFSet {
        HFSet(self.0.union(&other.0).cloned().collect())
    }

    /// Binary intersection.
    pub fn intersection(&self, other: &HFSet) -> HFSet {
        HFSet(self.0.intersection(&other.0).cloned().collect())
    }

    /// Set difference `self ∖ other`.
    pub fn difference(&self, other: &HFSet) -> HFSet {
        HFSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// The von Neumann ordinal `n = {0, 1, ..., n-1}`.
    pub fn ordinal(n: u32) -> HFSet {
        let mut cur = HFSet::empty();
        for _ in 0..n {
            let mut next = cur.clone();
            next.insert(cur);
            cur = next;
        }
        cur
    }

    /// The rank-initial segment `V_n` of the hereditarily finite sets:
    /// `V_0 = ∅`, `V_{n+1} = P(V_n)`. Useful only for tiny `n` (|V_4| = 16,
    /// |V_5| = 65536).
    pub fn v_stage(n: u32) -> HFSet {
        let mut cur = HFSet::empty();
        for _ in 0..n {
            cur = cur.powerset();
        }
        cur
    }

    /// Power set `P(self)`.
    pub fn powerset(&self) -> HFSet {
        let elems: Vec<&HFSet> = self.0.iter().collect();
        assert!(elems.len() < 26, "powerset of a set with {} elements", elems.len());
        let mut out = BTreeSet::new();
        for mask in 0u64..(1u64 << elems.len()) {
            let subset: BTreeSet<HFSet> = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| (*e).clone())
                .collect();
            out.insert(HFSet(subset));
        }
        HFSet(out)
    }

    /// Total number of nodes in the hereditary structure (the set itself plus
    /// all members, recursively, with multiplicity).
    pub fn node_count(&self) -> usize {
        1 + self.0.iter().map(HFSet::node_count).sum::<usize>()
    }

    /// Parses the brace syntax produced by [`fmt::Display`], e.g. `{{},{{}}}`.
    pub fn parse(text: &str) -> Result<HFSet, KernelError> {
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        let set = parse_set(&mut chars)?;
        if chars.peek().is_some() {
            return Err(KernelError::ConfigParse(format!(
                "trailing input after hereditarily finite set in {text:?}"
            )));
        }
        Ok(set)
    }
}

fn parse_set(
    chars: &mut std::iter::Peekable<impl Iterator<Item = char>>,
) -> Result<HFSet, KernelError> {
    match chars.next() {
        Some('{') => {}
        other => {
            return Err(KernelError::ConfigParse(format!(
                "expected '{{' at start of set, found {other:?}"
            )))
        }
    }
    let mut out = HFSet::empty();
    loop {
        match chars.peek() {
            Some('}') => {
                chars.next();
                return Ok(out);
            }
            Some('{') => {
                out.insert(parse_set(chars)?);
                match chars.peek() {
                    Some(',') => {
                        chars.next();
                    }
                    Some('}') => {}
                    other => {
                        return Err(KernelError::ConfigParse(format!(
                            "expected ',' or '}}' inside set, found {other:?}"
                        )))
                    }
                }
            }
            other => {
                return Err(KernelError::ConfigParse(format!(
                    "expected '{{' or '}}' inside set, found {other:?}"
                )))
            }
        }
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for HFSet {
    // Debug = Display: the brace form is already the canonical encoding.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<HFSet> for HFSet {
    fn from_iter<T: IntoIterator<Item = HFSet>>(iter: T) -> Self {
        HFSet(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_roundtrip() {
        for s in [
            HFSet::empty(),
            HFSet::ordinal(3),
            HFSet::ordered_pair(HFSet::empty(), HFSet::ordinal(2)),
            HFSet::v_stage(3),
        ] {
            let text = s.to_string();
            assert_eq!(HFSet::parse(&text).unwrap(), s);
        }
    }

    #[test]
    fn kuratowski_pair_decodes() {
        let u = HFSet::ordinal(1);
        let v = HFSet::ordinal(2);
        let p = HFSet::ordered_pair(u.clone(), v.clone());
        assert_eq!(p.decode_pair(), Some((u.clone(), v.clone())));
        // Degenerate pair (u,u) = {{u}}.
        let q = HFSet::ordered_pair(u.clone(), u.clone());
        assert_eq!(q, HFSet::singleton(HFSet::singleton(u.clone())));
        assert_eq!(q.decode_pair(), Some((u.clone(), u)));
        // A plain doubleton is not a pair.
        assert_eq!(HFSet::ordinal(2).decode_pair(), None);
    }

    #[test]
    fn triple_is_left_nested() {
        let a = HFSet::empty();
        let b = HFSet::ordinal(1);
        let c = HFSet::ordinal(2);
        let t = HFSet::tuple(&[a.clone(), b.clone(), c.clone()]);
        assert_eq!(t, HFSet::ordered_pair(HFSet::ordered_pair(a.clone(), b.clone()), c.clone()));
        assert_eq!(t.decode_triple(), Some((a, b, c)));
    }

    #[test]
    fn ranks_and_ordinals() {
        assert_eq!(HFSet::empty().rank(), 0);
        assert_eq!(HFSet::ordinal(4).rank(), 4);
        assert_eq!(HFSet::v_stage(2), HFSet::parse("{{},{{}}}").unwrap());
        assert_eq!(HFSet::v_stage(3).len(), 4);
        assert_eq!(HFSet::v_stage(4).len(), 16);
    }
}
