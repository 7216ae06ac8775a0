//! The covering forcing: pairs (k, f) where f maps ℕ into finite subsets of
//! ℕ with |f(n)| ≤ n everywhere and |f(n)| bounded, and k freezes the first
//! k values. Extension may lengthen the frozen prefix and enlarge the sets
//! beyond it. The generic object is a slalom Φ that eventually covers every
//! registered target function.
//!
//! Key boundary: |f(0)| ≤ 0 forces f(0) = ∅ always, so no target with a
//! demand at n = 0 is ever coverable — the refiner reports NOT_EXTENDABLE
//! rather than silently skipping the coordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use forcing_core::{DenseSet, Failure, FilterCertificate, ForcingNotion, mix64};

use crate::error::ClassicError;

/// A covering condition (k, f) with per-condition size bound.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverCond {
    k: u64,
    /// finite support; coordinates off the map are ∅
    f: BTreeMap<u64, BTreeSet<u64>>,
    /// the condition's own bound: max |f(n)| over its support
    bound: u64,
}

impl CoverCond {
    pub fn new(
        k: u64,
        entries: impl IntoIterator<Item = (u64, BTreeSet<u64>)>,
    ) -> Result<Self, ClassicError> {
        let mut f: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for (n, s) in entries {
            if s.is_empty() {
                continue; // ∅ is the default; keep the support canonical
            }
            if s.len() as u64 > n {
                return Err(ClassicError::Config(format!(
                    "covering condition violates |f({n})| <= {n} (got {})",
                    s.len()
                )));
            }
            if f.insert(n, s).is_some() {
                return Err(ClassicError::Config(format!("duplicate coordinate {n}")));
            }
        }
        let bound = f.values().map(|s| s.len() as u64).max().unwrap_or(0);
        Ok(CoverCond { k, f, bound })
    }

    pub fn root() -> Self {
        CoverCond { k: 0, f: BTreeMap::new(), bound: 0 }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn at(&self, n: u64) -> BTreeSet<u64> {
        self.f.get(&n).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.f.keys().copied()
    }

    pub fn entries(&self) -> &BTreeMap<u64, BTreeSet<u64>> {
        &self.f
    }
}

impl fmt::Display for CoverCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .f
            .iter()
            .map(|(n, s)| {
                let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                format!("{n}->{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "({}; {})", self.k, parts.join(","))
    }
}

pub struct CoverNotion;

impl ForcingNotion for CoverNotion {
    type Cond = CoverCond;

    fn top(&self) -> CoverCond {
        CoverCond::root()
    }

    /// (l,g) ≤ (k,f): l ≥ k, g↾k = f↾k, and g(n) ⊇ f(n) for all n.
    fn leq(&self, q: &CoverCond, p: &CoverCond) -> bool {
        if q.k < p.k {
            return false;
        }
        let frozen_ok = q
            .f
            .keys()
            .chain(p.f.keys())
            .filter(|&&n| n < p.k)
            .all(|&n| q.at(n) == p.at(n));
        frozen_ok && p.f.iter().all(|(n, s)| s.is_subset(&q.at(*n)))
    }

    fn encode(&self, p: &CoverCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &CoverCond, seed: u64) -> CoverCond {
        let mut q = p.clone();
        if mix64(seed) % 2 == 0 {
            q.k += 1;
            return q;
        }
        // add one element to a coordinate past the frozen prefix with room
        let n = p.k.max(1) + mix64(seed) % 4;
        let mut s = q.at(n);
        let fresh = (0..).find(|x| !s.contains(x)).unwrap();
        if (s.len() as u64) < n {
            s.insert(fresh);
            q.f.insert(n, s);
            q.bound = q.bound.max(q.at(n).len() as u64);
        } else {
            q.k += 1;
        }
        q
    }

    fn decide_compat(&self, p: &CoverCond, q: &CoverCond) -> Option<Option<CoverCond>> {
        let k = p.k.max(q.k);
        let coords: BTreeSet<u64> = p.f.keys().chain(q.f.keys()).copied().collect();
        let mut merged = BTreeMap::new();
        for n in coords {
            let a = p.at(n);
            let b = q.at(n);
            // inside a frozen prefix the value is already final
            if n < p.k && !b.is_subset(&a) {
                return Some(None);
            }
            if n < q.k && !a.is_subset(&b) {
                return Some(None);
            }
            let union: BTreeSet<u64> = a.union(&b).copied().collect();
            if union.len() as u64 > n {
                return Some(None);
            }
            if !union.is_empty() {
                merged.insert(n, union);
            }
        }
        let bound = merged.values().map(|s| s.len() as u64).max().unwrap_or(0);
        Some(Some(CoverCond { k, f: merged, bound }))
    }
}

/// Dense set of conditions eventually covering a finite-support target α:
/// the frozen prefix must already have passed α's support with α(n) ∈ f(n)
/// at each supported point.
pub struct CoversTarget {
    /// finite partial target: coordinate → demanded value
    pub alpha: BTreeMap<u64, u64>,
}

impl CoversTarget {
    fn max_support(&self) -> Option<u64> {
        self.alpha.keys().next_back().copied()
    }
}

impl DenseSet<CoverNotion> for CoversTarget {
    fn id(&self) -> String {
        let parts: Vec<String> =
            self.alpha.iter().map(|(n, v)| format!("{n}={v}")).collect();
        format!("cover:{}", parts.join(","))
    }

    fn member(&self, _: &CoverNotion, p: &CoverCond) -> bool {
        let past = match self.max_support() {
            Some(m) => p.k > m,
            None => true,
        };
        past && self.alpha.iter().all(|(n, v)| p.at(*n).contains(v))
    }

    fn refine(&self, notion: &CoverNotion, p: &CoverCond) -> Result<CoverCond, Failure> {
        if self.member(notion, p) {
            return Ok(p.clone());
        }
        let mut q = p.clone();
        for (&n, &v) in &self.alpha {
            let mut s = q.at(n);
            if s.contains(&v) {
                continue;
            }
            if n < q.k {
                return Err(ClassicError::NotExtendable(format!(
                    "coordinate {n} is frozen without {v}"
                ))
                .into());
            }
            if s.len() as u64 + 1 > n {
                return Err(ClassicError::NotExtendable(format!(
                    "|f({n})| <= {n} leaves no room for {v}"
                ))
                .into());
            }
            s.insert(v);
            q.f.insert(n, s);
        }
        q.bound = q.f.values().map(|s| s.len() as u64).max().unwrap_or(0);
        if let Some(m) = self.max_support() {
            q.k = q.k.max(m + 1);
        }
        Ok(q)
    }
}

/// The slalom extracted from a certificate: the strongest condition's map
/// with its stabilization point k (values below k are final).
pub fn slalom(cert: &FilterCertificate<CoverCond>) -> (u64, BTreeMap<u64, BTreeSet<u64>>) {
    let tip = cert.tip();
    (tip.k, tip.f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn order_clauses() {
        let n = CoverNotion;
        let base = CoverCond::new(1, [(1, set(&[3]))]).unwrap();
        let ext = CoverCond::new(2, [(1, set(&[3]))]).unwrap();
        assert!(n.leq(&ext, &base));
        assert!(!n.leq(&base, &ext));
        // growing a frozen coordinate breaks the order even via a superset
        let deep = CoverCond::new(3, [(2, set(&[5]))]).unwrap();
        let bad = CoverCond::new(3, [(2, set(&[5, 6]))]).unwrap();
        assert!(!n.leq(&bad, &deep));
        // ...but growing past the freeze point is fine
        let good = CoverCond::new(2, [(1, set(&[3])), (5, set(&[9]))]).unwrap();
        assert!(n.leq(&good, &ext));
        assert!(n.leq(&base, &n.top()));
    }

    #[test]
    fn size_invariant_enforced() {
        assert!(CoverCond::new(1, [(0, set(&[7]))]).is_err());
        assert!(CoverCond::new(1, [(2, set(&[7, 8, 9]))]).is_err());
        let ok = CoverCond::new(1, [(2, set(&[7, 8]))]).unwrap();
        assert_eq!(ok.bound(), 2);
    }

    #[test]
    fn covering_density_and_boundaries() {
        let n = CoverNotion;
        let d = CoversTarget { alpha: [(1, 4), (3, 7)].into_iter().collect() };
        let q = d.refine(&n, &CoverCond::root()).unwrap();
        assert!(d.member(&n, &q));
        assert!(q.k() > 3 && q.at(1).contains(&4) && q.at(3).contains(&7));

        // a demand at n = 0 can never fit in |f(0)| ≤ 0
        let zero = CoversTarget { alpha: [(0, 3)].into_iter().collect() };
        let err = zero.refine(&n, &CoverCond::root()).unwrap_err();
        assert_eq!(err.code, "NOT_EXTENDABLE");

        // a frozen prefix without the demanded value cannot be repaired
        let frozen = CoverCond::new(2, [(1, set(&[9]))]).unwrap();
        let d1 = CoversTarget { alpha: [(1, 4)].into_iter().collect() };
        let err = d1.refine(&n, &frozen).unwrap_err();
        assert_eq!(err.code, "NOT_EXTENDABLE");

        // an overflow at a coordinate that is full
        let full = CoverCond::new(0, [(1, set(&[9]))]).unwrap();
        let err = d1.refine(&n, &full).unwrap_err();
        assert_eq!(err.code, "NOT_EXTENDABLE");
    }

    #[test]
    fn compatibility_respects_freezes_and_capacity() {
        let n = CoverNotion;
        let a = CoverCond::new(2, [(1, set(&[3]))]).unwrap();
        let b = CoverCond::new(0, [(1, set(&[4]))]).unwrap();
        // coordinate 1 is frozen in a without 4, and |{3,4}| > 1 anyway
        assert_eq!(n.decide_compat(&a, &b), Some(None));
        let c = CoverCond::new(0, [(3, set(&[4]))]).unwrap();
        let w = n.decide_compat(&a, &c).unwrap().unwrap();
        assert!(n.leq(&w, &a) && n.leq(&w, &c));
    }
}
