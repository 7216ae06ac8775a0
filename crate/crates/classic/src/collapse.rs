//! Collapse forcing: finite partial functions ℕ → ordinal labels, ordered by
//! reverse inclusion. The generic object is a map hitting every label the
//! onto dense sets ask for.

use std::collections::BTreeMap;
use std::fmt;

use forcing_core::{DenseSet, Failure, FilterCertificate, ForcingNotion, mix64};

/// Finite partial function from ℕ into the configured label set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct CollapseCond {
    map: BTreeMap<u64, String>,
}

impl CollapseCond {
    pub fn empty() -> Self {
        CollapseCond::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (u64, String)>>(entries: I) -> Self {
        CollapseCond { map: entries.into_iter().collect() }
    }

    pub fn map(&self) -> &BTreeMap<u64, String> {
        &self.map
    }

    pub fn merge(&self, other: &CollapseCond) -> Option<CollapseCond> {
        let mut out = self.clone();
        for (k, v) in &other.map {
            if out.map.entry(*k).or_insert_with(|| v.clone()) != v {
                return None;
            }
        }
        Some(out)
    }
}

impl fmt::Display for CollapseCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.map.iter().map(|(n, l)| format!("{n}->{l}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub struct CollapseNotion {
    pub labels: Vec<String>,
}

impl CollapseNotion {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Self {
        CollapseNotion { labels: labels.iter().map(|s| s.as_ref().to_string()).collect() }
    }
}

impl ForcingNotion for CollapseNotion {
    type Cond = CollapseCond;

    fn top(&self) -> CollapseCond {
        CollapseCond::empty()
    }

    fn leq(&self, q: &CollapseCond, p: &CollapseCond) -> bool {
        p.map.iter().all(|(k, v)| q.map.get(k) == Some(v))
    }

    fn encode(&self, p: &CollapseCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &CollapseCond, seed: u64) -> CollapseCond {
        let mut q = p.clone();
        let mut n = mix64(seed) % 16;
        while q.map.contains_key(&n) {
            n += 1;
        }
        let label = &self.labels[(mix64(seed ^ 0x9e37) % self.labels.len() as u64) as usize];
        q.map.insert(n, label.clone());
        q
    }

    fn decide_compat(&self, p: &CollapseCond, q: &CollapseCond) -> Option<Option<CollapseCond>> {
        Some(p.merge(q))
    }
}

/// Dense set of conditions with `label` in their range: the onto argument.
pub struct HitsLabel {
    pub label: String,
}

impl DenseSet<CollapseNotion> for HitsLabel {
    fn id(&self) -> String {
        format!("onto:{}", self.label)
    }

    fn member(&self, _: &CollapseNotion, p: &CollapseCond) -> bool {
        p.map.values().any(|l| l == &self.label)
    }

    fn refine(&self, notion: &CollapseNotion, p: &CollapseCond) -> Result<CollapseCond, Failure> {
        if self.member(notion, p) {
            return Ok(p.clone());
        }
        let mut q = p.clone();
        let n = (0..).find(|n| !q.map.contains_key(n)).unwrap();
        q.map.insert(n, self.label.clone());
        Ok(q)
    }
}

/// Dense set of conditions with `n` in their domain.
pub struct DomainPoint {
    pub n: u64,
}

impl DenseSet<CollapseNotion> for DomainPoint {
    fn id(&self) -> String {
        format!("dom:{}", self.n)
    }

    fn member(&self, _: &CollapseNotion, p: &CollapseCond) -> bool {
        p.map.contains_key(&self.n)
    }

    fn refine(&self, notion: &CollapseNotion, p: &CollapseCond) -> Result<CollapseCond, Failure> {
        let mut q = p.clone();
        q.map.entry(self.n).or_insert_with(|| notion.labels[0].clone());
        Ok(q)
    }
}

/// Union of the chain: the partial collapse map decided so far.
pub fn collapse_map(cert: &FilterCertificate<CollapseCond>) -> BTreeMap<u64, String> {
    cert.tip().map.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use forcing_core::build_generic;

    #[test]
    fn onto_and_domain_density() {
        let notion = CollapseNotion::new(&["o1", "o2", "o3"]);
        let ontos: Vec<HitsLabel> =
            notion.labels.iter().map(|l| HitsLabel { label: l.clone() }).collect();
        let doms: Vec<DomainPoint> = (0..2).map(|n| DomainPoint { n }).collect();
        let mut refs: Vec<&dyn DenseSet<CollapseNotion>> = Vec::new();
        for d in &ontos {
            refs.push(d);
        }
        for d in &doms {
            refs.push(d);
        }
        let cert = build_generic(&notion, &refs, &CollapseCond::empty(), 16).unwrap();
        let map = collapse_map(&cert);
        for l in &notion.labels {
            assert!(map.values().any(|v| v == l), "label {l} not in range");
        }
        assert!(map.contains_key(&0) && map.contains_key(&1));
    }
}
