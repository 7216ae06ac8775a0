//! Forcing notions: conditions with a partial order, compatibility,
//! dense sets with constructive refiners, filters, and the chain-based
//! generic-filter builder.
//!
//! A *forcing notion* is a partially ordered set with a largest element
//! `top`; `q ≤ p` reads "q extends p" (q carries more information). A set
//! `D` is *dense* when every condition has an extension inside `D`; here
//! dense sets carry an explicit `refine` witness function, which turns the
//! classical existence proof of generic filters into an executable chain
//! construction: `p₀ = start`, `p_{n+1} = denses[n].refine(pₙ)`, and
//! `G = {p : ∃n, pₙ ≤ p}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug};

use crate::error::{Failure, KernelError};

/// Splittable 64-bit mixing function used for deterministic seed-indexed
/// sampling (SplitMix64 finalizer).
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A forcing notion: conditions, order, canonical encoding, and a seeded
/// extension sampler. Finite posets also enumerate their universe.
pub trait ForcingNotion {
    /// The condition type. Structural equality must coincide with
    /// canonical-encoding equality.
    type Cond: Clone + Eq + Ord + Debug;

    /// The largest element; `leq(p, top)` for every condition `p`.
    fn top(&self) -> Self::Cond;

    /// The partial order: `leq(q, p)` means "q extends p".
    fn leq(&self, q: &Self::Cond, p: &Self::Cond) -> bool;

    /// Canonical injective encoding: `encode(p) = encode(q)` iff `p = q`.
    fn encode(&self, p: &Self::Cond) -> String;

    /// Returns some extension `q ≤ p`, deterministically in `seed`.
    /// Need not be strict (a maximal-information condition extends only
    /// itself).
    fn extend_sampled(&self, p: &Self::Cond, seed: u64) -> Self::Cond;

    /// All conditions, present only for finite posets.
    fn universe(&self) -> Option<Vec<Self::Cond>> {
        None
    }

    /// Exact compatibility decision, if the notion has one: `Some(Some(w))`
    /// with a common extension `w`, `Some(None)` for provably incompatible,
    /// `None` when the notion offers no decision procedure.
    fn decide_compat(&self, _p: &Self::Cond, _q: &Self::Cond) -> Option<Option<Self::Cond>> {
        None
    }
}

/// Three-valued compatibility verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compat<C> {
    /// A common extension was found.
    Compatible(C),
    /// Provably no common extension exists.
    Incompatible,
    /// The search budget was exhausted without a verdict.
    Unknown,
}

/// Decides compatibility of `p` and `q`: exactly where possible (notion
/// decision procedure, or exhaustively over a finite universe), otherwise by
/// seed-deterministic sampled search within `budget` tries.
pub fn compatibility<N: ForcingNotion>(
    notion: &N,
    p: &N::Cond,
    q: &N::Cond,
    budget: u32,
    seed: u64,
) -> Compat<N::Cond> {
    if let Some(decision) = notion.decide_compat(p, q) {
        return match decision {
            Some(w) => Compat::Compatible(w),
            None => Compat::Incompatible,
        };
    }
    if let Some(universe) = notion.universe() {
        for r in &universe {
            if notion.leq(r, p) && notion.leq(r, q) {
                return Compat::Compatible(r.clone());
            }
        }
        return Compat::Incompatible;
    }
    // Last resort: sampled extensions of either side. This can only confirm
    // compatibility; exhaustion yields Unknown, never Incompatible.
    for i in 0..budget {
        let r = notion.extend_sampled(p, mix64(seed ^ u64::from(i)));
        if notion.leq(&r, q) {
            return Compat::Compatible(r);
        }
        let r = notion.extend_sampled(q, mix64(seed ^ u64::from(i)).wrapping_add(1));
        if notion.leq(&r, p) {
            return Compat::Compatible(r);
        }
    }
    Compat::Unknown
}

/// A dense set with a constructive refiner: `refine(p)` returns a witness
/// `q ≤ p` with `member(q)`.
pub trait DenseSet<N: ForcingNotion + ?Sized> {
    /// Stable identifier used in certificates and reports.
    fn id(&self) -> String;
    fn member(&self, notion: &N, p: &N::Cond) -> bool;
    fn refine(&self, notion: &N, p: &N::Cond) -> Result<N::Cond, Failure>;
}

/// The finite certificate produced by [`build_generic`]: a decreasing chain,
/// one witness per dense set met, and the induced upward-closed filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterCertificate<C: Ord> {
    /// `chain[0]` is the requested start and `chain[i+1] ≤ chain[i]`.
    pub chain: Vec<C>,
    /// Dense-set id → the chain element witnessing membership.
    pub met: BTreeMap<String, C>,
    /// Upward closure of the chain within the registered conditions (the
    /// finite universe when available, otherwise the chain itself plus top).
    pub filter: BTreeSet<C>,
}

impl<C: Ord + Clone> FilterCertificate<C> {
    /// The strongest condition reached (last chain element).
    pub fn tip(&self) -> &C {
        self.chain.last().expect("certificate chain is never empty")
    }
}

/// Runs the chain construction through the listed dense sets, verifying each
/// refinement step (`q ≤ p` and membership) and recording witnesses.
pub fn build_generic<N: ForcingNotion>(
    notion: &N,
    denses: &[&dyn DenseSet<N>],
    start: &N::Cond,
    budget: usize,
) -> Result<FilterCertificate<N::Cond>, KernelError> {
    if denses.len() > budget {
        return Err(KernelError::BudgetExceeded(format!(
            "{} dense sets exceed run budget {budget}",
            denses.len()
        )));
    }
    let mut chain = vec![start.clone()];
    let mut met = BTreeMap::new();
    for dense in denses {
        let current = chain.last().unwrap().clone();
        let next = dense.refine(notion, &current).map_err(KernelError::Refine)?;
        if !notion.leq(&next, &current) {
            return Err(KernelError::RefinerViolation(format!(
                "dense set {:?}: refine({}) = {} is not below its input",
                dense.id(),
                notion.encode(&current),
                notion.encode(&next)
            )));
        }
        if !dense.member(notion, &next) {
            return Err(KernelError::RefinerViolation(format!(
                "dense set {:?}: refine output {} fails the membership test",
                dense.id(),
                notion.encode(&next)
            )));
        }
        met.insert(dense.id(), next.clone());
        chain.push(next);
    }
    let filter = upward_closure(notion, &chain);
    Ok(FilterCertificate { chain, met, filter })
}

/// Upward closure of a decreasing chain within the registered conditions.
fn upward_closure<N: ForcingNotion>(notion: &N, chain: &[N::Cond]) -> BTreeSet<N::Cond> {
    match notion.universe() {
        Some(universe) => universe
            .into_iter()
            .filter(|q| chain.iter().any(|p| notion.leq(p, q)))
            .collect(),
        None => {
            let mut filter: BTreeSet<N::Cond> = chain.iter().cloned().collect();
            filter.insert(notion.top());
            filter
        }
    }
}

/// Checks the filter axioms for a finite condition set: upward closure
/// within the supplied universe and pairwise compatibility.
pub fn is_filter<N: ForcingNotion>(
    notion: &N,
    members: &BTreeSet<N::Cond>,
) -> Result<bool, KernelError> {
    let universe = notion.universe().ok_or_else(|| {
        KernelError::UniverseRequired(
            "upward closure cannot be checked without an enumerated universe".into(),
        )
    })?;
    // Clause 1: upward closure.
    for p in members {
        for q in &universe {
            if notion.leq(p, q) && !members.contains(q) {
                return Ok(false);
            }
        }
    }
    // Clause 2: pairwise compatibility, decided exhaustively.
    let list: Vec<&N::Cond> = members.iter().collect();
    for (i, p) in list.iter().enumerate() {
        for q in &list[i + 1..] {
            match compatibility(notion, p, q, 0, 0) {
                Compat::Compatible(_) => {}
                Compat::Incompatible => return Ok(false),
                Compat::Unknown => {
                    return Err(KernelError::Unknown(format!(
                        "compatibility of {} and {} undecided",
                        notion.encode(p),
                        notion.encode(q)
                    )))
                }
            }
        }
    }
    Ok(true)
}

/// Verdict of [`antichain_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntichainVerdict<C> {
    /// Every pair is provably incompatible.
    Antichain,
    /// Some pair has a common extension (the least such pair by encoding,
    /// so the verdict and witness are stable under input reordering).
    NotAntichain { p: C, q: C, witness: C },
    /// Some pairs stayed undecided within the search budget.
    Unknown { undecided: Vec<(C, C)> },
}

/// Checks pairwise incompatibility. Exact for finite posets and for notions
/// with a compatibility decision procedure; otherwise sampler-bounded with a
/// three-valued outcome.
pub fn antichain_check<N: ForcingNotion>(
    notion: &N,
    conditions: &[N::Cond],
    budget: u32,
    seed: u64,
) -> AntichainVerdict<N::Cond> {
    let mut compatible: Vec<(N::Cond, N::Cond, N::Cond)> = Vec::new();
    let mut undecided: Vec<(N::Cond, N::Cond)> = Vec::new();
    // Pairs are recorded in encoding order so verdicts cannot depend on the
    // order the caller listed the conditions in.
    let ordered = |p: &N::Cond, q: &N::Cond| -> (N::Cond, N::Cond) {
        if notion.encode(p) <= notion.encode(q) {
            (p.clone(), q.clone())
        } else {
            (q.clone(), p.clone())
        }
    };
    for (i, p) in conditions.iter().enumerate() {
        for q in &conditions[i + 1..] {
            if p == q {
                // A duplicated condition is compatible with itself.
                compatible.push((p.clone(), q.clone(), p.clone()));
                continue;
            }
            match compatibility(notion, p, q, budget, seed) {
                Compat::Compatible(w) => {
                    let (lo, hi) = ordered(p, q);
                    compatible.push((lo, hi, w));
                }
                Compat::Incompatible => {}
                Compat::Unknown => {
                    let (lo, hi) = ordered(p, q);
                    undecided.push((lo, hi));
                }
            }
        }
    }
    if let Some((p, q, witness)) = compatible
        .into_iter()
        .min_by_key(|(p, q, _)| (notion.encode(p), notion.encode(q)))
    {
        return AntichainVerdict::NotAntichain { p, q, witness };
    }
    if !undecided.is_empty() {
        undecided.sort_by_key(|(p, q)| (notion.encode(p), notion.encode(q)));
        return AntichainVerdict::Unknown { undecided };
    }
    AntichainVerdict::Antichain
}

/// The dense set `D_p = {q : q ≤ p or q ⊥ p}`: no condition is neutral about
/// `p` after refinement. Its refiner returns a common extension of its input
/// with `p` when one exists, and otherwise the input itself (which is then a
/// member via incompatibility).
pub struct DenseDp<C> {
    pub p: C,
    pub budget: u32,
    pub seed: u64,
}

impl<N: ForcingNotion> DenseSet<N> for DenseDp<N::Cond> {
    fn id(&self) -> String {
        format!("D_p({:?})", self.p)
    }

    fn member(&self, notion: &N, q: &N::Cond) -> bool {
        notion.leq(q, &self.p)
            || matches!(
                compatibility(notion, q, &self.p, self.budget, self.seed),
                Compat::Incompatible
            )
    }

    fn refine(&self, notion: &N, r: &N::Cond) -> Result<N::Cond, Failure> {
        match compatibility(notion, r, &self.p, self.budget, self.seed) {
            Compat::Compatible(w) => Ok(w),
            Compat::Incompatible => Ok(r.clone()),
            Compat::Unknown => Err(Failure::new(
                "UNKNOWN",
                format!("compatibility with {:?} undecided within budget", self.p),
            )),
        }
    }
}

/// For each minimal element `m` of a finite poset, the cone `{q : m ≤ q}` is
/// a filter meeting every dense subset; these are the "atom generics" that
/// drive the semantic forcing relation.
pub fn atom_generics<N: ForcingNotion>(
    notion: &N,
) -> Result<Vec<FilterCertificate<N::Cond>>, KernelError> {
    let universe = notion
        .universe()
        .ok_or_else(|| KernelError::NotFinite("atom generics need a finite universe".into()))?;
    let minimals: Vec<&N::Cond> = universe
        .iter()
        .filter(|m| universe.iter().all(|q| !notion.leq(q, m) || *q == **m))
        .collect();
    let top = notion.top();
    Ok(minimals
        .into_iter()
        .map(|m| {
            let chain = if *m == top { vec![top.clone()] } else { vec![top.clone(), m.clone()] };
            let filter: BTreeSet<N::Cond> =
                universe.iter().filter(|q| notion.leq(m, q)).cloned().collect();
            FilterCertificate { chain, met: BTreeMap::new(), filter }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Finite posets
// ---------------------------------------------------------------------------

/// An explicit finite poset with a top element; conditions are label strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    /// `leq_mat[q][p]` = "q extends p".
    leq_mat: Vec<Vec<bool>>,
    top_ix: usize,
}

impl FinitePoset {
    /// Builds a poset from labels and a list of `q ≤ p` pairs. The relation
    /// is closed reflexively and transitively; antisymmetry and the existence
    /// of a unique top element are validated.
    pub fn new<S: AsRef<str>>(labels: &[S], leq_pairs: &[(S, S)]) -> Result<Self, KernelError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(KernelError::ConfigParse(format!("duplicate element label {l:?}")));
            }
        }
        let n = labels.len();
        if n == 0 {
            return Err(KernelError::ConfigParse("poset has no elements".into()));
        }
        let mut mat = vec![vec![false; n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = true;
        }
        for (q, p) in leq_pairs {
            let qi = *index.get(q.as_ref()).ok_or_else(|| {
                KernelError::ConfigParse(format!("unknown element {:?}", q.as_ref()))
            })?;
            let pi = *index.get(p.as_ref()).ok_or_else(|| {
                KernelError::ConfigParse(format!("unknown element {:?}", p.as_ref()))
            })?;
            mat[qi][pi] = true;
        }
        // Transitive closure.
        for k in 0..n {
            for i in 0..n {
                if mat[i][k] {
                    for j in 0..n {
                        if mat[k][j] {
                            mat[i][j] = true;
                        }
                    }
                }
            }
        }
        // Antisymmetry.
        for i in 0..n {
            for j in 0..n {
                if i != j && mat[i][j] && mat[j][i] {
                    return Err(KernelError::ConfigParse(format!(
                        "order cycle between {:?} and {:?}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        // Unique top.
        let tops: Vec<usize> =
            (0..n).filter(|&t| (0..n).all(|i| mat[i][t])).collect();
        let top_ix = match tops.as_slice() {
            [t] => *t,
            [] => {
                return Err(KernelError::ConfigParse(
                    "poset has no largest element".into(),
                ))
            }
            _ => unreachable!("two distinct tops would violate antisymmetry"),
        };
        Ok(FinitePoset { labels, index, leq_mat: mat, top_ix })
    }

    /// Parses the edge-list text format: one `q <= p` pair per line, with
    /// blank lines and `#` comments ignored. Elements are exactly the labels
    /// that appear; a one-element poset is written as its reflexive edge.
    pub fn parse(text: &str) -> Result<Self, KernelError> {
        let mut labels: Vec<String> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split("<=");
            let (q, p) = match (parts.next(), parts.next(), parts.next()) {
                (Some(q), Some(p), None) => (q.trim(), p.trim()),
                _ => {
                    return Err(KernelError::ConfigParse(format!(
                        "line {}: expected `q <= p`, found {raw:?}",
                        lineno + 1
                    )))
                }
            };
            if q.is_empty() || p.is_empty() {
                return Err(KernelError::ConfigParse(format!(
                    "line {}: empty element label in {raw:?}",
                    lineno + 1
                )));
            }
            for label in [q, p] {
                if seen.insert(label.to_string()) {
                    labels.push(label.to_string());
                }
            }
            pairs.push((q.to_string(), p.to_string()));
        }
        FinitePoset::new(&labels, &pairs)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn ix(&self, label: &str) -> usize {
        *self
            .index
            .get(label)
            .unwrap_or_else(|| panic!("{label:?} is not an element of this poset"))
    }

    /// True when `m` is minimal (no strictly smaller element).
    pub fn is_minimal(&self, m: &str) -> bool {
        let mi = self.ix(m);
        (0..self.labels.len()).all(|q| !self.leq_mat[q][mi] || q == mi)
    }

    /// All minimal elements, in label order of first declaration.
    pub fn minimal_elements(&self) -> Vec<String> {
        self.labels.iter().filter(|l| self.is_minimal(l)).cloned().collect()
    }
}

impl ForcingNotion for FinitePoset {
    type Cond = String;

    fn top(&self) -> String {
        self.labels[self.top_ix].clone()
    }

    fn leq(&self, q: &String, p: &String) -> bool {
        self.leq_mat[self.ix(q)][self.ix(p)]
    }

    fn encode(&self, p: &String) -> String {
        p.clone()
    }

    fn extend_sampled(&self, p: &String, seed: u64) -> String {
        let pi = self.ix(p);
        let cone: Vec<usize> =
            (0..self.labels.len()).filter(|&q| self.leq_mat[q][pi]).collect();
        let pick = cone[(mix64(seed) % cone.len() as u64) as usize];
        self.labels[pick].clone()
    }

    fn universe(&self) -> Option<Vec<String>> {
        Some(self.labels.clone())
    }
}

impl fmt::Display for FinitePoset {
    /// Prints the strict relation as `q <= p` lines (the same edge-list
    /// format [`FinitePoset::parse`] reads); isolated elements get a
    /// reflexive line so no label is lost on a round trip.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (qi, q) in self.labels.iter().enumerate() {
            let uppers: Vec<&String> = self
                .labels
                .iter()
                .enumerate()
                .filter(|&(pi, _)| pi != qi && self.leq_mat[qi][pi])
                .map(|(_, p)| p)
                .collect();
            if uppers.is_empty() {
                writeln!(f, "{q} <= {q}")?;
            }
            for p in uppers {
                writeln!(f, "{q} <= {p}")?;
            }
        }
        Ok(())
    }
}

/// Enumerates every partial order with a largest element on `n` labeled
/// points (`n ≤ 4` stays tiny: 219 labeled posets on 4 points). Elements are
/// labeled `e0..e{n-1}`. Used as the exhaustive test corpus for the
/// forcing-relation laws.
pub fn enumerate_posets_with_top(n: usize) -> Vec<FinitePoset> {
    assert!(n >= 1 && n <= 4, "poset enumeration is intended for 1..=4 elements");
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let off_diag: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << off_diag.len()) {
        let mut mat = vec![vec![false; n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in off_diag.iter().enumerate() {
            if mask >> b & 1 == 1 {
                mat[i][j] = true;
            }
        }
        if !is_partial_order(&mat) {
            continue;
        }
        // Demand a unique largest element.
        let tops: Vec<usize> = (0..n).filter(|&t| (0..n).all(|i| mat[i][t])).collect();
        if tops.len() != 1 {
            continue;
        }
        let pairs: Vec<(String, String)> = off_diag
            .iter()
            .filter(|&&(i, j)| mat[i][j])
            .map(|&(i, j)| (labels[i].clone(), labels[j].clone()))
            .collect();
        out.push(
            FinitePoset::new(&labels, &pairs).expect("enumerated matrix is a valid poset"),
        );
    }
    out
}

fn is_partial_order(mat: &[Vec<bool>]) -> bool {
    let n = mat.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && mat[i][j] && mat[j][i] {
                return false;
            }
            for k in 0..n {
                if mat[i][j] && mat[j][k] && !mat[i][k] {
                    return false;
                }
            }
        }
    }
    true
}
