//! P-names over a poset, their evaluation along a filter, check names,
//! the canonical name Γ, and automorphism actions.
//!
//! A name is a finite set of pairs `(child-name, condition)`; evaluating
//! along a filter `G` keeps exactly the children whose condition landed in
//! `G`: `K_G(a) = {K_G(b) : (b,p) ∈ a, p ∈ G}`. The map `x ↦ x̌` embeds the
//! ground sets (here: hereditarily finite sets) so that `K_G(x̌) = x`, and
//! `Γ = {(p̌, p)}` names the generic filter itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::KernelError;
use crate::hf::HFSet;
use crate::poset::{FinitePoset, ForcingNotion};

/// Default bound on name rank; exceeding it is an error, never silent
/// truncation.
pub const DEFAULT_RANK_BOUND: u32 = 4;

/// A P-name: a finite set of (child, condition) pairs, canonically ordered.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PName<C: Ord> {
    pairs: BTreeSet<(PName<C>, C)>,
}

impl<C: Ord + Clone> PName<C> {
    /// The empty name (evaluates to ∅ under every filter).
    pub fn empty() -> Self {
        PName { pairs: BTreeSet::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (PName<C>, C)>>(pairs: I) -> Self {
        PName { pairs: pairs.into_iter().collect() }
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(PName<C>, C)> {
        self.pairs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Name rank: `rank(∅) = 0`, otherwise `1 + max` over children. Names are
    /// well-founded by construction, so this terminates.
    pub fn rank(&self) -> u32 {
        self.pairs.iter().map(|(child, _)| child.rank() + 1).max().unwrap_or(0)
    }

    /// Evaluation `K_G` along the filter part of a certificate:
    /// `{eval(b) : (b,p) ∈ self, p ∈ filter}`, canonicalized by [`HFSet`].
    pub fn eval(&self, filter: &BTreeSet<C>) -> HFSet {
        self.pairs
            .iter()
            .filter(|(_, p)| filter.contains(p))
            .map(|(child, _)| child.eval(filter))
            .collect()
    }

    /// Applies a condition map recursively to every pair.
    pub fn map_conditions<D: Ord + Clone>(&self, f: &impl Fn(&C) -> D) -> PName<D> {
        PName {
            pairs: self
                .pairs
                .iter()
                .map(|(child, c)| (child.map_conditions(f), f(c)))
                .collect(),
        }
    }
}

/// The check name `x̌ = {(y̌, top) : y ∈ x}`; `K_G(x̌) = x` whenever `top ∈ G`.
pub fn check_name<C: Ord + Clone>(
    x: &HFSet,
    top: &C,
    rank_bound: u32,
) -> Result<PName<C>, KernelError> {
    if x.rank() > rank_bound {
        return Err(KernelError::RankExceeded(format!(
            "set of rank {} exceeds the name rank bound {rank_bound}",
            x.rank()
        )));
    }
    Ok(check_name_unchecked(x, top))
}

fn check_name_unchecked<C: Ord + Clone>(x: &HFSet, top: &C) -> PName<C> {
    PName::from_pairs(x.iter().map(|y| (check_name_unchecked(y, top), top.clone())))
}

/// A canonical hereditarily finite code for a condition of a finite poset:
/// the von Neumann ordinal of its position in sorted label order. Injective,
/// and stable across runs.
pub fn condition_code(poset: &FinitePoset, p: &str) -> HFSet {
    let mut labels = poset.labels().to_vec();
    labels.sort();
    let ix = labels.iter().position(|l| l == p).expect("condition not in poset");
    HFSet::ordinal(ix as u32)
}

/// The canonical name `Γ = {(p̌, p) : p in the universe}`, where `p̌` checks
/// the condition's hereditarily finite code; `K_G(Γ) = {code(p) : p ∈ G}`.
pub fn canonical_gamma(poset: &FinitePoset, rank_bound: u32) -> Result<PName<String>, KernelError> {
    let universe = poset
        .universe()
        .ok_or_else(|| KernelError::NotFinite("Γ needs a finite universe".into()))?;
    let mut pairs = Vec::new();
    for p in universe {
        let code = condition_code(poset, &p);
        pairs.push((check_name(&code, &p, rank_bound)?, p));
    }
    Ok(PName::from_pairs(pairs))
}

impl<C: Ord + fmt::Display> fmt::Display for PName<C> {
    /// The bracket literal syntax: `{(child,cond),...}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (child, cond)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({child},{cond})")?;
        }
        write!(f, "}}")
    }
}

impl<C: Ord + fmt::Display> fmt::Debug for PName<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Automorphisms of finite posets
// ---------------------------------------------------------------------------

/// An automorphism of a finite poset: a bijection on conditions preserving
/// the order in both directions (hence fixing top).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetAutomorphism {
    map: BTreeMap<String, String>,
}

impl PosetAutomorphism {
    /// Validates that `map` is an order-preserving-and-reflecting bijection.
    pub fn new(poset: &FinitePoset, map: BTreeMap<String, String>) -> Result<Self, KernelError> {
        let labels: BTreeSet<&String> = poset.labels().iter().collect();
        let domain: BTreeSet<&String> = map.keys().collect();
        let image: BTreeSet<&String> = map.values().collect();
        if domain != labels || image != labels {
            return Err(KernelError::ConfigParse(
                "automorphism is not a bijection on the poset's elements".into(),
            ));
        }
        for p in poset.labels() {
            for q in poset.labels() {
                let (pi_p, pi_q) = (&map[p], &map[q]);
                if poset.leq(p, q) != poset.leq(pi_p, pi_q) {
                    return Err(KernelError::ConfigParse(format!(
                        "map does not preserve the order at ({p},{q})"
                    )));
                }
            }
        }
        let auto = PosetAutomorphism { map };
        debug_assert_eq!(auto.apply_cond(&poset.top()), poset.top());
        Ok(auto)
    }

    /// The identity automorphism.
    pub fn identity(poset: &FinitePoset) -> Self {
        PosetAutomorphism {
            map: poset.labels().iter().map(|l| (l.clone(), l.clone())).collect(),
        }
    }

    /// Enumerates all automorphisms of a small poset by brute force over
    /// label permutations.
    pub fn enumerate(poset: &FinitePoset) -> Vec<PosetAutomorphism> {
        let labels = poset.labels().to_vec();
        let n = labels.len();
        assert!(n <= 8, "automorphism enumeration is intended for small posets");
        let mut out = Vec::new();
        permutations(n, &mut (0..n).collect::<Vec<_>>(), 0, &mut |perm| {
            let map: BTreeMap<String, String> =
                (0..n).map(|i| (labels[i].clone(), labels[perm[i]].clone())).collect();
            if let Ok(auto) = PosetAutomorphism::new(poset, map) {
                out.push(auto);
            }
        });
        out
    }

    pub fn apply_cond(&self, p: &str) -> String {
        self.map[p].clone()
    }

    /// Pointwise recursive application to the conditions inside a name; the
    /// name's rank is preserved.
    pub fn apply_name(&self, a: &PName<String>) -> PName<String> {
        a.map_conditions(&|c| self.apply_cond(c))
    }
}

fn permutations(n: usize, scratch: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == n {
        visit(scratch);
        return;
    }
    for i in k..n {
        scratch.swap(k, i);
        permutations(n, scratch, k + 1, visit);
        scratch.swap(k, i);
    }
}
