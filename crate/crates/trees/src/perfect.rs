//! Perfect binary trees as finite-depth truncations, the fusion argument,
//! and the forcing notion that adds a branch by shrinking trees.
//!
//! A truncation stores every node up to a fixed depth; each leaf carries an
//! implicit promise that the branch keeps splitting beyond the cut. All
//! splitting claims are therefore depth-qualified: operations state how far
//! down they actually verified them.

use std::collections::BTreeSet;
use std::fmt;

use forcing_core::{DenseSet, Failure, FilterCertificate, ForcingNotion, mix64};

use crate::error::TreeError;

/// Depth-N truncation of a downward-closed subtree of the binary tree,
/// with every maximal node at full depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PerfectTree {
    depth: usize,
    nodes: BTreeSet<String>,
}

impl PerfectTree {
    /// Validates downward closure, binary labels, and that every branch
    /// reaches the truncation depth.
    pub fn new(depth: usize, nodes: BTreeSet<String>) -> Result<Self, TreeError> {
        if !nodes.contains("") {
            return Err(TreeError::Config("a tree needs its root".into()));
        }
        for node in &nodes {
            if node.len() > depth {
                return Err(TreeError::Config(format!(
                    "node '{node}' is deeper than the truncation depth {depth}"
                )));
            }
            if !node.chars().all(|c| c == '0' || c == '1') {
                return Err(TreeError::Config(format!("node '{node}' is not a binary word")));
            }
            if !node.is_empty() && !nodes.contains(&node[..node.len() - 1]) {
                return Err(TreeError::Config(format!(
                    "not downward closed: '{node}' present without its parent"
                )));
            }
            if node.len() < depth
                && !nodes.contains(&format!("{node}0"))
                && !nodes.contains(&format!("{node}1"))
            {
                return Err(TreeError::Config(format!(
                    "branch dies early at '{node}' (every maximal node must sit at depth {depth})"
                )));
            }
        }
        Ok(PerfectTree { depth, nodes })
    }

    /// The full binary tree to the given depth.
    pub fn full(depth: usize) -> Self {
        let mut nodes = BTreeSet::new();
        let mut frontier = vec![String::new()];
        nodes.insert(String::new());
        for _ in 0..depth {
            let mut next = Vec::new();
            for s in frontier {
                for b in ['0', '1'] {
                    let child = format!("{s}{b}");
                    nodes.insert(child.clone());
                    next.push(child);
                }
            }
            frontier = next;
        }
        PerfectTree { depth, nodes }
    }

    /// Parses the leaf-per-line text format; downward closure is implied.
    pub fn parse(depth: usize, text: &str) -> Result<Self, TreeError> {
        let mut nodes = BTreeSet::new();
        nodes.insert(String::new());
        for line in text.lines() {
            let leaf = line.trim();
            if leaf.is_empty() {
                continue;
            }
            if leaf.len() != depth {
                return Err(TreeError::Config(format!(
                    "leaf '{leaf}' has length {} but the depth is {depth}",
                    leaf.len()
                )));
            }
            for cut in 1..=leaf.len() {
                nodes.insert(leaf[..cut].to_string());
            }
        }
        PerfectTree::new(depth, nodes)
    }

    /// Sorted maximal nodes, one per line — the inverse of `parse`.
    pub fn to_text(&self) -> String {
        self.level(self.depth).join("\n")
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn contains(&self, node: &str) -> bool {
        self.nodes.contains(node)
    }

    /// All nodes at level n (sorted).
    pub fn level(&self, n: usize) -> Vec<String> {
        self.nodes.iter().filter(|s| s.len() == n).cloned().collect()
    }

    fn children(&self, node: &str) -> Vec<String> {
        ['0', '1']
            .into_iter()
            .map(|b| format!("{node}{b}"))
            .filter(|c| self.nodes.contains(c))
            .collect()
    }

    /// The last node on the unique initial path: every proper ancestor of
    /// the stem has exactly one immediate successor.
    pub fn stem(&self) -> String {
        let mut s = String::new();
        loop {
            let ch = self.children(&s);
            if ch.len() == 1 {
                s = ch.into_iter().next().unwrap();
            } else {
                return s;
            }
        }
    }

    /// The subtree of nodes comparable with t.
    pub fn restrict(&self, t: &str) -> Result<Self, TreeError> {
        if !self.nodes.contains(t) {
            return Err(TreeError::NodeNotInTree(t.to_string()));
        }
        let nodes = self
            .nodes
            .iter()
            .filter(|u| u.starts_with(t) || t.starts_with(u.as_str()))
            .cloned()
            .collect();
        PerfectTree::new(self.depth, nodes)
    }

    /// self ≤_k other: subset agreeing with other strictly below level k.
    pub fn leq_k(&self, other: &Self, k: usize) -> bool {
        self.depth == other.depth
            && self.nodes.is_subset(&other.nodes)
            && other.nodes.iter().filter(|s| s.len() < k).all(|s| self.nodes.contains(s))
    }

    /// Does some descendant of `node` (the node itself included) have two
    /// immediate successors inside the truncation?
    pub fn splits_above(&self, node: &str) -> bool {
        self.nodes
            .iter()
            .any(|v| v.starts_with(node) && self.children(v).len() == 2)
    }

    /// The largest k ≤ depth such that every node of length < k has a
    /// splitting descendant inside the truncation — how far down
    /// perfectness has actually been checked rather than promised.
    pub fn verified_split_depth(&self) -> usize {
        let mut k = 0;
        while k < self.depth
            && self.nodes.iter().filter(|s| s.len() == k).all(|s| self.splits_above(s))
        {
            k += 1;
        }
        k
    }
}

impl fmt::Display for PerfectTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "depth {}: {}", self.depth, self.level(self.depth).join(","))
    }
}

/// Intersects a freezing sequence of trees after checking the fusion
/// contract: trees[n+1] ≤_{ks[n]} trees[n], and every node of trees[n] at
/// level ks[n] gains two incomparable extensions inside trees[n+1] below
/// level ks[n+1] (below the truncation depth for the final stage). The ks
/// must be strictly increasing and one shorter than the sequence.
///
/// The result equals the final tree as a set, but the point is what is
/// verified about it: it is ≤_{ks[n]} every input at its stage, and every
/// node of length ≤ max(ks) has a splitting descendant inside the
/// truncation — perfectness is checked, not promised, down to max(ks).
pub fn fuse(trees: &[PerfectTree], ks: &[usize]) -> Result<PerfectTree, TreeError> {
    if trees.len() < 2 || ks.len() + 1 != trees.len() {
        return Err(TreeError::Config(format!(
            "need n+1 trees and n freeze levels, got {} and {}",
            trees.len(),
            ks.len()
        )));
    }
    if !ks.windows(2).all(|w| w[0] < w[1]) {
        return Err(TreeError::Config("freeze levels must be strictly increasing".into()));
    }
    let depth = trees[0].depth;
    if trees.iter().any(|t| t.depth != depth) {
        return Err(TreeError::Config("all trees must share one truncation depth".into()));
    }
    for (n, k) in ks.iter().enumerate() {
        if !trees[n + 1].leq_k(&trees[n], *k) {
            let node = trees[n]
                .nodes
                .iter()
                .find(|s| s.len() < *k && !trees[n + 1].nodes.contains(*s))
                .cloned()
                .unwrap_or_default();
            return Err(TreeError::FusionPrecondition {
                stage: n,
                node,
                detail: format!("stage {} tree is not a ≤_{} extension", n + 1, k),
            });
        }
        // splitting promise: each level-k node of trees[n] picks up two
        // incomparable extensions in trees[n+1] before the next freeze
        let horizon = ks.get(n + 1).copied().unwrap_or(depth + 1);
        for t in trees[n].level(*k) {
            let split_found = trees[n + 1].nodes.iter().any(|v| {
                v.starts_with(&t)
                    && v.len() + 1 < horizon
                    && trees[n + 1].children(v).len() == 2
            });
            if !split_found {
                return Err(TreeError::FusionPrecondition {
                    stage: n,
                    node: t.clone(),
                    detail: format!(
                        "no pair of incomparable extensions below level {horizon}"
                    ),
                });
            }
        }
    }
    let mut meet = trees[0].nodes.clone();
    for t in &trees[1..] {
        meet = meet.intersection(&t.nodes).cloned().collect();
    }
    let out = PerfectTree::new(depth, meet)?;
    for (n, k) in ks.iter().enumerate() {
        assert!(out.leq_k(&trees[n], *k), "fusion output must refine stage {n} at level {k}");
    }
    let max_k = *ks.last().unwrap();
    for u in out.nodes.iter().filter(|s| s.len() <= max_k) {
        assert!(out.splits_above(u), "fusion output must split above '{u}'");
    }
    Ok(out)
}

/// Perfect trees of one truncation depth, ordered by inclusion; shrinking
/// the tree pins down an ever longer branch.
pub struct SacksNotion {
    pub depth: usize,
}

impl ForcingNotion for SacksNotion {
    type Cond = PerfectTree;

    fn top(&self) -> PerfectTree {
        PerfectTree::full(self.depth)
    }

    fn leq(&self, q: &PerfectTree, p: &PerfectTree) -> bool {
        q.depth == p.depth && q.nodes.is_subset(&p.nodes)
    }

    fn encode(&self, p: &PerfectTree) -> String {
        p.level(p.depth).join(",")
    }

    fn extend_sampled(&self, p: &PerfectTree, seed: u64) -> PerfectTree {
        let stem = p.stem();
        let ch = p.children(&stem);
        if ch.len() < 2 {
            return p.clone(); // single branch: nothing left to choose
        }
        let pick = &ch[(mix64(seed) % 2) as usize];
        p.restrict(pick).expect("child of the stem is in the tree")
    }

    /// Exact: the intersection pruned of dead branches is the largest
    /// common shrink; two trees are compatible iff it is nonempty.
    fn decide_compat(&self, p: &PerfectTree, q: &PerfectTree) -> Option<Option<PerfectTree>> {
        let mut meet: BTreeSet<String> =
            p.nodes.intersection(&q.nodes).cloned().collect();
        loop {
            let dead: Vec<String> = meet
                .iter()
                .filter(|s| {
                    s.len() < self.depth
                        && !meet.contains(&format!("{s}0"))
                        && !meet.contains(&format!("{s}1"))
                })
                .cloned()
                .collect();
            if dead.is_empty() {
                break;
            }
            for s in dead {
                meet.remove(&s);
            }
        }
        if meet.contains("") {
            Some(Some(PerfectTree::new(self.depth, meet).expect("pruned meet is a tree")))
        } else {
            Some(None)
        }
    }
}

/// Dense set of trees whose stem has length at least n: met by walking to
/// a splitting node and committing to its smaller child, repeatedly.
pub struct LongStem {
    pub n: usize,
}

impl DenseSet<SacksNotion> for LongStem {
    fn id(&self) -> String {
        format!("stem>={}", self.n)
    }

    fn member(&self, _: &SacksNotion, t: &PerfectTree) -> bool {
        t.stem().len() >= self.n
    }

    fn refine(&self, notion: &SacksNotion, t: &PerfectTree) -> Result<PerfectTree, Failure> {
        if self.n > notion.depth {
            return Err(TreeError::Config(format!(
                "stem length {} is unreachable at depth {}",
                self.n, notion.depth
            ))
            .into());
        }
        let mut cur = t.clone();
        while cur.stem().len() < self.n {
            let stem = cur.stem();
            let ch = cur.children(&stem);
            // stems shorter than the depth end at a splitting node
            cur = cur.restrict(&ch[0]).map_err(Failure::from)?;
        }
        Ok(cur)
    }
}

/// Dense set of trees whose full-depth leaves avoid a fixed branch.
pub struct DodgeBranch {
    pub beta: String,
}

impl DenseSet<SacksNotion> for DodgeBranch {
    fn id(&self) -> String {
        format!("dodge:{}", self.beta)
    }

    fn member(&self, notion: &SacksNotion, t: &PerfectTree) -> bool {
        !t.contains(&self.beta[..notion.depth.min(self.beta.len())])
    }

    fn refine(&self, notion: &SacksNotion, t: &PerfectTree) -> Result<PerfectTree, Failure> {
        let target = &self.beta[..notion.depth.min(self.beta.len())];
        if !t.contains(target) {
            return Ok(t.clone());
        }
        // diverge from the branch at its shallowest splitting ancestor,
        // keeping as much of the tree as possible
        for cut in 0..target.len() {
            let prefix = &target[..cut];
            let ch = t.children(prefix);
            if ch.len() == 2 {
                let away = ch
                    .into_iter()
                    .find(|c| !target.starts_with(c.as_str()))
                    .expect("one of two children leaves the branch");
                return t.restrict(&away).map_err(Failure::from);
            }
        }
        Err(TreeError::NoSplitAbove(format!(
            "every splitting node of the tree lies on '{target}'"
        ))
        .into())
    }
}

/// The union of the stems along a filter certificate — the initial segment
/// of the branch the run has committed to. Stems of compatible trees are
/// comparable, so the union is the longest one; anything else is reported
/// as a refiner violation upstream.
pub fn sacks_branch(cert: &FilterCertificate<PerfectTree>) -> String {
    let mut best = String::new();
    for t in &cert.chain {
        let s = t.stem();
        if s.len() > best.len() {
            assert!(s.starts_with(&best), "stems along a chain must be comparable");
            best = s;
        }
    }
    best
}
