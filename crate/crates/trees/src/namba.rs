//! Trees over a finite surrogate alphabet whose branching dichotomy
//! (one successor or all of them) drives the splitting-level recursion,
//! plus the finite-depth open game that decides a digit word.
//!
//! The alphabet stands in for an uncountable branching degree; the game's
//! pruning sets are capped strictly below the alphabet size to preserve
//! the smaller-than-branching combinatorics of the original argument.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TreeError;

const MAX_ALPHABET: usize = 8;

/// Depth-bounded tree over the alphabet {0, …, λ−1}, downward closed,
/// every maximal node at the truncation depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NambaTree {
    lambda: usize,
    depth: usize,
    nodes: BTreeSet<String>,
}

impl NambaTree {
    pub fn new(lambda: usize, depth: usize, nodes: BTreeSet<String>) -> Result<Self, TreeError> {
        if lambda < 2 || lambda > MAX_ALPHABET {
            return Err(TreeError::ScaleExceeded(format!(
                "alphabet size {lambda} outside 2..={MAX_ALPHABET}"
            )));
        }
        if !nodes.contains("") {
            return Err(TreeError::Config("a tree needs its root".into()));
        }
        for node in &nodes {
            if node.len() > depth {
                return Err(TreeError::Config(format!(
                    "node '{node}' is deeper than the truncation depth {depth}"
                )));
            }
            if !node.chars().all(|c| c.to_digit(10).map(|d| (d as usize) < lambda) == Some(true)) {
                return Err(TreeError::Config(format!(
                    "node '{node}' uses digits outside the {lambda}-letter alphabet"
                )));
            }
            if !node.is_empty() && !nodes.contains(&node[..node.len() - 1]) {
                return Err(TreeError::Config(format!(
                    "not downward closed: '{node}' present without its parent"
                )));
            }
            if node.len() < depth && self_children(&nodes, lambda, node).is_empty() {
                return Err(TreeError::Config(format!(
                    "branch dies early at '{node}' (maximal nodes must sit at depth {depth})"
                )));
            }
        }
        Ok(NambaTree { lambda, depth, nodes })
    }

    /// Full λ-branching tree of the given depth.
    pub fn full(lambda: usize, depth: usize) -> Result<Self, TreeError> {
        let mut nodes = BTreeSet::new();
        let mut frontier = vec![String::new()];
        nodes.insert(String::new());
        for _ in 0..depth {
            let mut next = Vec::new();
            for s in frontier {
                for d in 0..lambda {
                    let child = format!("{s}{d}");
                    nodes.insert(child.clone());
                    next.push(child);
                }
            }
            frontier = next;
        }
        NambaTree::new(lambda, depth, nodes)
    }

    /// Parses the leaf-per-line format (downward closure implied).
    pub fn parse(lambda: usize, depth: usize, text: &str) -> Result<Self, TreeError> {
        let mut nodes = BTreeSet::new();
        nodes.insert(String::new());
        for line in text.lines() {
            let leaf = line.trim();
            if leaf.is_empty() {
                continue;
            }
            for cut in 1..=leaf.len() {
                nodes.insert(leaf[..cut].to_string());
            }
        }
        NambaTree::new(lambda, depth, nodes)
    }

    pub fn to_text(&self) -> String {
        self.nodes
            .iter()
            .filter(|s| s.len() == self.depth)
            .cloned()
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn lambda(&self) -> usize {
        self.lambda
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

    /// Immediate successors of a node.
    pub fn suc(&self, node: &str) -> Vec<String> {
        self_children(&self.nodes, self.lambda, node)
    }

    /// The first node with more than one successor (or the deepest node of
    /// a single branch): every node of the tree extends or is extended by it.
    pub fn stem(&self) -> String {
        let mut s = String::new();
        loop {
            let ch = self.suc(&s);
            if ch.len() == 1 {
                s = ch.into_iter().next().unwrap();
            } else {
                return s;
            }
        }
    }

    /// The subtree comparable with t.
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
        NambaTree::new(self.lambda, self.depth, nodes)
    }

    /// Enforces the branching dichotomy |Suc(s)| ∈ {1, λ} by deleting
    /// defective branches: wherever a node has strictly between 1 and λ
    /// successors, exactly one survives — the child whose subtree reaches a
    /// full λ-split soonest (ties to the smallest label; children with no
    /// full split below them rank last).
    pub fn prune(&self) -> NambaTree {
        let mut kept = BTreeSet::new();
        let mut stack = vec![String::new()];
        kept.insert(String::new());
        while let Some(s) = stack.pop() {
            let ch = self.suc(&s);
            let keep: Vec<String> = if ch.len() == self.lambda || ch.len() <= 1 {
                ch
            } else {
                let best = ch
                    .into_iter()
                    .min_by_key(|c| (self.full_split_distance(c), c.clone()))
                    .unwrap();
                vec![best]
            };
            for c in keep {
                kept.insert(c.clone());
                stack.push(c);
            }
        }
        NambaTree::new(self.lambda, self.depth, kept)
            .expect("pruning keeps a valid total truncation")
    }

    /// Levels until some descendant of `node` (itself included) branches
    /// fully; usize::MAX when none does within the truncation.
    fn full_split_distance(&self, node: &str) -> usize {
        let mut frontier = vec![node.to_string()];
        let mut dist = 0;
        while !frontier.is_empty() {
            if frontier.iter().any(|s| self.suc(s).len() == self.lambda) {
                return dist;
            }
            frontier = frontier.iter().flat_map(|s| self.suc(s)).collect();
            dist += 1;
        }
        usize::MAX
    }

    /// Successor set taken at the minimal splitting descendant: walk down
    /// single-successor links from `node`, then return the successors of
    /// the first node that branches.
    pub fn suc_star(&self, node: &str) -> Result<Vec<String>, TreeError> {
        if !self.nodes.contains(node) {
            return Err(TreeError::NodeNotInTree(node.to_string()));
        }
        let mut s = node.to_string();
        loop {
            let ch = self.suc(&s);
            match ch.len() {
                0 => {
                    return Err(TreeError::NoSplitAbove(format!(
                        "no splitting descendant of '{node}' inside the depth-{} truncation",
                        self.depth
                    )))
                }
                1 => s = ch.into_iter().next().unwrap(),
                _ => return Ok(ch),
            }
        }
    }

    /// The n-th splitting level: Lev*₀ = Suc(stem), and each next level
    /// collects the starred successors of the previous one.
    pub fn lev_star(&self, n: usize) -> Result<Vec<String>, TreeError> {
        let mut level = self.suc_star(&self.stem())?;
        for _ in 0..n {
            let mut next = Vec::new();
            for s in &level {
                next.extend(self.suc_star(s)?);
            }
            next.sort();
            level = next;
        }
        Ok(level)
    }
}

fn self_children(nodes: &BTreeSet<String>, lambda: usize, node: &str) -> Vec<String> {
    (0..lambda)
        .map(|d| format!("{node}{d}"))
        .filter(|c| nodes.contains(c))
        .collect()
}

impl fmt::Display for NambaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ={} depth {}: {}", self.lambda, self.depth, self.to_text().replace('\n', ","))
    }
}

/// Caps for the open game: number of stages played, and how many nodes the
/// pruning player may remove per stage (strictly below the branching).
#[derive(Debug, Clone, Copy)]
pub struct GameCaps {
    pub stages: usize,
    pub removal_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameWinner {
    /// The pruning player: wins when some chosen node breaks the word.
    PlayerI,
    /// The choosing player: wins when every chosen node decides its digit
    /// as the target word demands.
    PlayerII,
}

#[derive(Debug)]
pub struct GameSolution {
    pub winner: GameWinner,
    /// Per decision point (stage, node the pool hangs under; the stem at
    /// stage 0): the solver's move preference. For the chooser this is the
    /// ordered list of winning picks (play the first one not pruned away);
    /// for the pruner it is the removal set.
    pub plan: BTreeMap<(usize, String), Vec<String>>,
    /// How many complete adversary lines the winning strategy was played
    /// against during validation.
    pub lines_checked: usize,
}

/// Decides the finite open game on a pruned tree: at stage n the pruner
/// removes up to `removal_cap` nodes from the current starred successor
/// pool, the chooser picks a surviving node s_n, and the chooser wins iff
/// `table[s_n] = x[n]` at every stage. Backward induction gives the winner;
/// the winning strategy is then validated exhaustively against every
/// opposing line at the caps.
pub fn solve_open_game(
    tree: &NambaTree,
    table: &BTreeMap<String, u64>,
    x: &[u64],
    caps: GameCaps,
) -> Result<GameSolution, TreeError> {
    if caps.stages > 4 || tree.depth() > 6 {
        return Err(TreeError::ScaleExceeded(format!(
            "game caps (stages {}, depth {}) beyond exhaustive range",
            caps.stages,
            tree.depth()
        )));
    }
    if caps.removal_cap >= tree.lambda() {
        return Err(TreeError::ScaleExceeded(format!(
            "removal cap {} must stay strictly below the branching {}",
            caps.removal_cap,
            tree.lambda()
        )));
    }
    if x.len() != caps.stages {
        return Err(TreeError::Config(format!(
            "target word length {} must equal the stage count {}",
            x.len(),
            caps.stages
        )));
    }

    // backward induction: the chooser wins from (pool, n) iff more good
    // nodes survive than the pruner can remove
    struct Solver<'a> {
        tree: &'a NambaTree,
        table: &'a BTreeMap<String, u64>,
        x: &'a [u64],
        cap: usize,
        plan: BTreeMap<(usize, String), Vec<String>>,
    }
    impl Solver<'_> {
        fn good(&mut self, pool: &[String], n: usize) -> Result<Vec<String>, TreeError> {
            let mut out = Vec::new();
            for s in pool {
                let digit = *self.table.get(s).ok_or_else(|| {
                    TreeError::Config(format!("decision table has no entry for '{s}'"))
                })?;
                if digit == self.x[n] && self.chooser_wins_from(s, n + 1)? {
                    out.push(s.clone());
                }
            }
            Ok(out)
        }
        fn chooser_wins_from(&mut self, s: &str, n: usize) -> Result<bool, TreeError> {
            if n >= self.x.len() {
                return Ok(true);
            }
            let pool = self.tree.suc_star(s)?;
            let good = self.good(&pool, n)?;
            let verdict = good.len() > self.cap;
            self.plan.insert((n, s.to_string()), good);
            Ok(verdict)
        }
    }

    let stem = tree.stem();
    let mut solver =
        Solver { tree, table, x, cap: caps.removal_cap, plan: BTreeMap::new() };
    let chooser_wins = if caps.stages == 0 {
        true
    } else {
        let pool = tree.suc_star(&stem)?;
        let good = solver.good(&pool, 0)?;
        let v = good.len() > caps.removal_cap;
        solver.plan.insert((0, stem.clone()), good);
        v
    };
    let mut plan = solver.plan;

    // for the pruner, the plan is the removal set: the good nodes, up to
    // the cap (when it wins, every reachable good set fits under the cap)
    if !chooser_wins {
        for picks in plan.values_mut() {
            picks.truncate(caps.removal_cap);
        }
    }

    // exhaustive validation against all opposing lines
    fn subsets_up_to(pool: &[String], cap: usize) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new()];
        for s in pool {
            let mut extended = Vec::new();
            for base in &out {
                if base.len() < cap {
                    let mut bigger = base.clone();
                    bigger.push(s.clone());
                    extended.push(bigger);
                }
            }
            out.extend(extended);
        }
        out
    }

    let mut lines_checked = 0usize;
    if caps.stages > 0 {
        if chooser_wins {
            // every pruner line must leave the chooser a winning path
            fn play_chooser(
                tree: &NambaTree,
                plan: &BTreeMap<(usize, String), Vec<String>>,
                table: &BTreeMap<String, u64>,
                x: &[u64],
                cap: usize,
                parent: &str,
                n: usize,
                lines: &mut usize,
            ) -> Result<(), TreeError> {
                if n >= x.len() {
                    *lines += 1;
                    return Ok(());
                }
                let pool = tree.suc_star(parent)?;
                let prefs = &plan[&(n, parent.to_string())];
                for removal in subsets_up_to(&pool, cap) {
                    let pick = prefs.iter().find(|s| !removal.contains(s)).unwrap_or_else(
                        || panic!("chooser strategy ran out of picks at stage {n}"),
                    );
                    assert_eq!(table[pick], x[n], "chosen node must decide the digit");
                    play_chooser(tree, plan, table, x, cap, pick, n + 1, lines)?;
                }
                Ok(())
            }
            play_chooser(tree, &plan, table, x, caps.removal_cap, &stem, 0, &mut lines_checked)?;
        } else {
            // every chooser line against the pruner's removals must fail
            fn play_pruner(
                tree: &NambaTree,
                plan: &BTreeMap<(usize, String), Vec<String>>,
                table: &BTreeMap<String, u64>,
                x: &[u64],
                parent: &str,
                n: usize,
                lines: &mut usize,
            ) -> Result<(), TreeError> {
                if n >= x.len() {
                    panic!("a chooser line survived all {} stages against the pruner", x.len());
                }
                let pool = tree.suc_star(parent)?;
                let removal = &plan[&(n, parent.to_string())];
                for s in pool.iter().filter(|s| !removal.contains(s)) {
                    if table[s] != x[n] {
                        *lines += 1; // the word is already broken: pruner won
                    } else {
                        play_pruner(tree, plan, table, x, s, n + 1, lines)?;
                    }
                }
                Ok(())
            }
            play_pruner(tree, &plan, table, x, &stem, 0, &mut lines_checked)?;
        }
    }

    Ok(GameSolution {
        winner: if chooser_wins { GameWinner::PlayerII } else { GameWinner::PlayerI },
        plan,
        lines_checked,
    })
}
