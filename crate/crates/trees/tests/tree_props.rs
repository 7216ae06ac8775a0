//! Structural laws on randomized trees: Sacks ordering and exact
//! compatibility against a branch-counting reference, freezing-order
//! monotonicity, starred levels as antichains, pruning as a projection,
//! and translation algebra.

use std::collections::BTreeSet;

use forcing_core::{mix64, ForcingNotion};
use forcing_trees::{translate, tree_code, NambaTree, PerfectTree, SacksNotion};
use proptest::prelude::*;

/// Thins a full binary tree by deleting random cones whose removal keeps
/// every remaining maximal node at full depth.
fn random_perfect(depth: usize, seed: u64) -> PerfectTree {
    let mut tree = PerfectTree::full(depth);
    let mut s = seed;
    for _ in 0..2 * depth {
        s = mix64(s);
        let deletable: Vec<String> = tree
            .nodes()
            .iter()
            .filter(|n| {
                !n.is_empty() && {
                    let (parent, last) = n.split_at(n.len() - 1);
                    let sibling = format!("{parent}{}", if last == "0" { '1' } else { '0' });
                    tree.contains(&sibling)
                }
            })
            .cloned()
            .collect();
        if deletable.is_empty() {
            break;
        }
        let cut = &deletable[(s % deletable.len() as u64) as usize];
        let kept: BTreeSet<String> =
            tree.nodes().iter().filter(|n| !n.starts_with(cut.as_str())).cloned().collect();
        tree = PerfectTree::new(depth, kept).expect("cone deletion keeps totality");
    }
    tree
}

/// Same thinning for wide trees: a cone may go as long as its parent
/// keeps another child.
fn random_namba(lambda: usize, depth: usize, seed: u64) -> NambaTree {
    let mut tree = NambaTree::full(lambda, depth).unwrap();
    let mut s = seed;
    for _ in 0..3 * depth {
        s = mix64(s);
        let deletable: Vec<String> = tree
            .nodes()
            .iter()
            .filter(|n| !n.is_empty() && tree.suc(&n[..n.len() - 1]).len() >= 2)
            .cloned()
            .collect();
        if deletable.is_empty() {
            break;
        }
        let cut = &deletable[(s % deletable.len() as u64) as usize];
        let kept: BTreeSet<String> =
            tree.nodes().iter().filter(|n| !n.starts_with(cut.as_str())).cloned().collect();
        tree = NambaTree::new(lambda, depth, kept).expect("cone deletion keeps totality");
    }
    tree
}

/// Reference compatibility: two truncations share a condition exactly
/// when some full-depth word has all its prefixes in both.
fn common_branches(s: &PerfectTree, t: &PerfectTree) -> Vec<String> {
    let depth = s.depth();
    (0u64..1 << depth)
        .map(|bits| {
            (0..depth).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect::<String>()
        })
        .filter(|w| {
            (0..=depth).all(|c| s.contains(&w[..c]) && t.contains(&w[..c]))
        })
        .collect()
}

proptest! {
    #[test]
    fn sacks_order_laws(seed in any::<u64>(), depth in 2usize..5) {
        let notion = SacksNotion { depth };
        let a = random_perfect(depth, seed);
        let b = random_perfect(depth, mix64(seed));
        prop_assert!(notion.leq(&a, &a));
        prop_assert!(notion.leq(&a, &notion.top()));
        if notion.leq(&a, &b) && notion.leq(&b, &a) {
            prop_assert_eq!(a.nodes(), b.nodes());
        }
        let shrunk = notion.extend_sampled(&a, seed);
        prop_assert!(notion.leq(&shrunk, &a));
        let further = notion.extend_sampled(&shrunk, mix64(seed ^ 1));
        prop_assert!(notion.leq(&further, &a), "extension must compose");
    }

    #[test]
    fn sacks_compatibility_is_branch_sharing(seed in any::<u64>(), depth in 2usize..5) {
        let notion = SacksNotion { depth };
        let a = random_perfect(depth, seed);
        let b = random_perfect(depth, mix64(seed ^ 0xABCD));
        let shared = common_branches(&a, &b);
        match notion.decide_compat(&a, &b).expect("compatibility is decided exactly") {
            Some(meet) => {
                prop_assert!(!shared.is_empty(), "witness without a common branch");
                prop_assert!(notion.leq(&meet, &a) && notion.leq(&meet, &b));
                // the meet is the largest common shrink: every shared
                // branch survives in it
                for w in &shared {
                    for c in 0..=depth {
                        prop_assert!(meet.contains(&w[..c]));
                    }
                }
            }
            None => prop_assert!(shared.is_empty(), "missed branches {:?}", shared),
        }
    }

    #[test]
    fn freezing_order_is_monotone_and_composes(seed in any::<u64>(), depth in 2usize..5) {
        let s = random_perfect(depth, seed);
        let t = random_perfect(depth, mix64(seed ^ 7));
        for k in 0..depth {
            if s.leq_k(&t, k + 1) {
                prop_assert!(s.leq_k(&t, k), "freezing at {} implies freezing at {}", k + 1, k);
            }
        }
        // derive a genuine chain u ⊆ mid ⊆ s by deleting single leaves
        let thin = |start: &PerfectTree, salt: u64| {
            let mut x = start.clone();
            let mut z = mix64(seed ^ salt);
            for _ in 0..2 {
                z = mix64(z);
                let deletable: Vec<String> = x
                    .nodes()
                    .iter()
                    .filter(|n| n.len() == depth && {
                        let (parent, last) = n.split_at(n.len() - 1);
                        let sibling =
                            format!("{parent}{}", if last == "0" { '1' } else { '0' });
                        x.contains(&sibling)
                    })
                    .cloned()
                    .collect();
                if deletable.is_empty() {
                    break;
                }
                let cut = deletable[(z % deletable.len() as u64) as usize].clone();
                let kept: BTreeSet<String> =
                    x.nodes().iter().filter(|n| **n != cut).cloned().collect();
                x = PerfectTree::new(depth, kept).unwrap();
            }
            x
        };
        let mid = thin(&s, 99);
        let u = thin(&mid, 1234);
        for k in 0..=depth {
            if mid.leq_k(&s, k) {
                prop_assert!(mid.leq_k(&s, k.saturating_sub(1)));
            }
            if u.leq_k(&mid, k) && mid.leq_k(&s, k) {
                prop_assert!(u.leq_k(&s, k), "freezing must compose at {}", k);
            }
        }
    }

    #[test]
    fn starred_levels_are_antichains(seed in any::<u64>(), lambda in 2usize..5) {
        let tree = random_namba(lambda, 3, seed).prune();
        let mut previous: Option<Vec<String>> = None;
        for n in 0..2 {
            match tree.lev_star(n) {
                Ok(level) => {
                    for (i, a) in level.iter().enumerate() {
                        prop_assert!(tree.contains(a));
                        for b in level.iter().skip(i + 1) {
                            prop_assert!(
                                !a.starts_with(b.as_str()) && !b.starts_with(a.as_str()),
                                "starred level contains comparable nodes {} and {}", a, b
                            );
                        }
                    }
                    if let Some(prev) = &previous {
                        for w in &level {
                            let above: Vec<&String> =
                                prev.iter().filter(|v| w.starts_with(v.as_str())).collect();
                            prop_assert_eq!(above.len(), 1,
                                "{} must extend exactly one earlier starred node", w);
                        }
                    }
                    previous = Some(level);
                }
                Err(e) => {
                    prop_assert_eq!(e.code(), "NO_SPLIT_ABOVE");
                    break;
                }
            }
        }
    }

    #[test]
    fn pruning_is_a_dichotomy_projection(seed in any::<u64>(), lambda in 2usize..5) {
        let tree = random_namba(lambda, 3, seed);
        let pruned = tree.prune();
        prop_assert!(pruned.nodes().is_subset(tree.nodes()));
        for s in pruned.nodes() {
            if s.len() < pruned.depth() {
                let deg = pruned.suc(s).len();
                prop_assert!(deg == 1 || deg == lambda,
                    "node {} keeps {} successors", s, deg);
            }
        }
        let twice = pruned.prune();
        prop_assert_eq!(twice.nodes(), pruned.nodes());
    }

    #[test]
    fn translations_form_an_involution(word_bits in 0u64..64, flips in 0u64..64) {
        let word: String =
            (0..6).map(|i| if word_bits >> i & 1 == 1 { '1' } else { '0' }).collect();
        let u: BTreeSet<usize> = (0..6).filter(|i| flips >> i & 1 == 1).collect();
        let once = translate(&u, &word);
        prop_assert_eq!(once.len(), word.len());
        prop_assert_eq!(translate(&u, &once), word.clone());
        // flipped exactly on u
        for (i, (a, b)) in word.chars().zip(once.chars()).enumerate() {
            prop_assert_eq!(a != b, u.contains(&i));
        }
    }

    #[test]
    fn tree_codes_respect_unions(seed in any::<u64>()) {
        let depth = 4;
        let a = random_perfect(depth, seed);
        let b = random_perfect(depth, mix64(seed ^ 3));
        let fa: BTreeSet<String> = a.level(depth).into_iter().collect();
        let fb: BTreeSet<String> = b.level(depth).into_iter().collect();
        let joint: BTreeSet<String> = fa.union(&fb).cloned().collect();
        let mut merged = tree_code(&fa, depth);
        merged.extend(tree_code(&fb, depth));
        prop_assert_eq!(tree_code(&joint, depth), merged);
        // a truncation is exactly the tree of its own leaf-set
        let code = tree_code(&fa, depth);
        prop_assert_eq!(&code, a.nodes());
    }
}
