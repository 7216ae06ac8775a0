//! Independent cross-checks: the sunflower extractor against a direct
//! subset scan, the open-game solver against a full minimax search, and
//! the level-product dichotomy against the counting argument that
//! predicts its outcome from the top level alone.

use std::collections::{BTreeMap, BTreeSet};

use forcing_trees::{
    delta_system, solve_open_game, GameCaps, GameWinner, HlSearcher, LevelWitness,
    NambaTree, PerfectTree,
};
use proptest::prelude::*;

// ---------------------------------------------------------------- sunflowers

/// Direct scan: does any size class contain `t` sets whose pairwise
/// intersections all agree? Recursive subset walk, no shared code with
/// the extractor.
fn some_class_has_sunflower(family: &[BTreeSet<u64>], t: usize) -> bool {
    let distinct: BTreeSet<&BTreeSet<u64>> = family.iter().collect();
    let mut by_size: BTreeMap<usize, Vec<&BTreeSet<u64>>> = BTreeMap::new();
    for x in distinct {
        by_size.entry(x.len()).or_default().push(x);
    }
    by_size.values().any(|class| pick_petals(class, t, 0, &mut Vec::new()))
}

fn pick_petals<'a>(
    class: &[&'a BTreeSet<u64>],
    t: usize,
    start: usize,
    chosen: &mut Vec<&'a BTreeSet<u64>>,
) -> bool {
    if chosen.len() == t {
        return pairwise_agree(chosen);
    }
    for i in start..class.len() {
        chosen.push(class[i]);
        if pick_petals(class, t, i + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn pairwise_agree(petals: &[&BTreeSet<u64>]) -> bool {
    let mut meets = petals.iter().enumerate().flat_map(|(i, a)| {
        petals[i + 1..]
            .iter()
            .map(move |b| a.intersection(b).copied().collect::<BTreeSet<u64>>())
    });
    match meets.next() {
        None => true,
        Some(first) => meets.all(|m| m == first),
    }
}

fn all_pairs(universe: std::ops::RangeInclusive<u64>) -> Vec<BTreeSet<u64>> {
    let elems: Vec<u64> = universe.collect();
    let mut out = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            out.push([a, b].into_iter().collect());
        }
    }
    out
}

proptest! {
    /// Nine distinct two-element sets sit above the guarantee 2!·2² = 8,
    /// so extraction must always produce three petals — and the result
    /// must be one of the sunflowers a direct scan can see.
    #[test]
    fn nine_pairs_always_yield_three_petals(
        family in proptest::sample::subsequence(all_pairs(1..=7), 9)
    ) {
        let (core, petals) = delta_system(&family, 3).expect("above the guarantee");
        prop_assert_eq!(petals.len(), 3);
        let refs: Vec<&BTreeSet<u64>> = petals.iter().collect();
        prop_assert!(pairwise_agree(&refs));
        for p in &petals {
            prop_assert!(family.contains(p), "petal {:?} invented", p);
            let meet: BTreeSet<u64> = p.intersection(&core).copied().collect();
            prop_assert_eq!(&meet, &core, "core must sit inside every petal");
        }
        let distinct: BTreeSet<&BTreeSet<u64>> = petals.iter().collect();
        prop_assert_eq!(distinct.len(), 3);
        prop_assert!(some_class_has_sunflower(&family, 3));
    }

    /// At these sizes every class is finished exhaustively, so success
    /// must coincide exactly with the direct scan.
    #[test]
    fn extraction_agrees_with_the_direct_scan(
        family in proptest::collection::vec(
            proptest::collection::btree_set(1u64..=8, 1..=3), 1..=10)
    ) {
        match delta_system(&family, 3) {
            Ok((_, petals)) => {
                prop_assert_eq!(petals.len(), 3);
                let refs: Vec<&BTreeSet<u64>> = petals.iter().collect();
                prop_assert!(pairwise_agree(&refs));
                prop_assert!(some_class_has_sunflower(&family, 3));
            }
            Err(e) => {
                prop_assert_eq!(e.code(), "FAMILY_TOO_SMALL");
                prop_assert!(!some_class_has_sunflower(&family, 3),
                    "extractor missed a sunflower: {}", e);
            }
        }
    }
}

// ------------------------------------------------------------- the open game

/// Full minimax reference: the chooser wins from `(pool, n)` when every
/// removal of at most `cap` nodes leaves some pick with the right table
/// digit from which it keeps winning.
fn chooser_survives(
    tree: &NambaTree,
    table: &BTreeMap<String, u64>,
    x: &[u64],
    cap: usize,
    pool: &[String],
    n: usize,
) -> bool {
    removals(pool, cap).into_iter().all(|removed| {
        pool.iter().filter(|s| !removed.contains(s)).any(|s| {
            table[s.as_str()] == x[n]
                && (n + 1 == x.len()
                    || tree.suc_star(s).is_ok_and(|next| {
                        chooser_survives(tree, table, x, cap, &next, n + 1)
                    }))
        })
    })
}

fn removals<'a>(pool: &'a [String], cap: usize) -> Vec<Vec<&'a String>> {
    let mut out: Vec<Vec<&String>> = vec![Vec::new()];
    for s in pool {
        let mut more = Vec::new();
        for base in &out {
            if base.len() < cap {
                let mut bigger = base.clone();
                bigger.push(s);
                more.push(bigger);
            }
        }
        out.extend(more);
    }
    out
}

fn game_oracle(
    tree: &NambaTree,
    table: &BTreeMap<String, u64>,
    x: &[u64],
    cap: usize,
) -> GameWinner {
    let pool = tree.suc_star(&tree.stem()).expect("full trees branch everywhere");
    if chooser_survives(tree, table, x, cap, &pool, 0) {
        GameWinner::PlayerII
    } else {
        GameWinner::PlayerI
    }
}

fn table_from(tree: &NambaTree, digits: &[u64]) -> BTreeMap<String, u64> {
    tree.nodes()
        .iter()
        .zip(digits.iter().cycle())
        .map(|(s, &d)| (s.clone(), d))
        .collect()
}

proptest! {
    #[test]
    fn solver_matches_minimax_on_ternary_trees(
        digits in proptest::collection::vec(0u64..3, 13),
        x in proptest::collection::vec(0u64..3, 2),
        cap in 0usize..3,
    ) {
        let tree = NambaTree::full(3, 2).unwrap();
        let table = table_from(&tree, &digits);
        let caps = GameCaps { stages: 2, removal_cap: cap };
        let solved = solve_open_game(&tree, &table, &x, caps).unwrap();
        prop_assert_eq!(solved.winner, game_oracle(&tree, &table, &x, cap));
    }

    #[test]
    fn solver_matches_minimax_on_deep_binary_trees(
        digits in proptest::collection::vec(0u64..2, 15),
        x in proptest::collection::vec(0u64..2, 3),
        cap in 0usize..2,
    ) {
        let tree = NambaTree::full(2, 3).unwrap();
        let table = table_from(&tree, &digits);
        let caps = GameCaps { stages: 3, removal_cap: cap };
        let solved = solve_open_game(&tree, &table, &x, caps).unwrap();
        prop_assert_eq!(solved.winner, game_oracle(&tree, &table, &x, cap));
    }
}

// ------------------------------------------------- the level-product dichotomy

/// Level `l` of `tree` restricted below an anchor, phrased as plain
/// comparability rather than the searcher's case split.
fn restricted_level(tree: &PerfectTree, anchor: Option<&str>, l: usize) -> Vec<String> {
    tree.level(l)
        .into_iter()
        .filter(|s| match anchor {
            None => true,
            Some(t) => t.starts_with(s.as_str()) || s.starts_with(t),
        })
        .collect()
}

fn tuples<'a>(sets: &'a [BTreeSet<String>]) -> Vec<Vec<&'a String>> {
    let mut out: Vec<Vec<&String>> = vec![Vec::new()];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|base| {
                set.iter().map(move |s| {
                    let mut next = base.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    out
}

/// Replays a horn's witnesses against the raw definition.
fn assert_witnessed(
    trees: &[PerfectTree],
    levels: &BTreeSet<usize>,
    anchor: Option<&[String]>,
    wits: &[LevelWitness],
    color: &mut dyn FnMut(usize, &[&str]) -> u8,
    target: u8,
) {
    if let Some(a) = anchor {
        assert_eq!(a.len(), trees.len());
        for (i, t) in a.iter().enumerate() {
            assert!(trees[i].contains(t), "anchor '{t}' is not in tree {i}");
        }
    }
    let max = *levels.iter().next_back().unwrap();
    let ns: Vec<usize> = wits.iter().map(|w| w.n).collect();
    assert_eq!(ns, (0..=max).collect::<Vec<_>>(), "one witness per n, in order");
    for w in wits {
        assert!(levels.contains(&w.m) && w.m >= w.n, "level m={} illegal for n={}", w.m, w.n);
        assert_eq!(w.sets.len(), trees.len());
        for (i, tree) in trees.iter().enumerate() {
            let anc = anchor.map(|a| a[i].as_str());
            let pool = restricted_level(tree, anc, w.m);
            assert!(!w.sets[i].is_empty());
            for s in &w.sets[i] {
                assert!(pool.contains(s), "witness node '{s}' outside the restricted level");
            }
            for t in restricted_level(tree, anc, w.n) {
                assert!(
                    w.sets[i].iter().any(|s| s.starts_with(t.as_str())),
                    "'{t}' has no extension in the witness set"
                );
            }
        }
        for tuple in tuples(&w.sets) {
            let borrowed: Vec<&str> = tuple.iter().map(|s| s.as_str()).collect();
            assert_eq!(color(w.m, &borrowed), target, "witness product not monochromatic");
        }
    }
}

/// Exhausts every coloring of an asymmetric pair of truncated trees.
/// The counting argument fixes both answers in advance: the 0-horn holds
/// exactly when the whole top product is 0, and the 1-horn exactly
/// otherwise. Witnesses are replayed against the definitions throughout.
#[test]
fn exhaustive_sweep_matches_the_counting_argument() {
    let t0 = PerfectTree::full(2);
    let t1 = PerfectTree::full(2).restrict("0").unwrap();
    let levels: BTreeSet<usize> = [1, 2].into_iter().collect();
    let searcher = HlSearcher::new(vec![t0.clone(), t1.clone()], &levels).unwrap();
    let cells = searcher.cells();
    assert_eq!(cells.len(), 2 * 1 + 4 * 2);
    let trees = [t0, t1];

    let top_cells: Vec<usize> =
        (0..cells.len()).filter(|&i| cells[i].0 == 2).collect();
    assert_eq!(top_cells.len(), 8);

    let mut zero_horn_hits = 0;
    for mask in 0u32..(1 << cells.len()) {
        let mut color = |m: usize, t: &[&str]| -> u8 {
            let at = cells
                .iter()
                .position(|(cm, ct)| *cm == m && ct.iter().map(String::as_str).eq(t.iter().copied()))
                .expect("coloring consulted off the declared domain");
            (mask >> at & 1) as u8
        };
        let report = searcher.check(&mut color);
        let top_all_zero = top_cells.iter().all(|&i| mask >> i & 1 == 0);
        assert_eq!(report.everywhere.is_some(), top_all_zero, "mask {mask:#b}");
        assert_eq!(report.somewhere.is_some(), !top_all_zero, "mask {mask:#b}");
        assert!(report.cells_colored <= cells.len());
        if let Some(wits) = &report.everywhere {
            zero_horn_hits += 1;
            assert_witnessed(&trees, &levels, None, wits, &mut color, 0);
        }
        if let Some(sw) = &report.somewhere {
            assert_witnessed(&trees, &levels, Some(&sw.anchor), &sw.dense, &mut color, 1);
        }
    }
    assert_eq!(zero_horn_hits, 1 << 2, "free lower levels: 2 cells");
}

fn hash_str(seed: u64, s: &str) -> u64 {
    s.bytes().fold(seed, |h, b| forcing_core::mix64(h ^ b as u64))
}

proptest! {
    /// Random colorings of a deeper pair: exactly one horn, definitional
    /// witnesses, and agreement with the top-product prediction.
    #[test]
    fn random_colorings_of_a_deep_pair(seed in any::<u64>()) {
        let trees = [PerfectTree::full(3), PerfectTree::full(3)];
        let levels: BTreeSet<usize> = [1, 2, 3].into_iter().collect();
        let searcher = HlSearcher::new(trees.to_vec(), &levels).unwrap();
        let mut color = move |m: usize, t: &[&str]| -> u8 {
            let h = t.iter().fold(
                forcing_core::mix64(seed ^ m as u64),
                |acc, s| hash_str(acc, s),
            );
            (h & 1) as u8
        };
        let report = searcher.check(&mut color);
        prop_assert!(report.everywhere.is_some() != report.somewhere.is_some());
        let top_all_zero = tuples(&[
            trees[0].level(3).into_iter().collect(),
            trees[1].level(3).into_iter().collect(),
        ])
        .into_iter()
        .all(|tuple| {
            let borrowed: Vec<&str> = tuple.iter().map(|s| s.as_str()).collect();
            color(3, &borrowed) == 0
        });
        prop_assert_eq!(report.everywhere.is_some(), top_all_zero);
        if let Some(wits) = &report.everywhere {
            assert_witnessed(&trees, &levels, None, wits, &mut color, 0);
        }
        if let Some(sw) = &report.somewhere {
            assert_witnessed(&trees, &levels, Some(&sw.anchor), &sw.dense, &mut color, 1);
        }
    }
}
