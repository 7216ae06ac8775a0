//! Tree-side subcommands: `fusion` (freezing sequences), `delta`
//! (sunflower extraction), `hl` (colored level-product dichotomy), and
//! `namba-game` (the open pruning game on a wide tree).

use crate::err::CliError;
use crate::parse::{parse_u64_list, parse_usize_list, read_arg};
use crate::report::{Json, Report};
use forcing_core::mix64;
use forcing_trees::{
    delta_system, fuse, solve_open_game, GameCaps, GameWinner, HlSearcher, NambaTree, PerfectTree,
};
use std::collections::{BTreeMap, BTreeSet};

/// Parses a tree list: trees separated by `;` (or blank lines in a file),
/// leaves separated by `,` (or line breaks).
fn parse_trees(flag: &str, raw: &str, depth: usize) -> Result<Vec<PerfectTree>, CliError> {
    let text = read_arg(flag, raw)?;
    let chunks: Vec<String> = if text.contains(';') {
        text.split(';').map(|c| c.replace(',', "\n")).collect()
    } else {
        text.split("\n\n").map(|c| c.replace(',', "\n")).collect()
    };
    let mut trees = Vec::new();
    for (i, chunk) in chunks.iter().enumerate() {
        if chunk.trim().is_empty() {
            continue;
        }
        let tree = if chunk.trim() == "full" {
            PerfectTree::full(depth)
        } else {
            PerfectTree::parse(depth, chunk)
                .map_err(|e| CliError::config(format!("{flag}: tree {}: {e}", i + 1)))?
        };
        trees.push(tree);
    }
    if trees.is_empty() {
        return Err(CliError::config(format!("{flag}: no trees listed")));
    }
    Ok(trees)
}

pub fn run_fusion(trees_arg: &str, ks_arg: &str, depth: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("fusion");
    rep.cfg("trees", Json::Str(trees_arg.into()));
    rep.cfg("ks", Json::Str(ks_arg.into()));
    rep.cfg("depth", Json::Int(depth as i128));
    let trees = parse_trees("--trees", trees_arg, depth)?;
    let ks = parse_usize_list("--ks", ks_arg)?;
    // shape errors are configuration problems; order violations between
    // well-formed trees are run outcomes
    if ks.len() + 1 != trees.len() {
        return Err(CliError::config(format!(
            "--ks: {} freeze levels need {} trees, got {}",
            ks.len(),
            ks.len() + 1,
            trees.len()
        )));
    }
    if !ks.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::config("--ks: freeze levels must be strictly increasing".into()));
    }
    match fuse(&trees, &ks) {
        Ok(fused) => {
            rep.pass("fusion-built", format!("{} stages fused at levels {ks:?}", trees.len()));
            let stagewise = ks.iter().enumerate().all(|(n, &k)| fused.leq_k(&trees[n], k));
            rep.verdict(
                "stagewise-order",
                stagewise,
                if stagewise {
                    "the fused tree refines every stage at its freeze level".into()
                } else {
                    "a freeze level was violated".into()
                },
            );
            let max_k = *ks.last().unwrap();
            let perfect = fused
                .nodes()
                .iter()
                .filter(|s| s.len() <= max_k)
                .all(|s| fused.splits_above(s));
            rep.verdict(
                "perfect-to-depth",
                perfect,
                format!("every node up to level {max_k} splits above itself"),
            );
            rep.witness(
                "fused",
                Json::Obj(vec![
                    ("leaves".into(), Json::Str(fused.to_text().replace('\n', ","))),
                    ("split-depth".into(), Json::Int(fused.verified_split_depth() as i128)),
                ]),
            );
        }
        Err(e) => rep.fail("fusion-built", e.to_string()),
    }
    Ok(rep)
}

pub fn run_delta(family_arg: &str, target: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("delta");
    rep.cfg("family", Json::Str(family_arg.into()));
    rep.cfg("target", Json::Int(target as i128));
    let text = read_arg("--family", family_arg)?;
    let mut family: Vec<BTreeSet<u64>> = Vec::new();
    for (i, chunk) in text.split(';').enumerate() {
        if chunk.trim().is_empty() {
            continue;
        }
        family.push(
            parse_u64_list(&format!("--family: set {}", i + 1), chunk)?.into_iter().collect(),
        );
    }
    if target < 2 {
        return Err(CliError::config("--target: a sunflower needs at least 2 petals".into()));
    }
    match delta_system(&family, target) {
        Ok((core, petals)) => {
            rep.pass("sunflower-found", format!("{} petals over a {}-element core", petals.len(), core.len()));
            let literal = petals.len() >= target
                && petals.iter().enumerate().all(|(i, p)| {
                    petals.iter().skip(i + 1).all(|q| {
                        p.intersection(q).cloned().collect::<BTreeSet<u64>>() == core
                    })
                });
            rep.verdict(
                "pairwise-core",
                literal,
                if literal {
                    "every pairwise intersection equals the core".into()
                } else {
                    "extracted petals do not share the core exactly".into()
                },
            );
            rep.witness(
                "sunflower",
                Json::Obj(vec![
                    ("core".into(), Json::ints(core.iter().map(|x| *x as i128))),
                    (
                        "petals".into(),
                        Json::Arr(
                            petals.iter().map(|p| Json::ints(p.iter().map(|x| *x as i128))).collect(),
                        ),
                    ),
                ]),
            );
        }
        Err(e) => rep.fail("sunflower-found", e.to_string()),
    }
    Ok(rep)
}

/// Deterministic word code: `(1 << len) + binary-value`, injective over
/// binary words, so colorings depend only on (seed, level, tuple).
fn word_code(w: &str) -> u64 {
    let mut code = 1u64;
    for c in w.chars() {
        code = (code << 1) | u64::from(c == '1');
    }
    code
}

pub fn run_hl(
    dims: usize,
    height: usize,
    levels_arg: &str,
    colors: u8,
    seed: u64,
) -> Result<Report, CliError> {
    let mut rep = Report::new("hl");
    rep.cfg("dims", Json::Int(dims as i128));
    rep.cfg("height", Json::Int(height as i128));
    rep.cfg("levels", Json::Str(levels_arg.into()));
    rep.cfg("colors", Json::Int(i128::from(colors)));
    rep.cfg("seed", Json::Num(seed.to_string()));
    if dims == 0 || dims > 3 {
        return Err(CliError::config("--dims: the searcher runs 1 to 3 trees".into()));
    }
    if colors == 0 {
        return Err(CliError::config("--colors: at least one color is needed".into()));
    }
    let levels: BTreeSet<usize> = parse_usize_list("--levels", levels_arg)?.into_iter().collect();
    if levels.is_empty() {
        return Err(CliError::config("--levels: no levels listed".into()));
    }
    let trees = vec![PerfectTree::full(height); dims];
    let searcher =
        HlSearcher::new(trees, &levels).map_err(|e| CliError::config(format!("--levels: {e}")))?;
    let mut color = |n: usize, words: &[&str]| -> u8 {
        let mut h = mix64(seed ^ (n as u64).wrapping_mul(0x9e3779b97f4a7c15));
        for w in words {
            h = mix64(h ^ word_code(w));
        }
        (h % u64::from(colors)) as u8
    };
    let report = searcher.check(&mut color);
    let horn = if report.everywhere.is_some() {
        "dense-everywhere color class"
    } else if report.somewhere.is_some() {
        "somewhere-dense complement"
    } else {
        "no horn"
    };
    rep.verdict(
        "dichotomy",
        report.holds(),
        format!("{horn} over {} colored cells", report.cells_colored),
    );
    if let Some(ref levels) = report.everywhere {
        rep.witness(
            "everywhere",
            Json::Arr(
                levels
                    .iter()
                    .map(|lw| {
                        Json::Obj(vec![
                            ("level".into(), Json::Int(lw.n as i128)),
                            ("matrices".into(), Json::Int(lw.m as i128)),
                            (
                                "sets".into(),
                                Json::Arr(
                                    lw.sets.iter().map(|s| Json::strs(s.iter().cloned())).collect(),
                                ),
                            ),
                        ])
                    })
                    .collect(),
            ),
        );
    }
    if let Some(ref sw) = report.somewhere {
        rep.witness(
            "somewhere",
            Json::Obj(vec![
                ("anchor".into(), Json::strs(sw.anchor.iter().cloned())),
                ("dense-levels".into(), Json::Int(sw.dense.len() as i128)),
            ]),
        );
    }
    Ok(rep)
}

pub fn run_namba(
    lambda: usize,
    depth: usize,
    tree_arg: &str,
    word_arg: &str,
    cap: usize,
    table_arg: &str,
) -> Result<Report, CliError> {
    let mut rep = Report::new("namba-game");
    rep.cfg("lambda", Json::Int(lambda as i128));
    rep.cfg("depth", Json::Int(depth as i128));
    rep.cfg("tree", Json::Str(tree_arg.into()));
    rep.cfg("word", Json::Str(word_arg.into()));
    rep.cfg("cap", Json::Int(cap as i128));
    rep.cfg("table", Json::Str(table_arg.into()));

    let text = read_arg("--tree", tree_arg)?;
    let tree = if text.trim() == "full" {
        NambaTree::full(lambda, depth)
    } else {
        NambaTree::parse(lambda, depth, &text.replace(',', "\n"))
    }
    .map_err(|e| CliError::config(format!("--tree: {e}")))?;

    let word = parse_u64_list("--word", word_arg)?;
    if word.is_empty() {
        return Err(CliError::config("--word: the target word is empty".into()));
    }
    if word.len() > depth {
        return Err(CliError::config(format!(
            "--word: {} stages cannot fit in a depth-{depth} tree",
            word.len()
        )));
    }

    // default decision table: a node's value is its last digit; --table
    // entries override single nodes
    let mut table: BTreeMap<String, u64> = tree
        .nodes()
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let digit = u64::from(s.chars().last().unwrap().to_digit(10).unwrap());
            (s.clone(), digit)
        })
        .collect();
    let table_text = read_arg("--table", table_arg)?;
    for (i, entry) in table_text.split(';').enumerate() {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (node, value) = entry.split_once('=').ok_or_else(|| {
            CliError::config(format!("--table: entry {} ('{entry}') must be node=value", i + 1))
        })?;
        let node = node.trim().to_string();
        if !tree.contains(&node) {
            return Err(CliError::config(format!(
                "--table: entry {} names '{node}', which is not in the tree",
                i + 1
            )));
        }
        let value: u64 = value.trim().parse().map_err(|_| {
            CliError::config(format!("--table: entry {} ('{entry}') has a non-numeric value", i + 1))
        })?;
        table.insert(node, value);
    }

    let mut star_levels = Vec::new();
    for n in 0..word.len() {
        match tree.lev_star(n) {
            Ok(level) => star_levels.push(Json::strs(level)),
            Err(e) => {
                rep.fail("game-solved", format!("starred level {n}: {e}"));
                return Ok(rep);
            }
        }
    }
    rep.witness("starred-levels", Json::Arr(star_levels));

    let game_caps = GameCaps { stages: word.len(), removal_cap: cap };
    match solve_open_game(&tree, &table, &word, game_caps) {
        Ok(solution) => {
            let winner = match solution.winner {
                GameWinner::PlayerI => "pruner",
                GameWinner::PlayerII => "chooser",
            };
            rep.pass(
                "game-solved",
                format!("{winner} wins; validated against {} adversary lines", solution.lines_checked),
            );
            rep.witness(
                "plan",
                Json::Obj(
                    solution
                        .plan
                        .iter()
                        .map(|((n, node), picks)| {
                            (format!("stage {n} at '{node}'"), Json::strs(picks.iter().cloned()))
                        })
                        .collect(),
                ),
            );
            rep.witness("winner", Json::Str(winner.into()));
        }
        Err(forcing_trees::TreeError::ScaleExceeded(msg)) => {
            return Err(CliError::scale(format!("game: {msg}")));
        }
        Err(e) => return Err(CliError::config(format!("game: {e}"))),
    }
    Ok(rep)
}
