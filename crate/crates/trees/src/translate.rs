//! Coordinate-flip translations of binary words, tree codes of leaf-sets,
//! and the construction that absorbs a fixed nowhere-dense leaf-set into a
//! condition so that finitely many translations of the new part cover it.

use std::collections::BTreeSet;

use crate::error::TreeError;

/// Flips the coordinates listed in u (positions beyond the word are
/// ignored). An involution: applying it twice restores the word.
pub fn translate(u: &BTreeSet<usize>, alpha: &str) -> String {
    alpha
        .chars()
        .enumerate()
        .map(|(n, c)| if u.contains(&n) { if c == '0' { '1' } else { '0' } } else { c })
        .collect()
}

/// The tree of a leaf-set: every word (the empty one included) whose cone
/// meets F.
pub fn tree_code(f: &BTreeSet<String>, depth: usize) -> BTreeSet<String> {
    let mut t = BTreeSet::new();
    for leaf in f {
        assert_eq!(leaf.len(), depth, "leaf-sets live at the working depth");
        for cut in 0..=depth {
            t.insert(leaf[..cut].to_string());
        }
    }
    t
}

/// Checks that a leaf-set stays clear of some extension of every word
/// shorter than the working depth.
pub fn is_nowhere_dense(f: &BTreeSet<String>, depth: usize) -> bool {
    all_words_have_escape(f, depth)
}

fn all_words_have_escape(f: &BTreeSet<String>, depth: usize) -> bool {
    let mut words = vec![String::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &words {
            if !some_leaf_escapes(f, s, depth) {
                return false;
            }
            for b in ['0', '1'] {
                next.push(format!("{s}{b}"));
            }
        }
        words = next;
    }
    true
}

fn some_leaf_escapes(f: &BTreeSet<String>, prefix: &str, depth: usize) -> bool {
    if prefix.len() == depth {
        return !f.contains(prefix);
    }
    ['0', '1']
        .into_iter()
        .any(|b| some_leaf_escapes(f, &format!("{prefix}{b}"), depth))
}

/// Absorbs the leaf-set f0 into the condition (k, f): the new leaf-set
/// keeps every word that projects into f's tree at length k and either
/// already lies in f or is a {0..k}-translation of a word of f0. Verifies,
/// by enumerating all subsets u ⊆ {0..k}, that the translations of the
/// result cover f0, and that the result is still nowhere dense at the
/// working depth.
pub fn cover_by_translations(
    f0: &BTreeSet<String>,
    k: usize,
    f: &BTreeSet<String>,
    depth: usize,
) -> Result<(usize, BTreeSet<String>), TreeError> {
    if k + 1 >= depth {
        return Err(TreeError::Config(format!(
            "frozen length {k} must leave room below the working depth {depth}"
        )));
    }
    for (name, set) in [("absorbed", f0), ("condition", f)] {
        if set.is_empty() {
            return Err(TreeError::Config(format!("{name} leaf-set is empty")));
        }
        if !all_words_have_escape(set, depth) {
            return Err(TreeError::NotNowhereDense(format!(
                "{name} leaf-set covers a full cone at depth {depth}"
            )));
        }
    }

    let code = tree_code(f, depth);
    let subsets = subsets_of_initial(k);
    let mut f_new = BTreeSet::new();
    for alpha in all_words(depth) {
        if !code.contains(&alpha[..k]) {
            continue;
        }
        if f.contains(&alpha) || subsets.iter().any(|u| f0.contains(&translate(u, &alpha))) {
            f_new.insert(alpha);
        }
    }

    // the frozen part of the tree is unchanged: same length-k projections
    let new_code = tree_code(&f_new, depth);
    for s in code.iter().filter(|s| s.len() <= k) {
        assert!(new_code.contains(s.as_str()), "absorption must not shrink the frozen tree");
    }
    for s in new_code.iter().filter(|s| s.len() <= k) {
        assert!(code.contains(s), "absorption must not grow the frozen tree");
    }

    // every absorbed word is reached by translating the new set
    for beta in f0 {
        let covered = subsets.iter().any(|u| f_new.contains(&translate(u, beta)));
        if !covered {
            return Err(TreeError::NotNowhereDense(format!(
                "internal: '{beta}' escaped all translations — the condition tree is empty?"
            )));
        }
    }

    if !all_words_have_escape(&f_new, depth) {
        return Err(TreeError::NotNowhereDense(format!(
            "absorbing {} words at frozen length {k} saturated some cone at depth {depth}",
            f0.len()
        )));
    }
    Ok((k, f_new))
}

fn subsets_of_initial(k: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << (k + 1)) {
        out.push((0..=k).filter(|n| mask >> n & 1 == 1).collect());
    }
    out
}

fn all_words(depth: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    for _ in 0..depth {
        words = words
            .iter()
            .flat_map(|s| ['0', '1'].into_iter().map(move |b| format!("{s}{b}")))
            .collect();
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn translations_are_involutions() {
        let u: BTreeSet<usize> = [0, 2].into_iter().collect();
        assert_eq!(translate(&u, "0000"), "1010");
        assert_eq!(translate(&u, &translate(&u, "0110")), "0110");
        let empty = BTreeSet::new();
        assert_eq!(translate(&empty, "0110"), "0110");
    }

    #[test]
    fn tree_codes_collect_prefixes() {
        let code = tree_code(&leaves(&["1111"]), 4);
        assert_eq!(code.len(), 5);
        assert!(code.contains("") && code.contains("111"));
    }

    #[test]
    fn worked_absorption_example() {
        let f0 = leaves(&["0000"]);
        let f = leaves(&["1111"]);
        let (k, f_new) = cover_by_translations(&f0, 1, &f, 4).unwrap();
        assert_eq!(k, 1);
        assert_eq!(f_new, leaves(&["1000", "1100", "1111"]));
        // and the displayed inclusion really holds
        let covered = subsets_of_initial(1)
            .iter()
            .any(|u| f_new.contains(&translate(u, "0000")));
        assert!(covered);
    }

    #[test]
    fn saturating_absorptions_fail_honestly() {
        // f0 is nowhere dense, but absorbing it fills the cone above "11":
        // every word 1a·bc with bc in {00,01,10} picks up a translation, and
        // 1111 was already in the condition.
        let f0 = leaves(&["0000", "0001", "0010"]);
        let f = leaves(&["1111"]);
        let err = cover_by_translations(&f0, 1, &f, 4).unwrap_err();
        assert_eq!(err.code(), "NOT_NOWHERE_DENSE");

        // a leaf-set that already covers a cone is rejected on input
        let dense = leaves(&["1100", "1101", "1110", "1111"]);
        let err2 = cover_by_translations(&dense, 1, &leaves(&["0000"]), 4).unwrap_err();
        assert_eq!(err2.code(), "NOT_NOWHERE_DENSE");
    }
}
