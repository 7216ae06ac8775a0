//! Finite sunflower extraction, following the two-case shape of the
//! uncountable argument: either enough pairwise-disjoint sets exist, or
//! some element is frequent enough to strip off and recurse.

use std::collections::BTreeSet;

use crate::error::TreeError;

/// n! · (t−1)^n — families of same-size sets larger than this are
/// guaranteed to contain a sunflower with t petals.
pub fn sunflower_bound(n: usize, t: usize) -> u128 {
    let mut b: u128 = 1;
    for i in 1..=n {
        b = b.saturating_mul(i as u128);
    }
    for _ in 0..n {
        b = b.saturating_mul((t.max(1) - 1) as u128);
    }
    b
}

/// Combinations to scan before an exhaustive class finish is skipped.
const EXHAUSTIVE_BUDGET: u128 = 200_000;

/// Finds `target`-many sets with all pairwise intersections equal to one
/// common core. Sets of differing sizes are first grouped by size (each
/// size class is tried, largest class first). Within a class the search
/// runs the classical two cases: a greedy pairwise-disjoint subfamily
/// (core ∅), else strip the most frequent element and recurse. The two
/// cases are complete above the guarantee bound; below it they can miss,
/// so small classes are finished by exhausting their subsets. Failure
/// reports the guaranteeing bound for the class sizes that were tried.
pub fn delta_system(
    family: &[BTreeSet<u64>],
    target: usize,
) -> Result<(BTreeSet<u64>, Vec<BTreeSet<u64>>), TreeError> {
    if target == 0 {
        return Ok((BTreeSet::new(), Vec::new()));
    }
    let distinct: BTreeSet<&BTreeSet<u64>> = family.iter().collect();
    let mut by_size: std::collections::BTreeMap<usize, Vec<BTreeSet<u64>>> =
        Default::default();
    for x in distinct {
        by_size.entry(x.len()).or_default().push(x.clone());
    }
    let mut classes: Vec<(usize, Vec<BTreeSet<u64>>)> = by_size.into_iter().collect();
    classes.sort_by_key(|(n, class)| (usize::MAX - class.len(), *n));

    let mut bounds = Vec::new();
    for (n, class) in &classes {
        let mut found = extract(class, target);
        let exhausted = found.is_none() && choose(class.len(), target) <= EXHAUSTIVE_BUDGET;
        if exhausted {
            found = exhaustive(class, target);
        }
        if let Some((core, petals)) = found {
            for (i, a) in petals.iter().enumerate() {
                for b in petals.iter().skip(i + 1) {
                    let meet: BTreeSet<u64> = a.intersection(b).cloned().collect();
                    assert_eq!(meet, core, "pairwise intersections must equal the core");
                }
            }
            return Ok((core, petals));
        }
        bounds.push(format!(
            "size-{n} class has {} distinct sets{}, guarantee needs > {}",
            class.len(),
            if exhausted { ", exhaustively ruled out" } else { "" },
            sunflower_bound(*n, target)
        ));
    }
    Err(TreeError::FamilyTooSmall(format!(
        "no {target}-petal sunflower found: {}",
        bounds.join("; ")
    )))
}

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}

/// Scans every `target`-subset of the class in index order. Only reached
/// with `target >= 2` (single petals always satisfy the greedy case).
fn exhaustive(
    class: &[BTreeSet<u64>],
    target: usize,
) -> Option<(BTreeSet<u64>, Vec<BTreeSet<u64>>)> {
    let n = class.len();
    if target > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..target).collect();
    loop {
        let core: BTreeSet<u64> =
            class[idx[0]].intersection(&class[idx[1]]).copied().collect();
        let uniform = idx.iter().enumerate().all(|(i, &a)| {
            idx.iter().skip(i + 1).all(|&b| {
                class[a].intersection(&class[b]).copied().collect::<BTreeSet<u64>>() == core
            })
        });
        if uniform {
            return Some((core, idx.iter().map(|&i| class[i].clone()).collect()));
        }
        let mut i = target;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - target {
                idx[i] += 1;
                for j in i + 1..target {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn extract(class: &[BTreeSet<u64>], target: usize) -> Option<(BTreeSet<u64>, Vec<BTreeSet<u64>>)> {
    if class.len() < target {
        return None;
    }
    // case 1: a pairwise-disjoint subfamily is itself a sunflower, core ∅
    let mut disjoint: Vec<&BTreeSet<u64>> = Vec::new();
    for x in class {
        if disjoint.iter().all(|y| x.is_disjoint(y)) {
            disjoint.push(x);
        }
    }
    if disjoint.len() >= target {
        return Some((BTreeSet::new(), disjoint.into_iter().take(target).cloned().collect()));
    }
    // case 2: some element meets the union of the disjoint witnesses; take
    // the most frequent one, strip it, and recurse on the residues
    let mut freq: std::collections::BTreeMap<u64, usize> = Default::default();
    for x in class {
        for &a in x {
            *freq.entry(a).or_default() += 1;
        }
    }
    let (&a, &count) = freq.iter().max_by_key(|(a, c)| (**c, std::cmp::Reverse(**a)))?;
    if count < 2 {
        return None; // nothing shared and not enough disjoint sets
    }
    let residues: Vec<BTreeSet<u64>> = class
        .iter()
        .filter(|x| x.contains(&a))
        .map(|x| x.iter().copied().filter(|&b| b != a).collect())
        .collect();
    let (mut core, residue_petals) = extract(&residues, target)?;
    core.insert(a);
    let petals = residue_petals
        .into_iter()
        .map(|mut p| {
            p.insert(a);
            p
        })
        .collect();
    Some((core, petals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn common_element_case() {
        let fam = [set(&[1, 2]), set(&[1, 3]), set(&[1, 4])];
        let (core, petals) = delta_system(&fam, 3).unwrap();
        assert_eq!(core, set(&[1]));
        assert_eq!(petals.len(), 3);
    }

    #[test]
    fn disjoint_case() {
        let fam = [set(&[1, 2]), set(&[3, 4]), set(&[5, 6])];
        let (core, petals) = delta_system(&fam, 3).unwrap();
        assert!(core.is_empty());
        assert_eq!(petals.len(), 3);
    }

    #[test]
    fn too_small_families_fail_with_the_bound() {
        let fam = [set(&[1, 2]), set(&[2, 3]), set(&[3, 1])];
        let err = delta_system(&fam, 3).unwrap_err();
        assert_eq!(err.code(), "FAMILY_TOO_SMALL");
        assert!(err.to_string().contains("> 8"), "bound 2!·2² = 8 should be cited: {err}");
    }

    #[test]
    fn exhaustive_finish_catches_greedy_misses() {
        // the greedy disjoint pass picks {1,2} then {3,4} and stalls at
        // two petals, and element 1 is no more frequent than the rest; the
        // class is small enough to exhaust, which finds a disjoint triple
        let fam =
            [set(&[1, 2]), set(&[1, 5]), set(&[2, 6]), set(&[3, 4]), set(&[3, 7])];
        let (core, petals) = delta_system(&fam, 3).unwrap();
        assert!(core.is_empty());
        assert_eq!(petals.len(), 3);
    }

    #[test]
    fn mixed_sizes_try_the_biggest_class() {
        let fam = [
            set(&[9]),
            set(&[1, 2]),
            set(&[1, 3]),
            set(&[1, 4]),
            set(&[7, 8, 9]),
        ];
        let (core, petals) = delta_system(&fam, 3).unwrap();
        assert_eq!(core, set(&[1]));
        assert_eq!(petals.len(), 3);
    }
}
