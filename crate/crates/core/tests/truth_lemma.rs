//! Exhaustive checks of the forcing laws on small finite posets.
//!
//! The forcing relation is *defined* semantically (truth under every cone
//! generic of a minimal element), so persistence, the negation laws, the
//! bounded-quantifier law, and automorphism symmetry are theorems the
//! implementation has to earn. This battery earns them exhaustively over
//! every labeled poset with a top on ≤ 4 elements plus a fixed corpus of
//! larger shapes (up to 8 elements), names of rank ≤ 2, and a schema of
//! formulas with connectives and bounded quantifiers.

use std::collections::BTreeMap;

use forcing_core::{
    forces, Formula, HFSet, NameTerm, PName, PosetAutomorphism,
    check_name, enumerate_posets_with_top, FinitePoset, ForcingNotion,
};

const RANK_BOUND: u32 = 8;

/// Every labeled poset with top on ≤ 3 elements, all of them on 4, plus
/// hand-picked 5–8 element shapes: chains, forks, a diamond, the nonempty
/// subsets of a 3-set, and a depth-2 binary tree.
fn corpus() -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.extend(enumerate_posets_with_top(n));
    }
    let fixed: &[&[(&str, &str)]] = &[
        // chain of length 5
        &[("c1", "1"), ("c2", "c1"), ("c3", "c2"), ("c4", "c3")],
        // top over four incomparable atoms
        &[("a", "1"), ("b", "1"), ("c", "1"), ("d", "1")],
        // diamond with a pendant atom
        &[("a", "1"), ("b", "1"), ("d", "a"), ("d", "b"), ("e", "1")],
        // nonempty subsets of {x,y,z} under inclusion (7 elements)
        &[
            ("xy", "1"), ("xz", "1"), ("yz", "1"),
            ("x", "xy"), ("x", "xz"), ("y", "xy"), ("y", "yz"),
            ("z", "xz"), ("z", "yz"),
        ],
        // binary tree of depth 2 (7 elements, 4 atoms)
        &[
            ("l", "1"), ("r", "1"),
            ("ll", "l"), ("lr", "l"), ("rl", "r"), ("rr", "r"),
        ],
        // asymmetric 5-element shape: p ≥ r,s and q ≥ s
        &[("p", "1"), ("q", "1"), ("r", "p"), ("s", "p"), ("s", "q")],
    ];
    for edges in fixed {
        let text: String = edges
            .iter()
            .map(|(lo, hi)| format!("{lo} <= {hi}\n"))
            .collect();
        out.push(FinitePoset::parse(&text).unwrap());
    }
    out
}

/// A small deterministic stock of names of rank ≤ 2 for a poset: the check
/// names of 0 and 1, one singleton name per condition (capped), and a few
/// rank-2 names built on top of those.
fn stock_names(poset: &FinitePoset) -> Vec<PName<String>> {
    let top = poset.top();
    let mut names = vec![
        PName::empty(),
        check_name(&HFSet::ordinal(1), &top, RANK_BOUND).unwrap(),
    ];
    let conds: Vec<&String> = poset.labels().iter().take(3).collect();
    for c in &conds {
        names.push(PName::from_pairs([(PName::empty(), (*c).clone())]));
    }
    for c in &conds {
        let inner = PName::from_pairs([(PName::empty(), (*c).clone())]);
        names.push(PName::from_pairs([(inner, top.clone())]));
    }
    names.sort();
    names.dedup();
    names
}

fn lit(n: &PName<String>) -> NameTerm {
    NameTerm::Lit(n.clone())
}

/// Ground formulas (no free variables) over the first few stock names.
fn ground_formulas(names: &[PName<String>]) -> Vec<Formula> {
    let mut out = Vec::new();
    let k = names.len().min(4);
    for i in 0..k {
        for j in 0..k {
            out.push(Formula::In(lit(&names[i]), lit(&names[j])));
            if i < j {
                out.push(Formula::Eq(lit(&names[i]), lit(&names[j])));
            }
        }
    }
    let atoms: Vec<Formula> = out.clone();
    for a in atoms.iter().take(6) {
        out.push(Formula::Not(Box::new(a.clone())));
    }
    for pair in atoms.windows(2).take(4) {
        out.push(Formula::And(Box::new(pair[0].clone()), Box::new(pair[1].clone())));
        out.push(Formula::Or(Box::new(pair[0].clone()), Box::new(pair[1].clone())));
    }
    // quantified: ∃v (v ∈ n), ∀v (v = n ∨ v ∉ n)
    for n in names.iter().take(2) {
        out.push(Formula::Ex(
            "v".into(),
            Box::new(Formula::In(NameTerm::Var("v".into()), lit(n))),
        ));
        out.push(Formula::All(
            "v".into(),
            Box::new(Formula::Or(
                Box::new(Formula::Eq(NameTerm::Var("v".into()), lit(n))),
                Box::new(Formula::Not(Box::new(Formula::In(NameTerm::Var("v".into()), lit(n))))),
            )),
        ));
    }
    out
}

/// Formulas with the single free variable `v`, for the bounded-quantifier law.
fn open_formulas(names: &[PName<String>]) -> Vec<Formula> {
    let v = || NameTerm::Var("v".into());
    let mut out = Vec::new();
    for n in names.iter().take(3) {
        out.push(Formula::In(v(), lit(n)));
        out.push(Formula::Eq(v(), lit(n)));
        out.push(Formula::Not(Box::new(Formula::In(v(), lit(n)))));
    }
    out
}

fn substitute(phi: &Formula, var: &str, name: &PName<String>) -> Formula {
    let t = |term: &NameTerm| match term {
        NameTerm::Var(w) if w == var => NameTerm::Lit(name.clone()),
        other => other.clone(),
    };
    match phi {
        Formula::In(a, b) => Formula::In(t(a), t(b)),
        Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
        Formula::Not(f) => Formula::Not(Box::new(substitute(f, var, name))),
        Formula::And(f, g) => Formula::And(
            Box::new(substitute(f, var, name)),
            Box::new(substitute(g, var, name)),
        ),
        Formula::Or(f, g) => Formula::Or(
            Box::new(substitute(f, var, name)),
            Box::new(substitute(g, var, name)),
        ),
        Formula::All(w, f) if w != var => {
            Formula::All(w.clone(), Box::new(substitute(f, var, name)))
        }
        Formula::Ex(w, f) if w != var => {
            Formula::Ex(w.clone(), Box::new(substitute(f, var, name)))
        }
        shadowed => shadowed.clone(),
    }
}

#[test]
fn persistence_and_negation_laws() {
    for poset in corpus() {
        let names = stock_names(&poset);
        let universe = poset.universe().unwrap();
        for phi in ground_formulas(&names) {
            let not_phi = Formula::Not(Box::new(phi.clone()));
            let f: BTreeMap<&String, bool> = universe
                .iter()
                .map(|p| (p, forces(&poset, p, &phi, &names, RANK_BOUND).unwrap()))
                .collect();
            let fnot: BTreeMap<&String, bool> = universe
                .iter()
                .map(|p| (p, forces(&poset, p, &not_phi, &names, RANK_BOUND).unwrap()))
                .collect();
            for p in &universe {
                let below: Vec<&String> =
                    universe.iter().filter(|q| poset.leq(q, p)).collect();
                // persistence: p ⊩ φ and q ≤ p imply q ⊩ φ
                if f[p] {
                    for q in &below {
                        assert!(f[q], "persistence broke: {phi} at {p} -> {q} in\n{poset}");
                    }
                }
                // (a): p ⊮ φ iff some q ≤ p forces ¬φ
                let some_neg = below.iter().any(|q| fnot[*q]);
                assert_eq!(!f[p], some_neg, "negation law (a) broke: {phi} at {p}");
                // (b): p ⊩ ¬φ iff no q ≤ p forces φ
                let none_pos = below.iter().all(|q| !f[*q]);
                assert_eq!(fnot[p], none_pos, "negation law (b) broke: {phi} at {p}");
            }
        }
    }
}

#[test]
fn conjunction_splits_and_existential_is_dense() {
    for poset in corpus() {
        let names = stock_names(&poset);
        let universe = poset.universe().unwrap();
        // conjunction law
        let ground = ground_formulas(&names);
        for pair in ground.windows(2).take(6) {
            let conj = Formula::And(Box::new(pair[0].clone()), Box::new(pair[1].clone()));
            for p in &universe {
                let lhs = forces(&poset, p, &conj, &names, RANK_BOUND).unwrap();
                let rhs = forces(&poset, p, &pair[0], &names, RANK_BOUND).unwrap()
                    && forces(&poset, p, &pair[1], &names, RANK_BOUND).unwrap();
                assert_eq!(lhs, rhs, "conjunction law broke: {conj} at {p}");
            }
        }
        // bounded-quantifier law: p ⊩ ∃v φ(v) iff the set of q with a witness
        // instance is dense below p
        for psi in open_formulas(&names) {
            let ex = Formula::Ex("v".into(), Box::new(psi.clone()));
            for p in &universe {
                let lhs = forces(&poset, p, &ex, &names, RANK_BOUND).unwrap();
                let dense_below = universe.iter().filter(|r| poset.leq(r, p)).all(|r| {
                    universe.iter().filter(|q| poset.leq(q, r)).any(|q| {
                        names.iter().any(|a| {
                            let inst = substitute(&psi, "v", a);
                            forces(&poset, q, &inst, &names, RANK_BOUND).unwrap()
                        })
                    })
                });
                assert_eq!(lhs, dense_below, "existential law broke: {ex} at {p}");
            }
        }
    }
}

#[test]
fn automorphism_symmetry() {
    for poset in corpus() {
        let autos = PosetAutomorphism::enumerate(&poset);
        if autos.len() <= 1 {
            continue;
        }
        let names = stock_names(&poset);
        let universe = poset.universe().unwrap();
        for pi in &autos {
            let mapped_names: Vec<PName<String>> =
                names.iter().map(|n| pi.apply_name(n)).collect();
            for phi in ground_formulas(&names).into_iter().take(12) {
                let phi_pi = phi.map_conditions(&|c| pi.apply_cond(c));
                for p in &universe {
                    let before = forces(&poset, p, &phi, &names, RANK_BOUND).unwrap();
                    let after = forces(
                        &poset,
                        &pi.apply_cond(p),
                        &phi_pi,
                        &mapped_names,
                        RANK_BOUND,
                    )
                    .unwrap();
                    assert_eq!(
                        before, after,
                        "symmetry broke: {phi} at {p} under {:?}",
                        pi
                    );
                }
            }
        }
    }
}

#[test]
fn check_names_are_absolute() {
    let sets = [
        HFSet::empty(),
        HFSet::ordinal(1),
        HFSet::ordinal(2),
        HFSet::from_elements([HFSet::ordinal(1)]),
    ];
    for poset in corpus() {
        let top = poset.top();
        for g in forcing_core::atom_generics(&poset).unwrap() {
            for x in &sets {
                let name = check_name(x, &top, RANK_BOUND).unwrap();
                assert_eq!(&name.eval(&g.filter), x, "eval∘check ≠ id in\n{poset}");
            }
        }
    }
}

#[test]
fn gamma_recovers_the_generic() {
    for poset in corpus() {
        let bound = poset.labels().len() as u32 + 1;
        let gamma = forcing_core::canonical_gamma(&poset, bound).unwrap();
        for g in forcing_core::atom_generics(&poset).unwrap() {
            let val = gamma.eval(&g.filter);
            let expected = HFSet::from_elements(
                g.filter.iter().map(|p| forcing_core::condition_code(&poset, p)),
            );
            assert_eq!(val, expected, "Γ failed to name the generic in\n{poset}");
        }
    }
}
