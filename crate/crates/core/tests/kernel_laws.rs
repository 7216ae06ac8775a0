//! Kernel contracts: generic-filter certificates, dense-set refiners, the
//! D_p dense sets, antichain verdict stability, and exhaustive genericity
//! on small posets (a cone generic meets *every* dense subset).

use std::collections::BTreeSet;

use forcing_core::{
    antichain_check, atom_generics, build_generic, enumerate_posets_with_top, is_filter,
    AntichainVerdict, DenseDp, DenseSet, Failure, FinitePoset, ForcingNotion, KernelError,
};

fn diamond() -> FinitePoset {
    FinitePoset::parse("a <= 1\nb <= 1\nd <= a\nd <= b\n").unwrap()
}

fn small_corpus() -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.extend(enumerate_posets_with_top(n));
    }
    out
}

#[test]
fn certificates_meet_every_registered_dense_set() {
    for poset in small_corpus() {
        let universe = poset.universe().unwrap();
        let denses: Vec<DenseDp<String>> = universe
            .iter()
            .map(|p| DenseDp { p: p.clone(), budget: 64, seed: 7 })
            .collect();
        let refs: Vec<&dyn DenseSet<FinitePoset>> =
            denses.iter().map(|d| d as &dyn DenseSet<FinitePoset>).collect();
        let cert = build_generic(&poset, &refs, &poset.top(), 64).unwrap();
        // every dense id met, with a genuine member as witness
        for d in &denses {
            let id = <DenseDp<String> as DenseSet<FinitePoset>>::id(d);
            let w = cert
                .met
                .get(&id)
                .unwrap_or_else(|| panic!("dense set {id} not met in\n{poset}"));
            assert!(d.member(&poset, w));
        }
        // chain decreasing from the requested start
        assert_eq!(cert.chain[0], poset.top());
        for step in cert.chain.windows(2) {
            assert!(poset.leq(&step[1], &step[0]));
        }
        // certificate filter is a filter
        assert!(is_filter(&poset, &cert.filter).unwrap());
    }
}

#[test]
fn cone_generics_meet_every_dense_subset() {
    // Exhaustive genericity: on a finite poset the cone above a minimal
    // element intersects every dense subset whatsoever. Checked against all
    // 2^n subsets for each poset in the enumerated corpus.
    for poset in small_corpus() {
        let universe = poset.universe().unwrap();
        let n = universe.len();
        let dense_subsets: Vec<BTreeSet<String>> = (0u32..1 << n)
            .map(|mask| {
                universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p.clone())
                    .collect::<BTreeSet<String>>()
            })
            .filter(|d| {
                universe
                    .iter()
                    .all(|p| universe.iter().any(|q| poset.leq(q, p) && d.contains(q)))
            })
            .collect();
        for g in atom_generics(&poset).unwrap() {
            for d in &dense_subsets {
                assert!(
                    !g.filter.is_disjoint(d),
                    "generic {:?} missed dense {d:?} in\n{poset}",
                    g.filter
                );
            }
        }
    }
}

#[test]
fn distinct_generics_are_incomparable() {
    // If G ⊆ G' for two cone generics then G = G' — exhaustive over the
    // corpus plus a 7-element shape.
    let mut posets = small_corpus();
    posets.push(FinitePoset::parse(
        "l <= 1\nr <= 1\nll <= l\nlr <= l\nrl <= r\nrr <= r\n",
    ).unwrap());
    for poset in posets {
        let generics = atom_generics(&poset).unwrap();
        for g in &generics {
            for h in &generics {
                if g.filter.is_subset(&h.filter) {
                    assert_eq!(g.filter, h.filter);
                }
            }
        }
    }
}

#[test]
fn dense_dp_is_dense_with_constructive_refiner() {
    for poset in small_corpus() {
        let universe = poset.universe().unwrap();
        for p in &universe {
            let dp = DenseDp { p: p.clone(), budget: 64, seed: 11 };
            for r in &universe {
                let q = dp.refine(&poset, r).unwrap();
                assert!(poset.leq(&q, r), "refiner output not below its input");
                assert!(dp.member(&poset, &q), "refiner output not a member");
            }
        }
    }
}

struct BrokenDense;

impl DenseSet<FinitePoset> for BrokenDense {
    fn id(&self) -> String {
        "broken".into()
    }
    fn member(&self, _: &FinitePoset, _: &String) -> bool {
        false
    }
    fn refine(&self, poset: &FinitePoset, _: &String) -> Result<String, Failure> {
        // returns the top instead of a member — a broken implementation
        Ok(poset.top())
    }
}

#[test]
fn broken_refiners_are_reported() {
    let poset = diamond();
    let err = build_generic(&poset, &[&BrokenDense], &poset.top(), 8).unwrap_err();
    match err {
        KernelError::RefinerViolation(msg) => assert!(msg.contains("broken")),
        other => panic!("expected REFINER_VIOLATION, got {other}"),
    }
    let f: Failure = KernelError::RefinerViolation("x".into()).into();
    assert_eq!(f.code, "REFINER_VIOLATION");
}

#[test]
fn budget_and_empty_dense_list() {
    let poset = diamond();
    let d = DenseDp { p: "d".to_string(), budget: 8, seed: 1 };
    let refs: Vec<&dyn DenseSet<FinitePoset>> = vec![&d, &d, &d];
    let err = build_generic(&poset, &refs, &poset.top(), 2).unwrap_err();
    assert!(matches!(err, KernelError::BudgetExceeded(_)));

    // empty dense list from the top: chain = [top], filter = {top}
    let cert = build_generic(&poset, &[], &poset.top(), 8).unwrap();
    assert_eq!(cert.chain, vec![poset.top()]);
    assert_eq!(cert.filter.len(), 1);
    // ...and from the bottom the cone above it is the whole diamond
    let cert = build_generic(&poset, &[], &"d".to_string(), 8).unwrap();
    assert_eq!(cert.chain, vec!["d".to_string()]);
    assert_eq!(cert.filter.len(), 4);
}

#[test]
fn antichain_verdicts_stable_under_reordering() {
    let poset = FinitePoset::parse(
        "a <= 1\nb <= 1\nc <= 1\nd <= a\nd <= b\n",
    )
    .unwrap();
    let sets: Vec<Vec<String>> = vec![
        vec!["a".into(), "b".into(), "c".into()],
        vec!["a".into(), "c".into()],
        vec!["c".into(), "d".into()],
    ];
    for set in sets {
        let mut rev = set.clone();
        rev.reverse();
        let v1 = antichain_check(&poset, &set, 64, 3);
        let v2 = antichain_check(&poset, &rev, 64, 3);
        assert_eq!(v1, v2, "antichain verdict changed under reordering");
    }
    // {a,b} is NOT an antichain: d extends both
    match antichain_check(
        &poset,
        &["a".to_string(), "b".to_string()],
        64,
        3,
    ) {
        AntichainVerdict::NotAntichain { witness, .. } => assert_eq!(witness, "d"),
        other => panic!("expected a compatible pair, got {other:?}"),
    }
    // {a,c} is an antichain
    assert!(matches!(
        antichain_check(&poset, &["a".to_string(), "c".to_string()], 64, 3),
        AntichainVerdict::Antichain
    ));
}
