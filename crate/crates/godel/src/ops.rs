//! The eight primitive operations and their classical compositions.
//!
//! Pairs are Kuratowski, triples are left-nested pairs `((u,v),w)` — the
//! permutation operations only need the convention to be fixed, not which
//! one it is. The derived operations each carry two implementations, the
//! direct definition and a composition of the primitives, and assert they
//! agree on every call.

use forcing_core::HFSet;

/// F₁: the unordered pair `{x, y}`.
pub fn f1(x: &HFSet, y: &HFSet) -> HFSet {
    HFSet::doubleton(x.clone(), y.clone())
}

/// F₂: the membership relation restricted to `x`, as a set of pairs
/// `{(u,v) ∈ x² : u ∈ v}`.
pub fn f2(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for u in x.iter() {
        for v in x.iter() {
            if v.contains(u) {
                out.insert(HFSet::ordered_pair(u.clone(), v.clone()));
            }
        }
    }
    out
}

/// F₃: set difference `x ∖ y`.
pub fn f3(x: &HFSet, y: &HFSet) -> HFSet {
    x.difference(y)
}

/// F₄: cartesian product `x × y` of Kuratowski pairs.
pub fn f4(x: &HFSet, y: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for u in x.iter() {
        for v in y.iter() {
            out.insert(HFSet::ordered_pair(u.clone(), v.clone()));
        }
    }
    out
}

/// F₅: union of the elements, `⋃x`.
pub fn f5(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for u in x.iter() {
        out = out.union(u);
    }
    out
}

/// F₆: the domain of `x` viewed as a set of pairs; non-pairs contribute
/// nothing.
pub fn f6(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for e in x.iter() {
        if let Some((u, _)) = e.decode_pair() {
            out.insert(u);
        }
    }
    out
}

/// F₇: permutes each triple `(u,v,w)` of `x` to `(u,w,v)`; elements that
/// are not triples are dropped.
pub fn f7(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for e in x.iter() {
        if let Some((u, v, w)) = e.decode_triple() {
            out.insert(HFSet::tuple(&[u, w, v]));
        }
    }
    out
}

/// F₈: permutes each triple `(u,v,w)` of `x` to `(v,u,w)`; non-triples are
/// dropped.
pub fn f8(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for e in x.iter() {
        if let Some((u, v, w)) = e.decode_triple() {
            out.insert(HFSet::tuple(&[v, u, w]));
        }
    }
    out
}

/// `x ∩ y`, twice over: directly, and as `x ∖ (x ∖ y)`.
pub fn intersect(x: &HFSet, y: &HFSet) -> HFSet {
    let direct = x.intersection(y);
    let composed = f3(x, &f3(x, y));
    assert_eq!(direct, composed, "intersection composition drifted");
    direct
}

/// `x ∪ y` as `⋃{x, y}` — the primitives have no direct union.
pub fn union(x: &HFSet, y: &HFSet) -> HFSet {
    f5(&f1(x, y))
}

/// `x⁻¹ = {(v,u) : (u,v) ∈ x}`, twice over: directly, and by padding each
/// pair to a triple `(u,v,∅)`, swapping the first two coordinates with F₈,
/// and projecting back with F₆.
pub fn inverse(x: &HFSet) -> HFSet {
    let mut direct = HFSet::empty();
    for e in x.iter() {
        if let Some((u, v)) = e.decode_pair() {
            direct.insert(HFSet::ordered_pair(v, u));
        }
    }
    let padded = f4(x, &HFSet::singleton(HFSet::empty()));
    let composed = f6(&f8(&padded));
    assert_eq!(direct, composed, "inverse composition drifted");
    direct
}

/// `range(x) = {v : ∃u (u,v) ∈ x}`, twice over: directly, and as the
/// domain of the inverse.
pub fn range_of(x: &HFSet) -> HFSet {
    let mut direct = HFSet::empty();
    for e in x.iter() {
        if let Some((_, v)) = e.decode_pair() {
            direct.insert(v);
        }
    }
    let composed = f6(&inverse(x));
    assert_eq!(direct, composed, "range composition drifted");
    direct
}

/// `dom(x)`, twice over: the primitive F₆, cross-checked against the range
/// of the inverse.
pub fn dom_of(x: &HFSet) -> HFSet {
    let direct = f6(x);
    let composed = range_of(&inverse(x));
    assert_eq!(direct, composed, "domain composition drifted");
    direct
}

/// The n-fold product `xⁿ` of left-nested tuples: `x¹ = x`,
/// `xⁿ = F₄(xⁿ⁻¹, x)`.
pub fn product_power(x: &HFSet, n: usize) -> HFSet {
    assert!(n >= 1, "product power needs n ≥ 1");
    let mut acc = x.clone();
    for _ in 1..n {
        acc = f4(&acc, x);
    }
    acc
}

/// The identity relation `{(u,u) : u ∈ x}`.
pub fn id_rel(x: &HFSet) -> HFSet {
    let mut out = HFSet::empty();
    for u in x.iter() {
        out.insert(HFSet::ordered_pair(u.clone(), u.clone()));
    }
    out
}
