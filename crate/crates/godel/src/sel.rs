//! Coordinate selection: the set of n-tuples from `y` whose i-th and j-th
//! coordinates stand in the relation `x`, built by composing the primitive
//! operations and cross-checked against a direct enumeration of `yⁿ` on
//! every call.

use forcing_core::HFSet;

use crate::error::GodelError;
use crate::ops::{f4, f7, f8, intersect, inverse, product_power};

/// `{(a₀,…,a_{n−1}) ∈ yⁿ : (a_i, a_j) ∈ x}` for `n ≥ 2`, `i ≠ j`, both
/// below `n`.
pub fn f_sel(i: usize, j: usize, n: usize, x: &HFSet, y: &HFSet) -> Result<HFSet, GodelError> {
    if n < 2 || i == j || i >= n || j >= n {
        return Err(GodelError::BadIndices(format!(
            "selection needs n ≥ 2 and distinct i, j < n; got i={i}, j={j}, n={n}"
        )));
    }
    let composed = sel_composed(i, j, n, x, y);
    let direct = sel_enumerated(i, j, n, x, y);
    assert_eq!(composed, direct, "selection composition drifted from the enumeration");
    Ok(composed)
}

/// The inductive composition. Tuples are left-nested, so an n-tuple is the
/// triple (prefix, a_{n−2}, a_{n−1}) and the permutation primitives move
/// exactly the last two coordinates.
fn sel_composed(i: usize, j: usize, n: usize, x: &HFSet, y: &HFSet) -> HFSet {
    if n == 2 {
        let square = product_power(y, 2);
        return if (i, j) == (0, 1) {
            intersect(x, &square)
        } else {
            intersect(&inverse(x), &square)
        };
    }
    if i < n - 1 && j < n - 1 {
        // The constraint ignores the last coordinate: select in one arity
        // down, then let it range freely.
        return f4(&sel_composed(i, j, n - 1, x, y), y);
    }
    if (i, j) == (n - 2, n - 1) || (i, j) == (n - 1, n - 2) {
        // The constraint sits on the last two coordinates. Pair them in x
        // (inverted when the order is flipped), append the free prefix
        // block, then rotate the triple (v, w, prefix) into (prefix, v, w).
        let rel = if i < j { intersect(x, &product_power(y, 2)) } else { intersect(&inverse(x), &product_power(y, 2)) };
        let prefixes = product_power(y, n - 2);
        return f8(&f7(&f4(&rel, &prefixes)));
    }
    // Exactly one of i, j is the last coordinate and the other is buried:
    // swapping the last two coordinates is an involution that moves the
    // constraint onto position n−2.
    if j == n - 1 {
        f7(&sel_composed(i, n - 2, n, x, y))
    } else {
        f7(&sel_composed(n - 2, j, n, x, y))
    }
}

/// Independent oracle: walk every tuple of `yⁿ` and test the pair.
fn sel_enumerated(i: usize, j: usize, n: usize, x: &HFSet, y: &HFSet) -> HFSet {
    let elems: Vec<&HFSet> = y.iter().collect();
    let mut out = HFSet::empty();
    let mut counters = vec![0usize; n];
    if elems.is_empty() {
        return out;
    }
    loop {
        let tuple: Vec<HFSet> = counters.iter().map(|c| elems[*c].clone()).collect();
        if x.contains(&HFSet::ordered_pair(tuple[i].clone(), tuple[j].clone())) {
            out.insert(HFSet::tuple(&tuple));
        }
        // Odometer.
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < elems.len() {
                break;
            }
            counters[pos] = 0;
        }
    }
}
