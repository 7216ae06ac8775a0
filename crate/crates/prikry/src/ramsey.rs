//! Finding monochromatic subsets under colourings of small tuples.
//!
//! The partition property behind the measure's completeness says every
//! colouring of n-tuples admits a large homogeneous set. Down at desk
//! scale, "large" becomes a requested size, the family is a finite window,
//! and the guarantee degrades to a Ramsey-number bound that the error
//! message cites when the window is provably too small to insist.

use std::collections::BTreeMap;

use crate::error::PrikryError;

/// The size a family must reach before a 3-colouring of n-tuples is
/// guaranteed a homogeneous subset of `target` elements. Exact for n = 1
/// (pigeonhole), the multinomial Greenwood–Gleason bound for n = 2, and a
/// crude exponential tower for n = 3. `None` means the bound overflows
/// u64 — "tower-sized" for practical purposes.
pub fn ramsey_bound(n: usize, target: usize) -> Option<u64> {
    let t = target as u64;
    match n {
        1 => Some(3 * (t - 1) + 1),
        2 => {
            // (3(t-1))! / ((t-1)!)^3, the classical upper bound on the
            // three-colour Ramsey number R(t,t,t), computed as a product of
            // binomials to delay overflow.
            let k = t.checked_sub(1)?;
            let mut acc: u64 = 1;
            // C(3k, k) * C(2k, k)
            for (top, bottom) in [(3 * k, k), (2 * k, k)] {
                let mut binom: u64 = 1;
                for i in 1..=bottom {
                    binom = binom.checked_mul(top - bottom + i)? / i;
                }
                acc = acc.checked_mul(binom)?;
            }
            Some(acc.checked_add(1)?)
        }
        3 => {
            // Iterated exponential dominating the triple-colour bound for
            // triples; anything beyond toy targets overflows immediately.
            let base = ramsey_bound(2, target)?;
            let mut acc: u64 = 1;
            for _ in 0..target {
                acc = acc.checked_mul(base)?;
                if acc > 1 << 40 {
                    return None;
                }
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Searches the window `a` for a `target`-element subset on which `f` is
/// constant across all m-tuples for every `m ≤ n`. Colours must be < 3.
/// Returns the lexicographically first homogeneous subset, or
/// `FAMILY_TOO_SMALL` citing the Ramsey bound when none exists.
pub fn homogeneous_subset(
    f: &mut dyn FnMut(&[u64]) -> u8,
    a: &[u64],
    n: usize,
    target: usize,
) -> Result<Vec<u64>, PrikryError> {
    if !(1..=3).contains(&n) {
        return Err(PrikryError::Config(format!("tuple size {n} outside 1..=3")));
    }
    if a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PrikryError::Config(format!("family {a:?} is not strictly increasing")));
    }
    if a.len() > 16 {
        return Err(PrikryError::Config(format!(
            "family of {} elements exceeds the search cap of 16",
            a.len()
        )));
    }
    if target < n {
        return Err(PrikryError::Config(format!("target {target} is smaller than the tuple size {n}")));
    }

    let mut colors: BTreeMap<Vec<u64>, u8> = BTreeMap::new();
    let mut color_of = |tuple: &[u64]| -> Result<u8, PrikryError> {
        if let Some(c) = colors.get(tuple) {
            return Ok(*c);
        }
        let c = f(tuple);
        if c >= 3 {
            return Err(PrikryError::Config(format!("colour {c} of {tuple:?} is not below 3")));
        }
        colors.insert(tuple.to_vec(), c);
        Ok(c)
    };

    // Walk target-sized subsets of the window in lexicographic order and
    // take the first that is homogeneous at every arity up to n.
    let mut found: Option<Vec<u64>> = None;
    let subset_ok = |b: &[u64], color_of: &mut dyn FnMut(&[u64]) -> Result<u8, PrikryError>| {
        for m in 1..=n {
            let mut tuples = Combinations::new(b.len(), m);
            let mut expected: Option<u8> = None;
            while let Some(idx) = tuples.next() {
                let tuple: Vec<u64> = idx.iter().map(|i| b[*i]).collect();
                let c = color_of(&tuple)?;
                match expected {
                    None => expected = Some(c),
                    Some(e) if e != c => return Ok(false),
                    _ => {}
                }
            }
        }
        Ok(true)
    };
    if target <= a.len() {
        let mut picks = Combinations::new(a.len(), target);
        while let Some(idx) = picks.next() {
            let b: Vec<u64> = idx.iter().map(|i| a[*i]).collect();
            if subset_ok(&b, &mut color_of)? {
                found = Some(b);
                break;
            }
        }
    }
    found.ok_or_else(|| {
        let needed = match ramsey_bound(n, target) {
            Some(b) => format!("a guaranteed window needs {b} elements"),
            None => "a guaranteed window is tower-sized".to_string(),
        };
        PrikryError::FamilyTooSmall(format!(
            "no homogeneous {target}-subset for {n}-tuples in a window of {}; {needed}",
            a.len()
        ))
    })
}

/// Plain lexicographic k-of-n index combinations, smallest first.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), fresh: true }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.idx.len() > self.n {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
    }
}
