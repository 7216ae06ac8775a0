//! Cohen forcing with finitely many rows: finite partial functions from
//! Row × ℕ into {0,1}, ordered by reverse inclusion.
//!
//! Each row ξ carries one generic real a_ξ = Σ_{n≥1, bit n = 1} 1/2ⁿ; the
//! row-splitting dense sets force any two rows to disagree at some bit
//! n ≥ 1, which makes the extracted partial sums distinct rationals.

use std::collections::BTreeMap;
use std::fmt;

use forcing_core::{DenseSet, Failure, FilterCertificate, ForcingNotion, mix64};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::ClassicError;

/// A finite partial function Row × ℕ → {0,1}. Smaller = more assignments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct CohenCond {
    bits: BTreeMap<(String, u64), bool>,
}

impl CohenCond {
    pub fn empty() -> Self {
        CohenCond::default()
    }

    pub fn from_bits<I: IntoIterator<Item = ((String, u64), bool)>>(bits: I) -> Self {
        CohenCond { bits: bits.into_iter().collect() }
    }

    pub fn get(&self, row: &str, n: u64) -> Option<bool> {
        self.bits.get(&(row.to_string(), n)).copied()
    }

    pub fn set(&mut self, row: &str, n: u64, v: bool) {
        self.bits.insert((row.to_string(), n), v);
    }

    pub fn bits(&self) -> &BTreeMap<(String, u64), bool> {
        &self.bits
    }

    /// The union of two conditions, or `None` on a conflicting assignment.
    pub fn merge(&self, other: &CohenCond) -> Option<CohenCond> {
        let mut out = self.clone();
        for (k, v) in &other.bits {
            if *out.bits.entry(k.clone()).or_insert(*v) != *v {
                return None;
            }
        }
        Some(out)
    }
}

impl fmt::Display for CohenCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .bits
            .iter()
            .map(|((row, n), v)| format!("{row}:{n}={}", u8::from(*v)))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Cohen forcing over a configured finite row set.
pub struct CohenNotion {
    pub rows: Vec<String>,
}

impl CohenNotion {
    pub fn new<S: AsRef<str>>(rows: &[S]) -> Self {
        CohenNotion { rows: rows.iter().map(|s| s.as_ref().to_string()).collect() }
    }
}

impl ForcingNotion for CohenNotion {
    type Cond = CohenCond;

    fn top(&self) -> CohenCond {
        CohenCond::empty()
    }

    fn leq(&self, q: &CohenCond, p: &CohenCond) -> bool {
        p.bits.iter().all(|(k, v)| q.bits.get(k) == Some(v))
    }

    fn encode(&self, p: &CohenCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &CohenCond, seed: u64) -> CohenCond {
        // one fresh assignment at a pseudo-random coordinate
        let mut q = p.clone();
        let mut s = seed;
        loop {
            let row = &self.rows[(mix64(s) % self.rows.len() as u64) as usize];
            let n = mix64(s.wrapping_add(1)) % 16;
            if q.get(row, n).is_none() {
                q.set(row, n, mix64(s.wrapping_add(2)) % 2 == 1);
                return q;
            }
            s = mix64(s);
        }
    }

    fn decide_compat(&self, p: &CohenCond, q: &CohenCond) -> Option<Option<CohenCond>> {
        Some(p.merge(q))
    }
}

/// Dense set of conditions deciding bit `n` of row `row`.
pub struct BitDecided {
    pub row: String,
    pub n: u64,
}

impl DenseSet<CohenNotion> for BitDecided {
    fn id(&self) -> String {
        format!("dom:{},{}", self.row, self.n)
    }

    fn member(&self, _: &CohenNotion, p: &CohenCond) -> bool {
        p.get(&self.row, self.n).is_some()
    }

    fn refine(&self, _: &CohenNotion, p: &CohenCond) -> Result<CohenCond, Failure> {
        let mut q = p.clone();
        if q.get(&self.row, self.n).is_none() {
            q.set(&self.row, self.n, false);
        }
        Ok(q)
    }
}

/// Dense set of conditions splitting rows ξ and ζ at some bit n ≥ 1 (bit 0
/// does not participate in the partial sums, so a disagreement there would
/// not separate the extracted reals).
pub struct RowSplit {
    pub xi: String,
    pub zeta: String,
}

impl DenseSet<CohenNotion> for RowSplit {
    fn id(&self) -> String {
        format!("rowsplit:{},{}", self.xi, self.zeta)
    }

    fn member(&self, _: &CohenNotion, p: &CohenCond) -> bool {
        p.bits
            .iter()
            .any(|((row, n), v)| {
                row == &self.xi && *n >= 1 && p.get(&self.zeta, *n) == Some(!*v)
            })
    }

    fn refine(&self, notion: &CohenNotion, p: &CohenCond) -> Result<CohenCond, Failure> {
        if self.member(notion, p) {
            return Ok(p.clone());
        }
        // first n ≥ 1 where both rows are free
        let mut n = 1;
        loop {
            match (p.get(&self.xi, n), p.get(&self.zeta, n)) {
                (None, None) => {
                    let mut q = p.clone();
                    q.set(&self.xi, n, false);
                    q.set(&self.zeta, n, true);
                    return Ok(q);
                }
                (Some(a), None) => {
                    let mut q = p.clone();
                    q.set(&self.zeta, n, !a);
                    return Ok(q);
                }
                (None, Some(b)) => {
                    let mut q = p.clone();
                    q.set(&self.xi, n, !b);
                    return Ok(q);
                }
                (Some(_), Some(_)) => n += 1,
            }
        }
    }
}

/// Extracts the partial sum a_row = Σ_{n=1..=precision, bit n = 1} 1/2ⁿ from
/// the strongest condition of the certificate. All bits 1..=precision must
/// be decided.
pub fn cohen_real(
    cert: &FilterCertificate<CohenCond>,
    row: &str,
    precision: u64,
) -> Result<BigRational, ClassicError> {
    let tip = cert.tip();
    let mut decided = 0;
    while tip.get(row, decided + 1).is_some() {
        decided += 1;
    }
    if decided < precision {
        return Err(ClassicError::UndecidedBits { decided, requested: precision });
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for n in 1..=precision {
        if tip.get(row, n) == Some(true) {
            sum += BigRational::new(BigInt::from(1), BigInt::from(2u64).pow(n as u32));
        }
    }
    Ok(sum)
}

/// The §-style row swap: exchanges all assignments of two rows, leaving the
/// rest of the condition untouched. An involution preserving the order.
pub fn row_swap(p: &CohenCond, k: &str, k2: &str) -> CohenCond {
    CohenCond {
        bits: p
            .bits
            .iter()
            .map(|((row, n), v)| {
                let row = if row == k {
                    k2.to_string()
                } else if row == k2 {
                    k.to_string()
                } else {
                    row.clone()
                };
                ((row, *n), *v)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use forcing_core::{antichain_check, build_generic, AntichainVerdict};

    fn bit(row: &str, n: u64, v: bool) -> ((String, u64), bool) {
        ((row.to_string(), n), v)
    }

    #[test]
    fn reverse_inclusion_order() {
        let notion = CohenNotion::new(&["i"]);
        let small = CohenCond::from_bits([bit("i", 0, true)]);
        let big = CohenCond::from_bits([bit("i", 0, true), bit("i", 1, false)]);
        assert!(notion.leq(&big, &small));
        assert!(!notion.leq(&small, &big));
        assert!(notion.leq(&small, &notion.top()));
    }

    #[test]
    fn antichain_verdicts_match_assignment_conflicts() {
        let notion = CohenNotion::new(&["r"]);
        let p0 = CohenCond::from_bits([bit("r", 0, false)]);
        let p1 = CohenCond::from_bits([bit("r", 0, true)]);
        let q1 = CohenCond::from_bits([bit("r", 1, true)]);
        assert!(matches!(
            antichain_check(&notion, &[p0.clone(), p1], 8, 1),
            AntichainVerdict::Antichain
        ));
        match antichain_check(&notion, &[p0.clone(), q1.clone()], 8, 1) {
            AntichainVerdict::NotAntichain { witness, .. } => {
                assert_eq!(witness, p0.merge(&q1).unwrap())
            }
            other => panic!("expected a compatible pair, got {other:?}"),
        }
    }

    #[test]
    fn partial_sum_of_decided_bits() {
        let notion = CohenNotion::new(&["xi"]);
        let denses: Vec<BitDecided> =
            (1..=3).map(|n| BitDecided { row: "xi".into(), n }).collect();
        let refs: Vec<&dyn DenseSet<CohenNotion>> =
            denses.iter().map(|d| d as &dyn DenseSet<CohenNotion>).collect();
        let start = CohenCond::from_bits([bit("xi", 1, true), bit("xi", 3, true)]);
        let cert = build_generic(&notion, &refs, &start, 16).unwrap();
        // bits 1..3 = 1,0,1 → 1/2 + 1/8 = 5/8
        let a = cohen_real(&cert, "xi", 3).unwrap();
        assert_eq!(a, BigRational::new(BigInt::from(5), BigInt::from(8)));
        // asking beyond the decided range reports how much is decided
        match cohen_real(&cert, "xi", 64) {
            Err(ClassicError::UndecidedBits { decided: 3, requested: 64 }) => {}
            other => panic!("expected UNDECIDED_BITS, got {other:?}"),
        }
    }

    #[test]
    fn row_swap_is_an_order_involution() {
        let notion = CohenNotion::new(&["k", "k2", "m"]);
        let p = CohenCond::from_bits([bit("k", 0, true), bit("m", 2, false)]);
        let swapped = row_swap(&p, "k", "k2");
        assert_eq!(swapped.get("k2", 0), Some(true));
        assert_eq!(swapped.get("k", 0), None);
        assert_eq!(swapped.get("m", 2), Some(false));
        assert_eq!(row_swap(&swapped, "k", "k2"), p);
        // order preserved
        let q = notion.extend_sampled(&p, 9);
        assert!(notion.leq(&row_swap(&q, "k", "k2"), &row_swap(&p, "k", "k2")));
    }
}
