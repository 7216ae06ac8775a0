//! Finite unions of closed rational intervals with exact measure.
//!
//! The canonical form is a sorted list of intervals [aᵢ,bᵢ] with aᵢ ≤ bᵢ and
//! bᵢ < a_{i+1}; touching or overlapping inputs are merged. Intersections
//! and unions are pointwise exact on closed sets. `difference` returns the
//! *closure* of the set difference — the only reading that keeps the result
//! in the same representation — which agrees with the true difference up to
//! a finite set of endpoints and is therefore exact in measure.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::MeasureError;

fn zero() -> BigRational {
    BigRational::from_integer(BigInt::from(0))
}

/// A canonical finite union of closed rational intervals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct DyadicUnion {
    ivs: Vec<(BigRational, BigRational)>,
}

impl DyadicUnion {
    pub fn empty() -> Self {
        DyadicUnion::default()
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Result<Self, MeasureError> {
        if lo > hi {
            return Err(MeasureError::Config(format!("interval [{lo},{hi}] has lo > hi")));
        }
        Ok(DyadicUnion { ivs: vec![(lo, hi)] })
    }

    /// Builds the canonical union from intervals in any order, merging
    /// overlaps and touching endpoints.
    pub fn from_intervals<I>(intervals: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (BigRational, BigRational)>,
    {
        let mut ivs: Vec<(BigRational, BigRational)> = Vec::new();
        for (lo, hi) in intervals {
            if lo > hi {
                return Err(MeasureError::Config(format!("interval [{lo},{hi}] has lo > hi")));
            }
            ivs.push((lo, hi));
        }
        ivs.sort();
        let mut merged: Vec<(BigRational, BigRational)> = Vec::new();
        for (lo, hi) in ivs {
            match merged.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi => {
                    if hi > *last_hi {
                        *last_hi = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        Ok(DyadicUnion { ivs: merged })
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    /// Exact Lebesgue measure Σ (bᵢ − aᵢ).
    pub fn measure(&self) -> BigRational {
        self.ivs.iter().fold(zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    pub fn contains_point(&self, x: &BigRational) -> bool {
        self.ivs.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    pub fn union(&self, other: &DyadicUnion) -> DyadicUnion {
        DyadicUnion::from_intervals(self.ivs.iter().chain(&other.ivs).cloned())
            .expect("canonical inputs stay valid")
    }

    /// Pointwise-exact intersection of closed sets (degenerate single-point
    /// intervals are kept).
    pub fn intersect(&self, other: &DyadicUnion) -> DyadicUnion {
        let mut out = Vec::new();
        for (a, b) in &self.ivs {
            for (c, d) in &other.ivs {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        DyadicUnion::from_intervals(out).expect("intersections are ordered")
    }

    /// Closure of the set difference; exact in measure.
    pub fn difference(&self, other: &DyadicUnion) -> DyadicUnion {
        let mut out = Vec::new();
        for (a, b) in &self.ivs {
            let mut pieces = vec![(a.clone(), b.clone())];
            for (c, d) in &other.ivs {
                let mut next = Vec::new();
                for (lo, hi) in pieces {
                    if d < &lo || c > &hi {
                        next.push((lo, hi));
                        continue;
                    }
                    // strict comparisons drop empty remainders, so removing
                    // an interval entirely leaves nothing rather than its
                    // endpoint shadows
                    if &lo < c {
                        next.push((lo.clone(), c.clone()));
                    }
                    if d < &hi {
                        next.push((d.clone(), hi.clone()));
                    }
                }
                pieces = next;
            }
            out.extend(pieces);
        }
        DyadicUnion::from_intervals(out).expect("difference pieces are ordered")
    }

    /// μ-exact symmetric difference (closure form).
    pub fn sym_diff(&self, other: &DyadicUnion) -> DyadicUnion {
        self.difference(other).union(&other.difference(self))
    }

    /// Pointwise subset test on closed sets: every interval must fit inside
    /// a single interval of `other` (canonical lists cannot bridge gaps).
    pub fn is_subset(&self, other: &DyadicUnion) -> bool {
        self.ivs
            .iter()
            .all(|(a, b)| other.ivs.iter().any(|(c, d)| c <= a && b <= d))
    }

    /// Grows every interval by δ on both sides (then re-canonicalizes).
    pub fn inflate(&self, delta: &BigRational) -> DyadicUnion {
        DyadicUnion::from_intervals(
            self.ivs.iter().map(|(lo, hi)| (lo - delta, hi + delta)),
        )
        .expect("inflation keeps lo <= hi")
    }
}

/// d(K, K') = μ(K △ K'): the semimetric under which the finite unions are
/// dense among conditions, giving the c.c.c. argument its countable net.
pub fn semimetric(k: &DyadicUnion, k2: &DyadicUnion) -> BigRational {
    k.sym_diff(k2).measure()
}

impl fmt::Display for DyadicUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ivs.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> =
            self.ivs.iter().map(|(lo, hi)| format!("[{lo},{hi}]")).collect();
        write!(f, "{}", parts.join("∪"))
    }
}
