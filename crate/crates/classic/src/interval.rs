//! Interval Cohen forcing: open intervals with rational endpoints inside a
//! configured root interval, ordered by inclusion. The generic object is the
//! shrinking rational enclosure [sup r, inf s] of the chain.

use std::fmt;

use forcing_core::{DenseSet, Failure, FilterCertificate, ForcingNotion, mix64};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::ClassicError;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An open interval (lo, hi) with exact rational endpoints, lo < hi.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntervalCond {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IntervalCond {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, ClassicError> {
        if lo >= hi {
            return Err(ClassicError::Config(format!(
                "interval needs lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(IntervalCond { lo, hi })
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2, 1)
    }
}

impl fmt::Display for IntervalCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Interval forcing rooted at a fixed base interval (the top condition).
pub struct IntervalNotion {
    pub root: IntervalCond,
}

impl IntervalNotion {
    /// Root (-1, 1): convenient for dense sets around 0.
    pub fn unit_symmetric() -> Self {
        IntervalNotion { root: IntervalCond::new(rat(-1, 1), rat(1, 1)).unwrap() }
    }
}

impl ForcingNotion for IntervalNotion {
    type Cond = IntervalCond;

    fn top(&self) -> IntervalCond {
        self.root.clone()
    }

    fn leq(&self, q: &IntervalCond, p: &IntervalCond) -> bool {
        q.lo >= p.lo && q.hi <= p.hi
    }

    fn encode(&self, p: &IntervalCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &IntervalCond, seed: u64) -> IntervalCond {
        let mid = p.midpoint();
        if mix64(seed) % 2 == 0 {
            IntervalCond { lo: p.lo.clone(), hi: mid }
        } else {
            IntervalCond { lo: mid, hi: p.hi.clone() }
        }
    }

    fn decide_compat(&self, p: &IntervalCond, q: &IntervalCond) -> Option<Option<IntervalCond>> {
        let lo = p.lo.clone().max(q.lo.clone());
        let hi = p.hi.clone().min(q.hi.clone());
        Some(if lo < hi { Some(IntervalCond { lo, hi }) } else { None })
    }
}

/// The dense set D_q of intervals lying entirely left or entirely right of a
/// rational q. Refining through D_q for every rational in a list pins the
/// enclosed real away from each of them.
pub struct AvoidPoint {
    pub q: BigRational,
}

impl DenseSet<IntervalNotion> for AvoidPoint {
    fn id(&self) -> String {
        format!("dq:{}", self.q)
    }

    fn member(&self, _: &IntervalNotion, p: &IntervalCond) -> bool {
        p.hi <= self.q || self.q <= p.lo
    }

    fn refine(&self, notion: &IntervalNotion, p: &IntervalCond) -> Result<IntervalCond, Failure> {
        if self.member(notion, p) {
            return Ok(p.clone());
        }
        // q is interior; take the right part (q, hi) — a deterministic choice
        Ok(IntervalCond { lo: self.q.clone(), hi: p.hi.clone() })
    }
}

/// Dense set of intervals of width < 1/2^n: meeting these for all n makes
/// the enclosure collapse toward a single real.
pub struct ShrinkWidth {
    pub n: u32,
}

impl DenseSet<IntervalNotion> for ShrinkWidth {
    fn id(&self) -> String {
        format!("width:{}", self.n)
    }

    fn member(&self, _: &IntervalNotion, p: &IntervalCond) -> bool {
        p.width() < BigRational::new(BigInt::from(1), BigInt::from(2u64).pow(self.n))
    }

    fn refine(&self, notion: &IntervalNotion, p: &IntervalCond) -> Result<IntervalCond, Failure> {
        let mut q = p.clone();
        while !self.member(notion, &q) {
            q = IntervalCond { lo: q.lo.clone(), hi: q.midpoint() };
        }
        Ok(q)
    }
}

/// The closed rational enclosure [sup lo, inf hi] of the chain.
pub fn enclosure(
    cert: &FilterCertificate<IntervalCond>,
) -> (BigRational, BigRational) {
    let lo = cert.chain.iter().map(|p| p.lo.clone()).max().unwrap();
    let hi = cert.chain.iter().map(|p| p.hi.clone()).min().unwrap();
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use forcing_core::build_generic;

    #[test]
    fn inclusion_order_examples() {
        let n = IntervalNotion::unit_symmetric();
        let whole = IntervalCond::new(rat(0, 1), rat(1, 1)).unwrap();
        let left = IntervalCond::new(rat(0, 1), rat(1, 2)).unwrap();
        let mid = IntervalCond::new(rat(1, 4), rat(3, 4)).unwrap();
        assert!(n.leq(&left, &whole));
        assert!(!n.leq(&mid, &left));
        assert!(IntervalCond::new(rat(1, 2), rat(1, 2)).is_err());
    }

    #[test]
    fn avoiding_a_point_and_enclosing() {
        let n = IntervalNotion::unit_symmetric();
        let d0 = AvoidPoint { q: rat(0, 1) };
        let refined = d0.refine(&n, &n.top()).unwrap();
        // the deterministic choice is the right part (0, 1)
        assert_eq!(refined, IntervalCond::new(rat(0, 1), rat(1, 1)).unwrap());
        assert!(d0.member(&n, &refined));

        let refs: Vec<&dyn DenseSet<IntervalNotion>> = vec![&d0];
        let cert = build_generic(&n, &refs, &n.top(), 8).unwrap();
        let (lo, hi) = enclosure(&cert);
        // everything lies right of 0
        assert!(lo >= rat(0, 1) && hi <= rat(1, 1));
        // width nonincreasing along the chain
        for w in cert.chain.windows(2) {
            assert!(w[1].width() <= w[0].width());
        }
    }

    #[test]
    fn explicit_enclosure_value() {
        let n = IntervalNotion { root: IntervalCond::new(rat(0, 1), rat(1, 1)).unwrap() };
        let inner = IntervalCond::new(rat(1, 4), rat(1, 2)).unwrap();
        let cert = forcing_core::build_generic(&n, &[], &inner, 4).unwrap();
        let (lo, hi) = enclosure(&cert);
        assert_eq!((lo, hi), (rat(1, 4), rat(1, 2)));
    }
}
