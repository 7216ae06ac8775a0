//! Random and amoeba forcing over finite interval unions.
//!
//! Conditions are the countable dense family the c.c.c. argument works
//! with: finite unions of closed rational intervals, of positive measure
//! (random) or measure > 1 (amoeba), ordered by inclusion. Compatibility is
//! decided exactly: K and C share an extension iff μ(K ∩ C) clears the
//! notion's floor.

use std::fmt;

use forcing_core::{DenseSet, Failure, ForcingNotion, mix64};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dyadic::{semimetric, DyadicUnion};
use crate::error::MeasureError;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random-forcing condition: a union with μ(K) > 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RandomCond(DyadicUnion);

impl RandomCond {
    pub fn new(k: DyadicUnion) -> Result<Self, MeasureError> {
        if k.measure() <= rat(0, 1) {
            return Err(MeasureError::Config(format!(
                "random condition needs positive measure, got {}",
                k.measure()
            )));
        }
        Ok(RandomCond(k))
    }

    pub fn set(&self) -> &DyadicUnion {
        &self.0
    }
}

impl fmt::Display for RandomCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An amoeba condition: a union with μ(K) > 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AmoebaCond(DyadicUnion);

impl AmoebaCond {
    pub fn new(k: DyadicUnion) -> Result<Self, MeasureError> {
        if k.measure() <= rat(1, 1) {
            return Err(MeasureError::Config(format!(
                "amoeba condition needs measure > 1, got {}",
                k.measure()
            )));
        }
        Ok(AmoebaCond(k))
    }

    pub fn set(&self) -> &DyadicUnion {
        &self.0
    }
}

impl fmt::Display for AmoebaCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shrinks `k` toward one half of its span, keeping measure above `floor`.
fn sampled_shrink(k: &DyadicUnion, seed: u64, floor: &BigRational) -> DyadicUnion {
    let (lo, _) = k.intervals().first().expect("conditions are nonempty").clone();
    let (_, hi) = k.intervals().last().expect("conditions are nonempty").clone();
    let mid = (&lo + &hi) / rat(2, 1);
    let left = k
        .intersect(&DyadicUnion::interval(lo, mid.clone()).expect("lo <= mid"));
    let right = k.intersect(&DyadicUnion::interval(mid, hi).expect("mid <= hi"));
    let (first, second) =
        if mix64(seed) % 2 == 0 { (left, right) } else { (right, left) };
    if &first.measure() > floor {
        first
    } else if &second.measure() > floor {
        second
    } else {
        k.clone() // too thin to halve; stay put
    }
}

/// Random forcing rooted at a base union (default [0,1]).
pub struct RandomNotion {
    pub base: RandomCond,
}

impl RandomNotion {
    pub fn unit() -> Self {
        let k = DyadicUnion::interval(rat(0, 1), rat(1, 1)).unwrap();
        RandomNotion { base: RandomCond::new(k).unwrap() }
    }
}

impl ForcingNotion for RandomNotion {
    type Cond = RandomCond;

    fn top(&self) -> RandomCond {
        self.base.clone()
    }

    fn leq(&self, q: &RandomCond, p: &RandomCond) -> bool {
        q.0.is_subset(&p.0)
    }

    fn encode(&self, p: &RandomCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &RandomCond, seed: u64) -> RandomCond {
        RandomCond(sampled_shrink(&p.0, seed, &rat(0, 1)))
    }

    /// Exact: compatible iff μ(K ∩ C) > 0, witnessed by the intersection.
    fn decide_compat(&self, p: &RandomCond, q: &RandomCond) -> Option<Option<RandomCond>> {
        let meet = p.0.intersect(&q.0);
        Some(if meet.measure() > rat(0, 1) { Some(RandomCond(meet)) } else { None })
    }
}

/// Amoeba forcing rooted at a base union with μ > 1 (default [0,2]).
pub struct AmoebaNotion {
    pub base: AmoebaCond,
}

impl AmoebaNotion {
    pub fn double_unit() -> Self {
        let k = DyadicUnion::interval(rat(0, 1), rat(2, 1)).unwrap();
        AmoebaNotion { base: AmoebaCond::new(k).unwrap() }
    }
}

impl ForcingNotion for AmoebaNotion {
    type Cond = AmoebaCond;

    fn top(&self) -> AmoebaCond {
        self.base.clone()
    }

    fn leq(&self, q: &AmoebaCond, p: &AmoebaCond) -> bool {
        q.0.is_subset(&p.0)
    }

    fn encode(&self, p: &AmoebaCond) -> String {
        p.to_string()
    }

    fn extend_sampled(&self, p: &AmoebaCond, seed: u64) -> AmoebaCond {
        AmoebaCond(sampled_shrink(&p.0, seed, &rat(1, 1)))
    }

    /// Exact: a common extension below both exists iff the intersection
    /// itself still has measure > 1.
    fn decide_compat(&self, p: &AmoebaCond, q: &AmoebaCond) -> Option<Option<AmoebaCond>> {
        let meet = p.0.intersect(&q.0);
        Some(if meet.measure() > rat(1, 1) { Some(AmoebaCond(meet)) } else { None })
    }
}

/// The dense set {K : ∃n, μ(K ∩ Uₙ) = 0} for a shrinking list of open
/// covers. The refiner picks the first n with μ(K ∩ Uₙ) < μ(K)/2 and
/// removes it, so the output keeps more than half of K's measure.
pub struct AvoidNull {
    pub covers: Vec<DyadicUnion>,
}

impl DenseSet<RandomNotion> for AvoidNull {
    fn id(&self) -> String {
        format!("avoid-null({} covers)", self.covers.len())
    }

    fn member(&self, _: &RandomNotion, k: &RandomCond) -> bool {
        self.covers.iter().any(|u| k.0.intersect(u).measure() == rat(0, 1))
    }

    fn refine(&self, _: &RandomNotion, k: &RandomCond) -> Result<RandomCond, Failure> {
        let half = k.0.measure() / rat(2, 1);
        for u in &self.covers {
            if k.0.intersect(u).measure() < half {
                let rest = k.0.difference(u);
                return Ok(RandomCond::new(rest).expect("kept more than half the measure"));
            }
        }
        Err(MeasureError::InsufficientCover(format!(
            "all {} covers meet the condition in measure >= {half}",
            self.covers.len()
        ))
        .into())
    }
}

/// The amoeba analog: {K : μ(K ∩ B) = 0} for a null-target B. Removal must
/// leave measure > 1, i.e. μ(K ∩ B) < μ(K) − 1.
pub struct AmoebaAvoid {
    pub b: DyadicUnion,
}

impl DenseSet<AmoebaNotion> for AmoebaAvoid {
    fn id(&self) -> String {
        format!("amoeba-avoid({})", self.b)
    }

    fn member(&self, _: &AmoebaNotion, k: &AmoebaCond) -> bool {
        k.0.intersect(&self.b).measure() == rat(0, 1)
    }

    fn refine(&self, _: &AmoebaNotion, k: &AmoebaCond) -> Result<AmoebaCond, Failure> {
        let removed = k.0.intersect(&self.b).measure();
        if removed < k.0.measure() - rat(1, 1) {
            let rest = k.0.difference(&self.b);
            return Ok(AmoebaCond::new(rest).expect("removal left measure > 1"));
        }
        Err(MeasureError::InsufficientCover(format!(
            "removing μ = {removed} from μ = {} would drop below 1",
            k.0.measure()
        ))
        .into())
    }
}

/// The compatibility witness inside a semimetric ball: for 2ε < μ(K₀), any
/// two unions within ε of K₀ intersect in measure ≥ μ(K₀) − 2ε > 0. Returns
/// the intersection and that exact lower bound.
pub fn ccc_witness(
    k0: &DyadicUnion,
    eps: &BigRational,
    k: &DyadicUnion,
    c: &DyadicUnion,
) -> Result<(DyadicUnion, BigRational), MeasureError> {
    if rat(2, 1) * eps >= k0.measure() {
        return Err(MeasureError::Config(format!(
            "need 2ε < μ(K₀): 2·{eps} vs {}",
            k0.measure()
        )));
    }
    for (name, cand) in [("K", k), ("C", c)] {
        let d = semimetric(cand, k0);
        if &d >= eps {
            return Err(MeasureError::Config(format!(
                "{name} is not within ε of K₀: d = {d} >= {eps}"
            )));
        }
    }
    let meet = k.intersect(c);
    let bound = k0.measure() - rat(2, 1) * eps;
    assert!(
        meet.measure() >= bound,
        "semimetric ball argument failed: μ(K∩C) = {} < {bound}",
        meet.measure()
    );
    Ok((meet, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use forcing_core::build_generic;

    fn u(ivs: &[(i64, i64, i64)]) -> DyadicUnion {
        DyadicUnion::from_intervals(ivs.iter().map(|&(a, b, d)| (rat(a, d), rat(b, d))))
            .unwrap()
    }

    #[test]
    fn compatibility_is_exact() {
        let n = RandomNotion::unit();
        let k = RandomCond::new(u(&[(0, 1, 2)])).unwrap();
        let c = RandomCond::new(u(&[(1, 2, 2)])).unwrap();
        // the closed sets share only the point 1/2: measure zero, no
        assert_eq!(n.decide_compat(&k, &c), Some(None));
        assert_eq!(n.decide_compat(&k, &k), Some(Some(k.clone())));
        let c2 = RandomCond::new(u(&[(1, 3, 4)])).unwrap();
        let w = n.decide_compat(&k, &c2).unwrap().unwrap();
        assert_eq!(w.set(), &u(&[(1, 2, 4)]));
    }

    #[test]
    fn avoid_null_refiner_follows_the_proof() {
        let n = RandomNotion::unit();
        let covers: Vec<DyadicUnion> =
            (0..6).map(|i| u(&[(0, 1, 1 << i)])).collect();
        let dense = AvoidNull { covers };
        let k0 = n.top();
        // first cover small enough: μ(K₀ ∩ [0,1/4]) = 1/4 < 1/2 at n = 2
        let refined = dense.refine(&n, &k0).unwrap();
        assert_eq!(refined.set(), &u(&[(1, 4, 4)]));
        assert!(dense.member(&n, &refined));

        // covers disjoint from K₀: the condition is already a member and
        // the refiner keeps it whole
        let far = AvoidNull { covers: vec![u(&[(5, 6, 1)])] };
        assert!(far.member(&n, &k0));
        assert_eq!(far.refine(&n, &k0).unwrap().set(), k0.set());

        // K₀ inside every cover: honest exhaustion
        let engulf = AvoidNull { covers: vec![u(&[(0, 1, 1)]), u(&[(-1, 2, 1)])] };
        let err = engulf.refine(&n, &k0).unwrap_err();
        assert_eq!(err.code, "INSUFFICIENT_COVER");
    }

    #[test]
    fn amoeba_keeps_its_floor() {
        let n = AmoebaNotion::double_unit();
        let small = AmoebaAvoid { b: u(&[(0, 1, 4)]) };
        let refined = small.refine(&n, &n.top()).unwrap();
        assert_eq!(refined.set(), &u(&[(1, 8, 4)]));
        assert!(refined.set().measure() > rat(1, 1));

        // removing measure : μ(K)−1 exactly is already too much
        let big = AmoebaAvoid { b: u(&[(0, 1, 1)]) };
        let err = big.refine(&n, &n.top()).unwrap_err();
        assert_eq!(err.code, "INSUFFICIENT_COVER");
    }

    #[test]
    fn ccc_ball_instance() {
        let k0 = u(&[(0, 1, 1)]);
        let eps = rat(1, 4);
        // within ε of K₀
        let k = u(&[(0, 7, 8)]);
        let c = u(&[(1, 8, 8)]);
        let (meet, bound) = ccc_witness(&k0, &eps, &k, &c).unwrap();
        assert_eq!(bound, rat(1, 2));
        assert!(meet.measure() >= bound);

        // precondition violations are config errors
        assert!(ccc_witness(&k0, &rat(1, 2), &k, &c).is_err());
        assert!(ccc_witness(&k0, &eps, &u(&[(2, 3, 1)]), &c).is_err());
    }

    #[test]
    fn generic_run_avoids_every_listed_cover() {
        let n = RandomNotion::unit();
        let d1 = AvoidNull { covers: (0..8).map(|i| u(&[(0, 1, 1 << i)])).collect() };
        let d2 = AvoidNull { covers: (0..8).map(|i| u(&[(7, 8, 8), (0, 1, 1 << i)])).collect() };
        let refs: Vec<&dyn DenseSet<RandomNotion>> = vec![&d1, &d2];
        let cert = build_generic(&n, &refs, &n.top(), 8).unwrap();
        assert!(cert.tip().set().measure() > rat(0, 1));
        assert!(d1.member(&n, cert.tip()) && d2.member(&n, cert.tip()));
    }
}
