//! Repackaging a sequence of small covers into a single summable sequence.
//!
//! Given covers U_0, U_1, … with μ(U_p) < 1/2^{θ(p,0)}, each U_p is sliced
//! into finitely many pieces V_{p,q} with μ(V_{p,q}) < 1/2^{θ(p,q)}, the
//! pieces are slightly inflated to keep them open-ended, and the pairing
//! θ files piece (p,q) into output slot n = θ(p,q). Any point covered by
//! infinitely many U_p is then covered by infinitely many W_n, while
//! Σ μ(W_n) stays dominated by the geometric series Σ 1/2^n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dyadic::DyadicUnion;
use crate::error::MeasureError;

/// The diagonal pairing θ(p,q) = (p+q)(p+q+1)/2 + p — a bijection ℕ²→ℕ
/// with θ(p,q) ≥ p (strict unless p = q = 0) and θ strictly increasing
/// in q along each row.
pub fn theta(p: u64, q: u64) -> u64 {
    let s = p + q;
    s * (s + 1) / 2 + p
}

/// Inverse of the pairing: the unique (p,q) with θ(p,q) = n.
pub fn theta_inv(n: u64) -> (u64, u64) {
    let mut s = 0u64;
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    let p = n - s * (s + 1) / 2;
    (p, s - p)
}

fn pow2_inv(k: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1) << (k as usize))
}

/// Files the covers into slots W_0 … W_horizon with μ(W_n) < 1/2^n.
///
/// Each cover must satisfy the row-head bound μ(U_p) < 1/2^{θ(p,0)}
/// (`PRECONDITION_MEASURE` otherwise). Within a row, cut indices
/// l_{p,0} = 0 ≤ l_{p,1} ≤ … are chosen minimally so that the tail measure
/// from interval l_{p,q} drops below 1/2^{θ(p,q)}; the slice between
/// consecutive cuts becomes V_{p,q}, inflated by δ = slack/(2(count+1)) so
/// the strict bound survives the enlargement. Slices whose slot index
/// θ(p,q) exceeds the horizon are dropped — callers pick the horizon large
/// enough for the rows they care about.
pub fn limsup_cover(
    covers: &[DyadicUnion],
    horizon: u64,
) -> Result<Vec<DyadicUnion>, MeasureError> {
    let mut w = vec![DyadicUnion::empty(); horizon as usize + 1];
    for (p, u) in covers.iter().enumerate() {
        let p = p as u64;
        let head_bound = pow2_inv(theta(p, 0));
        if u.measure() >= head_bound {
            return Err(MeasureError::PreconditionMeasure(format!(
                "cover {p} has measure {} but the construction needs < {head_bound}",
                u.measure()
            )));
        }
        let ivs = u.intervals();
        // suffix sums of interval lengths: tail[l] = Σ_{j≥l} μ(I_j)
        let mut tail = vec![BigRational::zero(); ivs.len() + 1];
        for j in (0..ivs.len()).rev() {
            tail[j] = &tail[j + 1] + (&ivs[j].1 - &ivs[j].0);
        }
        let mut cut = 0usize;
        let mut q = 0u64;
        while theta(p, q) <= horizon {
            let next_bound = pow2_inv(theta(p, q + 1));
            let mut next = cut;
            while tail[next] >= next_bound {
                next += 1;
            }
            let slice = &ivs[cut..next];
            if !slice.is_empty() {
                let v = DyadicUnion::from_intervals(slice.iter().cloned())
                    .expect("slices of a canonical union are well-formed");
                let slot_bound = pow2_inv(theta(p, q));
                let slack = &slot_bound - v.measure();
                let denom = BigRational::from_integer(BigInt::from(2 * (slice.len() as i64 + 1)));
                let inflated = v.inflate(&(slack / denom));
                let n = theta(p, q) as usize;
                assert!(w[n].is_empty(), "the pairing is injective; slot {n} must be free");
                assert!(
                    inflated.measure() < slot_bound,
                    "enlargement must keep the strict bound"
                );
                w[n] = inflated;
            }
            if next >= ivs.len() {
                break;
            }
            cut = next;
            q += 1;
        }
    }
    Ok(w)
}
