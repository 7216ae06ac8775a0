//! The genericity criterion for increasing sequences: a sequence comes
//! from a generic filter exactly when it is almost contained in every
//! measure-one set — all but finitely many entries land inside each one.
//! At desk scale the quantifier runs over the supplied handles and the
//! tolerated finite head is bounded by a horizon.

use crate::error::PrikryError;
use crate::handle::SetHandle;

/// Per-handle answer: the least viable entry point `m`, or the proof that
/// none exists below the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MathiasVerdict {
    /// Every entry from index `m` on lies in the handle, and `m` is least.
    Met { m: usize },
    /// No `m ≤ horizon` works; `last_violation` is the largest offending
    /// index.
    Fail { last_violation: usize },
}

/// Checks the almost-containment criterion for `c` against each handle.
/// `c` must be strictly increasing; an empty `c` is met at `m = 0` by
/// everything.
pub fn mathias_check(
    c: &[u64],
    handles: &[SetHandle],
    horizon: usize,
) -> Result<Vec<MathiasVerdict>, PrikryError> {
    if c.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PrikryError::Config(format!("sequence {c:?} is not strictly increasing")));
    }
    Ok(handles
        .iter()
        .map(|a| {
            let last_violation = c.iter().enumerate().rev().find(|(_, x)| !a.contains(**x)).map(|(n, _)| n);
            match last_violation {
                None => MathiasVerdict::Met { m: 0 },
                Some(n) if n < horizon => MathiasVerdict::Met { m: n + 1 },
                Some(n) => MathiasVerdict::Fail { last_violation: n },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(src: &str) -> SetHandle {
        SetHandle::parse(src).unwrap()
    }

    #[test]
    fn the_three_worked_instances() {
        // Entry 2 misses [3,inf); everything later is inside, so m = 1.
        let c: Vec<u64> = vec![2, 4, 6, 8, 10];
        let out = mathias_check(&c, &[h("[3,inf)")], 3).unwrap();
        assert_eq!(out, vec![MathiasVerdict::Met { m: 1 }]);

        // The whole cardinal tolerates everything from the start.
        let out = mathias_check(&c, &[h("[0,inf)")], 3).unwrap();
        assert_eq!(out, vec![MathiasVerdict::Met { m: 0 }]);

        // An all-odd sequence never enters the evens.
        let odds: Vec<u64> = vec![1, 3, 5, 7, 9];
        let out = mathias_check(&odds, &[h("even")], 3).unwrap();
        assert_eq!(out, vec![MathiasVerdict::Fail { last_violation: 4 }]);
    }

    #[test]
    fn several_handles_answer_independently() {
        let c: Vec<u64> = vec![1, 2, 4, 6, 8];
        let out = mathias_check(&c, &[h("even"), h("[2,inf)"), h("odd")], 2).unwrap();
        assert_eq!(
            out,
            vec![
                MathiasVerdict::Met { m: 1 },
                MathiasVerdict::Met { m: 1 },
                MathiasVerdict::Fail { last_violation: 4 },
            ]
        );
    }

    #[test]
    fn the_horizon_is_a_hard_cutoff() {
        let c: Vec<u64> = vec![0, 2, 5, 7, 9];
        // Last violation of the odds is index 1 (entry 2): m = 2.
        assert_eq!(mathias_check(&c, &[h("odd")], 2).unwrap(), vec![MathiasVerdict::Met { m: 2 }]);
        assert_eq!(
            mathias_check(&c, &[h("odd")], 1).unwrap(),
            vec![MathiasVerdict::Fail { last_violation: 1 }]
        );
    }

    #[test]
    fn empty_and_broken_sequences() {
        assert_eq!(mathias_check(&[], &[h("even")], 0).unwrap(), vec![MathiasVerdict::Met { m: 0 }]);
        assert!(mathias_check(&[3, 3], &[h("even")], 0).is_err());
        assert!(mathias_check(&[5, 2], &[h("even")], 0).is_err());
    }
}
