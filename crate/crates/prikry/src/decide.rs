//! Deciding a statement without growing the stem.
//!
//! Given a condition `(s, A)` and an external judge of "forces φ", this
//! module shrinks `A` to a `B` such that `(s, B)` already settles φ — the
//! stem never moves. The route: choose per-stem witness side sets where φ
//! is decided and diagonally intersect them (one reduction), then split
//! each one-point extension's side set by the verdict it produces, fit the
//! split into the handle algebra, keep the measure-one cell, and diagonally
//! intersect again. What remains is homogeneous enough that a recursive
//! certificate can push any verdict found at a deeper stem down to `(s, B)`
//! one level at a time.
//!
//! The judge is partial and untrusted: every probe lands in an answer map
//! that is audited for persistence (a decided verdict may never flip on an
//! extension), and a violation is reported with the offending pair.

use crate::cond::{dense_reduce, DenseReduction, PrikryCond};
use crate::error::PrikryError;
use crate::handle::SetHandle;
use crate::oracle::{Decision, MeasureOracle};
use std::collections::BTreeMap;

/// What a φ-judge can say about one condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PhiVerdict {
    Forces,
    ForcesNot,
    Neither,
}

impl PhiVerdict {
    pub fn label(self) -> u8 {
        match self {
            PhiVerdict::Forces => 0,
            PhiVerdict::ForcesNot => 1,
            PhiVerdict::Neither => 2,
        }
    }

    fn from_label(l: u8) -> Self {
        match l {
            0 => PhiVerdict::Forces,
            1 => PhiVerdict::ForcesNot,
            _ => PhiVerdict::Neither,
        }
    }

    pub fn decided(self) -> bool {
        self != PhiVerdict::Neither
    }
}

impl std::fmt::Display for PhiVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhiVerdict::Forces => "FORCES",
            PhiVerdict::ForcesNot => "FORCES_NOT",
            PhiVerdict::Neither => "NEITHER",
        })
    }
}

/// External judge of one fixed statement. Implementations must be
/// persistent — a decided verdict holds on every extension — and this is
/// audited, not assumed.
pub trait PhiOracle {
    fn decide(&self, cond: &PrikryCond) -> PhiVerdict;
    fn name(&self) -> String {
        "phi".into()
    }
}

/// Indexed judge for a name: `decide(alpha, cond)` judges "alpha is in the
/// named set".
pub trait NameOracle {
    fn decide(&self, alpha: u64, cond: &PrikryCond) -> PhiVerdict;
    fn name(&self) -> String {
        "name".into()
    }
}

/// A [`NameOracle`] pinned at one index, viewed as a single statement.
pub struct AtIndex<'a> {
    pub alpha: u64,
    pub inner: &'a dyn NameOracle,
}

impl PhiOracle for AtIndex<'_> {
    fn decide(&self, cond: &PrikryCond) -> PhiVerdict {
        self.inner.decide(self.alpha, cond)
    }

    fn name(&self) -> String {
        format!("{}[{}]", self.inner.name(), self.alpha)
    }
}

/// Search bounds. Everything the decision procedure looks at is limited by
/// these: stems grow by at most `max_stem` points, each side set is probed
/// at its first `probes` members, split patterns are fitted with periods up
/// to `fit_modulus` and then re-checked on `verify` further members.
#[derive(Debug, Clone, Copy)]
pub struct DecideCaps {
    pub max_stem: usize,
    pub probes: usize,
    pub fit_modulus: u64,
    pub verify: usize,
}

impl Default for DecideCaps {
    fn default() -> Self {
        DecideCaps { max_stem: 2, probes: 12, fit_modulus: 6, verify: 6 }
    }
}

impl DecideCaps {
    fn validate(&self) -> Result<(), PrikryError> {
        if self.max_stem == 0 || self.max_stem > 3 {
            return Err(PrikryError::Config(format!(
                "max_stem {} outside 1..=3 (index families grow combinatorially)",
                self.max_stem
            )));
        }
        if self.probes < 4 || self.probes > 64 {
            return Err(PrikryError::Config(format!("probes {} outside 4..=64", self.probes)));
        }
        if self.fit_modulus == 0 || self.fit_modulus > 12 {
            return Err(PrikryError::Config(format!("fit_modulus {} outside 1..=12", self.fit_modulus)));
        }
        if self.verify == 0 || self.verify > 64 {
            return Err(PrikryError::Config(format!("verify {} outside 1..=64", self.verify)));
        }
        Ok(())
    }
}

/// The measure-one cell of a one-point split, with the verdict it carries.
#[derive(Debug, Clone)]
pub struct SplitCell {
    /// 0 = the cell's extensions force φ, 1 = they force ¬φ, 2 = undecided.
    pub label: u8,
    pub cell: SetHandle,
}

/// How the final verdict was certified.
#[derive(Debug, Clone, Default)]
pub struct DescentReport {
    /// Probe stems whose φ-verdict was recorded.
    pub stems_probed: usize,
    /// The shortest stem extension (relative to the input stem) on which φ
    /// was directly decided; empty when no stem growth was needed — the
    /// input or its reduction already decided.
    pub decided_at: Vec<u64>,
    /// Stems whose one-point split bulk-certifies the verdict one level up.
    pub bulk_certified: Vec<Vec<u64>>,
    /// Prefix pairs audited for persistence.
    pub audited_pairs: usize,
}

/// Result of [`prikry_decide`]: a stem-preserving strengthening that
/// settles the statement, with the evidence that led there.
#[derive(Debug, Clone)]
pub struct DecideOutcome {
    pub cond: PrikryCond,
    pub verdict: PhiVerdict,
    /// φ was already decided at the input; nothing was shrunk.
    pub direct: bool,
    pub reduction: DenseReduction,
    /// One-point split cells, keyed by the full stem they sit above.
    pub splits: BTreeMap<Vec<u64>, SplitCell>,
    pub report: DescentReport,
}

fn probe_cond(stem: &[u64], extra: &[u64], side: &SetHandle) -> Option<PrikryCond> {
    let mut full = stem.to_vec();
    full.extend_from_slice(extra);
    PrikryCond::assemble(full, side.clone()).ok()
}

/// Strictly increasing sequences over `points` (which must be sorted), of
/// length `0..=max_len`, in (length, lexicographic) order.
fn increasing_sequences(points: &[u64], max_len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            let floor = seq.last().copied();
            for &x in points {
                if floor.is_none_or(|f| x > f) {
                    let mut grown = seq.clone();
                    grown.push(x);
                    next.push(grown);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Splits the side set above `full_stem` by the verdict each single added
/// point produces, fits the pattern into the algebra, and returns the cell
/// the oracle measures IN.
fn fit_split(
    oracle: &MeasureOracle,
    phi: &dyn PhiOracle,
    a_star: &SetHandle,
    full_stem: &[u64],
    caps: &DecideCaps,
) -> Result<SplitCell, PrikryError> {
    let ceiling = full_stem.last().map_or(0, |t| t + 1);
    let pool = a_star.drop_below(ceiling)?;
    let probes = pool.members_from(0, caps.probes);
    if probes.len() < 2 {
        return Err(PrikryError::OracleUndecided(format!(
            "probe pool above stem {full_stem:?} dried up — the reduced side set '{pool}' is too thin"
        )));
    }
    let labels: Vec<(u64, u8)> = probes
        .iter()
        .map(|&alpha| {
            let side = a_star.drop_below(alpha + 1)?;
            let q = probe_cond(full_stem, &[alpha], &side).ok_or_else(|| {
                PrikryError::Config(format!("cannot probe point {alpha} above stem {full_stem:?}"))
            })?;
            Ok((alpha, phi.decide(&q).label()))
        })
        .collect::<Result<_, PrikryError>>()?;

    // Fit: explicit labels below a threshold probe, periodic from it on.
    // Smallest threshold first, then smallest period; a candidate counts
    // only if the three cells it induces exactly partition the pool.
    let mut fitted: Option<(usize, u64, [SetHandle; 3])> = None;
    'fit: for j in 0..labels.len() {
        'modulus: for m in 1..=caps.fit_modulus {
            let mut residue_map: BTreeMap<u64, u8> = BTreeMap::new();
            for (alpha, l) in &labels[j..] {
                if *residue_map.entry(alpha % m).or_insert(*l) != *l {
                    continue 'modulus;
                }
            }
            let theta = labels[j].0;
            let mut cells =
                [SetHandle::empty(), SetHandle::empty(), SetHandle::empty()];
            for (alpha, l) in &labels[..j] {
                cells[*l as usize] = cells[*l as usize].union(&SetHandle::interval(*alpha, *alpha)?)?;
            }
            let tail = SetHandle::final_segment(theta)?;
            for (r, l) in &residue_map {
                let class = tail.intersect(&SetHandle::residue(m, *r)?)?;
                cells[*l as usize] = cells[*l as usize].union(&class)?;
            }
            for cell in &mut cells {
                *cell = cell.intersect(&pool)?;
            }
            let mut union = cells[0].union(&cells[1])?.union(&cells[2])?;
            if union != pool {
                continue 'modulus;
            }
            for i in 0..3 {
                for k in i + 1..3 {
                    union = cells[i].intersect(&cells[k])?;
                    if !union.is_empty() {
                        continue 'modulus;
                    }
                }
            }
            // Verify the fitted pattern on fresh members beyond the probes.
            let fresh = pool.members_from(probes.last().unwrap() + 1, caps.verify);
            for &beta in &fresh {
                let side = a_star.drop_below(beta + 1)?;
                let q = probe_cond(full_stem, &[beta], &side).ok_or_else(|| {
                    PrikryError::Config(format!("cannot probe point {beta} above stem {full_stem:?}"))
                })?;
                let actual = phi.decide(&q).label();
                match residue_map.get(&(beta % m)) {
                    Some(l) if *l == actual => {}
                    _ => continue 'modulus,
                }
            }
            fitted = Some((j, m, cells));
            break 'fit;
        }
    }
    let Some((_, _, cells)) = fitted else {
        return Err(PrikryError::OracleUndecided(format!(
            "the verdict pattern above stem {full_stem:?} does not fit the algebra within caps (period ≤ {}, {} probes)",
            caps.fit_modulus, caps.probes
        )));
    };

    let mut measured_in: Vec<u8> = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        if oracle.decide(cell)? == Decision::In {
            measured_in.push(i as u8);
        }
    }
    match measured_in[..] {
        [label] => Ok(SplitCell { label, cell: cells[label as usize].clone() }),
        [] => Err(PrikryError::OracleUndecided(format!(
            "no cell of the split above stem {full_stem:?} is measured IN (cells '{}', '{}', '{}'); extend the decision table",
            cells[0], cells[1], cells[2]
        ))),
        [a, b, ..] => Err(PrikryError::OracleInconsistent(format!(
            "disjoint split cells '{}' and '{}' above stem {full_stem:?} are both measured IN",
            cells[a as usize], cells[b as usize]
        ))),
    }
}

/// Shrinks `p = (s, A)` to `(s, B)` deciding φ, or reports honestly why it
/// cannot: `ORACLE_UNDECIDED` when the caps or the measure table are too
/// weak, `ORACLE_INCONSISTENT` (with the witnessing pair) when the judge
/// contradicts itself.
pub fn prikry_decide(
    oracle: &MeasureOracle,
    p: &PrikryCond,
    phi: &dyn PhiOracle,
    caps: &DecideCaps,
) -> Result<DecideOutcome, PrikryError> {
    caps.validate()?;
    let p = PrikryCond::new(p.stem.clone(), p.side.clone(), oracle)?;

    let direct = phi.decide(&p);
    if direct.decided() {
        return Ok(DecideOutcome {
            cond: p.clone(),
            verdict: direct,
            direct: true,
            reduction: DenseReduction { handle: p.side.clone(), audit: Vec::new() },
            splits: BTreeMap::new(),
            report: DescentReport::default(),
        });
    }

    // First reduction: per extended stem, a witness side set on which φ is
    // decided (searched over the plain tail and its residue refinements),
    // diagonally intersected into one set that works everywhere a witness
    // exists.
    let base_points = p.side.members_from(p.stem_ceiling(), caps.probes);
    if base_points.len() < 2 {
        return Err(PrikryError::Config(format!("side set '{}' is too thin to probe", p.side)));
    }
    let indices: Vec<Vec<u64>> = increasing_sequences(&base_points, caps.max_stem)
        .into_iter()
        .map(|t| {
            let mut w = p.stem.clone();
            w.extend_from_slice(&t);
            w
        })
        .collect();
    let side = p.side.clone();
    let mut chooser = |w: &[u64]| -> Option<SetHandle> {
        let ceiling = w.last().map_or(0, |t| t + 1);
        let base = side.drop_below(ceiling).ok()?;
        let mut candidates = vec![base.clone()];
        for m in 2..=caps.fit_modulus {
            for r in 0..m {
                if let Ok(refined) = base.intersect(&SetHandle::residue(m, r).ok()?) {
                    candidates.push(refined);
                }
            }
        }
        candidates.into_iter().find(|c| {
            !c.is_empty()
                && oracle.decide(c).is_ok_and(|d| d == Decision::In)
                && probe_cond(w, &[], c).is_some_and(|q| phi.decide(&q).decided())
        })
    };
    let mut d_member = |w: &[u64], h: &SetHandle| -> bool {
        probe_cond(w, &[], h).is_some_and(|q| phi.decide(&q).decided())
    };
    let reduction = dense_reduce(oracle, &indices, &mut chooser, &mut d_member)?;
    let a_star = reduction.handle.intersect(&p.side)?.drop_below(p.stem_ceiling())?;
    oracle.require_in(&a_star)?;

    // Second reduction: one-point split cells, diagonally intersected.
    let mut splits: BTreeMap<Vec<u64>, SplitCell> = BTreeMap::new();
    for w in &indices {
        let cell = fit_split(oracle, phi, &a_star, w, caps)?;
        splits.insert(w.clone(), cell);
    }
    let family: Vec<(Vec<u64>, SetHandle)> =
        splits.iter().map(|(w, c)| (w.clone(), c.cell.clone())).collect();
    let b = a_star.intersect(&SetHandle::diagonal(&family)?)?;
    oracle.require_in(&b)?;
    let out = PrikryCond::assemble(p.stem.clone(), b.clone())?;

    // Probe map over stems reachable inside B — starting from the reduced
    // condition itself — with a persistence audit: a decided verdict must
    // never flip on a comparable deeper stem.
    let b_points = b.members_from(p.stem_ceiling(), caps.probes);
    let mut verdicts: BTreeMap<Vec<u64>, PhiVerdict> = BTreeMap::new();
    for t in increasing_sequences(&b_points, caps.max_stem) {
        let side = match t.last() {
            Some(last) => b.drop_below(last + 1)?,
            None => b.clone(),
        };
        let q = probe_cond(&p.stem, &t, &side)
            .ok_or_else(|| PrikryError::Config(format!("cannot probe stem extension {t:?}")))?;
        verdicts.insert(t, phi.decide(&q));
    }
    let mut audited_pairs = 0;
    for (t, vt) in &verdicts {
        for (u, vu) in &verdicts {
            if u.len() > t.len() && u[..t.len()] == t[..] {
                audited_pairs += 1;
                if vt.decided() && vu.decided() && vt != vu {
                    let qt = probe_cond(&p.stem, t, &b.drop_below(t.last().unwrap() + 1)?).unwrap();
                    let qu = probe_cond(&p.stem, u, &b.drop_below(u.last().unwrap() + 1)?).unwrap();
                    return Err(PrikryError::OracleInconsistent(format!(
                        "persistence violation: '{qt}' answers {vt} but its extension '{qu}' answers {vu}"
                    )));
                }
            }
        }
    }

    // The verdict: shortest decided stem wins; every other decided stem
    // must agree (incomparable disagreement means the homogenization was
    // too coarse for these caps).
    let shortest = verdicts
        .iter()
        .filter(|(_, v)| v.decided())
        .min_by_key(|(t, _)| (t.len(), (*t).clone()));
    let Some((t0, v)) = shortest.map(|(t, v)| (t.clone(), *v)) else {
        return Err(PrikryError::OracleUndecided(format!(
            "no stem extension within caps ({} points, length ≤ {}) decides {}",
            caps.probes,
            caps.max_stem,
            phi.name()
        )));
    };
    if let Some((t1, v1)) = verdicts.iter().find(|(_, w)| w.decided() && **w != v) {
        return Err(PrikryError::OracleUndecided(format!(
            "mixed verdicts survive the reduction: {v} at stem {t0:?} but {v1} at stem {t1:?}; raise the caps or refine the table"
        )));
    }

    // Certification down to the bare stem: every undecided probe stem must
    // be covered by a prefix (possibly empty) whose one-point split cell
    // carries the verdict — that cell contains every point B offers there,
    // so the verdict transfers one level down. Split cells labelled with
    // the opposite verdict contradict a decided probe inside them.
    let mut bulk_certified: Vec<Vec<u64>> = Vec::new();
    let mut covered_roots: BTreeMap<Vec<u64>, bool> = BTreeMap::new();
    let cover = |t: &[u64],
                     splits: &mut BTreeMap<Vec<u64>, SplitCell>,
                     covered: &mut BTreeMap<Vec<u64>, bool>,
                     bulk: &mut Vec<Vec<u64>>|
     -> Result<bool, PrikryError> {
        for cut in 0..=t.len() {
            let prefix = &t[..cut];
            if let Some(hit) = covered.get(prefix) {
                if *hit {
                    return Ok(true);
                }
                continue;
            }
            let mut w = p.stem.clone();
            w.extend_from_slice(prefix);
            let cell = match splits.get(&w) {
                Some(c) => c.clone(),
                None => {
                    let c = fit_split(oracle, phi, &a_star, &w, caps)?;
                    splits.insert(w.clone(), c.clone());
                    c
                }
            };
            if cell.label == v.label() {
                covered.insert(prefix.to_vec(), true);
                bulk.push(prefix.to_vec());
                return Ok(true);
            }
            if cell.label <= 1 {
                // A cell carrying the opposite verdict contradicts the
                // decided stem only if that stem runs through it.
                if t0.len() > prefix.len() && t0[..prefix.len()] == prefix[..] {
                    return Err(PrikryError::OracleInconsistent(format!(
                        "the split cell '{}' above stem {w:?} certifies {} although {v} was decided at stem {t0:?} inside it",
                        cell.cell,
                        PhiVerdict::from_label(cell.label)
                    )));
                }
                return Err(PrikryError::OracleUndecided(format!(
                    "the split above stem {w:?} certifies {} while {v} was decided at the incomparable stem {t0:?}; the reduction is too coarse at these caps",
                    PhiVerdict::from_label(cell.label)
                )));
            }
            covered.insert(prefix.to_vec(), false);
        }
        Ok(false)
    };
    for (t, vt) in &verdicts {
        if vt.decided() || t.len() < caps.max_stem {
            continue;
        }
        // A deepest-level undecided stem: some prefix split must certify v.
        if !cover(t, &mut splits, &mut covered_roots, &mut bulk_certified)? {
            return Err(PrikryError::OracleUndecided(format!(
                "the branch at stem {t:?} stays undecided to the stem cap and no split along it certifies {v}"
            )));
        }
    }

    let report = DescentReport {
        stems_probed: verdicts.len(),
        decided_at: t0,
        bulk_certified,
        audited_pairs,
    };
    Ok(DecideOutcome { cond: out, verdict: v, direct: false, reduction, splits, report })
}

/// Outcome of a decision chain: direct extensions `p = p_0 ≥* p_1 ≥* …`,
/// one per index, and the set of indices whose statement the final
/// condition forces positively.
#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub chain: Vec<PrikryCond>,
    pub verdicts: Vec<PhiVerdict>,
    pub table: std::collections::BTreeSet<u64>,
}

/// Decides "alpha is in the named set" for every `alpha < lambda` along a
/// single ≤*-decreasing chain, then re-audits each verdict at the tip.
pub fn decision_chain(
    oracle: &MeasureOracle,
    p: &PrikryCond,
    lambda: u64,
    name: &dyn NameOracle,
    caps: &DecideCaps,
) -> Result<ChainOutcome, PrikryError> {
    if lambda > 64 {
        return Err(PrikryError::Config(format!("chain length {lambda} beyond the desk-scale cap 64")));
    }
    let mut chain = vec![PrikryCond::new(p.stem.clone(), p.side.clone(), oracle)?];
    let mut verdicts = Vec::new();
    let mut table = std::collections::BTreeSet::new();
    for alpha in 0..lambda {
        let current = chain.last().unwrap().clone();
        let judge = AtIndex { alpha, inner: name };
        let out = prikry_decide(oracle, &current, &judge, caps)?;
        if !crate::cond::prikry_leq_star(&out.cond, &current)? {
            return Err(PrikryError::OracleInconsistent(format!(
                "chain step {alpha} broke the direct order: '{}' is not a direct extension of '{}'",
                out.cond, current
            )));
        }
        if out.verdict == PhiVerdict::Forces {
            table.insert(alpha);
        }
        verdicts.push(out.verdict);
        chain.push(out.cond);
    }
    let tip = chain.last().unwrap();
    for (alpha, v) in verdicts.iter().enumerate() {
        let at_tip = name.decide(alpha as u64, tip);
        if at_tip.decided() && at_tip != *v {
            return Err(PrikryError::OracleInconsistent(format!(
                "index {alpha}: the chain decided {v} but the tip '{tip}' answers {at_tip}"
            )));
        }
    }
    Ok(ChainOutcome { chain, verdicts, table })
}
