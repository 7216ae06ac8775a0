//! First-order satisfaction over a hereditarily finite set, computed two
//! independent ways: by composing the primitive operations (selection,
//! complement, product, domain) and by brute-force model checking.
//!
//! A formula with free variables among `v0 … v{n−1}` evaluates over `x` to
//! the set of n-tuples from `x` that satisfy it. Quantifiers must bind the
//! next fresh variable (`exists v{n} …` when `n` variables are in scope),
//! which keeps every subformula's tuple arity explicit.

use std::fmt;

use forcing_core::HFSet;

use crate::error::GodelError;
use crate::ops::{f2, f3, f6, id_rel, intersect, product_power, union};
use crate::sel::f_sel;

/// First-order formulas in the language {∈, =}, variables `v0, v1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoFormula {
    /// `v_i ∈ v_j`
    In(usize, usize),
    /// `v_i = v_j`
    Eq(usize, usize),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    /// `∃ v_k φ`
    Exists(usize, Box<FoFormula>),
    /// `∀ v_k φ`
    ForAll(usize, Box<FoFormula>),
}

impl FoFormula {
    /// Maximum nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            FoFormula::In(..) | FoFormula::Eq(..) => 0,
            FoFormula::Not(f) => f.quantifier_depth(),
            FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            FoFormula::Exists(_, f) | FoFormula::ForAll(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// One more than the largest free variable index, 0 for sentences.
    pub fn free_arity(&self) -> usize {
        fn walk(f: &FoFormula, bound: &mut Vec<usize>, best: &mut usize) {
            match f {
                FoFormula::In(i, j) | FoFormula::Eq(i, j) => {
                    for v in [*i, *j] {
                        if !bound.contains(&v) {
                            *best = (*best).max(v + 1);
                        }
                    }
                }
                FoFormula::Not(g) => walk(g, bound, best),
                FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                    walk(a, bound, best);
                    walk(b, bound, best);
                }
                FoFormula::Exists(k, g) | FoFormula::ForAll(k, g) => {
                    bound.push(*k);
                    walk(g, bound, best);
                    bound.pop();
                }
            }
        }
        let mut best = 0;
        walk(self, &mut Vec::new(), &mut best);
        best
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoFormula::In(i, j) => write!(f, "v{i} in v{j}"),
            FoFormula::Eq(i, j) => write!(f, "v{i} = v{j}"),
            FoFormula::Not(g) => write!(f, "not ({g})"),
            FoFormula::And(a, b) => write!(f, "({a} and {b})"),
            FoFormula::Or(a, b) => write!(f, "({a} or {b})"),
            FoFormula::Exists(k, g) => write!(f, "exists v{k} ({g})"),
            FoFormula::ForAll(k, g) => write!(f, "forall v{k} ({g})"),
        }
    }
}

/// Hard ceilings keeping evaluation desk-sized: the peak tuple space
/// `|x|^(n + quantifier depth)` and the structural size of `x` itself.
pub const MAX_TUPLE_SPACE: u64 = 4096;
pub const MAX_BASE_NODES: u64 = 4096;

fn entry_checks(phi: &FoFormula, x: &HFSet, n: usize) -> Result<(), GodelError> {
    if n == 0 {
        return Err(GodelError::Config(
            "evaluation needs at least one variable slot (n ≥ 1); a sentence has no tuple set"
                .into(),
        ));
    }
    let free = phi.free_arity();
    if free > n {
        return Err(GodelError::Config(format!(
            "formula mentions v{} free but only v0..v{} are in scope",
            free - 1,
            n - 1
        )));
    }
    let peak = (n + phi.quantifier_depth()) as u32;
    let space = (x.len() as u64).checked_pow(peak);
    if !space.is_some_and(|s| s <= MAX_TUPLE_SPACE) {
        return Err(GodelError::ScaleExceeded(format!(
            "tuple space |x|^{peak} = {}^{peak} exceeds {MAX_TUPLE_SPACE}",
            x.len()
        )));
    }
    if x.node_count() as u64 > MAX_BASE_NODES {
        return Err(GodelError::ScaleExceeded(format!(
            "base set has {} nodes, more than {MAX_BASE_NODES}",
            x.node_count()
        )));
    }
    Ok(())
}

/// Evaluate `phi` over `x` as a set of n-tuples, by composition of the
/// primitive operations.
pub fn val(phi: &FoFormula, x: &HFSet, n: usize) -> Result<HFSet, GodelError> {
    entry_checks(phi, x, n)?;
    go(phi, x, n)
}

fn go(phi: &FoFormula, x: &HFSet, n: usize) -> Result<HFSet, GodelError> {
    match phi {
        FoFormula::In(i, j) => {
            if i == j {
                // Nothing is a member of itself.
                Ok(HFSet::empty())
            } else {
                f_sel(*i, *j, n, &f2(x), x)
            }
        }
        FoFormula::Eq(i, j) => {
            if i == j {
                Ok(product_power(x, n))
            } else {
                f_sel(*i, *j, n, &id_rel(x), x)
            }
        }
        FoFormula::Not(g) => Ok(f3(&product_power(x, n), &go(g, x, n)?)),
        FoFormula::And(a, b) => Ok(intersect(&go(a, x, n)?, &go(b, x, n)?)),
        FoFormula::Or(a, b) => Ok(union(&go(a, x, n)?, &go(b, x, n)?)),
        FoFormula::Exists(k, g) => {
            binder_check(*k, n)?;
            // Tuples are left-nested, so an (n+1)-tuple is the pair
            // (n-tuple, last coordinate) and ∃ is exactly the domain.
            Ok(f6(&go(g, x, n + 1)?))
        }
        FoFormula::ForAll(k, g) => {
            binder_check(*k, n)?;
            let inner = go(g, x, n + 1)?;
            let exists_failing = f6(&f3(&product_power(x, n + 1), &inner));
            Ok(f3(&product_power(x, n), &exists_failing))
        }
    }
}

fn binder_check(k: usize, n: usize) -> Result<(), GodelError> {
    if k != n {
        return Err(GodelError::Config(format!(
            "quantifier must bind the next fresh variable v{n}, not v{k}; rename bound variables"
        )));
    }
    Ok(())
}

/// Independent oracle: enumerate every assignment of `x`-elements to
/// `v0..v{n−1}` and test satisfaction recursively.
pub fn direct_modelcheck(phi: &FoFormula, x: &HFSet, n: usize) -> Result<HFSet, GodelError> {
    entry_checks(phi, x, n)?;
    let elems: Vec<HFSet> = x.iter().cloned().collect();
    let mut out = HFSet::empty();
    if elems.is_empty() {
        return Ok(out);
    }
    let mut counters = vec![0usize; n];
    loop {
        let mut env: Vec<HFSet> = counters.iter().map(|c| elems[*c].clone()).collect();
        if sat(phi, &mut env, &elems)? {
            out.insert(HFSet::tuple(&env));
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
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

fn sat(phi: &FoFormula, env: &mut Vec<HFSet>, elems: &[HFSet]) -> Result<bool, GodelError> {
    match phi {
        FoFormula::In(i, j) => Ok(env[*j].contains(&env[*i])),
        FoFormula::Eq(i, j) => Ok(env[*i] == env[*j]),
        FoFormula::Not(g) => Ok(!sat(g, env, elems)?),
        FoFormula::And(a, b) => Ok(sat(a, env, elems)? && sat(b, env, elems)?),
        FoFormula::Or(a, b) => Ok(sat(a, env, elems)? || sat(b, env, elems)?),
        FoFormula::Exists(k, g) => {
            binder_check(*k, env.len())?;
            for e in elems {
                env.push(e.clone());
                let hit = sat(g, env, elems)?;
                env.pop();
                if hit {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FoFormula::ForAll(k, g) => {
            binder_check(*k, env.len())?;
            for e in elems {
                env.push(e.clone());
                let hit = sat(g, env, elems)?;
                env.pop();
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Parse the ASCII formula grammar:
///
/// ```text
/// formula := or
/// or      := and ("or" and)*
/// and     := unary ("and" unary)*
/// unary   := "not" unary | "exists" var unary | "forall" var unary | atom
/// atom    := "(" formula ")" | var ("in" | "=") var
/// var     := "v" digits
/// ```
pub fn parse_fo(text: &str) -> Result<FoFormula, GodelError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let phi = parse_or(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(GodelError::Config(format!(
            "trailing input after formula: {:?}",
            tokens[pos]
        )));
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(usize),
    In,
    Eq,
    Not,
    And,
    Or,
    Exists,
    ForAll,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, GodelError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '=' => {
                chars.next();
                toks.push(Tok::Eq);
            }
            '&' => {
                chars.next();
                toks.push(Tok::And);
            }
            '|' => {
                chars.next();
                toks.push(Tok::Or);
            }
            '!' => {
                chars.next();
                toks.push(Tok::Not);
            }
            _ if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while chars
                    .peek()
                    .is_some_and(|d| d.is_ascii_alphanumeric())
                {
                    word.push(chars.next().unwrap());
                }
                toks.push(match word.as_str() {
                    "in" => Tok::In,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "exists" => Tok::Exists,
                    "forall" => Tok::ForAll,
                    w if w.starts_with('v') && w.len() > 1 => {
                        let idx = w[1..].parse::<usize>().map_err(|_| {
                            GodelError::Config(format!("bad variable token {w:?}"))
                        })?;
                        Tok::Var(idx)
                    }
                    w => {
                        return Err(GodelError::Config(format!("unknown token {w:?}")));
                    }
                });
            }
            other => {
                return Err(GodelError::Config(format!(
                    "unexpected character {other:?} in formula"
                )));
            }
        }
    }
    Ok(toks)
}

fn parse_or(toks: &[Tok], pos: &mut usize) -> Result<FoFormula, GodelError> {
    let mut lhs = parse_and(toks, pos)?;
    while toks.get(*pos) == Some(&Tok::Or) {
        *pos += 1;
        let rhs = parse_and(toks, pos)?;
        lhs = FoFormula::Or(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_and(toks: &[Tok], pos: &mut usize) -> Result<FoFormula, GodelError> {
    let mut lhs = parse_unary(toks, pos)?;
    while toks.get(*pos) == Some(&Tok::And) {
        *pos += 1;
        let rhs = parse_unary(toks, pos)?;
        lhs = FoFormula::And(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_unary(toks: &[Tok], pos: &mut usize) -> Result<FoFormula, GodelError> {
    match toks.get(*pos) {
        Some(Tok::Not) => {
            *pos += 1;
            Ok(FoFormula::Not(Box::new(parse_unary(toks, pos)?)))
        }
        Some(Tok::Exists) | Some(Tok::ForAll) => {
            let is_exists = toks[*pos] == Tok::Exists;
            *pos += 1;
            let Some(Tok::Var(k)) = toks.get(*pos).cloned() else {
                return Err(GodelError::Config(
                    "quantifier must be followed by a variable".into(),
                ));
            };
            *pos += 1;
            let body = Box::new(parse_unary(toks, pos)?);
            Ok(if is_exists {
                FoFormula::Exists(k, body)
            } else {
                FoFormula::ForAll(k, body)
            })
        }
        _ => parse_atom(toks, pos),
    }
}

fn parse_atom(toks: &[Tok], pos: &mut usize) -> Result<FoFormula, GodelError> {
    match toks.get(*pos) {
        Some(Tok::LParen) => {
            *pos += 1;
            let inner = parse_or(toks, pos)?;
            if toks.get(*pos) != Some(&Tok::RParen) {
                return Err(GodelError::Config("missing closing parenthesis".into()));
            }
            *pos += 1;
            Ok(inner)
        }
        Some(Tok::Var(i)) => {
            let i = *i;
            *pos += 1;
            let rel = toks.get(*pos).cloned();
            *pos += 1;
            let Some(Tok::Var(j)) = toks.get(*pos).cloned() else {
                return Err(GodelError::Config(
                    "atom must be `vI in vJ` or `vI = vJ`".into(),
                ));
            };
            *pos += 1;
            match rel {
                Some(Tok::In) => Ok(FoFormula::In(i, j)),
                Some(Tok::Eq) => Ok(FoFormula::Eq(i, j)),
                _ => Err(GodelError::Config(
                    "atom must be `vI in vJ` or `vI = vJ`".into(),
                )),
            }
        }
        other => Err(GodelError::Config(format!(
            "expected an atom or parenthesized formula, found {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(n: u32) -> HFSet {
        HFSet::ordinal(n)
    }

    fn pair(a: &HFSet, b: &HFSet) -> HFSet {
        HFSet::ordered_pair(a.clone(), b.clone())
    }

    #[test]
    fn the_worked_valuation_instances() {
        let x = HFSet::from_elements([ord(0), ord(1)]);

        // v0 = v0 is everything.
        assert_eq!(
            val(&FoFormula::Eq(0, 0), &x, 2).unwrap(),
            product_power(&x, 2)
        );

        // v0 in v1 over {∅,{∅}} is the single pair (∅,{∅}).
        assert_eq!(
            val(&FoFormula::In(0, 1), &x, 2).unwrap(),
            HFSet::singleton(pair(&ord(0), &ord(1)))
        );

        // ∃v1 (v0 in v1): only ∅ has a container inside x.
        let phi = FoFormula::Exists(1, Box::new(FoFormula::In(0, 1)));
        assert_eq!(val(&phi, &x, 1).unwrap(), HFSet::singleton(ord(0)));

        // ¬(v0 = v0) holds nowhere.
        let contradiction = FoFormula::Not(Box::new(FoFormula::Eq(0, 0)));
        assert_eq!(direct_modelcheck(&contradiction, &x, 1).unwrap(), HFSet::empty());
        assert_eq!(val(&contradiction, &x, 1).unwrap(), HFSet::empty());
    }

    #[test]
    fn the_ordinal_formula_selects_the_true_ordinals() {
        // Transitive and linearly ∈-ordered, over {∅, {∅}, {{∅}}}.
        let text = "forall v1 (not (v1 in v0) or forall v2 (not (v2 in v1) or v2 in v0)) \
                    and forall v1 (not (v1 in v0) or forall v2 (not (v2 in v0) or \
                    (v1 in v2 or v1 = v2 or v2 in v1)))";
        let phi = parse_fo(text).unwrap();
        let x = HFSet::from_elements([ord(0), ord(1), HFSet::singleton(ord(1))]);
        let expected = HFSet::from_elements([ord(0), ord(1)]);
        assert_eq!(val(&phi, &x, 1).unwrap(), expected);
        assert_eq!(direct_modelcheck(&phi, &x, 1).unwrap(), expected);
    }

    #[test]
    fn parsing_round_trips_through_display() {
        for text in [
            "v0 in v1",
            "v0 = v1",
            "not v0 in v1",
            "v0 in v1 and v1 in v2 or v2 = v0",
            "exists v2 (v0 in v2 and v2 in v1)",
            "forall v1 (v1 in v0 or not v1 = v0)",
            "v0 in v1 & v1 in v2 | ! v2 = v0",
        ] {
            let phi = parse_fo(text).unwrap();
            let echoed = parse_fo(&phi.to_string()).unwrap();
            assert_eq!(phi, echoed, "display of {text:?} reparses to the same tree");
        }
        // Precedence: and binds tighter than or.
        let phi = parse_fo("v0 in v1 and v1 in v2 or v2 = v0").unwrap();
        assert!(matches!(phi, FoFormula::Or(..)));
    }

    #[test]
    fn contract_violations_are_reported() {
        let x = HFSet::from_elements([ord(0), ord(1)]);
        let phi = FoFormula::In(0, 1);

        // Sentences have no tuple set.
        assert_eq!(val(&phi, &x, 0).unwrap_err().code(), "CONFIG_PARSE");
        // Free variable out of scope.
        assert_eq!(val(&phi, &x, 1).unwrap_err().code(), "CONFIG_PARSE");
        // Binder must be the next fresh variable.
        let skewed = FoFormula::Exists(2, Box::new(FoFormula::In(0, 2)));
        assert_eq!(val(&skewed, &x, 1).unwrap_err().code(), "CONFIG_PARSE");
        assert_eq!(
            direct_modelcheck(&skewed, &x, 1).unwrap_err().code(),
            "CONFIG_PARSE"
        );

        // Tuple-space ceiling.
        let wide = HFSet::from_elements((0..9).map(ord));
        let deep = FoFormula::Exists(
            2,
            Box::new(FoFormula::Exists(3, Box::new(FoFormula::In(0, 3)))),
        );
        assert_eq!(
            val(&deep, &wide, 2).unwrap_err().code(),
            "SCALE_EXCEEDED"
        );

        // Parse errors.
        for bad in ["v0 in", "exists (v0 in v1)", "v0 near v1", "((v0 in v1)"] {
            assert_eq!(parse_fo(bad).unwrap_err().code(), "CONFIG_PARSE");
        }
    }

    #[test]
    fn free_arity_and_depth_track_binders() {
        let phi = parse_fo("exists v1 (v0 in v1 and exists v2 (v1 in v2))").unwrap();
        assert_eq!(phi.free_arity(), 1);
        assert_eq!(phi.quantifier_depth(), 2);
        let open = parse_fo("v0 in v3").unwrap();
        assert_eq!(open.free_arity(), 4);
        assert_eq!(open.quantifier_depth(), 0);
    }
}
