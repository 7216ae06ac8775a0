//! Formulas over P-names and the computed forcing relation on finite posets.
//!
//! Formulas are built from the atoms `x ∈ y` and `x = y` over names, with
//! `¬`, `∧`, `∨`, and quantifiers bounded to a supplied finite name list.
//! On a finite poset, `p ⊩ φ` is *defined* semantically: φ must hold under
//! `K_G` for the cone generic of every minimal element below `p`. The
//! classical forcing laws (persistence, the negation equivalences) are then
//! checkable theorems of the implementation rather than definitions.
//!
//! Text syntax is prefix s-expressions: `(in t u)`, `(eq t u)`, `(not f)`,
//! `(and f g)`, `(or f g)`, `(all v f)`, `(ex v f)`; name terms are
//! bracket literals `{(child,cond),...}`, `check:{...}` for check names of
//! hereditarily finite sets, `gamma` for the canonical name of the generic,
//! or variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::KernelError;
use crate::hf::HFSet;
use crate::name::{canonical_gamma, check_name, PName};
use crate::poset::{FinitePoset, ForcingNotion};

/// A name-valued term: a concrete name or a quantified variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameTerm {
    Lit(PName<String>),
    Var(String),
}

/// A formula over P-names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    In(NameTerm, NameTerm),
    Eq(NameTerm, NameTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    All(String, Box<Formula>),
    Ex(String, Box<Formula>),
}

impl Formula {
    /// Truth under the filter of a single generic: evaluates every name via
    /// `K_G` and interprets quantifiers over `names`.
    pub fn holds(
        &self,
        filter: &BTreeSet<String>,
        names: &[PName<String>],
        env: &BTreeMap<String, PName<String>>,
    ) -> Result<bool, KernelError> {
        match self {
            Formula::In(t, u) => {
                Ok(resolve(u, env)?.eval(filter).contains(&resolve(t, env)?.eval(filter)))
            }
            Formula::Eq(t, u) => {
                Ok(resolve(t, env)?.eval(filter) == resolve(u, env)?.eval(filter))
            }
            Formula::Not(f) => Ok(!f.holds(filter, names, env)?),
            Formula::And(f, g) => {
                Ok(f.holds(filter, names, env)? && g.holds(filter, names, env)?)
            }
            Formula::Or(f, g) => {
                Ok(f.holds(filter, names, env)? || g.holds(filter, names, env)?)
            }
            Formula::All(v, f) => {
                for a in names {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), a.clone());
                    if !f.holds(filter, names, &env2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Ex(v, f) => {
                for a in names {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), a.clone());
                    if f.holds(filter, names, &env2)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Maximum rank over the name literals inside the formula.
    pub fn max_literal_rank(&self) -> u32 {
        match self {
            Formula::In(t, u) | Formula::Eq(t, u) => term_rank(t).max(term_rank(u)),
            Formula::Not(f) => f.max_literal_rank(),
            Formula::And(f, g) | Formula::Or(f, g) => {
                f.max_literal_rank().max(g.max_literal_rank())
            }
            Formula::All(_, f) | Formula::Ex(_, f) => f.max_literal_rank(),
        }
    }

    /// Applies a map to every condition occurring in the formula's name
    /// literals (used for automorphism symmetry checks).
    pub fn map_conditions(&self, f: &impl Fn(&String) -> String) -> Formula {
        let t = |term: &NameTerm| match term {
            NameTerm::Lit(a) => NameTerm::Lit(a.map_conditions(f)),
            NameTerm::Var(v) => NameTerm::Var(v.clone()),
        };
        match self {
            Formula::In(a, b) => Formula::In(t(a), t(b)),
            Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
            Formula::Not(g) => Formula::Not(Box::new(g.map_conditions(f))),
            Formula::And(g, h) => {
                Formula::And(Box::new(g.map_conditions(f)), Box::new(h.map_conditions(f)))
            }
            Formula::Or(g, h) => {
                Formula::Or(Box::new(g.map_conditions(f)), Box::new(h.map_conditions(f)))
            }
            Formula::All(v, g) => Formula::All(v.clone(), Box::new(g.map_conditions(f))),
            Formula::Ex(v, g) => Formula::Ex(v.clone(), Box::new(g.map_conditions(f))),
        }
    }
}

fn term_rank(t: &NameTerm) -> u32 {
    match t {
        NameTerm::Lit(a) => a.rank(),
        NameTerm::Var(_) => 0,
    }
}

fn resolve(
    t: &NameTerm,
    env: &BTreeMap<String, PName<String>>,
) -> Result<PName<String>, KernelError> {
    match t {
        NameTerm::Lit(a) => Ok(a.clone()),
        NameTerm::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| KernelError::ConfigParse(format!("unbound variable {v:?}"))),
    }
}

/// The computed forcing relation: `p ⊩ φ` iff φ holds under the cone generic
/// of every minimal element `m ≤ p`.
pub fn forces(
    poset: &FinitePoset,
    p: &str,
    phi: &Formula,
    names: &[PName<String>],
    rank_bound: u32,
) -> Result<bool, KernelError> {
    let worst = phi.max_literal_rank().max(names.iter().map(PName::rank).max().unwrap_or(0));
    if worst > rank_bound {
        return Err(KernelError::RankExceeded(format!(
            "a name of rank {worst} exceeds the bound {rank_bound}"
        )));
    }
    let universe = poset.universe().expect("finite posets enumerate their universe");
    let env = BTreeMap::new();
    for m in poset.minimal_elements() {
        if !poset.leq(&m, &p.to_string()) {
            continue;
        }
        let filter: BTreeSet<String> =
            universe.iter().filter(|q| poset.leq(&m, q)).cloned().collect();
        if !phi.holds(&filter, names, &env)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Text syntax
// ---------------------------------------------------------------------------

/// Parses the prefix formula syntax. `check:` and `gamma` terms are resolved
/// against the poset immediately, so the result contains only concrete name
/// literals and variables.
pub fn parse_formula(
    text: &str,
    poset: &FinitePoset,
    rank_bound: u32,
) -> Result<Formula, KernelError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, poset, rank_bound };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(KernelError::ConfigParse(format!(
            "trailing input at byte {} of formula {text:?}",
            p.pos
        )));
    }
    Ok(f)
}

/// Parses a single name term (`gamma`, `check:{...}`, a bracket literal, or
/// a variable) against a poset.
pub fn parse_name_term(
    text: &str,
    poset: &FinitePoset,
    rank_bound: u32,
) -> Result<NameTerm, KernelError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, poset, rank_bound };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(KernelError::ConfigParse(format!(
            "trailing input at byte {} of name term {text:?}",
            p.pos
        )));
    }
    Ok(t)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    poset: &'a FinitePoset,
    rank_bound: u32,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), KernelError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            found => Err(KernelError::ConfigParse(format!(
                "expected {c:?} at byte {}, found {found:?}",
                self.pos
            ))),
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || c == '_' || c == ':' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn formula(&mut self) -> Result<Formula, KernelError> {
        self.expect('(')?;
        let op = self.word();
        let f = match op.as_str() {
            "in" => Formula::In(self.term()?, self.term()?),
            "eq" => Formula::Eq(self.term()?, self.term()?),
            "not" => Formula::Not(Box::new(self.formula()?)),
            "and" => Formula::And(Box::new(self.formula()?), Box::new(self.formula()?)),
            "or" => Formula::Or(Box::new(self.formula()?), Box::new(self.formula()?)),
            "all" => Formula::All(self.variable()?, Box::new(self.formula()?)),
            "ex" => Formula::Ex(self.variable()?, Box::new(self.formula()?)),
            other => {
                return Err(KernelError::ConfigParse(format!(
                    "unknown connective {other:?} (expected in/eq/not/and/or/all/ex)"
                )))
            }
        };
        self.expect(')')?;
        Ok(f)
    }

    fn variable(&mut self) -> Result<String, KernelError> {
        let w = self.word();
        if w.is_empty() || w.contains(':') {
            return Err(KernelError::ConfigParse(format!(
                "expected a variable at byte {}",
                self.pos
            )));
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<NameTerm, KernelError> {
        match self.peek() {
            Some('{') => Ok(NameTerm::Lit(self.name_literal()?)),
            Some(_) => {
                let w = self.word();
                if w == "gamma" {
                    Ok(NameTerm::Lit(canonical_gamma(self.poset, self.rank_bound)?))
                } else if let Some(rest) = w.strip_prefix("check:") {
                    // `check:` may be followed by braces either inside the
                    // word (impossible — braces break words) or next in the
                    // input; `rest` is empty in the latter case.
                    let hf = if rest.is_empty() {
                        self.hf_braces()?
                    } else {
                        return Err(KernelError::ConfigParse(format!(
                            "malformed check name near {w:?}"
                        )));
                    };
                    Ok(NameTerm::Lit(check_name(&hf, &self.poset.top(), self.rank_bound)?))
                } else if w.is_empty() {
                    Err(KernelError::ConfigParse(format!(
                        "expected a name term at byte {}",
                        self.pos
                    )))
                } else {
                    Ok(NameTerm::Var(w))
                }
            }
            None => Err(KernelError::ConfigParse("unexpected end of input".into())),
        }
    }

    /// Consumes a balanced `{...}` region and parses it as a hereditarily
    /// finite set.
    fn hf_braces(&mut self) -> Result<HFSet, KernelError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.chars.len() {
            match self.chars[self.pos] {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        let text: String = self.chars[start..self.pos].iter().collect();
                        return HFSet::parse(&text);
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(KernelError::ConfigParse("unbalanced braces in set literal".into()))
    }

    /// `{(child,cond),...}` — children are nested literals or `check:{...}`.
    fn name_literal(&mut self) -> Result<PName<String>, KernelError> {
        self.expect('{')?;
        let mut pairs = Vec::new();
        loop {
            match self.peek() {
                Some('}') => {
                    self.pos += 1;
                    return Ok(PName::from_pairs(pairs));
                }
                Some('(') => {
                    self.pos += 1;
                    let child = match self.peek() {
                        Some('{') => self.name_literal()?,
                        _ => {
                            let w = self.word();
                            if w == "check:" {
                                check_name(
                                    &self.hf_braces()?,
                                    &self.poset.top(),
                                    self.rank_bound,
                                )?
                            } else {
                                return Err(KernelError::ConfigParse(format!(
                                    "expected a name literal or check:{{...}} child, found {w:?}"
                                )));
                            }
                        }
                    };
                    self.expect(',')?;
                    let cond = self.condition_label()?;
                    self.expect(')')?;
                    pairs.push((child, cond));
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    }
                }
                found => {
                    return Err(KernelError::ConfigParse(format!(
                        "expected '(' or '}}' in name literal, found {found:?}"
                    )))
                }
            }
        }
    }

    fn condition_label(&mut self) -> Result<String, KernelError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !",(){}".contains(self.chars[self.pos]) {
            self.pos += 1;
        }
        let label: String = self.chars[start..self.pos].iter().collect::<String>().trim().into();
        if label.is_empty() {
            return Err(KernelError::ConfigParse("empty condition label in name literal".into()));
        }
        if !self.poset.labels().contains(&label) {
            return Err(KernelError::ConfigParse(format!(
                "{label:?} is not a condition of the poset"
            )));
        }
        Ok(label)
    }
}

impl fmt::Display for NameTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameTerm::Lit(a) => write!(f, "{a}"),
            NameTerm::Var(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::In(t, u) => write!(f, "(in {t} {u})"),
            Formula::Eq(t, u) => write!(f, "(eq {t} {u})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(g, h) => write!(f, "(and {g} {h})"),
            Formula::Or(g, h) => write!(f, "(or {g} {h})"),
            Formula::All(v, g) => write!(f, "(all {v} {g})"),
            Formula::Ex(v, g) => write!(f, "(ex {v} {g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> FinitePoset {
        FinitePoset::new(&["1", "a", "b"], &[("a", "1"), ("b", "1")]).unwrap()
    }

    #[test]
    fn forcing_examples() {
        let p = two_atoms();
        // top ⊩ ∅̌ = ∅̌
        let phi = parse_formula("(eq check:{} check:{})", &p, 4).unwrap();
        assert!(forces(&p, "1", &phi, &[], 4).unwrap());

        // n = {(∅̌, a)}
        let member = parse_formula("(in check:{} {(check:{},a)})", &p, 4).unwrap();
        assert!(forces(&p, "a", &member, &[], 4).unwrap());
        assert!(!forces(&p, "1", &member, &[], 4).unwrap());
        let non_member = parse_formula("(not (in check:{} {(check:{},a)}))", &p, 4).unwrap();
        assert!(!forces(&p, "1", &non_member, &[], 4).unwrap());
        assert!(forces(&p, "b", &non_member, &[], 4).unwrap());
    }

    #[test]
    fn quantifiers_range_over_the_name_list() {
        let p = two_atoms();
        let names = vec![
            PName::empty(),
            PName::from_pairs([(PName::empty(), "a".to_string())]),
        ];
        // ∃v (v = ∅̌): witnessed by the empty name.
        let phi = parse_formula("(ex v (eq v check:{}))", &p, 4).unwrap();
        assert!(forces(&p, "1", &phi, &names, 4).unwrap());
        // ∀v (v = ∅̌): fails below a where {(∅̌,a)} evaluates to {∅}.
        let phi = parse_formula("(all v (eq v check:{}))", &p, 4).unwrap();
        assert!(!forces(&p, "a", &phi, &names, 4).unwrap());
        // ...but below b both names evaluate to ∅.
        assert!(forces(&p, "b", &phi, &names, 4).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let p = two_atoms();
        for text in [
            "(in check:{} {(check:{},a)})",
            "(and (eq check:{} check:{}) (or (in v gamma) (not (eq v check:{{}}))))",
            "(all v (ex w (in v w)))",
        ] {
            let f = parse_formula(text, &p, 6).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed, &p, 6).unwrap(), f);
        }
    }
}
