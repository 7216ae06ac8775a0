//! The `godel` subcommands: `val` (evaluate a first-order formula over a
//! finite base set through the operation calculus, cross-checked against
//! the direct model checker) and `term` (enumerate, parse, and evaluate
//! composition terms).

use crate::err::CliError;
use crate::parse::read_arg;
use crate::report::{Json, Report};
use forcing_godel::{
    direct_modelcheck, parse_fo, term_at, term_index, val, GodelError, GodelTerm, TermEntry,
};
use forcing_core::HFSet;

fn godel_err(flag: &str, e: GodelError) -> CliError {
    let msg = format!("{flag}: {e}");
    match e {
        GodelError::ScaleExceeded(_) => CliError::scale(msg),
        _ => CliError::config(msg),
    }
}

fn set_arg(flag: &str, raw: &str) -> Result<HFSet, CliError> {
    let text = read_arg(flag, raw)?;
    HFSet::parse(text.trim()).map_err(|e| CliError::config(format!("{flag}: {e}")))
}

pub fn run_val(formula: &str, set: &str, arity: Option<usize>) -> Result<Report, CliError> {
    let mut rep = Report::new("godel-val");
    rep.cfg("formula", Json::Str(formula.into()));
    rep.cfg("set", Json::Str(set.into()));
    let text = read_arg("--formula", formula)?;
    let phi = parse_fo(&text).map_err(|e| godel_err("--formula", e))?;
    let x = set_arg("--set", set)?;
    let n = arity.unwrap_or_else(|| phi.free_arity().max(1));
    rep.cfg("arity", Json::Int(n as i128));

    let composed = val(&phi, &x, n).map_err(|e| godel_err("run", e))?;
    let direct = direct_modelcheck(&phi, &x, n).map_err(|e| godel_err("run", e))?;
    let agree = composed == direct;
    rep.verdict(
        "evaluators-agree",
        agree,
        if agree {
            format!("operation composition and direct checking both select {} tuples", composed.len())
        } else {
            "the composed value differs from the model checker".into()
        },
    );
    rep.witness("formula", Json::Str(phi.to_string()));
    rep.witness("value", Json::Str(composed.to_string()));
    rep.witness("tuples-selected", Json::Int(composed.len() as i128));
    rep.witness("base-size", Json::Int(x.len() as i128));
    Ok(rep)
}

/// Parses the bracketed entry list the term printer emits, e.g.
/// `[0, 1, (1, 0, 1)]`: `0` the fixed set, `1` the parameter, `2` the
/// stage, `(tag, n)` a unary application, `(tag, n, p)` a binary one.
fn parse_entries(text: &str) -> Result<GodelTerm, CliError> {
    let body = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| CliError::config("--entries: expected a [...] entry list".into()))?;
    let mut entries = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        if let Some(tail) = rest.strip_prefix('(') {
            let close = tail.find(')').ok_or_else(|| {
                CliError::config("--entries: unclosed '(' in entry list".into())
            })?;
            let nums: Vec<&str> = tail[..close].split(',').map(str::trim).collect();
            let parse = |p: &str| -> Result<usize, CliError> {
                p.parse().map_err(|_| {
                    CliError::config(format!("--entries: '{p}' is not a number"))
                })
            };
            match nums.as_slice() {
                [tag, n] => entries.push(TermEntry::Unary(parse(tag)? as u8, parse(n)?)),
                [tag, n, p] => {
                    entries.push(TermEntry::Binary(parse(tag)? as u8, parse(n)?, parse(p)?))
                }
                _ => {
                    return Err(CliError::config(
                        "--entries: a parenthesized entry needs 2 or 3 numbers".into(),
                    ))
                }
            }
            rest = tail[close + 1..].trim().trim_start_matches(',').trim();
        } else {
            let cut = rest.find(',').unwrap_or(rest.len());
            let tok = rest[..cut].trim();
            entries.push(match tok {
                "0" => TermEntry::Delta,
                "1" => TermEntry::Param,
                "2" => TermEntry::Stage,
                other => {
                    return Err(CliError::config(format!(
                        "--entries: leaf '{other}' must be 0, 1, or 2"
                    )))
                }
            });
            rest = rest[cut..].trim_start_matches(',').trim();
        }
    }
    GodelTerm::new(entries).map_err(|e| CliError::config(format!("--entries: {e}")))
}

pub fn run_term(
    index: Option<u64>,
    entries: Option<&str>,
    delta: &str,
    param: &str,
    stage: u32,
) -> Result<Report, CliError> {
    let mut rep = Report::new("godel-term");
    let term = match (index, entries) {
        (Some(j), None) => {
            rep.cfg("index", Json::Num(j.to_string()));
            term_at(j)
        }
        (None, Some(text)) => {
            rep.cfg("entries", Json::Str(text.into()));
            parse_entries(text)?
        }
        _ => {
            return Err(CliError::config(
                "exactly one of --index and --entries selects the term".into(),
            ))
        }
    };
    rep.cfg("delta", Json::Str(delta.into()));
    rep.cfg("param", Json::Str(param.into()));
    rep.cfg("stage", Json::Int(i128::from(stage)));
    let delta = set_arg("--delta", delta)?;
    let param = set_arg("--param", param)?;
    if stage > 4 {
        return Err(CliError::scale(format!(
            "--stage: stage {stage} is beyond the hereditarily-finite desk scale (max 4)"
        )));
    }
    let stage = HFSet::v_stage(stage);

    let j = term_index(&term).map_err(|e| godel_err("run", e))?;
    let round = term_at(j) == term;
    rep.verdict(
        "round-trip",
        round,
        if round {
            format!("term sits at enumeration index {j}")
        } else {
            "enumeration disagrees with the spelled term".into()
        },
    );
    let value = term.eval(&delta, &param, &stage);
    rep.witness("term", Json::Str(term.to_string()));
    rep.witness("index", Json::Num(j.to_string()));
    rep.witness("value", Json::Str(value.to_string()));
    rep.witness("value-size", Json::Int(value.len() as i128));
    Ok(rep)
}
