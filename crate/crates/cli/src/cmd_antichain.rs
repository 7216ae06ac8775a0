//! The `antichain` subcommand: load a finite poset from an edge list and
//! check pairwise incompatibility of the listed conditions.

use crate::err::CliError;
use crate::parse::{read_arg, Caps};
use crate::report::{Json, Report};
use forcing_core::{antichain_check, AntichainVerdict, FinitePoset};

pub fn run(poset_arg: &str, conditions: &str, seed: u64, caps: &Caps) -> Result<Report, CliError> {
    let mut rep = Report::new("antichain");
    let text = read_arg("--poset", poset_arg)?;
    // inline form uses ';' for line breaks so a poset fits in one flag
    let text = text.replace(';', "\n");
    let poset = FinitePoset::parse(&text).map_err(|e| CliError::config(format!("--poset: {e}")))?;
    let conds: Vec<String> =
        conditions.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    if conds.is_empty() {
        return Err(CliError::config("--conditions: no conditions listed".into()));
    }
    for c in &conds {
        if !poset.labels().contains(c) {
            return Err(CliError::config(format!(
                "--conditions: '{c}' is not an element of the poset"
            )));
        }
    }
    rep.cfg("poset", Json::Str(poset.to_string().replace('\n', "; ")));
    rep.cfg("conditions", Json::strs(conds.iter().cloned()));
    rep.cfg("seed", Json::Num(seed.to_string()));

    match antichain_check(&poset, &conds, caps.budget as u32, seed) {
        AntichainVerdict::Antichain => {
            rep.pass(
                "antichain",
                format!("all {} conditions are pairwise incompatible", conds.len()),
            );
        }
        AntichainVerdict::NotAntichain { p, q, witness } => {
            rep.fail("antichain", format!("'{p}' and '{q}' share the extension '{witness}'"));
            rep.witness(
                "compatible-pair",
                Json::Obj(vec![
                    ("p".into(), Json::Str(p)),
                    ("q".into(), Json::Str(q)),
                    ("witness".into(), Json::Str(witness)),
                ]),
            );
        }
        AntichainVerdict::Unknown { undecided } => {
            rep.fail(
                "antichain",
                format!("{} pairs stayed undecided within the search budget", undecided.len()),
            );
            rep.witness(
                "undecided",
                Json::Arr(
                    undecided
                        .iter()
                        .map(|(p, q)| Json::strs([p.clone(), q.clone()]))
                        .collect(),
                ),
            );
        }
    }
    Ok(rep)
}
