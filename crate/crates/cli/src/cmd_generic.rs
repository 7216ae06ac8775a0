//! The `generic` subcommand: assemble a dense family over one of the
//! shipped notions, run the filter builder from the top condition, verify
//! every recorded witness, and extract the generic object.
//!
//! Dense-set spec grammar (one `--dense` flag per set):
//!   cohen      dom:ROW,N          decide bit N of row ROW
//!              rowsplit:XI,ZETA   make rows XI and ZETA differ at some bit
//!   collapse   dom:N              put N into the map's domain
//!              onto:LABEL         hit LABEL (labels are collected from specs)
//!   cover      cover:N=V[,N=V…]   catch the point family in the slalom
//!   interval   dq:RATIONAL        exclude one rational from the enclosure
//!              width:N            shrink the enclosure below 1/2^N
//!   random     avoidnull:IVS[|IVS…]  escape one of the listed null covers
//!   amoeba     avoid:IVS          drop a null target entirely
//!   sacks      stem:N             freeze the branch to length ≥ N
//!              dodge:WORD         avoid the binary branch WORD

use crate::err::CliError;
use crate::parse::{parse_intervals, parse_rational, Caps};
use crate::report::{Json, Report};
use forcing_classic::{
    cohen_real, collapse_map, enclosure, slalom, AvoidPoint, BitDecided, CohenNotion,
    CollapseNotion, CoverNotion, CoversTarget, DomainPoint, HitsLabel, IntervalNotion, RowSplit,
    ShrinkWidth,
};
use forcing_core::{build_generic, DenseSet, FilterCertificate, ForcingNotion};
use forcing_measure::{AmoebaAvoid, AmoebaNotion, AvoidNull, DyadicUnion, RandomNotion};
use forcing_trees::{sacks_branch, DodgeBranch, LongStem, SacksNotion};
use std::collections::{BTreeMap, BTreeSet};

pub fn run(notion: &str, dense: &[String], seed: u64, caps: &Caps) -> Result<Report, CliError> {
    let mut rep = Report::new("generic");
    rep.cfg("notion", Json::Str(notion.into()));
    rep.cfg("dense", Json::strs(dense.iter().cloned()));
    rep.cfg("seed", Json::Num(seed.to_string()));
    rep.cfg("budget", Json::Int(caps.budget as i128));
    match notion {
        "cohen" => cohen(&mut rep, dense, caps)?,
        "collapse" => collapse(&mut rep, dense, caps)?,
        "cover" => cover(&mut rep, dense, caps)?,
        "interval" => interval(&mut rep, dense, caps)?,
        "random" => random(&mut rep, dense, caps)?,
        "amoeba" => amoeba(&mut rep, dense, caps)?,
        "sacks" => sacks(&mut rep, dense, caps)?,
        other => {
            return Err(CliError::config(format!(
                "--notion: unknown notion '{other}' (expected cohen, collapse, cover, \
                 interval, random, amoeba, sacks)"
            )))
        }
    }
    Ok(rep)
}

/// Splits `kind:args`, reporting the 1-based position of a malformed spec.
fn spec_parts(i: usize, spec: &str) -> Result<(&str, &str), CliError> {
    spec.split_once(':')
        .ok_or_else(|| CliError::config(format!("--dense: spec {} ('{spec}') must be kind:args", i + 1)))
}

fn unknown_kind(i: usize, spec: &str, notion: &str, expected: &str) -> CliError {
    CliError::config(format!(
        "--dense: spec {} ('{spec}') has no meaning for notion {notion} (expected {expected})",
        i + 1
    ))
}

fn check_ids<N: ForcingNotion>(denses: &[Box<dyn DenseSet<N>>]) -> Result<(), CliError> {
    let mut seen = BTreeSet::new();
    for d in denses {
        if !seen.insert(d.id()) {
            return Err(CliError::config(format!(
                "--dense: duplicate dense-set id '{}'; each set may be requested once",
                d.id()
            )));
        }
    }
    Ok(())
}

/// Runs the builder and re-verifies everything it claims: the chain must
/// be decreasing and each recorded witness must be a member of its dense
/// set. Build failures become FAIL verdicts, not errors.
fn run_build<N: ForcingNotion>(
    rep: &mut Report,
    notion: &N,
    denses: &[Box<dyn DenseSet<N>>],
    budget: usize,
) -> Option<FilterCertificate<N::Cond>> {
    let refs: Vec<&dyn DenseSet<N>> = denses.iter().map(|b| b.as_ref()).collect();
    let top = notion.top();
    match build_generic(notion, &refs, &top, budget) {
        Ok(cert) => {
            rep.pass(
                "generic-built",
                format!(
                    "chain of {} conditions meets {} dense sets",
                    cert.chain.len(),
                    cert.met.len()
                ),
            );
            let decreasing = cert.chain.windows(2).all(|w| notion.leq(&w[1], &w[0]));
            rep.verdict(
                "chain-decreasing",
                decreasing,
                if decreasing {
                    "every link extends its predecessor".into()
                } else {
                    "order violation inside the chain".into()
                },
            );
            for d in denses {
                let name = format!("met:{}", d.id());
                match cert.met.get(&d.id()) {
                    Some(w) if d.member(notion, w) => {
                        rep.pass(&name, format!("witness {}", notion.encode(w)));
                    }
                    Some(w) => rep.fail(&name, format!("recorded witness {} is not a member", notion.encode(w))),
                    None => rep.fail(&name, "no witness recorded".into()),
                }
            }
            rep.witness(
                "chain",
                Json::Arr(cert.chain.iter().map(|c| Json::Str(notion.encode(c))).collect()),
            );
            Some(cert)
        }
        Err(e) => {
            rep.fail("generic-built", e.to_string());
            None
        }
    }
}

fn cohen(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    enum Spec {
        Dom(String, u64),
        Split(String, String),
    }
    let mut specs = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        match kind {
            "dom" => {
                let (row, n) = rest.rsplit_once(',').ok_or_else(|| {
                    CliError::config(format!("--dense: spec {} ('{s}') must be dom:ROW,N", i + 1))
                })?;
                let n: u64 = n.trim().parse().map_err(|_| {
                    CliError::config(format!("--dense: spec {} ('{s}') has a non-numeric bit index", i + 1))
                })?;
                specs.push(Spec::Dom(row.trim().to_string(), n));
            }
            "rowsplit" => {
                let (xi, zeta) = rest.split_once(',').ok_or_else(|| {
                    CliError::config(format!("--dense: spec {} ('{s}') must be rowsplit:XI,ZETA", i + 1))
                })?;
                let (xi, zeta) = (xi.trim().to_string(), zeta.trim().to_string());
                if xi == zeta {
                    return Err(CliError::config(format!(
                        "--dense: spec {} ('{s}') must name two distinct rows",
                        i + 1
                    )));
                }
                specs.push(Spec::Split(xi, zeta));
            }
            _ => return Err(unknown_kind(i, s, "cohen", "dom, rowsplit")),
        }
    }
    let mut rows: BTreeSet<String> = BTreeSet::new();
    for s in &specs {
        match s {
            Spec::Dom(r, _) => {
                rows.insert(r.clone());
            }
            Spec::Split(a, b) => {
                rows.insert(a.clone());
                rows.insert(b.clone());
            }
        }
    }
    if rows.is_empty() {
        rows.insert("0".into());
    }
    let row_list: Vec<String> = rows.iter().cloned().collect();
    let notion = CohenNotion::new(&row_list);
    let denses: Vec<Box<dyn DenseSet<CohenNotion>>> = specs
        .iter()
        .map(|s| -> Box<dyn DenseSet<CohenNotion>> {
            match s {
                Spec::Dom(row, n) => Box::new(BitDecided { row: row.clone(), n: *n }),
                Spec::Split(xi, zeta) => Box::new(RowSplit { xi: xi.clone(), zeta: zeta.clone() }),
            }
        })
        .collect();
    check_ids(&denses)?;
    let Some(cert) = run_build(rep, &notion, &denses, caps.budget) else {
        return Ok(());
    };

    let tip = cert.tip();
    let prefix = |row: &str| -> u64 {
        let mut l = 0;
        while tip.get(row, l + 1).is_some() {
            l += 1;
        }
        l
    };
    let mut reals = Vec::new();
    for row in &row_list {
        let l = prefix(row);
        match cohen_real(&cert, row, l) {
            Ok(v) => reals.push((
                row.clone(),
                Json::Obj(vec![
                    ("precision".into(), Json::Int(l as i128)),
                    ("value".into(), Json::rat(&v)),
                ]),
            )),
            Err(e) => rep.fail(&format!("real:{row}"), e.to_string()),
        }
    }
    rep.witness("reals", Json::Obj(reals));
    for s in &specs {
        if let Spec::Split(xi, zeta) = s {
            let bound = prefix(xi).min(prefix(zeta));
            let diff = (1..=bound).find(|&n| {
                matches!((tip.get(xi, n), tip.get(zeta, n)), (Some(a), Some(b)) if a != b)
            });
            match diff {
                Some(n) => rep.pass(
                    &format!("distinct:{xi},{zeta}"),
                    format!("rows disagree at decided bit {n}, so the extracted reals differ"),
                ),
                None => rep.fail(
                    &format!("distinct:{xi},{zeta}"),
                    "no decided bit separates the two rows".into(),
                ),
            }
        }
    }
    Ok(())
}

fn collapse(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    enum Spec {
        Dom(u64),
        Onto(String),
    }
    let mut specs = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        match kind {
            "dom" => {
                let n: u64 = rest.trim().parse().map_err(|_| {
                    CliError::config(format!("--dense: spec {} ('{s}') must be dom:N", i + 1))
                })?;
                specs.push(Spec::Dom(n));
            }
            "onto" => {
                let label = rest.trim();
                if label.is_empty() {
                    return Err(CliError::config(format!(
                        "--dense: spec {} ('{s}') names an empty label",
                        i + 1
                    )));
                }
                specs.push(Spec::Onto(label.to_string()));
            }
            _ => return Err(unknown_kind(i, s, "collapse", "dom, onto")),
        }
    }
    let mut labels: BTreeSet<String> = specs
        .iter()
        .filter_map(|s| match s {
            Spec::Onto(l) => Some(l.clone()),
            Spec::Dom(_) => None,
        })
        .collect();
    if labels.is_empty() {
        labels.insert("a".into());
        labels.insert("b".into());
    }
    let label_list: Vec<String> = labels.iter().cloned().collect();
    let notion = CollapseNotion::new(&label_list);
    rep.cfg("labels", Json::strs(label_list.clone()));
    let denses: Vec<Box<dyn DenseSet<CollapseNotion>>> = specs
        .iter()
        .map(|s| -> Box<dyn DenseSet<CollapseNotion>> {
            match s {
                Spec::Dom(n) => Box::new(DomainPoint { n: *n }),
                Spec::Onto(l) => Box::new(HitsLabel { label: l.clone() }),
            }
        })
        .collect();
    check_ids(&denses)?;
    if let Some(cert) = run_build(rep, &notion, &denses, caps.budget) {
        let map = collapse_map(&cert);
        rep.witness(
            "map",
            Json::Obj(map.iter().map(|(n, l)| (n.to_string(), Json::Str(l.clone()))).collect()),
        );
    }
    Ok(())
}

fn cover(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    let mut denses: Vec<Box<dyn DenseSet<CoverNotion>>> = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        if kind != "cover" {
            return Err(unknown_kind(i, s, "cover", "cover"));
        }
        let mut alpha = BTreeMap::new();
        for part in rest.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (n, v) = part.split_once('=').ok_or_else(|| {
                CliError::config(format!(
                    "--dense: spec {} ('{s}') must list N=V coordinates",
                    i + 1
                ))
            })?;
            let n: u64 = n.trim().parse().map_err(|_| {
                CliError::config(format!("--dense: spec {} ('{s}') has a non-numeric coordinate", i + 1))
            })?;
            let v: u64 = v.trim().parse().map_err(|_| {
                CliError::config(format!("--dense: spec {} ('{s}') has a non-numeric value", i + 1))
            })?;
            if alpha.insert(n, v).is_some() {
                return Err(CliError::config(format!(
                    "--dense: spec {} ('{s}') repeats coordinate {n}",
                    i + 1
                )));
            }
        }
        if alpha.is_empty() {
            return Err(CliError::config(format!(
                "--dense: spec {} ('{s}') lists no coordinates",
                i + 1
            )));
        }
        denses.push(Box::new(CoversTarget { alpha }));
    }
    check_ids(&denses)?;
    if let Some(cert) = run_build(rep, &CoverNotion, &denses, caps.budget) {
        let (k, slots) = slalom(&cert);
        rep.witness(
            "slalom",
            Json::Obj(vec![
                ("k".into(), Json::Num(k.to_string())),
                (
                    "slots".into(),
                    Json::Obj(
                        slots
                            .iter()
                            .map(|(n, vs)| {
                                (n.to_string(), Json::ints(vs.iter().map(|v| *v as i128)))
                            })
                            .collect(),
                    ),
                ),
            ]),
        );
    }
    Ok(())
}

fn interval(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    let mut denses: Vec<Box<dyn DenseSet<IntervalNotion>>> = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        match kind {
            "dq" => {
                let q = parse_rational(&format!("--dense: spec {} ('{s}')", i + 1), rest)?;
                denses.push(Box::new(AvoidPoint { q }));
            }
            "width" => {
                let n: u32 = rest.trim().parse().map_err(|_| {
                    CliError::config(format!("--dense: spec {} ('{s}') must be width:N", i + 1))
                })?;
                denses.push(Box::new(ShrinkWidth { n }));
            }
            _ => return Err(unknown_kind(i, s, "interval", "dq, width")),
        }
    }
    check_ids(&denses)?;
    let notion = IntervalNotion::unit_symmetric();
    if let Some(cert) = run_build(rep, &notion, &denses, caps.budget) {
        let (lo, hi) = enclosure(&cert);
        rep.witness(
            "enclosure",
            Json::Obj(vec![
                ("lo".into(), Json::rat(&lo)),
                ("hi".into(), Json::rat(&hi)),
                ("width".into(), Json::rat(&(hi.clone() - lo.clone()))),
            ]),
        );
    }
    Ok(())
}

fn union_from(ctx: &str, text: &str) -> Result<DyadicUnion, CliError> {
    let ivs = parse_intervals(ctx, text)?;
    DyadicUnion::from_intervals(ivs).map_err(|e| CliError::config(format!("{ctx}: {e}")))
}

fn random(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    let mut denses: Vec<Box<dyn DenseSet<RandomNotion>>> = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        if kind != "avoidnull" {
            return Err(unknown_kind(i, s, "random", "avoidnull"));
        }
        let mut covers = Vec::new();
        for (j, cover) in rest.split('|').enumerate() {
            covers.push(union_from(
                &format!("--dense: spec {} ('{s}') cover {}", i + 1, j + 1),
                cover,
            )?);
        }
        denses.push(Box::new(AvoidNull { covers }));
    }
    check_ids(&denses)?;
    let notion = RandomNotion::unit();
    if let Some(cert) = run_build(rep, &notion, &denses, caps.budget) {
        let tip = cert.tip().set();
        rep.witness(
            "carrier",
            Json::Obj(vec![
                ("set".into(), Json::Str(tip.to_string())),
                ("measure".into(), Json::rat(&tip.measure())),
            ]),
        );
    }
    Ok(())
}

fn amoeba(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    let mut denses: Vec<Box<dyn DenseSet<AmoebaNotion>>> = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        if kind != "avoid" {
            return Err(unknown_kind(i, s, "amoeba", "avoid"));
        }
        let b = union_from(&format!("--dense: spec {} ('{s}')", i + 1), rest)?;
        denses.push(Box::new(AmoebaAvoid { b }));
    }
    check_ids(&denses)?;
    let notion = AmoebaNotion::double_unit();
    if let Some(cert) = run_build(rep, &notion, &denses, caps.budget) {
        let tip = cert.tip().set();
        rep.witness(
            "carrier",
            Json::Obj(vec![
                ("set".into(), Json::Str(tip.to_string())),
                ("measure".into(), Json::rat(&tip.measure())),
            ]),
        );
    }
    Ok(())
}

fn sacks(rep: &mut Report, dense: &[String], caps: &Caps) -> Result<(), CliError> {
    rep.cfg("depth", Json::Int(caps.depth as i128));
    let mut denses: Vec<Box<dyn DenseSet<SacksNotion>>> = Vec::new();
    for (i, s) in dense.iter().enumerate() {
        let (kind, rest) = spec_parts(i, s)?;
        match kind {
            "stem" => {
                let n: usize = rest.trim().parse().map_err(|_| {
                    CliError::config(format!("--dense: spec {} ('{s}') must be stem:N", i + 1))
                })?;
                if n > caps.depth {
                    return Err(CliError::config(format!(
                        "--dense: spec {} ('{s}') asks for stem length {n} beyond depth {}",
                        i + 1,
                        caps.depth
                    )));
                }
                denses.push(Box::new(LongStem { n }));
            }
            "dodge" => {
                let beta = rest.trim();
                if beta.is_empty() || !beta.chars().all(|c| c == '0' || c == '1') {
                    return Err(CliError::config(format!(
                        "--dense: spec {} ('{s}') must name a nonempty binary word",
                        i + 1
                    )));
                }
                denses.push(Box::new(DodgeBranch { beta: beta.to_string() }));
            }
            _ => return Err(unknown_kind(i, s, "sacks", "stem, dodge")),
        }
    }
    check_ids(&denses)?;
    let notion = SacksNotion { depth: caps.depth };
    if let Some(cert) = run_build(rep, &notion, &denses, caps.budget) {
        rep.witness("branch", Json::Str(sacks_branch(&cert)));
        let tip = cert.tip();
        rep.witness(
            "tree",
            Json::Obj(vec![
                ("leaves".into(), Json::Str(tip.to_text().replace('\n', ","))),
                ("split-depth".into(), Json::Int(tip.verified_split_depth() as i128)),
            ]),
        );
    }
    Ok(())
}
