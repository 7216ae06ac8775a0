//! The `measure` and `limsup-cover` subcommands: exact interval-union
//! arithmetic with its algebraic identities, and the summable repackaging
//! of a cover sequence with its strict bounds.

use crate::err::CliError;
use crate::parse::{parse_rational, read_arg, Caps};
use crate::report::{Json, Report};
use forcing_measure::{limsup_cover, semimetric, DyadicUnion};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn union_arg(flag: &str, raw: &str) -> Result<DyadicUnion, CliError> {
    let text = read_arg(flag, raw)?;
    let ivs = crate::parse::parse_intervals(flag, &text)?;
    DyadicUnion::from_intervals(ivs).map_err(|e| CliError::config(format!("{flag}: {e}")))
}

pub fn run_measure(op: &str, a: &str, b: &str) -> Result<Report, CliError> {
    let mut rep = Report::new("measure");
    rep.cfg("op", Json::Str(op.into()));
    rep.cfg("a", Json::Str(a.into()));
    rep.cfg("b", Json::Str(b.into()));
    let a = union_arg("--a", a)?;
    let b = union_arg("--b", b)?;
    let result = match op {
        "union" => a.union(&b),
        "intersect" => a.intersect(&b),
        "difference" => a.difference(&b),
        "symdiff" => a.sym_diff(&b),
        other => {
            return Err(CliError::config(format!(
                "--op: unknown operation '{other}' (expected union, intersect, difference, symdiff)"
            )))
        }
    };

    // exact algebraic identities, rechecked on every invocation
    let (ma, mb) = (a.measure(), b.measure());
    let (mu, mi) = (a.union(&b).measure(), a.intersect(&b).measure());
    let additivity = ma.clone() + mb.clone() == mu.clone() + mi.clone();
    rep.verdict(
        "additivity",
        additivity,
        format!("mu(A) + mu(B) = {} and mu(A∪B) + mu(A∩B) = {}", ma.clone() + mb.clone(), mu.clone() + mi.clone()),
    );
    let sym = a.sym_diff(&b).measure() == mu.clone() - mi.clone();
    rep.verdict(
        "symmetric-difference",
        sym,
        format!("mu(AΔB) = {} matches mu(A∪B) − mu(A∩B)", a.sym_diff(&b).measure()),
    );
    let partition = a.difference(&b).measure() + mi.clone() == ma.clone();
    rep.verdict(
        "difference-partition",
        partition,
        format!("mu(A∖B) + mu(A∩B) = {}", a.difference(&b).measure() + mi),
    );

    rep.witness(
        "result",
        Json::Obj(vec![
            ("set".into(), Json::Str(result.to_string())),
            ("measure".into(), Json::rat(&result.measure())),
        ]),
    );
    rep.witness("semimetric", Json::rat(&semimetric(&a, &b)));
    Ok(rep)
}

fn pow2_inv(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2u64).pow(n as u32))
}

pub fn run_limsup(covers_arg: &str, samples: &str, caps: &Caps) -> Result<Report, CliError> {
    let mut rep = Report::new("limsup-cover");
    rep.cfg("covers", Json::Str(covers_arg.into()));
    rep.cfg("samples", Json::Str(samples.into()));
    rep.cfg("horizon", Json::Num(caps.horizon.to_string()));
    let text = read_arg("--covers", covers_arg)?;
    let mut covers = Vec::new();
    for (i, row) in text.split(';').enumerate() {
        let row = row.trim();
        if row.is_empty() {
            continue;
        }
        let ivs = crate::parse::parse_intervals(&format!("--covers: row {}", i + 1), row)?;
        covers.push(
            DyadicUnion::from_intervals(ivs)
                .map_err(|e| CliError::config(format!("--covers: row {}: {e}", i + 1)))?,
        );
    }
    if covers.is_empty() {
        return Err(CliError::config("--covers: no cover rows listed".into()));
    }
    let sample_points: Vec<BigRational> = samples
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| parse_rational(&format!("--samples: point {}", i + 1), s))
        .collect::<Result<_, _>>()?;

    let slots = match limsup_cover(&covers, caps.horizon) {
        Ok(slots) => slots,
        Err(e) => {
            rep.fail("repackaged", e.to_string());
            return Ok(rep);
        }
    };
    rep.pass("repackaged", format!("{} cover rows sliced into {} slots", covers.len(), slots.len()));

    let slot_ok = slots.iter().enumerate().all(|(n, w)| w.measure() < pow2_inv(n as u64));
    rep.verdict(
        "slot-bounds",
        slot_ok,
        if slot_ok {
            "mu(W_n) < 1/2^n for every slot".into()
        } else {
            "some slot breaks its strict measure bound".into()
        },
    );
    let mut tail_ok = true;
    for m in 0..slots.len() {
        let tail: BigRational =
            slots[m..].iter().map(DyadicUnion::measure).fold(BigRational::from_integer(0.into()), |x, y| x + y);
        if tail >= BigRational::from_integer(2.into()) * pow2_inv(m as u64) {
            tail_ok = false;
            break;
        }
    }
    rep.verdict(
        "tail-bounds",
        tail_ok,
        if tail_ok {
            "every tail sum stays below 2/2^m".into()
        } else {
            "some tail sum reaches 2/2^m".into()
        },
    );

    rep.witness(
        "slot-measures",
        Json::Arr(slots.iter().map(|w| Json::rat(&w.measure())).collect()),
    );
    let hits: Vec<Json> = sample_points
        .iter()
        .map(|x| {
            let slot_hits: Vec<i128> = slots
                .iter()
                .enumerate()
                .filter(|(_, w)| w.contains_point(x))
                .map(|(n, _)| n as i128)
                .collect();
            Json::Obj(vec![
                ("point".into(), Json::rat(x)),
                ("slots".into(), Json::ints(slot_hits)),
            ])
        })
        .collect();
    rep.witness("sample-hits", Json::Arr(hits));
    Ok(rep)
}
