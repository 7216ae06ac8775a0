//! Shared argument parsing: inline-or-file indirection, exact rationals,
//! interval lists, integer lists, and the caps string.

use crate::err::CliError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

/// Resolves an argument that may name a file: a leading `@` reads the rest
/// as a path, anything else is taken verbatim.
pub fn read_arg(flag: &str, raw: &str) -> Result<String, CliError> {
    if let Some(path) = raw.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| CliError::file(flag, path, &e))
    } else {
        Ok(raw.to_string())
    }
}

/// Exact rational: `p/q` or a plain integer, arbitrary precision.
pub fn parse_rational(ctx: &str, s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num)
        .map_err(|_| CliError::config(format!("{ctx}: '{num}' is not an integer")))?;
    let d = BigInt::from_str(den)
        .map_err(|_| CliError::config(format!("{ctx}: '{den}' is not an integer")))?;
    if d.is_zero() {
        return Err(CliError::config(format!("{ctx}: zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

/// `lo..hi` pairs separated by commas, e.g. `0..1/2,3/4..1`.
pub fn parse_intervals(ctx: &str, s: &str) -> Result<Vec<(BigRational, BigRational)>, CliError> {
    let mut out = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (lo, hi) = part.split_once("..").ok_or_else(|| {
            CliError::config(format!("{ctx}: interval {} ('{part}') must be 'lo..hi'", i + 1))
        })?;
        out.push((
            parse_rational(&format!("{ctx}: interval {}", i + 1), lo)?,
            parse_rational(&format!("{ctx}: interval {}", i + 1), hi)?,
        ));
    }
    Ok(out)
}

pub fn parse_u64_list(ctx: &str, s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<u64>()
                .map_err(|_| CliError::config(format!("{ctx}: '{p}' is not a natural number")))
        })
        .collect()
}

pub fn parse_usize_list(ctx: &str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| CliError::config(format!("{ctx}: '{p}' is not a natural number")))
        })
        .collect()
}

/// Run-wide caps; every field must stay positive.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub depth: usize,
    pub budget: usize,
    pub horizon: u64,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { depth: 6, budget: 256, horizon: 20 }
    }
}

/// Parses `key=value` pairs, e.g. `depth=8,budget=128,horizon=12`,
/// starting from the defaults.
pub fn parse_caps(s: &str) -> Result<Caps, CliError> {
    let mut caps = Caps::default();
    for (i, part) in s.split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::config(format!("--caps: entry {} ('{part}') must be key=value", i + 1))
        })?;
        let n: u64 = value.trim().parse().map_err(|_| {
            CliError::config(format!("--caps: entry {} ('{part}') has a non-numeric value", i + 1))
        })?;
        if n == 0 {
            return Err(CliError::config(format!(
                "--caps: entry {} ('{part}') must be positive",
                i + 1
            )));
        }
        match key.trim() {
            "depth" => caps.depth = n as usize,
            "budget" => caps.budget = n as usize,
            "horizon" => caps.horizon = n,
            other => {
                return Err(CliError::config(format!(
                    "--caps: entry {} has unknown key '{other}' (expected depth, budget, horizon)",
                    i + 1
                )))
            }
        }
    }
    Ok(caps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_intervals() {
        assert_eq!(parse_rational("t", "3/4").unwrap().to_string(), "3/4");
        assert_eq!(parse_rational("t", "5").unwrap().to_string(), "5");
        assert!(parse_rational("t", "1/0").is_err());
        assert!(parse_rational("t", "a/2").unwrap_err().message.contains("'a'"));
        let ivs = parse_intervals("t", "0..1/2, 3/4..1").unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(parse_intervals("t", "0,1").unwrap_err().message.contains("interval 1"));
    }

    #[test]
    fn caps_defaults_and_overrides() {
        let c = parse_caps("").unwrap();
        assert_eq!((c.depth, c.budget, c.horizon), (6, 256, 20));
        let c = parse_caps("depth=3,horizon=9").unwrap();
        assert_eq!((c.depth, c.budget, c.horizon), (3, 256, 9));
        assert!(parse_caps("depth=0").is_err());
        assert!(parse_caps("nope=3").unwrap_err().message.contains("unknown key"));
    }
}
