//! Deterministic JSON reports. Keys keep insertion order, numbers are
//! integers or [numerator, denominator] pairs — no floats anywhere — so a
//! rerun with the same configuration renders byte-identically except for
//! the timing block, which is always the last key of the document.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt::Write as _;

/// An ordered JSON value. Object keys stay exactly in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i128),
    /// A pre-rendered decimal integer token (arbitrary precision).
    Num(String),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    /// Exact rational as a `[numerator, denominator]` pair.
    pub fn rat(r: &BigRational) -> Json {
        Json::Arr(vec![Json::big(r.numer()), Json::big(r.denom())])
    }

    pub fn big(n: &BigInt) -> Json {
        Json::Num(n.to_string())
    }

    pub fn strs<I: IntoIterator<Item = S>, S: Into<String>>(items: I) -> Json {
        Json::Arr(items.into_iter().map(|s| Json::Str(s.into())).collect())
    }

    pub fn ints<I: IntoIterator<Item = i128>>(items: I) -> Json {
        Json::Arr(items.into_iter().map(Json::Int).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Json::Num(tok) => out.push_str(tok),
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, k);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// One named pass/fail line of a report.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A command report: config echo, verdicts, witnesses, and a timing block
/// that renders last so it can be filtered out for byte comparisons.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub config: Vec<(String, Json)>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<(String, Json)>,
    pub elapsed_us: u128,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            config: Vec::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            elapsed_us: 0,
        }
    }

    pub fn cfg(&mut self, key: &str, value: Json) {
        self.config.push((key.to_string(), value));
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: String) {
        self.verdicts.push(Verdict { name: name.to_string(), pass, detail });
    }

    pub fn pass(&mut self, name: &str, detail: String) {
        self.verdict(name, true, detail);
    }

    pub fn fail(&mut self, name: &str, detail: String) {
        self.verdict(name, false, detail);
    }

    pub fn witness(&mut self, key: &str, value: Json) {
        self.witnesses.push((key.to_string(), value));
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// The command/config/verdicts/witnesses body, without tool banner or
    /// timings — reused verbatim when a report is nested inside another.
    pub fn body(&self) -> Vec<(String, Json)> {
        let verdicts = self
            .verdicts
            .iter()
            .map(|v| {
                Json::Obj(vec![
                    ("name".into(), Json::Str(v.name.clone())),
                    ("status".into(), Json::Str(if v.pass { "PASS" } else { "FAIL" }.into())),
                    ("detail".into(), Json::Str(v.detail.clone())),
                ])
            })
            .collect();
        vec![
            ("command".into(), Json::Str(self.command.clone())),
            ("config".into(), Json::Obj(self.config.clone())),
            ("verdicts".into(), Json::Arr(verdicts)),
            ("witnesses".into(), Json::Obj(self.witnesses.clone())),
        ]
    }

    pub fn to_json(&self) -> Json {
        let mut pairs = vec![(
            "tool".into(),
            Json::Obj(vec![
                ("name".into(), Json::Str("forcing-lab".into())),
                ("version".into(), Json::Str(env!("CARGO_PKG_VERSION").into())),
            ]),
        )];
        pairs.extend(self.body());
        pairs.push((
            "timings".into(),
            Json::Obj(vec![("elapsed_us".into(), Json::Num(self.elapsed_us.to_string()))]),
        ));
        Json::Obj(pairs)
    }

    pub fn render(&self) -> String {
        let mut s = self.to_json().render();
        s.push('\n');
        s
    }
}
