//! Text format for codes:
//!
//! ```text
//! # prepcode v1
//! n=16 m=256 d=6
//! 0000
//! 003F
//! ...
//! ```
//!
//! One uppercase hex word per line, `ceil(n/4)` digits, coordinate 1 in the
//! most significant bit of the first digit, padding bits zero. `d=?` marks
//! an unknown distance.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{BinaryWord, Code};
use crate::error::{Error, Result};

const MAGIC: &str = "# prepcode v1";

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

pub fn render_code(c: &Code) -> String {
    let mut out = String::with_capacity(c.len() * (BinaryWord::hex_width(c.n()) + 1) + 32);
    out.push_str(MAGIC);
    out.push('\n');
    let d = c.distance().map_or_else(|| "?".to_string(), |d| d.to_string());
    writeln!(out, "n={} m={} d={}", c.n(), c.len(), d).unwrap();
    for w in c.words() {
        out.push_str(&w.to_hex());
        out.push('\n');
    }
    out
}

pub fn write_code(c: &Code, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_code(c))?;
    Ok(())
}

pub fn read_code(path: impl AsRef<Path>) -> Result<Code> {
    let text = std::fs::read_to_string(path)?;
    parse_code(&text)
}

fn header_field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let tok = match tok {
        Some(t) => t,
        None => return parse_err(line, format!("missing `{key}=` field")),
    };
    match tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')) {
        Some(v) => Ok(v),
        None => parse_err(line, format!("expected `{key}=`, found {tok:?}")),
    }
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));

    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((no, other)) => return parse_err(no, format!("expected {MAGIC:?}, found {other:?}")),
        None => return parse_err(1, "empty file"),
    }

    let (hno, header) = match lines.next() {
        Some(h) => h,
        None => return parse_err(2, "missing header line"),
    };
    let mut toks = header.split_whitespace();
    let n: usize = header_field(toks.next(), "n", hno)?.parse().or_else(|_| parse_err(hno, "n is not an integer"))?;
    let m: usize = header_field(toks.next(), "m", hno)?.parse().or_else(|_| parse_err(hno, "m is not an integer"))?;
    let d_field = header_field(toks.next(), "d", hno)?;
    let declared_d = match d_field {
        "?" => None,
        v => Some(v.parse::<usize>().or_else(|_| parse_err(hno, "d is neither an integer nor `?`"))?),
    };
    if let Some(extra) = toks.next() {
        return parse_err(hno, format!("unexpected header token {extra:?}"));
    }
    if n == 0 || n > super::MAX_LENGTH {
        return parse_err(hno, format!("n = {n} outside 1..={}", super::MAX_LENGTH));
    }

    let width = BinaryWord::hex_width(n);
    let mut words = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = hno;
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        last_line = no;
        if line.len() != width {
            return parse_err(no, format!("word {line:?} has {} hex digits, expected {width}", line.len()));
        }
        let w = BinaryWord::from_hex(line, n).or_else(|e| parse_err(no, e.to_string()))?;
        if !seen.insert(w) {
            return parse_err(no, format!("duplicate word {line}"));
        }
        words.push(w);
    }
    if words.len() != m {
        return parse_err(last_line, format!("header declares m={m} but file holds {} words", words.len()));
    }
    let code = Code::new(n, words).or_else(|e| parse_err(hno, e.to_string()))?;
    if let (Some(declared), Some(actual)) = (declared_d, code.distance()) {
        if declared != actual {
            return parse_err(hno, format!("header declares d={declared} but the words have d={actual}"));
        }
    }
    Ok(code)
}
