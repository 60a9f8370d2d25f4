//! Plain-text lookup tables.
//!
//! ```text
//! # comment lines start with '#'
//! 2 2
//! 0 1 2 3
//! ```
//!
//! The first non-comment line is `n m`; then exactly `2^n` entries follow,
//! decimal or `0x`-prefixed hexadecimal, separated by any whitespace.
//! Entry `x` is `F(x)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::vbf::Vbf;

const PER_LINE: usize = 16;

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_int(tok: &str, line: usize) -> Result<u64> {
    let parsed = match tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => tok.parse::<u64>(),
    };
    parsed.map_err(|_| parse_error(line, format!("malformed integer {tok:?}")))
}

pub fn parse_lut(text: &str) -> Result<Vbf> {
    let mut header: Option<(u32, u32)> = None;
    let mut entries: Vec<u32> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let Some((n, m)) = header else {
            let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(parse_error(line, "header must be exactly \"n m\""));
            };
            let n = parse_int(a, line)?;
            let m = parse_int(b, line)?;
            if !(1..=16).contains(&n) || !(1..=16).contains(&m) {
                return Err(parse_error(line, format!("widths must lie in 1..=16, got {n} {m}")));
            }
            header = Some((n as u32, m as u32));
            entries.reserve(1 << n);
            continue;
        };
        for tok in tokens {
            let v = parse_int(tok, line)?;
            if v >> m != 0 {
                return Err(parse_error(line, format!("entry {v} does not fit in {m} bits")));
            }
            if entries.len() == 1 << n {
                return Err(parse_error(line, format!("more than 2^{n} entries")));
            }
            entries.push(v as u32);
        }
    }
    let (n, m) = header.ok_or_else(|| parse_error(last_line, "missing \"n m\" header"))?;
    if entries.len() != 1 << n {
        return Err(parse_error(
            last_line,
            format!("expected {} entries, found {}", 1u32 << n, entries.len()),
        ));
    }
    Vbf::new(n, m, entries)
}

/// Canonical form: header line, then decimal entries sixteen per line.
pub fn serialize_lut(f: &Vbf) -> String {
    let mut out = format!("{} {}\n", f.n(), f.m());
    for chunk in f.table().chunks(PER_LINE) {
        let line: Vec<String> = chunk.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
