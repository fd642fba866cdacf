//! The `poly v1` text format: a header line `poly v1 deg=<d>` followed by
//! `d + 1` lines of ASCII decimal coefficients, ascending from `z^0`. The zero
//! polynomial is written `poly v1 deg=-inf` with no coefficient lines.

use std::fmt::Write as _;

use rug::Integer;
use thiserror::Error;

use super::IntPoly;

const HEADER: &str = "poly v1 deg=";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing or malformed header (expected `poly v1 deg=<d>`)")]
    Header,
    #[error("line {line}: invalid coefficient `{text}`")]
    Coefficient { line: usize, text: String },
    #[error("expected {expected} coefficient lines, found {found}")]
    Count { expected: usize, found: usize },
    #[error("leading coefficient is zero")]
    NonCanonical,
}

pub(crate) fn to_text(p: &IntPoly) -> String {
    let mut out = String::with_capacity(p.coeffs().len() * 8 + 24);
    out.push_str(HEADER);
    match p.degree().finite() {
        Some(d) => writeln!(out, "{d}").unwrap(),
        None => out.push_str("-inf\n"),
    }
    for c in p.coeffs() {
        writeln!(out, "{c}").unwrap();
    }
    out
}

fn is_canonical_decimal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && s != "-0"
}

pub(crate) fn parse_text(s: &str) -> Result<IntPoly, ParseError> {
    let mut lines = s.lines();
    let header = lines.next().ok_or(ParseError::Header)?;
    let deg = header.strip_prefix(HEADER).ok_or(ParseError::Header)?;
    let expected = match deg {
        "-inf" => 0,
        d if is_canonical_decimal(d) && !d.starts_with('-') => d.parse::<usize>().map_err(|_| ParseError::Header)? + 1,
        _ => return Err(ParseError::Header),
    };
    let mut coeffs = Vec::with_capacity(expected);
    for (i, line) in lines.enumerate() {
        if i >= expected {
            if line.is_empty() {
                continue;
            }
            return Err(ParseError::Count { expected, found: i + 1 });
        }
        if !is_canonical_decimal(line) {
            return Err(ParseError::Coefficient { line: i + 2, text: line.to_string() });
        }
        let c = Integer::from_str_radix(line, 10)
            .map_err(|_| ParseError::Coefficient { line: i + 2, text: line.to_string() })?;
        coeffs.push(c);
    }
    if coeffs.len() != expected {
        return Err(ParseError::Count { expected, found: coeffs.len() });
    }
    if coeffs.last().is_some_and(|c| c.is_zero()) {
        return Err(ParseError::NonCanonical);
    }
    Ok(IntPoly::from_coeffs(coeffs))
}
