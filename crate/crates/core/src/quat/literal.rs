//! Text form `w+xi+yj+zk`.
//!
//! Terms carry an optional sign (required after the first term), a decimal
//! number with optional exponent, and an optional unit suffix. Zero terms may
//! be omitted and a bare unit means a coefficient of one, so `1-2i+0.5k`,
//! `-j` and `0+0i+1j+0k` are all accepted. Each component may appear once.

use super::Quaternion;
use crate::error::{Error, Result};

pub(super) fn parse_literal(input: &str) -> Result<Quaternion> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty quaternion literal".into()));
    }
    let bytes = s.as_bytes();
    let mut comps: [Option<f64>; 4] = [None; 4];
    let mut pos = 0;
    let mut first = true;

    while pos < bytes.len() {
        let mut negative = false;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            c => {
                return Err(Error::Parse(format!(
                    "expected '+' or '-' at offset {pos} in {s:?}, found {:?}",
                    c as char
                )))
            }
        }
        first = false;

        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
            pos += 1;
        }
        if pos > start && pos < bytes.len() && matches!(bytes[pos], b'e' | b'E') {
            let mut look = pos + 1;
            if look < bytes.len() && matches!(bytes[look], b'+' | b'-') {
                look += 1;
            }
            if look < bytes.len() && bytes[look].is_ascii_digit() {
                pos = look;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
        }
        let number = &s[start..pos];

        let slot = match bytes.get(pos) {
            Some(b'i') => 1,
            Some(b'j') => 2,
            Some(b'k') => 3,
            _ => 0,
        };
        if slot != 0 {
            pos += 1;
        }

        let magnitude = if number.is_empty() {
            if slot == 0 {
                return Err(Error::Parse(format!(
                    "missing term at offset {start} in {s:?}"
                )));
            }
            1.0
        } else {
            number
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {number:?} in {s:?}: {e}")))?
        };
        if !magnitude.is_finite() {
            return Err(Error::Parse(format!("non-finite component in {s:?}")));
        }
        if comps[slot].is_some() {
            return Err(Error::Parse(format!("component repeated in {s:?}")));
        }
        comps[slot] = Some(if negative { -magnitude } else { magnitude });
    }

    let [w, x, y, z] = comps.map(|c| c.unwrap_or(0.0));
    Ok(Quaternion::new(w, x, y, z))
}

/// Shortest decimal that parses back to the same `f64` (at most 17
/// significant digits).
pub(crate) fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub(super) fn format_literal(q: &Quaternion) -> String {
    let terms = [(q.w, ""), (q.x, "i"), (q.y, "j"), (q.z, "k")];
    let mut out = String::new();
    for (v, unit) in terms {
        if v == 0.0 {
            continue;
        }
        if !out.is_empty() && v > 0.0 {
            out.push('+');
        }
        out.push_str(&format_number(v));
        out.push_str(unit);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
