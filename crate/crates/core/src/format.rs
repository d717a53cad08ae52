//! The plain-text dimer file format.
//!
//! ```text
//! # comment
//! dimer NAME
//! vertex V [X Y]
//! arrow A TAIL HEAD [DX DY]
//! face + A1 A2 ...
//! face - A1 A2 ...
//! ```
//!
//! Face arrow lists are in composition order; positions are rationals in
//! `[0, 1)` written `p/q` or as integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::dimer::{validate, DimerModel, RawDimer, Sign, ValidationError};
use crate::lp::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_rational(tok: &str, line: usize) -> Result<Q, ParseError> {
    tok.parse::<Q>()
        .map_err(|_| syntax(line, format!("invalid rational `{tok}`")))
}

fn parse_int(tok: &str, line: usize) -> Result<i64, ParseError> {
    tok.parse::<i64>()
        .map_err(|_| syntax(line, format!("invalid integer `{tok}`")))
}

/// Parses a dimer file without validating the model.
pub fn parse_raw(text: &str) -> Result<RawDimer, ParseError> {
    let mut raw = RawDimer::default();
    let mut named = false;
    let mut arrow_ids: HashMap<String, usize> = HashMap::new();
    let mut declared: BTreeSet<String> = BTreeSet::new();
    let mut pending_faces: Vec<(usize, Sign, Vec<String>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let content = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else {
            continue;
        };
        match kw {
            "dimer" => {
                if named {
                    return Err(syntax(ln, "duplicate `dimer` line"));
                }
                if rest.len() != 1 {
                    return Err(syntax(ln, "expected `dimer NAME`"));
                }
                raw.name = rest[0].to_string();
                named = true;
            }
            "vertex" => match rest {
                [v] => {
                    if !declared.insert(v.to_string()) {
                        return Err(syntax(ln, format!("duplicate vertex `{v}`")));
                    }
                }
                [v, x, y] => {
                    if !declared.insert(v.to_string()) {
                        return Err(syntax(ln, format!("duplicate vertex `{v}`")));
                    }
                    raw.positions.insert(
                        v.to_string(),
                        [parse_rational(x, ln)?, parse_rational(y, ln)?],
                    );
                }
                _ => return Err(syntax(ln, "expected `vertex V [X Y]`")),
            },
            "arrow" => {
                let (a, t, h, off) = match rest {
                    [a, t, h] => (a, t, h, None),
                    [a, t, h, dx, dy] => (a, t, h, Some([parse_int(dx, ln)?, parse_int(dy, ln)?])),
                    _ => return Err(syntax(ln, "expected `arrow A TAIL HEAD [DX DY]`")),
                };
                if arrow_ids.contains_key(*a) {
                    return Err(syntax(ln, format!("duplicate arrow `{a}`")));
                }
                let id = raw.add_arrow(*a);
                arrow_ids.insert(a.to_string(), id);
                raw.endpoints[id] = Some((t.to_string(), h.to_string()));
                raw.offsets[id] = off;
            }
            "face" => {
                let sign = match rest.first() {
                    Some(&"+") => Sign::Positive,
                    Some(&"-") => Sign::Negative,
                    _ => return Err(syntax(ln, "expected `face +|- A1 A2 ...`")),
                };
                pending_faces.push((ln, sign, rest[1..].iter().map(|s| s.to_string()).collect()));
            }
            other => return Err(syntax(ln, format!("unknown keyword `{other}`"))),
        }
    }
    if !named {
        return Err(syntax(1, "missing `dimer NAME` line"));
    }
    for (ln, sign, names) in pending_faces {
        let mut ids = Vec::with_capacity(names.len());
        for n in &names {
            match arrow_ids.get(n) {
                Some(&id) => ids.push(id),
                None => return Err(syntax(ln, format!("face uses undeclared arrow `{n}`"))),
            }
        }
        raw.add_face(sign, ids);
    }
    if !declared.is_empty() {
        let used: BTreeSet<&str> = raw
            .endpoints
            .iter()
            .flatten()
            .flat_map(|(t, h)| [t.as_str(), h.as_str()])
            .collect();
        if let Some(v) = used.iter().find(|v| !declared.contains(**v)) {
            return Err(syntax(0, format!("arrow endpoint `{v}` is not a declared vertex")));
        }
        if let Some(v) = declared.iter().find(|v| !used.contains(v.as_str())) {
            return Err(syntax(0, format!("vertex `{v}` is declared but no arrow touches it")));
        }
    }
    Ok(raw)
}

pub fn parse(text: &str) -> Result<DimerModel, ParseError> {
    Ok(validate(&parse_raw(text)?)?)
}

/// Canonical text form: name, vertices (in derived order), arrows, faces.
pub fn serialize(d: &DimerModel) -> String {
    let mut out = String::new();
    writeln!(out, "dimer {}", d.name()).unwrap();
    for v in 0..d.num_vertices() {
        match d.position(v) {
            Some([x, y]) => {
                writeln!(out, "vertex {} {} {}", d.vertex_label(v), fmt_q(x), fmt_q(y)).unwrap()
            }
            None => writeln!(out, "vertex {}", d.vertex_label(v)).unwrap(),
        }
    }
    for a in 0..d.num_arrows() {
        write!(
            out,
            "arrow {} {} {}",
            d.arrow_name(a),
            d.vertex_label(d.tail(a)),
            d.vertex_label(d.head(a))
        )
        .unwrap();
        if let Some(off) = d.offsets() {
            write!(out, " {} {}", off[a][0], off[a][1]).unwrap();
        }
        out.push('\n');
    }
    for f in d.faces() {
        write!(out, "face {}", f.sign.symbol()).unwrap();
        for &a in &f.arrows {
            write!(out, " {}", d.arrow_name(a)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads a sequence of divisor classes: one class per line, integer
/// coefficients separated by whitespace or commas, `#` comments allowed.
pub fn parse_sequence(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if toks.is_empty() {
            continue;
        }
        rows.push(
            toks.iter()
                .map(|t| parse_int(t, i + 1))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if let Some(len) = rows.first().map(Vec::len) {
        if let Some(bad) = rows.iter().position(|r| r.len() != len) {
            return Err(syntax(bad + 1, "classes have different lengths"));
        }
    }
    Ok(rows)
}

pub fn serialize_sequence(classes: &[Vec<i64>]) -> String {
    classes
        .iter()
        .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

/// Names of vertices in file order, for callers that accept `--root LABEL`.
pub fn vertex_index(d: &DimerModel) -> BTreeMap<String, usize> {
    (0..d.num_vertices())
        .map(|v| (d.vertex_label(v).to_string(), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = "\
# the simplest torus dimer
dimer c3
arrow x 1 1
arrow y 1 1
arrow z 1 1
face + x y z
face - x z y
";

    #[test]
    fn parses_and_validates() {
        let d = parse(C3).unwrap();
        assert_eq!(d.num_arrows(), 3);
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.vertex_label(0), "1");
    }

    #[test]
    fn canonical_text_round_trips() {
        let d = parse(C3).unwrap().with_offsets().unwrap();
        let text = serialize(&d);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("dimer a\narrow x 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = parse("dimer a\narrow x 1 1\nface + x y z\n").unwrap_err();
        assert!(err.to_string().contains("undeclared arrow `y`"));
    }

    #[test]
    fn sequences_accept_commas() {
        let s = parse_sequence("0 0 0\n1, 0, 0 # O(1)\n\n2 0 0\n").unwrap();
        assert_eq!(s, vec![vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]]);
        assert_eq!(parse_sequence(&serialize_sequence(&s)).unwrap(), s);
    }
}
