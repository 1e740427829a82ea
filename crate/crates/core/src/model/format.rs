//! Line-oriented text format for instances and solutions.
//!
//! ```text
//! stackmst/1
//! n 4
//! red 0 1 1
//! red 1 2 2
//! red 2 3 0.5
//! blue complete
//! budget 3
//! ```
//!
//! Explicit catalogs use `blue <u> <v> <activation>` lines instead of
//! `blue complete`; a bare `allow-parallel` line lets blue pairs repeat red
//! ones. Solutions are `buy <u> <v> <price>` lines.

use std::fmt::Write as _;

use super::{
    BlueCatalog, BlueEdge, BlueMode, Budget, EdgeKey, PricedSolution, RawInstance, RedTree,
};
use crate::value::Value;

pub const FORMAT_HEADER: &str = "stackmst/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("missing `{FORMAT_HEADER}` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `n <count>` line")]
    MissingVertexCount,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (i + 1, body.split_whitespace().collect()))
    })
}

fn parse_vertex(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid vertex `{tok}`")))
}

fn parse_value(tok: &str, line: usize) -> Result<Value, FormatError> {
    tok.parse().map_err(|e: crate::value::ParseValueError| syntax(line, e.to_string()))
}

fn parse_triple(fields: &[&str], line: usize) -> Result<(usize, usize, Value), FormatError> {
    if fields.len() != 4 {
        return Err(syntax(line, format!("`{}` takes three arguments", fields[0])));
    }
    Ok((
        parse_vertex(fields[1], line)?,
        parse_vertex(fields[2], line)?,
        parse_value(fields[3], line)?,
    ))
}

/// Parses an instance file. Structural checks (tree shape, duplicates) are
/// left to [`super::validate`].
pub fn parse_instance(text: &str) -> Result<RawInstance, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, f)) if f == [FORMAT_HEADER] => {}
        _ => return Err(FormatError::MissingHeader),
    }
    let mut n = None;
    let mut reds = Vec::new();
    let mut complete = false;
    let mut blues = Vec::new();
    let mut allow_parallel = false;
    let mut budget = Budget::Unbounded;
    for (line, fields) in lines {
        match fields[0] {
            "n" => {
                if fields.len() != 2 {
                    return Err(syntax(line, "`n` takes one argument"));
                }
                if n.is_some() {
                    return Err(syntax(line, "duplicate `n` line"));
                }
                n = Some(parse_vertex(fields[1], line)?);
            }
            "red" => reds.push(parse_triple(&fields, line)?),
            "blue" if fields.len() == 2 && fields[1] == "complete" => {
                if !blues.is_empty() {
                    return Err(syntax(line, "`blue complete` mixed with explicit blue edges"));
                }
                complete = true;
            }
            "blue" => {
                if complete {
                    return Err(syntax(line, "`blue complete` mixed with explicit blue edges"));
                }
                let (u, v, a) = parse_triple(&fields, line)?;
                blues.push(BlueEdge {
                    key: EdgeKey::new(u, v),
                    activation: a,
                });
            }
            "allow-parallel" if fields.len() == 1 => allow_parallel = true,
            "budget" => {
                if fields.len() != 2 {
                    return Err(syntax(line, "`budget` takes one argument"));
                }
                budget = Budget::Finite(parse_value(fields[1], line)?);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let n = n.ok_or(FormatError::MissingVertexCount)?;
    blues.sort_by_key(|b| b.key);
    let mode = if complete {
        BlueMode::Complete
    } else {
        BlueMode::Explicit(blues)
    };
    Ok(RawInstance {
        tree: RedTree::new(n, reds),
        blues: BlueCatalog {
            mode,
            allow_parallel_to_red: allow_parallel,
        },
        budget,
    })
}

pub fn format_instance(raw: &RawInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_HEADER}");
    let _ = writeln!(out, "n {}", raw.tree.n());
    for e in raw.tree.edges() {
        let _ = writeln!(out, "red {} {} {}", e.key.u, e.key.v, e.cost);
    }
    match &raw.blues.mode {
        BlueMode::Complete => out.push_str("blue complete\n"),
        BlueMode::Explicit(list) => {
            for b in list {
                let _ = writeln!(out, "blue {} {} {}", b.key.u, b.key.v, b.activation);
            }
        }
    }
    if raw.blues.allow_parallel_to_red {
        out.push_str("allow-parallel\n");
    }
    if let Budget::Finite(cap) = raw.budget {
        let _ = writeln!(out, "budget {cap}");
    }
    out
}

pub fn parse_solution(text: &str) -> Result<PricedSolution, FormatError> {
    let mut entries = Vec::new();
    for (line, fields) in content_lines(text) {
        if fields[0] != "buy" {
            return Err(syntax(line, format!("unknown directive `{}`", fields[0])));
        }
        let (u, v, price) = parse_triple(&fields, line)?;
        entries.push((EdgeKey::new(u, v), price));
    }
    Ok(PricedSolution::new(entries))
}

pub fn format_solution(solution: &PricedSolution) -> String {
    let mut out = String::new();
    for p in &solution.entries {
        let _ = writeln!(out, "buy {} {} {}", p.edge.u, p.edge.v, p.price);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complete_instance() {
        let text = "# tight path\nstackmst/1\nn 3\nred 0 1 1\nred 2 1 2.5  # comment\nblue complete\n";
        let raw = parse_instance(text).unwrap();
        assert_eq!(raw.tree.n(), 3);
        assert_eq!(raw.tree.edges()[1].key, EdgeKey::new(1, 2));
        assert_eq!(raw.tree.edges()[1].cost, Value::frac(5, 2));
        assert_eq!(raw.blues.mode, BlueMode::Complete);
        assert_eq!(raw.budget, Budget::Unbounded);
    }

    #[test]
    fn parses_explicit_with_budget() {
        let text = "stackmst/1\nn 3\nred 0 1 1\nred 1 2 1\nblue 0 2 3/2\nallow-parallel\nbudget 2\n";
        let raw = parse_instance(text).unwrap();
        assert!(raw.blues.allow_parallel_to_red);
        assert_eq!(raw.budget, Budget::Finite(Value::int(2)));
        match &raw.blues.mode {
            BlueMode::Explicit(list) => assert_eq!(list[0].activation, Value::frac(3, 2)),
            BlueMode::Complete => panic!("expected explicit catalog"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_instance("n 2\n"), Err(FormatError::MissingHeader));
        assert!(matches!(
            parse_instance("stackmst/1\nn 2\nred 0 1 x\n"),
            Err(FormatError::Syntax { line: 3, .. })
        ));
        assert!(parse_instance("stackmst/1\nn 2\nred 0 1 1\nblue complete\nblue 0 1 0\n").is_err());
        assert!(parse_instance("stackmst/1\nn 2\nfoo\n").is_err());
        assert_eq!(
            parse_instance("stackmst/1\nred 0 1 1\n"),
            Err(FormatError::MissingVertexCount)
        );
    }

    #[test]
    fn solution_round_trip() {
        let sol = PricedSolution::new([
            (EdgeKey::new(2, 0), Value::int(2)),
            (EdgeKey::new(1, 3), Value::frac(1, 3)),
        ]);
        let text = format_solution(&sol);
        assert_eq!(text, "buy 0 2 2\nbuy 1 3 1/3\n");
        assert_eq!(parse_solution(&text).unwrap(), sol);
    }
}
