//! Line-oriented diagram data files.
//!
//! ```text
//! # source: where the permutations were transcribed from
//! diagram A56
//! degree 56
//! x (1,52)(2,6)...
//! y (1,2,3)(4,5,6)...
//! handle 1: 2 3
//! end
//! ```
//!
//! Text after `#` is a comment. A `# source:` comment before a record is kept
//! with that record.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Handle, Triple237};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Perm { line: usize, source: PermError },
    #[error("record {name} (line {line}): {source}")]
    Diagram {
        name: String,
        line: usize,
        source: DiagramError,
    },
}

/// One parsed record, before validation against reference metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub diagram: Diagram,
    pub source: Option<String>,
    pub line: usize,
}

#[derive(Default)]
struct Partial {
    name: String,
    line: usize,
    source: Option<String>,
    degree: Option<usize>,
    x: Option<(String, usize)>,
    y: Option<(String, usize)>,
    handles: Vec<Handle>,
}

pub fn parse_records(text: &str) -> Result<Vec<Record>, FormatError> {
    let mut out = Vec::new();
    let mut current: Option<Partial> = None;
    let mut pending_source: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (content, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(raw[pos + 1..].trim())),
            None => (raw, None),
        };
        if let Some(src) = comment.and_then(|c| c.strip_prefix("source:")) {
            let src = src.trim().to_string();
            match current.as_mut() {
                Some(p) => p.source = Some(src),
                None => pending_source = Some(src),
            }
        }
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| FormatError::Syntax { line, message };
        let (key, value) = match content.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (content, ""),
        };
        match (key, current.as_mut()) {
            ("diagram", None) => {
                if value.is_empty() {
                    return Err(syntax("missing diagram name".into()));
                }
                current = Some(Partial {
                    name: value.to_string(),
                    line,
                    source: pending_source.take(),
                    ..Partial::default()
                });
            }
            ("diagram", Some(p)) => {
                return Err(syntax(format!("record {} not closed with 'end'", p.name)))
            }
            (_, None) => return Err(syntax(format!("'{key}' outside a record"))),
            ("degree", Some(p)) => {
                let d = value
                    .parse::<usize>()
                    .map_err(|_| syntax(format!("bad degree '{value}'")))?;
                if d == 0 {
                    return Err(syntax("degree must be positive".into()));
                }
                p.degree = Some(d);
            }
            ("x", Some(p)) => p.x = Some((value.to_string(), line)),
            ("y", Some(p)) => p.y = Some((value.to_string(), line)),
            ("handle", Some(p)) => p.handles.push(parse_handle(value).map_err(syntax)?),
            ("end", Some(_)) => {
                let p = current.take().expect("matched Some");
                out.push(finish(p, line)?);
            }
            (other, Some(_)) => return Err(syntax(format!("unknown key '{other}'"))),
        }
    }
    if let Some(p) = current {
        return Err(FormatError::Syntax {
            line: p.line,
            message: format!("record {} not closed with 'end'", p.name),
        });
    }
    Ok(out)
}

fn parse_handle(value: &str) -> Result<Handle, String> {
    let (i, rest) = value
        .split_once(':')
        .ok_or_else(|| format!("expected 'handle <i>: <j> <k>', got '{value}'"))?;
    let i: u8 = i
        .trim()
        .parse()
        .map_err(|_| format!("bad handle order '{i}'"))?;
    let pts: Vec<u32> = rest
        .split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad point '{t}'")))
        .collect::<Result<_, _>>()?;
    match pts.as_slice() {
        [j, k] => Ok(Handle::new(i, *j, *k)),
        _ => Err(format!("expected two points, got '{}'", rest.trim())),
    }
}

fn finish(p: Partial, end_line: usize) -> Result<Record, FormatError> {
    let missing = |what: &str| FormatError::Syntax {
        line: end_line,
        message: format!("record {} is missing '{what}'", p.name),
    };
    let degree = p.degree.ok_or_else(|| missing("degree"))?;
    let (xs, xl) = p.x.clone().ok_or_else(|| missing("x"))?;
    let (ys, yl) = p.y.clone().ok_or_else(|| missing("y"))?;
    let x = Permutation::parse_cycles(&xs, degree)
        .map_err(|source| FormatError::Perm { line: xl, source })?;
    let y = Permutation::parse_cycles(&ys, degree)
        .map_err(|source| FormatError::Perm { line: yl, source })?;
    let wrap = |source: DiagramError| FormatError::Diagram {
        name: p.name.clone(),
        line: p.line,
        source,
    };
    let triple = Triple237::new(x, y).map_err(wrap)?;
    let diagram = Diagram::new(p.name.clone(), triple, p.handles.clone()).map_err(wrap)?;
    Ok(Record {
        diagram,
        source: p.source,
        line: p.line,
    })
}

pub fn write_record(diagram: &Diagram, source: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(src) = source {
        writeln!(out, "# source: {src}").unwrap();
    }
    writeln!(out, "diagram {}", diagram.name()).unwrap();
    writeln!(out, "degree {}", diagram.degree()).unwrap();
    writeln!(out, "x {}", diagram.x()).unwrap();
    writeln!(out, "y {}", diagram.y()).unwrap();
    for h in diagram.declared_handles() {
        writeln!(out, "handle {}: {} {}", h.i, h.j, h.k).unwrap();
    }
    out.push_str("end\n");
    out
}
