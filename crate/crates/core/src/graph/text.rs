//! Edge-list text format.
//!
//! ```text
//! n m
//! # optional comment lines anywhere
//! u v      (m lines, 0-based)
//! ```

use std::io::{self, BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// Writes `g`; each entry of `comments` becomes a `#` line after the header.
pub fn write_graph<W: Write>(mut out: W, g: &Graph, comments: &[String]) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(trimmed, line_no)?;
        match header {
            None => {
                header = Some((a, b));
                edges.reserve(b);
            }
            Some((_, m)) => {
                if edges.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("more than the declared {m} edges"),
                    });
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: last_line,
        msg: "missing `n m` header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let bad = |msg: String| Error::Parse { line: line_no, msg };
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| bad("expected two integers".into()))?;
        tok.parse()
            .map_err(|_| bad(format!("not a non-negative integer: `{tok}`")))
    };
    let pair = (next()?, next()?);
    if let Some(extra) = it.next() {
        return Err(bad(format!("unexpected token `{extra}`")));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    #[test]
    fn round_trip_with_comments() {
        let g = generate(&FamilySpec::Hypercube(3)).unwrap();
        let mut buf = Vec::new();
        write_graph(&mut buf, &g, &["family=hypercube:3".into()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("8 12\n# family=hypercube:3\n"));
        assert_eq!(read_graph(&buf[..]).unwrap(), g);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            read_graph("3 2\n0 1\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_graph("3 1\n0 x\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_graph("# only comments\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert_eq!(
            read_graph("2 1\n1 1\n".as_bytes()),
            Err(Error::SelfLoop(1))
        );
    }
}
