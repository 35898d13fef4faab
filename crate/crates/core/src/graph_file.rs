//! Plain-text graph files: `#` comment lines, a header `n m`, then `m` lines
//! `u v` (0-indexed; a loop is `u u`). Edge `i` is the `i`-th edge line.

use thiserror::Error;

use crate::graph::Multigraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl GraphFile {
    pub fn graph(&self) -> Multigraph {
        Multigraph::from_edges(self.n, &self.edges)
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn two_numbers(line: usize, text: &str, what: &str) -> Result<(u64, u64), ParseError> {
    let mut fields = text.split_whitespace();
    let mut next = |name: &str| -> Result<u64, ParseError> {
        let f = fields
            .next()
            .ok_or_else(|| err(line, format!("{what}: missing {name}")))?;
        f.parse::<u64>()
            .map_err(|_| err(line, format!("{what}: {name} {f:?} is not a non-negative integer")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = fields.next() {
        return Err(err(line, format!("{what}: unexpected field {extra:?}")));
    }
    Ok((a, b))
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let (n, m) = two_numbers(line, content, "header")?;
                if n > u32::MAX as u64 || m > u32::MAX as u64 {
                    return Err(err(line, "header: counts exceed 32 bits"));
                }
                header = Some((n as usize, m as usize));
                edges.reserve(m as usize);
            }
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(err(line, format!("more than the declared {m} edge lines")));
                }
                let (u, v) = two_numbers(line, content, "edge")?;
                for x in [u, v] {
                    if x >= n as u64 {
                        return Err(err(line, format!("edge: vertex {x} out of range for n = {n}")));
                    }
                }
                edges.push((u as u32, v as u32));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing header \"n m\""))?;
    if edges.len() != m {
        return Err(err(
            last_line.max(1),
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Ok(GraphFile { n, edges })
}
