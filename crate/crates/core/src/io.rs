//! Text formats: graph6, 1-based edge lists, adjacency matrices and DOT.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Coloring, Graph, GraphError, Side, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid graph6 string: {0}")]
    Graph6(String),
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("adjacency matrix line {line}: {msg}")]
    Matrix { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Encodes `g` as graph6: the vertex count followed by the upper triangle,
/// column by column, six bits per printable byte.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push(126 as char);
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 0x3f) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push(((acc << (6 - used)) + 63) as char);
    }
    out
}

pub fn from_graph6(s: &str) -> Result<Graph, FormatError> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |msg: &str| FormatError::Graph6(format!("{msg} in {s:?}"));
    if bytes.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(bad(&format!("byte {b} outside 63..=126")));
    }
    let (n, body) = if bytes[0] == 126 {
        if bytes.len() < 4 || bytes[1] == 126 {
            return Err(bad("unsupported vertex count"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
        (n, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    if n == 0 {
        return Err(bad("zero vertices"));
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }
    let nbits = n * (n - 1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes, found {}",
            nbits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut rows = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    if (nbits..body.len() * 6).any(bit) {
        return Err(bad("nonzero padding bits"));
    }
    Ok(Graph::from_rows(rows)?)
}

/// Edge list with 1-based labels. The first line is the vertex count, then
/// one `u v` pair per line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Parses an edge list. Blank lines and `#` comments are ignored. A leading
/// line holding a single integer fixes the vertex count; otherwise it is the
/// largest label used.
pub fn from_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_label = 0;
    let mut first = true;
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| FormatError::EdgeList { line: idx + 1, msg };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let parse = |f: &str| {
            f.parse::<usize>()
                .map_err(|_| err(format!("bad vertex label {f:?}")))
        };
        match fields.as_slice() {
            [count] if first => n = Some(parse(count)?),
            [u, v] => {
                let (u, v) = (parse(u)?, parse(v)?);
                if u == 0 || v == 0 {
                    return Err(err("labels are 1-based".into()));
                }
                max_label = max_label.max(u).max(v);
                edges.push((u - 1, v - 1));
            }
            _ => return Err(err(format!("expected \"u v\", found {body:?}"))),
        }
        first = false;
    }
    let n = n.unwrap_or(max_label);
    if max_label > n {
        return Err(FormatError::EdgeList {
            line: 0,
            msg: format!("label {max_label} exceeds vertex count {n}"),
        });
    }
    Ok(Graph::from_edges(n, edges)?)
}

/// Adjacency matrix, one row of `0`/`1` per line.
pub fn to_adjacency_matrix(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.n() {
        for w in 0..g.n() {
            out.push(if g.has_edge(v, w) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn from_adjacency_matrix(text: &str) -> Result<Graph, FormatError> {
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let err = |msg: String| FormatError::Matrix { line: idx + 1, msg };
        let mut row = 0u64;
        let mut len = 0;
        for ch in body.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '0' => {}
                '1' if len < 64 => row |= 1 << len,
                '1' => return Err(err("row too long".into())),
                c => return Err(err(format!("unexpected character {c:?}"))),
            }
            len += 1;
        }
        if len == 0 {
            continue;
        }
        if *width.get_or_insert(len) != len {
            return Err(err(format!(
                "row has {len} entries, expected {}",
                width.unwrap()
            )));
        }
        rows.push(row);
    }
    if let Some(w) = width {
        if w != rows.len() {
            return Err(FormatError::Matrix {
                line: 0,
                msg: format!("{} rows for {w} columns", rows.len()),
            });
        }
    }
    Ok(Graph::from_rows(rows)?)
}

/// DOT rendering with 1-based node names. Left vertices are drawn as boxes
/// when a colouring is supplied.
pub fn to_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match coloring.map(|c| c.side(v)) {
            Some(Side::Left) => {
                let _ = writeln!(out, "  {} [shape=box];", v + 1);
            }
            Some(Side::Right) => {
                let _ = writeln!(out, "  {} [shape=circle];", v + 1);
            }
            None => {
                let _ = writeln!(out, "  {};", v + 1);
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", u + 1, v + 1);
    }
    out.push_str("}\n");
    out
}

/// Parses a stream of graph6 lines, skipping blank lines and `#` comments.
pub fn read_graph6_lines(text: &str) -> Result<Vec<Graph>, FormatError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(from_graph6)
        .collect()
}
