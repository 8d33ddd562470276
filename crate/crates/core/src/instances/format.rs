//! Line-oriented text formats.
//!
//! ```text
//! fgt-weighted v1 <n> <c> <directed:0|1>      then n rows of n weights
//! fgt-coloured v1 <n> <numColours>            then one row of n colours,
//!                                             then n rows of n bits
//! fgt-minplus v1 <n> <c>                      then n rows of n entries
//! fgt-tripartite v1 <nA> <nB> <nC> <c>        then nA+nB+nC rows of weights
//! ```
//!
//! Weights are decimal integers or the literal `inf`. Several documents may be
//! concatenated in one file (a distance-product instance is two `fgt-minplus`
//! documents).

use std::fmt::Write as _;

use super::{BitMatrix, ColouredGraph, MinPlusMatrix, TripartiteGraph, WeightedGraph, INF};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Weighted(WeightedGraph),
    Coloured(ColouredGraph),
    MinPlus(MinPlusMatrix),
    Tripartite(TripartiteGraph),
}

impl From<WeightedGraph> for Instance {
    fn from(g: WeightedGraph) -> Self {
        Instance::Weighted(g)
    }
}

impl From<ColouredGraph> for Instance {
    fn from(g: ColouredGraph) -> Self {
        Instance::Coloured(g)
    }
}

impl From<MinPlusMatrix> for Instance {
    fn from(m: MinPlusMatrix) -> Self {
        Instance::MinPlus(m)
    }
}

impl From<TripartiteGraph> for Instance {
    fn from(t: TripartiteGraph) -> Self {
        Instance::Tripartite(t)
    }
}

fn write_weight_rows(out: &mut String, n: usize, entries: &[i64]) {
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            let x = entries[i * n + j];
            if x == INF {
                out.push_str("inf");
            } else {
                write!(out, "{x}").unwrap();
            }
        }
        out.push('\n');
    }
}

pub fn serialize(instance: &Instance) -> String {
    let mut out = String::new();
    match instance {
        Instance::Weighted(g) => {
            writeln!(out, "fgt-weighted v1 {} {} {}", g.n(), g.c(), g.directed() as u8).unwrap();
            write_weight_rows(&mut out, g.n(), g.weights());
        }
        Instance::MinPlus(m) => {
            writeln!(out, "fgt-minplus v1 {} {}", m.n(), m.c()).unwrap();
            write_weight_rows(&mut out, m.n(), m.entries());
        }
        Instance::Tripartite(t) => {
            let [a, b, c] = t.sizes();
            writeln!(out, "fgt-tripartite v1 {a} {b} {c} {}", t.graph().c()).unwrap();
            write_weight_rows(&mut out, t.graph().n(), t.graph().weights());
        }
        Instance::Coloured(g) => {
            let n = g.n();
            writeln!(out, "fgt-coloured v1 {n} {}", g.num_colours()).unwrap();
            let colours: Vec<String> = g.gamma().iter().map(u32::to_string).collect();
            out.push_str(&colours.join(" "));
            out.push('\n');
            for i in 0..n {
                for j in 0..n {
                    if j > 0 {
                        out.push(' ');
                    }
                    out.push(if g.has_edge(i, j) { '1' } else { '0' });
                }
                out.push('\n');
            }
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    fn skip_blank(&mut self) {
        while let Some((_, l)) = self.inner.peek() {
            if l.trim().is_empty() {
                self.inner.next();
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_blank();
        self.inner.peek().is_none()
    }

    /// Next line as (1-based line number, tokens).
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((idx, l)) => {
                self.last = idx + 1;
                Ok((idx + 1, l.split_whitespace().collect()))
            }
            None => Err(Error::parse(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

fn parse_c(tok: &str, line: usize) -> Result<f64> {
    let c: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid range exponent `{tok}`")))?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::parse(line, format!("range exponent must be positive, got `{tok}`")));
    }
    Ok(c)
}

fn parse_weight_rows(lines: &mut Lines<'_>, n: usize) -> Result<(Vec<i64>, usize)> {
    let mut w = Vec::with_capacity(n * n);
    let first_line = lines.last + 1;
    for row in 0..n {
        let (ln, toks) = lines.next(&format!("weight row {row}"))?;
        if toks.len() != n {
            return Err(Error::parse(ln, format!("expected {n} entries, found {}", toks.len())));
        }
        for t in toks {
            if t == "inf" {
                w.push(INF);
            } else {
                let x: i64 = t
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("invalid weight `{t}`")))?;
                if x.abs() >= INF {
                    return Err(Error::parse(ln, format!("weight `{t}` out of range")));
                }
                w.push(x);
            }
        }
    }
    Ok((w, first_line))
}

/// Maps a constructor error onto the line where the offending row starts.
fn locate(err: Error, header_line: usize, first_row_line: usize, n: usize) -> Error {
    match err {
        Error::InvalidInstance(msg) => {
            // Messages name the entry as `[i][j]` or `(i, j)`; point at row i.
            let row = msg
                .split(|c: char| !c.is_ascii_digit())
                .find(|s| !s.is_empty())
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&r| r < n);
            let line = row.map_or(header_line, |r| first_row_line + r);
            Error::parse(line, msg)
        }
        Error::Parse { .. } => err,
        other => Error::parse(header_line, other.to_string()),
    }
}

fn parse_one(lines: &mut Lines<'_>) -> Result<Instance> {
    lines.skip_blank();
    let (hl, header) = lines.next("header")?;
    let expect_len = |k: usize| -> Result<()> {
        if header.len() != k {
            Err(Error::parse(hl, format!("malformed header: expected {k} fields, found {}", header.len())))
        } else {
            Ok(())
        }
    };
    if header.get(1) != Some(&"v1") {
        return Err(Error::parse(hl, "malformed header: unsupported or missing version"));
    }
    match header.first().copied() {
        Some("fgt-weighted") => {
            expect_len(5)?;
            let n = parse_usize(header[2], hl, "vertex count")?;
            let c = parse_c(header[3], hl)?;
            let directed = match header[4] {
                "0" => false,
                "1" => true,
                t => return Err(Error::parse(hl, format!("directed flag must be 0 or 1, got `{t}`"))),
            };
            let (w, first) = parse_weight_rows(lines, n)?;
            WeightedGraph::new(n, c, directed, w)
                .map(Instance::Weighted)
                .map_err(|e| locate(e, hl, first, n))
        }
        Some("fgt-minplus") => {
            expect_len(4)?;
            let n = parse_usize(header[2], hl, "dimension")?;
            let c = parse_c(header[3], hl)?;
            let (m, first) = parse_weight_rows(lines, n)?;
            MinPlusMatrix::new(n, c, m)
                .map(Instance::MinPlus)
                .map_err(|e| locate(e, hl, first, n))
        }
        Some("fgt-tripartite") => {
            expect_len(6)?;
            let sizes = [
                parse_usize(header[2], hl, "part size")?,
                parse_usize(header[3], hl, "part size")?,
                parse_usize(header[4], hl, "part size")?,
            ];
            let c = parse_c(header[5], hl)?;
            let n = sizes.iter().sum();
            let (w, first) = parse_weight_rows(lines, n)?;
            WeightedGraph::new(n, c, false, w)
                .and_then(|g| TripartiteGraph::new(g, sizes))
                .map(Instance::Tripartite)
                .map_err(|e| locate(e, hl, first, n))
        }
        Some("fgt-coloured") => {
            expect_len(4)?;
            let n = parse_usize(header[2], hl, "vertex count")?;
            let k = parse_usize(header[3], hl, "colour count")?;
            if k == 0 || k > n.max(1) {
                return Err(Error::parse(hl, format!("numColours = {k} not in [1, {n}]")));
            }
            let (cl, toks) = lines.next("colour row")?;
            if toks.len() != n {
                return Err(Error::parse(cl, format!("expected {n} colours, found {}", toks.len())));
            }
            let mut gamma = Vec::with_capacity(n);
            for t in toks {
                let g: u32 = t
                    .parse()
                    .map_err(|_| Error::parse(cl, format!("invalid colour `{t}`")))?;
                if g as usize >= k {
                    return Err(Error::parse(cl, format!("colour {g} not below numColours = {k}")));
                }
                gamma.push(g);
            }
            let mut adj = BitMatrix::new(n);
            let mut row_lines = Vec::with_capacity(n);
            for i in 0..n {
                let (ln, toks) = lines.next(&format!("adjacency row {i}"))?;
                if toks.len() != n {
                    return Err(Error::parse(ln, format!("expected {n} entries, found {}", toks.len())));
                }
                for (j, t) in toks.into_iter().enumerate() {
                    match t {
                        "0" => {}
                        "1" => adj.set(i, j, true),
                        _ => return Err(Error::parse(ln, format!("adjacency entry must be 0 or 1, got `{t}`"))),
                    }
                }
                row_lines.push(ln);
            }
            for i in 0..n {
                if adj.get(i, i) {
                    return Err(Error::parse(row_lines[i], format!("self-loop at vertex {i}")));
                }
                for j in 0..i {
                    if adj.get(i, j) != adj.get(j, i) {
                        return Err(Error::parse(
                            row_lines[i],
                            format!("adjacency not symmetric at ({i}, {j})"),
                        ));
                    }
                }
            }
            ColouredGraph::new(adj, gamma, k)
                .map(Instance::Coloured)
                .map_err(|e| Error::parse(hl, e.to_string()))
        }
        _ => Err(Error::parse(hl, "malformed header: unknown instance kind")),
    }
}

/// Parses exactly one document.
pub fn parse(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let inst = parse_one(&mut lines)?;
    if !lines.at_end() {
        let line = lines.inner.peek().map(|(i, _)| i + 1).unwrap_or(0);
        return Err(Error::parse(line, "trailing content after instance"));
    }
    Ok(inst)
}

/// Parses a file holding one or more concatenated documents.
pub fn parse_all(text: &str) -> Result<Vec<Instance>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while !lines.at_end() {
        out.push(parse_one(&mut lines)?);
    }
    if out.is_empty() {
        return Err(Error::parse(1, "empty input"));
    }
    Ok(out)
}
