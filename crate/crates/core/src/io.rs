//! TG1 text format and the companion tree-file format.
//!
//! ```text
//! # comment lines are ignored
//! n L
//! m_1
//! u v        (m_1 lines)
//! ...
//! m_L
//! u v        (m_L lines)
//! ```
//!
//! A tree file holds `n - 1` lines `u v`. Blank lines are skipped in both
//! formats; line numbers in errors count every physical line.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, Snapshot, SpanningTree, TemporalGraph};

/// Meaningful lines with their 1-based physical line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers<const K: usize>(line: usize, text: &str, what: &str) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut fields = text.split_whitespace();
    for slot in out.iter_mut() {
        let field = fields
            .next()
            .ok_or_else(|| Error::parse(line, format!("expected {what}")))?;
        *slot = field
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid number {field:?} in {what}")))?;
    }
    if fields.next().is_some() {
        return Err(Error::parse(line, format!("trailing fields after {what}")));
    }
    Ok(out)
}

fn parse_edge(line: usize, text: &str, n: usize) -> Result<Edge> {
    let [u, v] = parse_numbers::<2>(line, text, "edge \"u v\"")?;
    for x in [u, v] {
        if x >= n {
            return Err(Error::parse(
                line,
                format!("vertex {x} out of range for n = {n}"),
            ));
        }
    }
    if u == v {
        return Err(Error::parse(line, format!("self-loop at vertex {u}")));
    }
    Ok(Edge::new(u, v))
}

pub fn parse_temporal_graph(text: &str) -> Result<TemporalGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header \"n L\""))?;
    let [n, lifetime] = parse_numbers::<2>(hline, header, "header \"n L\"")?;
    if n == 0 {
        return Err(Error::parse(hline, "n must be at least 1"));
    }
    if lifetime == 0 {
        return Err(Error::parse(hline, "lifetime must be at least 1"));
    }

    let mut last_line = hline;
    let mut snapshots = Vec::with_capacity(lifetime);
    for t in 1..=lifetime {
        let (cline, count) = lines.next().ok_or_else(|| {
            Error::parse(
                last_line + 1,
                format!("missing edge count for snapshot {t}"),
            )
        })?;
        let [m] = parse_numbers::<1>(cline, count, "edge count")?;
        last_line = cline;
        let mut seen = BTreeSet::new();
        for _ in 0..m {
            let (eline, text) = lines.next().ok_or_else(|| {
                Error::parse(last_line + 1, format!("snapshot {t} ends before {m} edges"))
            })?;
            let e = parse_edge(eline, text, n)?;
            if !seen.insert(e) {
                return Err(Error::parse(
                    eline,
                    format!("duplicate edge {e} in snapshot {t}"),
                ));
            }
            last_line = eline;
        }
        snapshots.push(Snapshot::new(seen.into_iter().collect()));
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "unexpected content after last snapshot"));
    }
    TemporalGraph::new(n, snapshots)
}

/// Canonical TG1 text: edges sorted, endpoints min-first.
pub fn serialize_temporal_graph(graph: &TemporalGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.vertex_count(), graph.lifetime()).unwrap();
    for s in graph.snapshots() {
        writeln!(out, "{}", s.len()).unwrap();
        for e in s.edges() {
            writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
        }
    }
    out
}

/// Parses a tree file for a graph on `n` vertices.
pub fn parse_tree(text: &str, n: usize) -> Result<SpanningTree> {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, l) in content_lines(text) {
        let e = parse_edge(line, l, n)?;
        if !seen.insert(e) {
            return Err(Error::parse(line, format!("duplicate edge {e}")));
        }
        edges.push(e);
    }
    SpanningTree::new(n, edges)
}

pub fn serialize_tree(tree: &SpanningTree) -> String {
    let mut out = String::new();
    for e in tree.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
    }
    out
}
