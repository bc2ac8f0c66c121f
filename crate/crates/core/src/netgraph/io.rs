use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::DirectedGraph;

/// What `load_edge_list` discarded while reading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Reads a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` are skipped; anything after the
/// first two tokens is ignored. Nodes are indexed densely in order of first
/// appearance and keep their token as label. With `directed == false` every
/// line adds both directions.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<(DirectedGraph, LoadReport)> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut report = LoadReport::default();

    let mut intern = |tok: &str| -> usize {
        if let Some(&i) = index.get(tok) {
            return i;
        }
        let i = labels.len();
        index.insert(tok.to_owned(), i);
        labels.push(tok.to_owned());
        i
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected two node tokens, got {body:?}"),
            });
        };
        report.lines += 1;
        let (s, t) = (intern(a), intern(b));
        if s == t {
            report.self_loops += 1;
            continue;
        }
        let dirs: &[(usize, usize)] = if directed { &[(s, t)] } else { &[(s, t), (t, s)] };
        for &e in dirs {
            if seen.insert(e) {
                edges.push(e);
            } else {
                report.duplicates += 1;
            }
        }
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = labels.len();
    let g = DirectedGraph::new(n, edges)?.with_labels(labels)?;
    Ok((g, report))
}

/// Writes one `source target` line per edge, in edge order, using labels
/// when the graph has them.
pub fn save_edge_list<W: Write>(g: &DirectedGraph, mut w: W) -> Result<()> {
    for &(s, t) in g.edges() {
        writeln!(w, "{} {}", g.label(s), g.label(t))?;
    }
    Ok(())
}
