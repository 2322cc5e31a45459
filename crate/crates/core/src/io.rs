//! Edge-list files (`n m` header, then `u v` per line, 0-based, `#` comments)
//! and DOT output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, Graph, Vertex};

/// Parse the edge-list format. Parallel edges and loops are kept.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let pair = |no: usize, line: &str| -> Result<(usize, usize)> {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(Error::Parse(format!("line {no}: expected two non-negative integers, got `{line}`"))),
        }
    };
    let (no, header) = lines.next().ok_or_else(|| Error::Parse("empty input: missing `n m` header".into()))?;
    let (n, m) = pair(no, header)?;
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        let (u, v) = pair(no, line)?;
        if u >= n || v >= n {
            return Err(Error::Parse(format!("line {no}: vertex out of range 0..{n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Write the live edges of `g` in id order.
pub fn write_edge_list(g: &Graph) -> String {
    edge_list_of(g, g.edges())
}

/// Write a subset of the edges of `g`, on all of its nodes.
pub fn write_edge_subset(g: &Graph, s: &EdgeSet) -> String {
    edge_list_of(g, s.iter().copied())
}

fn edge_list_of(g: &Graph, edges: impl Iterator<Item = usize>) -> String {
    let edges: Vec<(Vertex, Vertex)> = edges.map(|e| g.ends(e)).collect();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Match an edge list on the nodes of `g` to edge ids of `g`, pairing
/// parallel copies in id order.
pub fn edges_in(g: &Graph, sub: &Graph) -> Result<EdgeSet> {
    if sub.n() != g.n() {
        return Err(Error::Parse(format!("subgraph has {} nodes, graph has {}", sub.n(), g.n())));
    }
    let mut pool: BTreeMap<(Vertex, Vertex), Vec<usize>> = BTreeMap::new();
    for e in g.edges().collect::<Vec<_>>().into_iter().rev() {
        let (u, v) = g.ends(e);
        pool.entry((u.min(v), u.max(v))).or_default().push(e);
    }
    let mut s = EdgeSet::new();
    for e in sub.edges() {
        let (u, v) = sub.ends(e);
        let id = pool.get_mut(&(u.min(v), u.max(v))).and_then(Vec::pop);
        s.insert(id.ok_or_else(|| Error::Parse(format!("edge {u} {v} is not an edge of the graph")))?);
    }
    Ok(s)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// DOT rendering; edges in `highlight` are drawn bold, the rest dashed.
pub fn to_dot(g: &Graph, highlight: Option<&EdgeSet>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for e in g.edges() {
        let (u, v) = g.ends(e);
        let style = match highlight {
            Some(s) if s.contains(&e) => " [style=bold]",
            Some(_) => " [style=dashed]",
            None => "",
        };
        let _ = writeln!(out, "  {u} -- {v}{style};");
    }
    out.push_str("}\n");
    out
}
