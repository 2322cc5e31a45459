//! Undirected multigraphs with stable edge ids, and the connectivity
//! primitives the solvers are built on.

mod connectivity;
mod cuts;
mod decompose;

pub use connectivity::{
    bridges, components, cut_vertices, is_connected, is_two_edge_connected,
    is_two_vertex_connected, low_link, two_edge_classes, LowLink,
};
pub(crate) use cuts::components_without;
pub use cuts::{find_3_matching, matching_between, nice_partition, two_vertex_cuts, CutKind,
    ThreeMatching, TwoVertexCut};
pub use decompose::{bridges_and_blocks, component_graph, decompose, Block, Component, ComponentShape,
    CoverDecomposition, SizeClass};

use std::collections::BTreeSet;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Undirected multigraph. Deleting an edge tombstones its id; ids are never reused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    ends: Vec<(Vertex, Vertex)>,
    alive: Vec<bool>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    simple_mode: bool,
}

impl Graph {
    /// Empty multigraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { n, ends: Vec::new(), alive: Vec::new(), adj: vec![Vec::new(); n], simple_mode: false }
    }

    /// Multigraph from an edge list; edge `i` of the list gets id `i`.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Simple graph from an edge list, rejecting loops and parallel edges.
    pub fn simple(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parse(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Parse(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse(format!("parallel edge {u}-{v}")));
            }
        }
        let mut g = Graph::from_edges(n, edges);
        g.simple_mode = true;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of live edges.
    pub fn m(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// One past the largest edge id ever issued.
    pub fn edge_bound(&self) -> usize {
        self.ends.len()
    }

    pub fn simple_mode(&self) -> bool {
        self.simple_mode
    }

    pub fn set_simple_mode(&mut self, on: bool) {
        if on {
            assert!(self.is_simple(), "graph has loops or parallel edges");
        }
        self.simple_mode = on;
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> EdgeId {
        assert!(u < self.n && v < self.n, "edge {u}-{v} out of range");
        if self.simple_mode {
            assert!(u != v && self.edge_between(u, v).is_none(), "simple graph: bad edge {u}-{v}");
        }
        let id = self.ends.len();
        self.ends.push((u, v));
        self.alive.push(true);
        self.adj[u].push((v, id));
        if u != v {
            self.adj[v].push((u, id));
        }
        id
    }

    pub fn remove_edge(&mut self, e: EdgeId) {
        if !self.alive[e] {
            return;
        }
        self.alive[e] = false;
        let (u, v) = self.ends[e];
        self.adj[u].retain(|&(_, f)| f != e);
        self.adj[v].retain(|&(_, f)| f != e);
    }

    pub fn is_live(&self, e: EdgeId) -> bool {
        e < self.alive.len() && self.alive[e]
    }

    pub fn ends(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.ends[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Live edge ids in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.ends.len()).filter(move |&e| self.alive[e])
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.edges().collect()
    }

    pub fn adj(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Smallest live edge id joining `u` and `v`.
    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.adj[u].iter().filter(|&&(w, _)| w == v).map(|&(_, e)| e).min()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges().all(|e| {
            let (u, v) = self.ends[e];
            u != v && seen.insert((u.min(v), u.max(v)))
        })
    }

    /// Adjacency lists restricted to the edges of `s`.
    pub fn adjacency_of(&self, s: &EdgeSet) -> Vec<Vec<(Vertex, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &e in s.iter() {
            let (u, v) = self.ends[e];
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        adj
    }

    /// Degree of every vertex inside `s`.
    pub fn degrees_in(&self, s: &EdgeSet) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &e in s.iter() {
            let (u, v) = self.ends[e];
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Live edges with both endpoints in `nodes`.
    pub fn edges_within(&self, inside: &[bool]) -> EdgeSet {
        self.edges()
            .filter(|&e| {
                let (u, v) = self.ends[e];
                inside[u] && inside[v]
            })
            .collect()
    }

    /// Induced subgraph on `nodes` (kept in the given order).
    pub fn induced(&self, nodes: &[Vertex]) -> (Graph, SubgraphMap) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Graph::new(nodes.len());
        let mut edge_to_parent = Vec::new();
        for e in self.edges() {
            let (u, v) = self.ends[e];
            if index[u] != usize::MAX && index[v] != usize::MAX {
                h.add_edge(index[u], index[v]);
                edge_to_parent.push(Some(e));
            }
        }
        h.simple_mode = self.simple_mode;
        (h, SubgraphMap { vertex_to_parent: nodes.iter().map(|&v| Some(v)).collect(), edge_to_parent })
    }

    /// Contract `w` into a single vertex. Loops created by the contraction are
    /// dropped, parallel edges are kept. The contracted vertex takes the place
    /// of the smallest member of `w`; other vertices keep their relative order.
    pub fn contract(&self, w: &[Vertex]) -> (Graph, Vec<Vertex>, SubgraphMap) {
        assert!(!w.is_empty(), "contracting an empty set");
        let mut in_w = vec![false; self.n];
        for &v in w {
            in_w[v] = true;
        }
        let mut vmap = vec![usize::MAX; self.n];
        let mut parent = Vec::new();
        let mut hub = usize::MAX;
        for v in 0..self.n {
            if in_w[v] {
                if hub == usize::MAX {
                    hub = parent.len();
                    parent.push(None);
                }
                vmap[v] = hub;
            } else {
                vmap[v] = parent.len();
                parent.push(Some(v));
            }
        }
        let mut h = Graph::new(parent.len());
        let mut edge_to_parent = Vec::new();
        for e in self.edges() {
            let (u, v) = self.ends[e];
            let (a, b) = (vmap[u], vmap[v]);
            if a != b {
                h.add_edge(a, b);
                edge_to_parent.push(Some(e));
            }
        }
        (h, vmap, SubgraphMap { vertex_to_parent: parent, edge_to_parent })
    }
}

/// Translation of a derived graph's ids back into its parent graph.
/// `None` marks a contracted vertex or a dummy edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgraphMap {
    pub vertex_to_parent: Vec<Option<Vertex>>,
    pub edge_to_parent: Vec<Option<EdgeId>>,
}

impl SubgraphMap {
    /// Map a child edge set to the parent, dropping dummy edges.
    pub fn lift(&self, s: &EdgeSet) -> EdgeSet {
        s.iter().filter_map(|&e| self.edge_to_parent[e]).collect()
    }
}

/// A set of edge ids of some host graph. Iteration is in increasing id order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn minus(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn with(&self, es: &[EdgeId]) -> EdgeSet {
        let mut s = self.clone();
        s.0.extend(es.iter().copied());
        s
    }

    pub fn without(&self, es: &[EdgeId]) -> EdgeSet {
        let mut s = self.clone();
        for e in es {
            s.0.remove(e);
        }
        s
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.0.iter().copied().collect()
    }
}

impl Deref for EdgeSet {
    type Target = BTreeSet<EdgeId>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for EdgeSet {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a EdgeId;
    type IntoIter = std::collections::btree_set::Iter<'a, EdgeId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Membership vector for a node list.
pub fn mask(n: usize, nodes: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in nodes {
        m[v] = true;
    }
    m
}
