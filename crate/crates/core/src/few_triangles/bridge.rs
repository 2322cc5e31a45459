use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::credit::Monitor;
use crate::error::{violation, Result};
use crate::graph_core::{decompose, ComponentShape, CoverDecomposition, EdgeId, EdgeSet, Graph, Vertex};

/// What a node of the contracted graph `G_C` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// A block of the host component (index into the decomposition's blocks).
    Block(usize),
    /// A lonely vertex of the host component.
    Lonely(Vertex),
    /// Another component of the cover.
    ForeignComponent(usize),
}

/// The host component with its blocks contracted, every other component
/// contracted, and the host's bridges as the only tree edges.
#[derive(Clone, Debug)]
pub struct BridgeTree {
    pub host_component: usize,
    /// All nodes of `G_C`; the edges are the bridges of the host.
    pub tree: Graph,
    pub node_kind: Vec<NodeKind>,
    /// Tree edge id to the original bridge.
    pub bridge_edges: BTreeMap<EdgeId, EdgeId>,
    /// Node of `G_C` for every original vertex.
    pub node_of: Vec<usize>,
    members: Vec<Vec<Vertex>>,
    host_bridges: EdgeSet,
}

impl BridgeTree {
    pub fn new(g: &Graph, d: &CoverDecomposition, host: usize) -> BridgeTree {
        let comp = &d.components[host];
        let mut node_kind = Vec::new();
        let mut block_node = BTreeMap::new();
        let mut lonely_node = BTreeMap::new();
        for &b in &comp.blocks {
            block_node.insert(b, node_kind.len());
            node_kind.push(NodeKind::Block(b));
        }
        for &v in &comp.lonely {
            lonely_node.insert(v, node_kind.len());
            node_kind.push(NodeKind::Lonely(v));
        }
        let mut foreign_node = BTreeMap::new();
        for c in (0..d.components.len()).filter(|&c| c != host) {
            foreign_node.insert(c, node_kind.len());
            node_kind.push(NodeKind::ForeignComponent(c));
        }
        let mut node_of = vec![0; g.n()];
        let mut members = vec![Vec::new(); node_kind.len()];
        for v in 0..g.n() {
            let c = d.comp_of[v];
            let x = if c != host {
                foreign_node[&c]
            } else if let Some(b) = d.block_of[v] {
                block_node[&b]
            } else {
                lonely_node[&v]
            };
            node_of[v] = x;
            members[x].push(v);
        }
        let mut tree = Graph::new(node_kind.len());
        let mut bridge_edges = BTreeMap::new();
        for &e in &comp.bridges {
            let (u, v) = g.ends(e);
            let t = tree.add_edge(node_of[u], node_of[v]);
            bridge_edges.insert(t, e);
        }
        BridgeTree {
            host_component: host,
            tree,
            node_kind,
            bridge_edges,
            node_of,
            members,
            host_bridges: comp.bridges.iter().copied().collect(),
        }
    }

    pub fn in_tree(&self, x: usize) -> bool {
        !matches!(self.node_kind[x], NodeKind::ForeignComponent(_))
    }

    pub fn is_block(&self, x: usize) -> bool {
        matches!(self.node_kind[x], NodeKind::Block(_))
    }

    pub fn tree_nodes(&self) -> Vec<usize> {
        (0..self.node_kind.len()).filter(|&x| self.in_tree(x)).collect()
    }

    pub fn tree_degree(&self, x: usize) -> usize {
        self.tree.degree(x)
    }

    /// Nodes of the tree path from `a` to `b`, both included.
    pub fn tree_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.node_kind.len()];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in self.tree.adj(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Original bridge joining two tree-adjacent nodes.
    pub fn bridge_between(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.tree.adj(a).iter().find(|&&(y, _)| y == b).map(|&(_, t)| self.bridge_edges[&t])
    }

    /// BFS over `G_C` minus the tree edges from the node set `w`, passing
    /// only through foreign nodes. Returns every tree node outside `w` that
    /// is reached, with its bridge-covering path.
    pub fn reach(&self, g: &Graph, w: &[usize]) -> BTreeMap<usize, BridgeCoveringPath> {
        let k = self.node_kind.len();
        let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; k];
        let mut seen = vec![false; k];
        let mut queue = VecDeque::new();
        for &x in w {
            seen[x] = true;
            queue.push_back(x);
        }
        let mut found = BTreeMap::new();
        while let Some(x) = queue.pop_front() {
            for &v in &self.members[x] {
                for &(u, e) in g.adj(v) {
                    let y = self.node_of[u];
                    if y == x || seen[y] || self.host_bridges.contains(&e) {
                        continue;
                    }
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    if self.in_tree(y) {
                        found.insert(y, ());
                    } else {
                        queue.push_back(y);
                    }
                }
            }
        }
        found
            .into_keys()
            .map(|y| {
                let mut nodes = vec![y];
                let mut edges = Vec::new();
                let mut cur = y;
                while let Some((p, e)) = parent[cur] {
                    nodes.push(p);
                    edges.push(e);
                    cur = p;
                }
                nodes.reverse();
                edges.reverse();
                (y, self.covering_path(nodes, edges))
            })
            .collect()
    }

    fn covering_path(&self, nodes: Vec<usize>, edges: Vec<EdgeId>) -> BridgeCoveringPath {
        let (a, b) = (nodes[0], *nodes.last().expect("non-empty path"));
        let covered = self.tree_path(a, b);
        let bl = covered.iter().filter(|&&x| self.is_block(x)).count();
        let br = covered.len() - 1;
        BridgeCoveringPath { edges, nodes, endpoints: (a, b), bl, br, cheap: br + 4 * bl >= 8 }
    }

    /// Bridge-covering path from `a` to `b`, if one exists.
    pub fn path(&self, g: &Graph, a: usize, b: usize) -> Option<BridgeCoveringPath> {
        self.reach(g, &[a]).remove(&b)
    }
}

/// Tree nodes reachable from `w` by bridge-covering paths.
pub fn reachable_set(bt: &BridgeTree, w: &[usize], g: &Graph) -> BTreeSet<usize> {
    bt.reach(g, w).into_keys().collect()
}

/// A path of `G_C` outside the tree joining two tree nodes through foreign
/// nodes only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeCoveringPath {
    pub edges: Vec<EdgeId>,
    /// Nodes of `G_C` along the path, endpoints included.
    pub nodes: Vec<usize>,
    pub endpoints: (usize, usize),
    /// Block nodes on the covered tree path.
    pub bl: usize,
    /// Bridges on the covered tree path.
    pub br: usize,
    /// `br/4 + bl - 2 >= 0`.
    pub cheap: bool,
}

/// Which rule of the bridge-covering analysis fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeCase {
    CheapPath,
    /// A reachable node hangs off the first two nodes of the longest path.
    HangingMerge,
    /// Only the second and third path nodes are reachable from the end block
    /// and something hangs off the first two path nodes.
    HangingLeafMerge,
    /// A block is reachable from the end block or the first path node.
    BlockWitnessMerge,
    /// Two paths are added and the first path bridge is dropped.
    DoubleAugment,
}

#[derive(Clone, Debug)]
pub struct BridgeStep {
    pub s: EdgeSet,
    pub case: BridgeCase,
    pub host: BridgeTree,
    pub paths: Vec<BridgeCoveringPath>,
}

/// Add two bridge-covering paths. If they share an internal node, the
/// pieces form a cheap path between the two blocks, which is added instead.
fn merge_two_paths(bt: &BridgeTree, g: &Graph, b: usize, b2: usize, u: usize, u2: usize) -> Result<Vec<BridgeCoveringPath>> {
    let Some(p1) = bt.path(g, b, u) else {
        return violation(format!("no bridge-covering path between tree nodes {b} and {u}"));
    };
    let Some(p2) = bt.path(g, b2, u2) else {
        return violation(format!("no bridge-covering path between tree nodes {b2} and {u2}"));
    };
    let inner2: Vec<usize> = p2.nodes[1..p2.nodes.len() - 1].to_vec();
    let shared = p1.nodes[1..p1.nodes.len() - 1].iter().position(|x| inner2.contains(x));
    let Some(i) = shared.map(|i| i + 1) else {
        return Ok(vec![p1, p2]);
    };
    let z = p1.nodes[i];
    let j = p2.nodes.iter().position(|&x| x == z).expect("shared node lies on the second path");
    let mut nodes = p1.nodes[..=i].to_vec();
    nodes.extend(p2.nodes[..j].iter().rev());
    let mut edges = p1.edges[..i].to_vec();
    edges.extend(p2.edges[..j].iter().rev());
    Ok(vec![bt.covering_path(nodes, edges)])
}

/// The two covered tree paths meet and together span at least four bridges.
fn mergeable(bt: &BridgeTree, b: usize, b2: usize, u: usize, u2: usize) -> bool {
    let (p, q) = (bt.tree_path(b, u), bt.tree_path(b2, u2));
    if !p.iter().any(|x| q.contains(x)) {
        return false;
    }
    let pairs = |v: &[usize]| -> BTreeSet<(usize, usize)> { v.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect() };
    pairs(&p).union(&pairs(&q)).count() >= 4
}

fn augmented(s: &EdgeSet, paths: &[BridgeCoveringPath], drop: &[EdgeId]) -> EdgeSet {
    let mut out = s.clone();
    for p in paths {
        out.extend(p.edges.iter().copied());
    }
    out.without(drop)
}

/// One bridge-covering step on a cover with at least one bridge.
pub fn bridge_cover_step(g: &Graph, s: &EdgeSet, monitor: &Monitor) -> Result<BridgeStep> {
    let d = decompose(g, s);
    let Some(host) = d.components.iter().position(|c| c.shape == ComponentShape::Bridged) else {
        return violation("bridge covering called on a bridgeless cover");
    };
    let bt = BridgeTree::new(g, &d, host);
    let (s2, case, paths) = choose(g, s, &bt)?;
    let d2 = decompose(g, &s2);
    if !d2.bridges.is_subset(&d.bridges) || d2.bridges.len() >= d.bridges.len() {
        return violation(format!("bridge step {case:?} did not shrink the bridge set"));
    }
    if monitor.peek(g, &s2) > monitor.current.cost {
        return Err(crate::Error::CostIncrease {
            label: format!("bridge cover: {case:?}"),
            before: monitor.current.cost,
            after: monitor.peek(g, &s2),
        });
    }
    Ok(BridgeStep { s: s2, case, host: bt, paths })
}

fn choose(g: &Graph, s: &EdgeSet, bt: &BridgeTree) -> Result<(EdgeSet, BridgeCase, Vec<BridgeCoveringPath>)> {
    let tree_nodes = bt.tree_nodes();
    for &u in &tree_nodes {
        if let Some(p) = bt.reach(g, &[u]).into_values().find(|p| p.cheap) {
            return Ok((augmented(s, std::slice::from_ref(&p), &[]), BridgeCase::CheapPath, vec![p]));
        }
    }
    if let Some(&x) = tree_nodes.iter().find(|&&x| bt.tree_degree(x) == 1 && !bt.is_block(x)) {
        return violation(format!("leaf {x} of the bridge tree is not a block"));
    }

    // Longest path b, u1, u2, ... of the bridge tree.
    let far = |from: usize| {
        let mut dist = vec![usize::MAX; bt.node_kind.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        let mut last = from;
        while let Some(x) = queue.pop_front() {
            last = x;
            for &(y, _) in bt.tree.adj(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        last
    };
    let b = far(tree_nodes[0]);
    let longest = bt.tree_path(b, far(b));
    let u = |i: usize| longest.get(i).copied();

    // Index of the longest-path node each off-path tree node hangs from.
    let mut hang = vec![usize::MAX; bt.node_kind.len()];
    let mut queue = VecDeque::new();
    for (i, &x) in longest.iter().enumerate() {
        hang[x] = i;
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in bt.tree.adj(x) {
            if hang[y] == usize::MAX {
                hang[y] = hang[x];
                queue.push_back(y);
            }
        }
    }
    let on_path = |x: usize| longest.contains(&x);
    let hanging = |x: usize| !on_path(x) && (hang[x] == 1 || hang[x] == 2);

    let r_b = reachable_set(bt, &[b], g);
    if let Some(&x) = r_b.iter().find(|&&x| bt.is_block(x)) {
        return violation(format!("block {x} reachable from the end block but no cheap path"));
    }
    let near = [u(1), u(2), u(3)];
    if let Some(&x) = r_b.iter().find(|&&x| !near.contains(&Some(x)) && !hanging(x)) {
        return violation(format!("far node {x} reachable from the end block but no cheap path"));
    }

    if let Some(&x) = r_b.iter().find(|&&x| hanging(x)) {
        let leaves: Vec<usize> = bt.tree.adj(x).iter().map(|&(y, _)| y).filter(|&y| !on_path(y) && bt.tree_degree(y) == 1).collect();
        for &b2 in &leaves {
            let r_b2 = reachable_set(bt, &[b2], g);
            if let Some(&x2) = r_b2.iter().find(|&&y| y != b && y != x && mergeable(bt, b, b2, x, y)) {
                let paths = merge_two_paths(bt, g, b, b2, x, x2)?;
                return Ok((augmented(s, &paths, &[]), BridgeCase::HangingMerge, paths));
            }
        }
        return violation(format!("reachable hanging node {x} has no leaf block neighbour with a second path"));
    }

    let (Some(u1), Some(u2), Some(u3)) = (u(1), u(2), u(3)) else {
        return violation("longest bridge-tree path is too short for the remaining cases");
    };
    let hanging_leaves: Vec<usize> = bt.tree_nodes().into_iter().filter(|&x| hanging(x) && bt.tree_degree(x) == 1).collect();
    if !hanging_leaves.is_empty() {
        for &b2 in &hanging_leaves {
            let parent = bt.tree.adj(b2)[0].0;
            let r_b2 = reachable_set(bt, &[b2], g);
            if let Some(&x2) = r_b2.iter().find(|&&y| y != parent && mergeable(bt, b, b2, u3, y)) {
                let paths = merge_two_paths(bt, g, b, b2, u3, x2)?;
                return Ok((augmented(s, &paths, &[]), BridgeCase::HangingLeafMerge, paths));
            }
        }
        return violation("no hanging leaf block reaches past its tree neighbour");
    }

    let r_bu1 = reachable_set(bt, &[b, u1], g);
    let r_b_only = reachable_set(bt, &[b], g);
    let witness = r_bu1.iter().copied().find(|&x| {
        bt.is_block(x) && !r_b_only.contains(&x) && bt.path(g, x, u1).is_some() && mergeable(bt, b, x, u2, u1)
    });
    if let Some(b2) = witness {
        let paths = merge_two_paths(bt, g, b, b2, u2, u1)?;
        return Ok((augmented(s, &paths, &[]), BridgeCase::BlockWitnessMerge, paths));
    }
    let Some(&x) = r_bu1.iter().find(|&&x| x != u2 && x != u3) else {
        return violation("the end block and first path node reach only the next two path nodes");
    };
    let (Some(p1), Some(p2)) = (bt.path(g, b, u2), bt.path(g, x, u1)) else {
        return violation("missing path for the double augmentation");
    };
    let drop = bt.bridge_between(u1, u2).expect("consecutive path nodes share a bridge");
    let paths = vec![p1, p2];
    Ok((augmented(s, &paths, &[drop]), BridgeCase::DoubleAugment, paths))
}
