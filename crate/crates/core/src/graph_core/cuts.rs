use super::connectivity::components;
use super::{EdgeId, Graph, Vertex};
use crate::error::{violation, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutKind {
    Isolating,
    NonIsolating,
}

/// A pair of vertices whose removal disconnects the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVertexCut {
    pub u: Vertex,
    pub v: Vertex,
    pub kind: CutKind,
    /// `(V1, V2)` with no edges between them and `2 <= |V1| <= |V2|`; only
    /// filled in for non-isolating cuts of graphs with at least six vertices.
    pub sides: Option<(Vec<Vertex>, Vec<Vertex>)>,
}

/// Components of `g - {u, v}`, each as a sorted vertex list, ordered by
/// size and then by smallest vertex.
pub(crate) fn components_without(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vec<Vertex>> {
    let adj: Vec<Vec<(Vertex, EdgeId)>> = (0..g.n())
        .map(|x| {
            if x == u || x == v {
                Vec::new()
            } else {
                g.adj(x).iter().copied().filter(|&(y, _)| y != u && y != v).collect()
            }
        })
        .collect();
    let (comp, count) = components(&adj);
    let mut parts = vec![Vec::new(); count];
    for x in 0..g.n() {
        if x != u && x != v {
            parts[comp[x]].push(x);
        }
    }
    parts.retain(|p| !p.is_empty());
    parts.sort_by_key(|p| (p.len(), p[0]));
    parts
}

/// The partition rule for a non-isolating cut: with components
/// `C1..Ck` sorted by size, `k = 2` keeps them, `k >= 4` groups the two
/// smallest against the rest, `k = 3` groups the first two against the third.
pub fn nice_partition(g: &Graph, u: Vertex, v: Vertex) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    if g.n() < 6 {
        return violation(format!("non-isolating cut partition needs |V| >= 6, got {}", g.n()));
    }
    let parts = components_without(g, u, v);
    let k = parts.len();
    if k < 2 {
        return violation(format!("{{{u},{v}}} is not a 2-vertex-cut"));
    }
    let (mut v1, mut v2): (Vec<Vertex>, Vec<Vertex>) = if k == 2 {
        (parts[0].clone(), parts[1].clone())
    } else {
        (parts[..2].concat(), parts[2..].concat())
    };
    if v1.len() > v2.len() {
        std::mem::swap(&mut v1, &mut v2);
    }
    v1.sort_unstable();
    v2.sort_unstable();
    if v1.len() < 2 {
        return violation(format!("cut {{{u},{v}}} is isolating"));
    }
    Ok((v1, v2))
}

/// All 2-vertex-cuts, by brute force over vertex pairs in lexicographic order.
pub fn two_vertex_cuts(g: &Graph) -> Vec<TwoVertexCut> {
    let mut out = Vec::new();
    if g.n() < 4 {
        return out;
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let parts = components_without(g, u, v);
            if parts.len() < 2 {
                continue;
            }
            let kind = if parts.len() == 2 && parts[0].len() == 1 {
                CutKind::Isolating
            } else {
                CutKind::NonIsolating
            };
            let sides = match kind {
                CutKind::NonIsolating if g.n() >= 6 => nice_partition(g, u, v).ok(),
                _ => None,
            };
            out.push(TwoVertexCut { u, v, kind, sides });
        }
    }
    out
}

/// Maximum matching among the edges joining the disjoint vertex sets `a` and
/// `b` (Kuhn's augmenting paths, deterministic order). Returns the matching
/// edges and the set of `a`-side vertices left reachable by alternating paths
/// from unmatched `a` vertices, which yields a König cover.
fn bipartite_boundary(g: &Graph, a: &[bool], b: &[bool]) -> (Vec<EdgeId>, Vec<bool>, Vec<bool>) {
    let n = g.n();
    let left: Vec<Vertex> = (0..n).filter(|&x| a[x]).collect();
    let cross = |x: Vertex| -> Vec<(Vertex, EdgeId)> {
        let mut v: Vec<_> = g.adj(x).iter().copied().filter(|&(y, _)| b[y]).collect();
        v.sort_by_key(|&(_, e)| e);
        v
    };
    let nbrs: Vec<Vec<(Vertex, EdgeId)>> = (0..n).map(|x| if a[x] { cross(x) } else { Vec::new() }).collect();
    let mut match_right: Vec<Option<(Vertex, EdgeId)>> = vec![None; n];
    let mut match_left: Vec<Option<EdgeId>> = vec![None; n];

    fn augment(
        x: Vertex,
        nbrs: &[Vec<(Vertex, EdgeId)>],
        seen: &mut [bool],
        match_right: &mut [Option<(Vertex, EdgeId)>],
        match_left: &mut [Option<EdgeId>],
    ) -> bool {
        for &(y, e) in &nbrs[x] {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            let free = match match_right[y] {
                None => true,
                Some((x2, _)) => augment(x2, nbrs, seen, match_right, match_left),
            };
            if free {
                match_right[y] = Some((x, e));
                match_left[x] = Some(e);
                return true;
            }
        }
        false
    }

    for &x in &left {
        let mut seen = vec![false; n];
        augment(x, &nbrs, &mut seen, &mut match_right, &mut match_left);
    }
    let mut matching: Vec<EdgeId> = left.iter().filter_map(|&x| match_left[x]).collect();
    matching.sort_unstable();

    // Alternating reachability from unmatched left vertices.
    let mut z_left = vec![false; n];
    let mut z_right = vec![false; n];
    let mut stack: Vec<Vertex> = left.iter().copied().filter(|&x| match_left[x].is_none()).collect();
    for &x in &stack {
        z_left[x] = true;
    }
    while let Some(x) = stack.pop() {
        for &(y, e) in &nbrs[x] {
            if z_right[y] || match_left[x] == Some(e) {
                continue;
            }
            z_right[y] = true;
            if let Some((x2, _)) = match_right[y] {
                if !z_left[x2] {
                    z_left[x2] = true;
                    stack.push(x2);
                }
            }
        }
    }
    (matching, z_left, z_right)
}

/// Maximum matching between two disjoint vertex sets.
pub fn matching_between(g: &Graph, a: &[bool], b: &[bool]) -> Vec<EdgeId> {
    bipartite_boundary(g, a, b).0
}

/// Outcome of the 3-matching search across a vertex partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeMatching {
    Matching([EdgeId; 3]),
    /// At most two vertices touching every boundary edge.
    Cover(Vec<Vertex>),
}

/// Look for three pairwise disjoint edges between `side` and its complement.
pub fn find_3_matching(g: &Graph, side: &[bool]) -> ThreeMatching {
    let other: Vec<bool> = side.iter().map(|&s| !s).collect();
    let (m, z_left, z_right) = bipartite_boundary(g, side, &other);
    if m.len() >= 3 {
        return ThreeMatching::Matching([m[0], m[1], m[2]]);
    }
    let mut cover: Vec<Vertex> = Vec::new();
    for e in &m {
        let (x, y) = g.ends(*e);
        let (l, r) = if side[x] { (x, y) } else { (y, x) };
        if !z_left[l] {
            cover.push(l);
        } else {
            debug_assert!(z_right[r]);
            cover.push(r);
        }
    }
    cover.sort_unstable();
    ThreeMatching::Cover(cover)
}
