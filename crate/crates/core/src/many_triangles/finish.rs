//! Turning a core-triangle solution into a 2EC spanning subgraph.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::CoreTriangleCover;
use crate::error::{violation, Error, Result};
use crate::graph_core::{components, is_two_edge_connected, EdgeId, EdgeSet, Graph, Vertex};
use crate::matching::{min_weight_perfect_matching, WeightedCompleteGraph};

/// Hook every triangle onto the core with its first attachment choice.
/// The result has exactly `|core| + 4k` edges.
pub fn finish_basic(ct: &CoreTriangleCover, g: &Graph) -> Result<EdgeSet> {
    let mut out = ct.core.clone();
    for i in 0..ct.k() {
        let Some(q) = ct.q_options(g, i).into_iter().next() else {
            return violation(format!("triangle {:?} has no attachment to the core", ct.triangles[i]));
        };
        out = out.union(&q.edges);
    }
    if out.len() != ct.core.len() + 4 * ct.k() || !is_two_edge_connected(g, &out) {
        return violation("basic finish is not a 2EC spanning subgraph of the expected size".to_string());
    }
    Ok(out)
}

/// Maximum common independent set of two matroids on `0..n`, by shortest
/// augmenting paths in the exchange graph.
pub fn matroid_intersection(n: usize, indep1: impl Fn(&[usize]) -> bool, indep2: impl Fn(&[usize]) -> bool) -> Vec<usize> {
    let mut inside = vec![false; n];
    loop {
        let cur: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
        let plus = |y: usize| {
            let mut s = cur.clone();
            s.push(y);
            s
        };
        let swap = |x: usize, y: usize| {
            let mut s: Vec<usize> = cur.iter().copied().filter(|&i| i != x).collect();
            s.push(y);
            s
        };
        let outside: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
        let sources: Vec<usize> = outside.iter().copied().filter(|&y| indep1(&plus(y))).collect();
        let sinks: Vec<bool> = {
            let mut m = vec![false; n];
            for &y in &outside {
                m[y] = indep2(&plus(y));
            }
            m
        };
        let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &x in &cur {
            for &y in &outside {
                let s = swap(x, y);
                if indep1(&s) {
                    arcs[x].push(y);
                }
                if indep2(&s) {
                    arcs[y].push(x);
                }
            }
        }
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in &sources {
            prev[s] = s;
            queue.push_back(s);
        }
        let mut end = None;
        while let Some(x) = queue.pop_front() {
            if !inside[x] && sinks[x] {
                end = Some(x);
                break;
            }
            for &y in &arcs[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let Some(mut x) = end else {
            return cur;
        };
        loop {
            inside[x] = !inside[x];
            if prev[x] == x {
                break;
            }
            x = prev[x];
        }
    }
}

/// A candidate attachment seen as an edge between its two core ends,
/// coloured by its triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoEdge {
    pub colour: usize,
    pub option: usize,
    pub ends: (Vertex, Vertex),
}

/// Attachment choices minimising the component count of `(V, Q)`: a maximum
/// rainbow forest of pseudo-edges, by matroid intersection of the graphic
/// matroid on the core nodes with the partition matroid of the colours.
/// Triangles without a forest edge take their first choice.
/// Returns `Q` and its component count.
pub fn minimize_components(ct: &CoreTriangleCover, g: &Graph) -> Result<(EdgeSet, usize)> {
    let options: Vec<_> = (0..ct.k()).map(|i| ct.q_options(g, i)).collect();
    if let Some(i) = options.iter().position(|o| o.is_empty()) {
        return violation(format!("triangle {:?} has no attachment to the core", ct.triangles[i]));
    }
    let pseudo: Vec<PseudoEdge> = options
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.iter().enumerate().map(move |(j, q)| PseudoEdge { colour: i, option: j, ends: q.core_ends }))
        .collect();
    let index: BTreeMap<Vertex, usize> = ct.core_nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let forest = |set: &[usize]| {
        let mut parent: Vec<usize> = (0..index.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        set.iter().all(|&i| {
            let (a, b) = pseudo[i].ends;
            let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            parent[ra] = rb;
            ra != rb
        })
    };
    let rainbow = |set: &[usize]| {
        let mut seen = vec![false; ct.k()];
        set.iter().all(|&i| !std::mem::replace(&mut seen[pseudo[i].colour], true))
    };
    let chosen = matroid_intersection(pseudo.len(), forest, rainbow);
    let mut pick = vec![0usize; ct.k()];
    for &i in &chosen {
        pick[pseudo[i].colour] = pseudo[i].option;
    }
    let q: EdgeSet = pick.iter().enumerate().flat_map(|(i, &j)| options[i][j].edges.iter().copied()).collect();
    let alpha = components(&g.adjacency_of(&q)).1;
    if alpha != ct.core_nodes.len() - chosen.len() {
        return violation(format!("component count {alpha} disagrees with the rainbow forest size {}", chosen.len()));
    }
    Ok((q, alpha))
}

/// A minimum T-join of a connected host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TJoinInstance {
    pub odd_set: Vec<Vertex>,
    pub join: EdgeSet,
}

/// Minimum-size T-join: shortest hop paths between the nodes of `t`, paired
/// by a minimum-weight perfect matching, combined by symmetric difference.
pub fn min_t_join(host: &Graph, t: &[Vertex]) -> Result<TJoinInstance> {
    let mut odd_set = t.to_vec();
    odd_set.sort_unstable();
    odd_set.dedup();
    if odd_set.len() % 2 == 1 {
        return Err(Error::OddTSize(odd_set.len()));
    }
    let bfs: Vec<(Vec<u32>, Vec<Option<EdgeId>>)> = odd_set.iter().map(|&s| hop_tree(host, s)).collect();
    for (i, (dist, _)) in bfs.iter().enumerate() {
        if let Some(&v) = odd_set.iter().find(|&&v| dist[v] == u32::MAX) {
            return violation(format!("T-join host is disconnected between {} and {v}", odd_set[i]));
        }
    }
    let w = WeightedCompleteGraph::from_fn(odd_set.len(), |i, j| bfs[i].0[odd_set[j]]);
    let mut join = EdgeSet::new();
    for (i, j) in min_weight_perfect_matching(&w)? {
        let parent = &bfs[i].1;
        let mut x = odd_set[j];
        while let Some(e) = parent[x] {
            if !join.remove(&e) {
                join.insert(e);
            }
            x = host.other(e, x);
        }
    }
    let deg = host.degrees_in(&join);
    let odd: Vec<Vertex> = (0..host.n()).filter(|&v| deg[v] % 2 == 1).collect();
    if odd != odd_set {
        return violation(format!("T-join has odd set {odd:?}, expected {odd_set:?}"));
    }
    Ok(TJoinInstance { odd_set, join })
}

/// Hop distances from `s` and the parent edge of every reached vertex.
fn hop_tree(g: &Graph, s: Vertex) -> (Vec<u32>, Vec<Option<EdgeId>>) {
    let mut dist = vec![u32::MAX; g.n()];
    let mut parent = vec![None; g.n()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let mut nbrs = g.adj(v).to_vec();
        nbrs.sort_unstable_by_key(|&(_, e)| e);
        for (w, e) in nbrs {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// The pieces of the refined finish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedFinish {
    pub solution: EdgeSet,
    pub q: EdgeSet,
    pub connectors: EdgeSet,
    pub join: EdgeSet,
    pub alpha_s: usize,
}

/// Minimum-component attachments, connectors inside the core's node set,
/// and a minimum T-join that makes every degree even; parallel copies are
/// then traded for edges crossing the cut they span.
/// The result has exactly `4k + alpha_s - 1 + |J|` edges.
pub fn finish_refined(ct: &CoreTriangleCover, g: &Graph) -> Result<RefinedFinish> {
    let (q, alpha_s) = minimize_components(ct, g)?;
    let (host, map) = g.induced(&ct.core_nodes);
    let lift = |e: EdgeId| map.edge_to_parent[e].expect("induced edge has a parent");

    // Connectors: host edges joining distinct components of (V, Q + F).
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in q.iter() {
        let (u, v) = g.ends(e);
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    let mut connectors = EdgeSet::new();
    for e in host.edges() {
        let (u, v) = g.ends(lift(e));
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            connectors.insert(lift(e));
        }
    }
    if connectors.len() + 1 != alpha_s {
        return violation(format!("{} connectors for {alpha_s} components", connectors.len()));
    }

    let base = q.union(&connectors);
    let deg = g.degrees_in(&base);
    let t_host: Vec<Vertex> = (0..host.n()).filter(|&v| deg[map_vertex(&map, v)] % 2 == 1).collect();
    let tj = min_t_join(&host, &t_host)?;
    let join: EdgeSet = tj.join.iter().map(|&e| lift(e)).collect();
    if 2 * join.len() > ct.core.len() {
        return Err(Error::BoundViolated(format!("T-join of {} edges on a core of {}", join.len(), ct.core.len())));
    }

    let mut multi: Vec<EdgeId> = base.iter().copied().chain(join.iter().copied()).collect();
    multi.sort_unstable();
    let expected = 4 * ct.k() + alpha_s - 1 + join.len();
    let solution = repair_parallel(g, multi)?;
    if solution.len() != expected || !is_two_edge_connected(g, &solution) {
        return violation(format!("refined finish has {} edges, expected {expected}", solution.len()));
    }
    Ok(RefinedFinish { solution, q, connectors, join, alpha_s })
}

fn map_vertex(map: &crate::graph_core::SubgraphMap, v: Vertex) -> Vertex {
    map.vertex_to_parent[v].expect("induced vertex has a parent")
}

/// Replace the second copy of every doubled edge `e` by an edge crossing the
/// cut that `e` spans once the copy is gone. If `e` spans no cut, the copy is
/// replaced by the smallest unused edge, keeping the size.
fn repair_parallel(g: &Graph, mut multi: Vec<EdgeId>) -> Result<EdgeSet> {
    loop {
        let Some(pos) = multi.windows(2).position(|w| w[0] == w[1]) else {
            return Ok(multi.into_iter().collect());
        };
        let e = multi[pos];
        multi.remove(pos);
        let rest: EdgeSet = multi.iter().copied().filter(|&x| x != e).collect();
        let used: EdgeSet = multi.iter().copied().collect();
        let (comp, _) = components(&g.adjacency_of(&rest));
        let (u, v) = g.ends(e);
        let replacement = if comp[u] != comp[v] {
            g.edges().find(|&x| {
                let (a, b) = g.ends(x);
                x != e && !used.contains(&x) && ((comp[a] == comp[u]) != (comp[b] == comp[u]))
            })
        } else {
            g.edges().find(|x| !used.contains(x))
        };
        let Some(r) = replacement else {
            return violation(format!("no replacement for the doubled edge {e}"));
        };
        multi.push(r);
        multi.sort_unstable();
    }
}
