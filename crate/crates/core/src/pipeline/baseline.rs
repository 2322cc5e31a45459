use crate::error::{Error, Result};
use crate::graph_core::{bridges, is_two_edge_connected, EdgeId, EdgeSet, Graph, Vertex};

/// Depth-first spanning tree from vertex 0 with entry/exit times.
struct DfsTree {
    edges: Vec<EdgeId>,
    depth: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl DfsTree {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut t = DfsTree { edges: Vec::new(), depth: vec![0; n], tin: vec![usize::MAX; n], tout: vec![0; n] };
        let mut clock = 0;
        t.tin[0] = clock;
        let mut stack: Vec<(Vertex, usize)> = vec![(0, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&(w, e)) = g.adj(v).get(*next) {
                *next += 1;
                if t.tin[w] == usize::MAX {
                    clock += 1;
                    t.tin[w] = clock;
                    t.depth[w] = t.depth[v] + 1;
                    t.edges.push(e);
                    stack.push((w, 0));
                }
            } else {
                t.tout[v] = clock;
                stack.pop();
            }
        }
        t
    }

    fn in_subtree(&self, root: Vertex, v: Vertex) -> bool {
        self.tin[root] <= self.tin[v] && self.tin[v] <= self.tout[root]
    }
}

/// The classical factor-2 heuristic: a DFS tree, then repeatedly the
/// deepest remaining bridge is covered by the non-tree edge from below it
/// that reaches highest. At most `2(n - 1)` edges.
pub fn baseline_2approx(g: &Graph) -> Result<EdgeSet> {
    if !is_two_edge_connected(g, &g.all_edges()) {
        return Err(Error::NotTwoEc("baseline input".into()));
    }
    if g.n() <= 1 {
        return Ok(EdgeSet::new());
    }
    let tree = DfsTree::new(g);
    let tree_set: EdgeSet = tree.edges.iter().copied().collect();
    let mut s = tree_set.clone();
    loop {
        let child = |e: EdgeId| {
            let (u, v) = g.ends(e);
            if tree.depth[u] > tree.depth[v] {
                u
            } else {
                v
            }
        };
        let Some(v) = bridges(g, &s).into_iter().map(child).max_by_key(|&v| (tree.depth[v], std::cmp::Reverse(v))) else {
            break;
        };
        let cover = g
            .edges()
            .filter(|e| !tree_set.contains(e) && !s.contains(e))
            .filter_map(|e| {
                let (x, y) = g.ends(e);
                match (tree.in_subtree(v, x), tree.in_subtree(v, y)) {
                    (true, false) => Some((tree.depth[y], e)),
                    (false, true) => Some((tree.depth[x], e)),
                    _ => None,
                }
            })
            .min()
            .map(|(_, e)| e)
            .expect("a 2EC graph covers every tree edge");
        s.insert(cover);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_2ecss, verify_2ec_spanning, OracleLimits};
    use proptest::prelude::*;

    fn cycle(n: usize) -> Graph {
        Graph::simple(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cycle_is_tree_plus_one() {
        for n in 3..10 {
            let g = cycle(n);
            let s = baseline_2approx(&g).unwrap();
            assert_eq!(s.len(), n);
            assert!(verify_2ec_spanning(&g, &s).ok);
        }
    }

    #[test]
    fn k4_within_bounds() {
        let e: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let g = Graph::simple(4, &e).unwrap();
        let s = baseline_2approx(&g).unwrap();
        assert!((4..=6).contains(&s.len()));
        assert!(verify_2ec_spanning(&g, &s).ok);
    }

    #[test]
    fn path_is_rejected() {
        let g = Graph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(baseline_2approx(&g), Err(Error::NotTwoEc(_))));
    }

    /// Random 2EC graph: a Hamiltonian cycle plus chords.
    fn hamiltonian_plus_chords() -> impl Strategy<Value = Graph> {
        (4usize..10).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec((0..n, 0..n), 0..12), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(n, chords, perm)| {
            let mut e: Vec<(usize, usize)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
            for (a, b) in chords {
                let key = (a.min(b), a.max(b));
                if a != b && !e.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
                    e.push((a, b));
                }
            }
            Graph::simple(n, &e).unwrap()
        })
    }

    proptest! {
        #[test]
        fn within_twice_opt(g in hamiltonian_plus_chords()) {
            let s = baseline_2approx(&g).unwrap();
            prop_assert!(verify_2ec_spanning(&g, &s).ok);
            prop_assert!(s.len() <= 2 * (g.n() - 1));
            let opt = exact_2ecss(&g, &OracleLimits { max_nodes: 10, max_edges: 30, time_budget_ms: 60_000 }).unwrap().len();
            prop_assert!(s.len() <= 2 * opt);
        }
    }
}
