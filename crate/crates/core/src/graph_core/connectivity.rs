use super::{EdgeId, EdgeSet, Graph, Vertex};

/// Result of one low-link DFS pass.
#[derive(Clone, Debug)]
pub struct LowLink {
    pub bridges: Vec<EdgeId>,
    pub articulation: Vec<bool>,
}

/// Tarjan's low-link DFS over explicit adjacency lists, iterative so that
/// long paths do not overflow the stack. Parallel edges are handled by
/// skipping only the tree edge itself, never other copies.
pub fn low_link(adj: &[Vec<(Vertex, EdgeId)>]) -> LowLink {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut parent_edge = vec![UNSEEN; n];
    let mut articulation = vec![false; n];
    let mut bridges = Vec::new();
    let mut clock = 0;
    let mut stack: Vec<(Vertex, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        let mut root_children = 0;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let (w, e) = adj[v][top.1];
                top.1 += 1;
                if e == parent_edge[v] {
                    continue;
                }
                if disc[w] == UNSEEN {
                    parent_edge[w] = e;
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.push(parent_edge[v]);
                    }
                    if p == root {
                        root_children += 1;
                    } else if low[v] >= disc[p] {
                        articulation[p] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            articulation[root] = true;
        }
    }
    bridges.sort_unstable();
    LowLink { bridges, articulation }
}

/// Connected components of `(V, adj)`: component index per vertex (numbered
/// by smallest vertex) and the number of components.
pub fn components(adj: &[Vec<(Vertex, EdgeId)>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        queue.push(s);
        while let Some(v) = queue.pop() {
            for &(w, _) in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Bridges of the subgraph `(V, s)`.
pub fn bridges(g: &Graph, s: &EdgeSet) -> Vec<EdgeId> {
    low_link(&g.adjacency_of(s)).bridges
}

/// Whether `(V, s)` is connected (and spans all vertices).
pub fn is_connected(g: &Graph, s: &EdgeSet) -> bool {
    g.n() <= 1 || components(&g.adjacency_of(s)).1 == 1
}

/// Whether `(V, s)` is a 2-edge-connected spanning subgraph of `g`.
pub fn is_two_edge_connected(g: &Graph, s: &EdgeSet) -> bool {
    let adj = g.adjacency_of(s);
    if g.n() > 1 && components(&adj).1 != 1 {
        return false;
    }
    low_link(&adj).bridges.is_empty()
}

/// Cut vertices of the whole graph.
pub fn cut_vertices(g: &Graph) -> Vec<Vertex> {
    let ll = low_link(&g.adjacency_of(&g.all_edges()));
    (0..g.n()).filter(|&v| ll.articulation[v]).collect()
}

/// Whether `g` is connected, has at least three vertices and no cut vertex.
pub fn is_two_vertex_connected(g: &Graph) -> bool {
    let all = g.all_edges();
    g.n() >= 3 && is_connected(g, &all) && cut_vertices(g).is_empty()
}

/// Classes of the relation "joined by a bridgeless path" inside `(V, s)`:
/// class index per vertex and the class count.
pub fn two_edge_classes(g: &Graph, s: &EdgeSet) -> (Vec<usize>, usize) {
    let br: EdgeSet = bridges(g, s).into_iter().collect();
    components(&g.adjacency_of(&s.minus(&br)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_bridges(g: &Graph, s: &EdgeSet) -> Vec<EdgeId> {
        let (_, base) = components(&g.adjacency_of(s));
        s.iter()
            .copied()
            .filter(|&e| components(&g.adjacency_of(&s.without(&[e]))).1 > base)
            .collect()
    }

    #[test]
    fn path_edges_are_bridges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(bridges(&g, &g.all_edges()), vec![0, 1, 2]);
        assert_eq!(cut_vertices(&g), vec![1, 2]);
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        assert!(bridges(&g, &g.all_edges()).is_empty());
        assert!(is_two_edge_connected(&g, &g.all_edges()));
    }

    #[test]
    fn bowtie_has_cut_vertex_but_no_bridge() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert!(is_two_edge_connected(&g, &g.all_edges()));
        assert_eq!(cut_vertices(&g), vec![2]);
        assert!(!is_two_vertex_connected(&g));
    }

    proptest::proptest! {
        #[test]
        fn bridges_match_definition(n in 2usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = Graph::from_edges(n, &edges);
            let all = g.all_edges();
            proptest::prop_assert_eq!(bridges(&g, &all), brute_bridges(&g, &all));
            let two_ec = is_two_edge_connected(&g, &all);
            let spec = components(&g.adjacency_of(&all)).1 == 1 && bridges(&g, &all).is_empty();
            proptest::prop_assert_eq!(two_ec, spec);
        }
    }
}
