//! Matching primitives: maximum cardinality matching in general graphs,
//! minimum weight perfect matching on complete graphs, and maximum simple
//! 2-matchings through a vertex-splitting gadget.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph_core::{EdgeId, EdgeSet, Graph, Vertex};

const NONE: usize = usize::MAX;

/// Edmonds' blossom algorithm, O(n^3). Vertices are tried as roots in
/// increasing order and neighbours in adjacency order, so the result is
/// deterministic. Returns the matched edges (smallest id per matched pair).
pub fn max_matching(g: &Graph) -> EdgeSet {
    let n = g.n();
    let adj: Vec<Vec<Vertex>> = (0..n)
        .map(|v| g.adj(v).iter().map(|&(w, _)| w).filter(|&w| w != v).collect())
        .collect();
    let mut mate = vec![NONE; n];
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        let mut search = BlossomSearch::new(n);
        if let Some(end) = search.find_path(root, &adj, &mate) {
            let mut v = end;
            while v != NONE {
                let pv = search.parent[v];
                let ppv = mate[pv];
                mate[v] = pv;
                mate[pv] = v;
                v = ppv;
            }
        }
    }
    (0..n)
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| g.edge_between(v, mate[v]).expect("matched pair is adjacent"))
        .collect()
}

struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch { parent: vec![NONE; n], base: (0..n).collect(), used: vec![false; n], blossom: vec![false; n] }
    }

    fn lca(&self, mut a: usize, mut b: usize, mate: &[usize]) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, mate: &[usize]) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_path(&mut self, root: usize, adj: &[Vec<Vertex>], mate: &[usize]) -> Option<usize> {
        let n = adj.len();
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(v, to, mate);
                    self.blossom = vec![false; n];
                    self.mark_path(v, cur, to, mate);
                    self.mark_path(to, cur, v, mate);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Complete graph with symmetric non-negative integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCompleteGraph {
    pub n: usize,
    pub weight: Vec<Vec<u32>>,
}

impl WeightedCompleteGraph {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let weight = (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { f(i.min(j), i.max(j)) }).collect()).collect();
        WeightedCompleteGraph { n, weight }
    }
}

/// Minimum weight perfect matching, returned as sorted pairs `(i, j)` with `i < j`.
///
/// Backed by the `mwmatching` crate's maximum weight matching: weights are
/// flipped to `K - w` with `K` above every weight and maximum cardinality is
/// enforced, so every perfect matching has the same cardinality and the
/// heaviest flipped one is the lightest original one.
pub fn min_weight_perfect_matching(w: &WeightedCompleteGraph) -> Result<Vec<(usize, usize)>> {
    let n = w.n;
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let top = w.weight.iter().flatten().copied().max().unwrap_or(0) as i64 + 1;
    assert!(top * (n as i64) < i32::MAX as i64 / 4, "weights too large for the matching backend");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, (top - w.weight[i][j] as i64) as i32));
        }
    }
    let mate = mwmatching::Matching::new(edges).max_cardinality().solve();
    let mut pairs = Vec::new();
    for (i, &j) in mate.iter().enumerate().take(n) {
        assert!(j != mwmatching::SENTINEL, "complete graph on an even vertex count has a perfect matching");
        if i < j {
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}

/// Total weight of a set of pairs.
pub fn matching_weight(w: &WeightedCompleteGraph, pairs: &[(usize, usize)]) -> u64 {
    pairs.iter().map(|&(i, j)| w.weight[i][j] as u64).sum()
}

/// Maximum edge set with every degree at most 2.
///
/// Each vertex `v` becomes two slots; each edge `uv` becomes a connector pair
/// `x_e - y_e` with `x_e` joined to both slots of `u` and `y_e` to both slots
/// of `v`. A maximum matching of the gadget has size `m + k` where `k` is the
/// maximum 2-matching size, and the edges whose connectors are both matched
/// into slots form such a 2-matching.
pub fn max_simple_2_matching(g: &Graph) -> EdgeSet {
    let n = g.n();
    let live: Vec<EdgeId> = g.edges().collect();
    let mut gadget = Graph::new(2 * n + 2 * live.len());
    let mut connector = Vec::with_capacity(live.len());
    for (i, &e) in live.iter().enumerate() {
        let (u, v) = g.ends(e);
        let (x, y) = (2 * n + 2 * i, 2 * n + 2 * i + 1);
        let inner = gadget.add_edge(x, y);
        for slot in [2 * u, 2 * u + 1] {
            gadget.add_edge(x, slot);
        }
        for slot in [2 * v, 2 * v + 1] {
            gadget.add_edge(y, slot);
        }
        connector.push(inner);
    }
    let matched = max_matching(&gadget);
    let mut covered = vec![false; gadget.n()];
    for &f in matched.iter() {
        let (a, b) = gadget.ends(f);
        covered[a] = true;
        covered[b] = true;
    }
    let chosen: EdgeSet = live
        .iter()
        .enumerate()
        .filter(|&(i, _)| !matched.contains(&connector[i]) && covered[2 * n + 2 * i] && covered[2 * n + 2 * i + 1])
        .map(|(_, &e)| e)
        .collect();
    debug_assert!(g.degrees_in(&chosen).iter().all(|&d| d <= 2));
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::simple(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::simple(10, &e).unwrap()
    }

    fn brute_matching(g: &Graph) -> usize {
        let edges: Vec<EdgeId> = g.edges().collect();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut used = vec![false; g.n()];
            let mut ok = true;
            for (i, &e) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (u, v) = g.ends(e);
                    if used[u] || used[v] {
                        ok = false;
                        break;
                    }
                    used[u] = true;
                    used[v] = true;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    fn brute_2_matching(g: &Graph) -> usize {
        let edges: Vec<EdgeId> = g.edges().collect();
        (0u32..(1 << edges.len()))
            .filter(|&mask| {
                let mut d = vec![0; g.n()];
                edges.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).all(|(_, &e)| {
                    let (u, v) = g.ends(e);
                    d[u] += 1;
                    d[v] += 1;
                    d[u] <= 2 && d[v] <= 2
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn brute_perfect(w: &WeightedCompleteGraph, free: &mut Vec<usize>) -> u64 {
        if free.is_empty() {
            return 0;
        }
        let a = free.remove(0);
        let mut best = u64::MAX;
        for k in 0..free.len() {
            let b = free.remove(k);
            let rest = brute_perfect(w, free);
            best = best.min(rest + w.weight[a][b] as u64);
            free.insert(k, b);
        }
        free.insert(0, a);
        best
    }

    #[test]
    fn small_matchings() {
        assert_eq!(max_matching(&cycle(4)).len(), 2);
        assert_eq!(max_matching(&cycle(5)).len(), 2);
        assert_eq!(max_matching(&petersen()).len(), 5);
        assert_eq!(brute_matching(&petersen()), 5);
    }

    #[test]
    fn small_two_matchings() {
        assert_eq!(max_simple_2_matching(&cycle(5)).len(), 5);
        let path = Graph::simple(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(max_simple_2_matching(&path).len(), 3);
        assert_eq!(max_simple_2_matching(&petersen()).len(), 10);
    }

    #[test]
    fn perfect_matching_examples() {
        let w = WeightedCompleteGraph::from_fn(2, |_, _| 7);
        assert_eq!(min_weight_perfect_matching(&w).unwrap(), vec![(0, 1)]);
        let w = WeightedCompleteGraph::from_fn(4, |i, j| if (i, j) == (0, 1) || (i, j) == (2, 3) { 1 } else { 10 });
        let m = min_weight_perfect_matching(&w).unwrap();
        assert_eq!(m, vec![(0, 1), (2, 3)]);
        assert_eq!(matching_weight(&w, &m), 2);
        assert_eq!(min_weight_perfect_matching(&WeightedCompleteGraph::from_fn(3, |_, _| 1)), Err(Error::OddVertexCount(3)));
    }

    fn simple_graph(n: usize, raw: Vec<(usize, usize)>) -> Graph {
        let mut set = std::collections::BTreeSet::new();
        for (a, b) in raw {
            let (a, b) = (a % n, b % n);
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        Graph::simple(n, &set.into_iter().collect::<Vec<_>>()).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(150))]
        #[test]
        fn matching_agrees_with_exhaustive(n in 2usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10), 0..16)) {
            let g = simple_graph(n, raw);
            let m = max_matching(&g);
            let mut used = vec![false; n];
            for &e in m.iter() {
                let (u, v) = g.ends(e);
                proptest::prop_assert!(!used[u] && !used[v]);
                used[u] = true;
                used[v] = true;
            }
            proptest::prop_assert_eq!(m.len(), brute_matching(&g));
        }

        #[test]
        fn two_matching_agrees_with_exhaustive(n in 2usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..16)) {
            let g = simple_graph(n, raw);
            let s = max_simple_2_matching(&g);
            proptest::prop_assert!(g.degrees_in(&s).iter().all(|&d| d <= 2));
            proptest::prop_assert_eq!(s.len(), brute_2_matching(&g));
        }

        #[test]
        fn perfect_matching_agrees_with_exhaustive(half in 1usize..6, seed in proptest::collection::vec(0u32..50, 45)) {
            let n = 2 * half;
            let w = WeightedCompleteGraph::from_fn(n, |i, j| seed[(i * 7 + j * 3) % seed.len()] + (i * j) as u32 % 5);
            let m = min_weight_perfect_matching(&w).unwrap();
            proptest::prop_assert_eq!(m.len(), half);
            let mut all: Vec<usize> = (0..n).collect();
            proptest::prop_assert_eq!(matching_weight(&w, &m), brute_perfect(&w, &mut all));
        }
    }
}
