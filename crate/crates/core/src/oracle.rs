//! Exhaustive ground truth: exact minimum 2-ECSS, 2-edge-cover, T-join and
//! triangle-attachment component count, plus the spanning 2EC verifier.
//!
//! Every search here either runs to completion or fails with
//! `LimitExceeded`; a partial best is never reported as optimal.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_core::{components, is_two_edge_connected, low_link, EdgeId, EdgeSet, Graph, Vertex};
use crate::many_triangles::CoreTriangleCover;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub time_budget_ms: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_nodes: 12, max_edges: 24, time_budget_ms: 60_000 }
    }
}

impl OracleLimits {
    /// Node limit only; used for the exact base case of the reduction.
    pub fn nodes_only(max_nodes: usize) -> Self {
        OracleLimits { max_nodes, max_edges: usize::MAX, time_budget_ms: 600_000 }
    }

    fn admit(&self, g: &Graph) -> Result<()> {
        if g.n() > self.max_nodes {
            return Err(Error::LimitExceeded(format!("{} nodes > {}", g.n(), self.max_nodes)));
        }
        if g.m() > self.max_edges {
            return Err(Error::LimitExceeded(format!("{} edges > {}", g.m(), self.max_edges)));
        }
        Ok(())
    }
}

/// Why an edge set fails to be a 2EC spanning subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// The edge id is not a live edge of the host graph.
    ForeignEdge(EdgeId),
    /// The vertex has no incident edge in the set.
    UncoveredNode(Vertex),
    /// The vertex is not reachable from vertex 0.
    Disconnected(Vertex),
    /// Removing this edge disconnects the set.
    Bridge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub witness: Option<Witness>,
}

/// Check that `(V, s)` is connected, spanning and bridgeless.
pub fn verify_2ec_spanning(g: &Graph, s: &EdgeSet) -> Verification {
    let fail = |w| Verification { ok: false, witness: Some(w) };
    if let Some(&e) = s.iter().find(|&&e| e >= g.edge_bound() || !g.is_live(e)) {
        return fail(Witness::ForeignEdge(e));
    }
    if g.n() <= 1 {
        return Verification { ok: true, witness: None };
    }
    let deg = g.degrees_in(s);
    if let Some(v) = (0..g.n()).find(|&v| deg[v] == 0) {
        return fail(Witness::UncoveredNode(v));
    }
    let adj = g.adjacency_of(s);
    let (comp, count) = components(&adj);
    if count > 1 {
        let v = (0..g.n()).find(|&v| comp[v] != comp[0]).expect("second component");
        return fail(Witness::Disconnected(v));
    }
    match low_link(&adj).bridges.first() {
        Some(&e) => fail(Witness::Bridge(e)),
        None => Verification { ok: true, witness: None },
    }
}

/// Shared include-first branch and bound over edge subsets in id order.
///
/// Subsets of equal size are visited in lexicographic order, so the first
/// minimum the search accepts is the lexicographically smallest one.
struct Search<'a> {
    g: &'a Graph,
    order: Vec<EdgeId>,
    /// 0 undecided, 1 included, 2 excluded, indexed by position in `order`.
    state: Vec<u8>,
    inc_deg: Vec<usize>,
    inc_count: usize,
    best: Option<(Vec<EdgeId>, bool)>,
    deadline: Instant,
    ticks: u64,
    timed_out: bool,
}

trait Rules {
    /// Lower bound on any completion of the current included set.
    fn bound(&self, s: &Search) -> usize;
    fn is_solution(&self, s: &Search) -> bool;
    /// Whether the included plus undecided edges can still complete to a solution.
    fn still_feasible(&self, s: &Search) -> bool;
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, lim: &OracleLimits, seed: Option<EdgeSet>) -> Self {
        let order: Vec<EdgeId> = g.edges().collect();
        Search {
            g,
            state: vec![0; order.len()],
            order,
            inc_deg: vec![0; g.n()],
            inc_count: 0,
            best: seed.map(|s| (s.to_vec(), false)),
            deadline: Instant::now() + Duration::from_millis(lim.time_budget_ms),
            ticks: 0,
            timed_out: false,
        }
    }

    fn included(&self) -> EdgeSet {
        self.order.iter().zip(&self.state).filter(|(_, &st)| st == 1).map(|(&e, _)| e).collect()
    }

    fn available(&self) -> EdgeSet {
        self.order.iter().zip(&self.state).filter(|(_, &st)| st != 2).map(|(&e, _)| e).collect()
    }

    fn beaten(&self, bound: usize) -> bool {
        match &self.best {
            None => false,
            Some((b, from_search)) => bound > b.len() || (bound == b.len() && *from_search),
        }
    }

    fn set(&mut self, i: usize, st: u8) {
        let (u, v) = self.g.ends(self.order[i]);
        if self.state[i] == 1 {
            self.inc_deg[u] -= 1;
            self.inc_deg[v] -= 1;
            self.inc_count -= 1;
        }
        self.state[i] = st;
        if st == 1 {
            self.inc_deg[u] += 1;
            self.inc_deg[v] += 1;
            self.inc_count += 1;
        }
    }

    fn run(&mut self, rules: &dyn Rules, from: usize) {
        if self.timed_out {
            return;
        }
        self.ticks += 1;
        if self.ticks.is_multiple_of(4096) && Instant::now() > self.deadline {
            self.timed_out = true;
            return;
        }
        if self.beaten(rules.bound(self)) {
            return;
        }
        if rules.is_solution(self) {
            self.best = Some((self.included().to_vec(), true));
            return;
        }
        let Some(i) = (from..self.order.len()).find(|&i| self.state[i] == 0) else {
            return;
        };
        self.set(i, 1);
        self.run(rules, i + 1);
        self.set(i, 2);
        if rules.still_feasible(self) {
            self.run(rules, i + 1);
        }
        self.set(i, 0);
    }

    fn finish(self, what: &str) -> Result<EdgeSet> {
        if self.timed_out {
            return Err(Error::LimitExceeded(format!("{what}: time budget exhausted")));
        }
        match self.best {
            Some((b, _)) => Ok(b.into_iter().collect()),
            None => Err(Error::LimitExceeded(format!("{what}: no feasible subset"))),
        }
    }
}

fn degree_bound(s: &Search) -> usize {
    s.inc_count.max(s.inc_deg.iter().map(|&d| d.max(2)).sum::<usize>().div_ceil(2))
}

struct TwoEcss;

impl Rules for TwoEcss {
    fn bound(&self, s: &Search) -> usize {
        degree_bound(s)
    }
    fn is_solution(&self, s: &Search) -> bool {
        s.inc_deg.iter().all(|&d| d >= 2) && is_two_edge_connected(s.g, &s.included())
    }
    fn still_feasible(&self, s: &Search) -> bool {
        is_two_edge_connected(s.g, &s.available())
    }
}

struct TwoCover;

impl Rules for TwoCover {
    fn bound(&self, s: &Search) -> usize {
        degree_bound(s)
    }
    fn is_solution(&self, s: &Search) -> bool {
        s.inc_deg.iter().all(|&d| d >= 2)
    }
    fn still_feasible(&self, s: &Search) -> bool {
        s.g.degrees_in(&s.available()).iter().all(|&d| d >= 2)
    }
}

struct TJoin {
    odd: Vec<bool>,
}

impl Rules for TJoin {
    fn bound(&self, s: &Search) -> usize {
        let wrong = (0..s.g.n()).filter(|&v| (s.inc_deg[v] % 2 == 1) != self.odd[v]).count();
        s.inc_count + wrong.div_ceil(2)
    }
    fn is_solution(&self, s: &Search) -> bool {
        (0..s.g.n()).all(|v| (s.inc_deg[v] % 2 == 1) == self.odd[v])
    }
    fn still_feasible(&self, s: &Search) -> bool {
        let avail = s.g.degrees_in(&s.available());
        (0..s.g.n()).all(|v| avail[v] > s.inc_deg[v] || (s.inc_deg[v] % 2 == 1) == self.odd[v])
    }
}

/// Minimal 2EC spanning subgraph by reverse deletion, used as the first incumbent.
fn reverse_delete(g: &Graph) -> EdgeSet {
    let mut s = g.all_edges();
    for e in g.edges().collect::<Vec<_>>().into_iter().rev() {
        s.remove(&e);
        if !is_two_edge_connected(g, &s) {
            s.insert(e);
        }
    }
    s
}

/// Minimum 2EC spanning subgraph, lexicographically smallest among minima.
pub fn exact_2ecss(g: &Graph, lim: &OracleLimits) -> Result<EdgeSet> {
    lim.admit(g)?;
    if !is_two_edge_connected(g, &g.all_edges()) {
        return Err(Error::NotTwoEc("exact_2ecss input".into()));
    }
    if g.n() <= 1 {
        return Ok(EdgeSet::new());
    }
    let mut search = Search::new(g, lim, Some(reverse_delete(g)));
    search.run(&TwoEcss, 0);
    search.finish("exact_2ecss")
}

/// Minimum 2-edge-cover, lexicographically smallest among minima.
pub fn exact_min_2edge_cover(g: &Graph, lim: &OracleLimits) -> Result<EdgeSet> {
    lim.admit(g)?;
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(Error::UncoverableNode(v));
    }
    let mut search = Search::new(g, lim, None);
    search.run(&TwoCover, 0);
    search.finish("exact_min_2edge_cover")
}

/// Minimum T-join by exhaustive search.
pub fn exact_min_t_join(g: &Graph, t: &[Vertex], lim: &OracleLimits) -> Result<EdgeSet> {
    lim.admit(g)?;
    if t.len() % 2 == 1 {
        return Err(Error::OddTSize(t.len()));
    }
    let odd = crate::graph_core::mask(g.n(), t);
    let mut search = Search::new(g, lim, None);
    let rules = TJoin { odd };
    if !rules.still_feasible(&search) {
        return Err(Error::LimitExceeded("exact_min_t_join: no T-join exists".into()));
    }
    search.run(&rules, 0);
    search.finish("exact_min_t_join")
}

/// Number of connected components of `(V, q)` counted over all of `V`.
pub fn component_count(g: &Graph, q: &EdgeSet) -> usize {
    components(&g.adjacency_of(q)).1
}

/// Minimum component count of `(V, Q)` over every valid attachment choice,
/// by enumerating the full product of per-triangle options.
pub fn exact_alpha(ct: &CoreTriangleCover, g: &Graph, lim: &OracleLimits) -> Result<usize> {
    if ct.k() > 4 {
        return Err(Error::LimitExceeded(format!("exact_alpha: k = {} > 4", ct.k())));
    }
    let options: Vec<_> = (0..ct.k()).map(|i| ct.q_options(g, i)).collect();
    if options.iter().any(|o| o.is_empty()) {
        return Err(Error::StructureViolation("triangle without a valid attachment".into()));
    }
    let total: usize = options.iter().map(|o| o.len()).product();
    if total > 2_000_000 {
        return Err(Error::LimitExceeded(format!("exact_alpha: {total} combinations")));
    }
    let deadline = Instant::now() + Duration::from_millis(lim.time_budget_ms);
    let mut best = usize::MAX;
    let mut pick = vec![0usize; ct.k()];
    loop {
        let q: EdgeSet = pick.iter().enumerate().flat_map(|(i, &j)| options[i][j].edges.iter().copied()).collect();
        best = best.min(component_count(g, &q));
        let mut i = 0;
        while i < pick.len() {
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            break;
        }
        if Instant::now() > deadline {
            return Err(Error::LimitExceeded("exact_alpha: time budget exhausted".into()));
        }
    }
    Ok(best)
}

/// Maximum matching size by branching on the lowest vertex that is still
/// free: it stays unmatched or is matched to one of its free neighbours.
pub fn exact_max_matching(g: &Graph, lim: &OracleLimits) -> Result<usize> {
    lim.admit(g)?;
    fn go(g: &Graph, v: Vertex, used: &mut [bool]) -> usize {
        let Some(v) = (v..g.n()).find(|&v| !used[v]) else { return 0 };
        used[v] = true;
        let mut best = go(g, v + 1, used);
        for &(w, _) in g.adj(v) {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(g, v + 1, used));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    Ok(go(g, 0, &mut vec![false; g.n()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::simple(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::simple(n, &e).unwrap()
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

    /// Plain subset enumeration, used to check the branch and bound.
    fn naive_min(g: &Graph, ok: impl Fn(&EdgeSet) -> bool) -> Option<EdgeSet> {
        let edges: Vec<EdgeId> = g.edges().collect();
        let mut best: Option<EdgeSet> = None;
        for mask in 0u32..(1 << edges.len()) {
            let s: EdgeSet = edges.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if ok(&s) {
                let better = match &best {
                    None => true,
                    Some(b) => s.len() < b.len() || (s.len() == b.len() && s.to_vec() < b.to_vec()),
                };
                if better {
                    best = Some(s);
                }
            }
        }
        best
    }

    #[test]
    fn named_optima() {
        let lim = OracleLimits::default();
        for n in 3..9 {
            assert_eq!(exact_2ecss(&cycle(n), &lim).unwrap().len(), n);
        }
        assert_eq!(exact_2ecss(&complete(5), &lim).unwrap().len(), 5);
        assert_eq!(exact_2ecss(&petersen(), &lim).unwrap().len(), 11);
    }

    #[test]
    fn limits_are_enforced() {
        let lim = OracleLimits::default();
        assert!(matches!(exact_2ecss(&cycle(13), &lim), Err(Error::LimitExceeded(_))));
        assert!(matches!(exact_2ecss(&complete(8), &lim), Err(Error::LimitExceeded(_))));
        let path = Graph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(exact_2ecss(&path, &lim), Err(Error::NotTwoEc(_))));
    }

    #[test]
    fn verifier_witnesses() {
        let g = cycle(5);
        assert!(verify_2ec_spanning(&g, &g.all_edges()).ok);
        let tree: EdgeSet = [0, 1, 2, 3].into_iter().collect();
        assert_eq!(verify_2ec_spanning(&g, &tree).witness, Some(Witness::Bridge(0)));
        let k4 = complete(4);
        let triangle: EdgeSet = [0, 1, 3].into_iter().collect();
        assert_eq!(verify_2ec_spanning(&k4, &triangle).witness, Some(Witness::UncoveredNode(3)));
        let foreign: EdgeSet = [0, 1, 2, 3, 4, 99].into_iter().collect();
        assert_eq!(verify_2ec_spanning(&g, &foreign).witness, Some(Witness::ForeignEdge(99)));
    }

    #[test]
    fn small_cover_and_join_cases() {
        let lim = OracleLimits::default();
        assert_eq!(exact_min_2edge_cover(&cycle(5), &lim).unwrap().len(), 5);
        assert!(exact_min_t_join(&cycle(6), &[], &lim).unwrap().is_empty());
        assert_eq!(exact_min_t_join(&cycle(6), &[0, 3], &lim).unwrap().len(), 3);
        assert_eq!(exact_min_t_join(&cycle(6), &[0], &lim), Err(Error::OddTSize(1)));
    }

    #[test]
    fn alpha_of_a_bare_core_counts_every_node() {
        let g = cycle(5);
        let ct = CoreTriangleCover {
            core: g.all_edges(),
            core_nodes: (0..5).collect(),
            triangles: vec![],
            triangle_edges: vec![],
            alpha_s: None,
            q_star: None,
        };
        assert_eq!(exact_alpha(&ct, &g, &OracleLimits::default()).unwrap(), 5);
    }

    fn random_graph(n: usize, raw: Vec<(usize, usize)>) -> Graph {
        let mut set = std::collections::BTreeSet::new();
        for i in 0..n {
            set.insert((i.min((i + 1) % n), i.max((i + 1) % n)));
        }
        for (a, b) in raw {
            let (a, b) = (a % n, b % n);
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        Graph::simple(n, &set.into_iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn matching_oracle_on_small_graphs() {
        let lim = OracleLimits::default();
        let path = Graph::simple(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(exact_max_matching(&path, &lim).unwrap(), 2);
        let star = Graph::simple(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(exact_max_matching(&star, &lim).unwrap(), 1);
        let k5: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        assert_eq!(exact_max_matching(&Graph::simple(5, &k5).unwrap(), &lim).unwrap(), 2);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(60))]
        #[test]
        fn branch_and_bound_matches_enumeration(n in 3usize..8, raw in proptest::collection::vec((0usize..8, 0usize..8), 0..8)) {
            let g = random_graph(n, raw);
            proptest::prop_assume!(g.m() <= 14);
            let lim = OracleLimits::default();
            let fast = exact_2ecss(&g, &lim).unwrap();
            let slow = naive_min(&g, |s| is_two_edge_connected(&g, s)).unwrap();
            proptest::prop_assert_eq!(fast, slow);
            let fast = exact_min_2edge_cover(&g, &lim).unwrap();
            let slow = naive_min(&g, |s| g.degrees_in(s).iter().all(|&d| d >= 2)).unwrap();
            proptest::prop_assert_eq!(fast, slow);
            let t: Vec<Vertex> = (0..n - n % 2).filter(|v| v % 3 != 1).collect();
            proptest::prop_assume!(t.len().is_multiple_of(2));
            let odd = crate::graph_core::mask(n, &t);
            let fast = exact_min_t_join(&g, &t, &lim).unwrap();
            let slow = naive_min(&g, |s| { let d = g.degrees_in(s); (0..n).all(|v| (d[v] % 2 == 1) == odd[v]) }).unwrap();
            proptest::prop_assert_eq!(fast.len(), slow.len());
        }
    }
}
