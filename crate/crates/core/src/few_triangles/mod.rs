//! Solver regime for covers with few triangle components: cover every
//! bridge, then glue the 2EC components together one merge at a time under
//! the scheme F credits.

mod bridge;
mod local;
mod nontree;
mod tree;


pub use bridge::{bridge_cover_step, reachable_set, BridgeCase, BridgeCoveringPath, BridgeStep, BridgeTree, NodeKind};
pub use local::{c5c4_to_nine, local_merge, LocalMerge, LocalStep};
pub use nontree::{glue_non_tree_case, peel, ClosureShape, GluingPath, NonTreeStep, PeeledCore};
pub use tree::{glue_tree_case, TreeCase, TreeStep};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cover::cover_stats;
use crate::credit::{initial_cost_check, CostSnapshot, LightFlags, LogEntry, Monitor, Scheme};
use crate::error::{violation, Result};
use crate::graph_core::{decompose, is_two_edge_connected, CoverDecomposition, EdgeId, EdgeSet, Graph, SizeClass, Vertex};

/// Shape of a 2EC component as the gluing rules see it. Irregular
/// components have at least seven edges by the cover invariant and count as
/// large.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Triangle,
    Cycle4,
    Cycle5,
    Cycle6,
    Large,
}

impl Kind {
    pub fn of(class: SizeClass) -> Kind {
        match class {
            SizeClass::Triangle => Kind::Triangle,
            SizeClass::Cycle4 => Kind::Cycle4,
            SizeClass::Cycle5 => Kind::Cycle5,
            SizeClass::Cycle6 => Kind::Cycle6,
            SizeClass::Large | SizeClass::Irregular => Kind::Large,
        }
    }

    /// Triangles and 4-cycles must be crossed through adjacent nodes.
    pub fn is_short(self) -> bool {
        matches!(self, Kind::Triangle | Kind::Cycle4)
    }
}

/// A bridgeless edge set viewed as its components and the graph between them.
#[derive(Clone, Debug)]
pub struct Gluing<'a> {
    pub g: &'a Graph,
    pub s: EdgeSet,
    pub d: CoverDecomposition,
    pub kinds: Vec<Kind>,
    /// Neighbouring components in the component graph.
    pub nbrs: Vec<BTreeSet<usize>>,
}

impl<'a> Gluing<'a> {
    pub fn new(g: &'a Graph, s: &EdgeSet) -> Result<Self> {
        let d = decompose(g, s);
        let mut kinds = Vec::with_capacity(d.components.len());
        for (i, c) in d.components.iter().enumerate() {
            match c.class() {
                Some(cl) => kinds.push(Kind::of(cl)),
                None => return violation(format!("component {i} is not 2EC")),
            }
        }
        let mut nbrs = vec![BTreeSet::new(); d.components.len()];
        for e in g.edges() {
            let (u, v) = g.ends(e);
            let (a, b) = (d.comp_of[u], d.comp_of[v]);
            if a != b {
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
        }
        Ok(Gluing { g, s: s.clone(), d, kinds, nbrs })
    }

    pub fn count(&self) -> usize {
        self.d.components.len()
    }

    pub fn nodes(&self, c: usize) -> &[Vertex] {
        &self.d.components[c].nodes
    }

    pub fn edges(&self, c: usize) -> &EdgeSet {
        &self.d.components[c].edges
    }

    pub fn mask(&self, c: usize) -> Vec<bool> {
        crate::graph_core::mask(self.g.n(), self.nodes(c))
    }

    /// Edge of `S` joining `x` and `y`, if any.
    pub fn s_edge(&self, x: Vertex, y: Vertex) -> Option<EdgeId> {
        self.g.adj(x).iter().find(|&&(w, e)| w == y && self.s.contains(&e)).map(|&(_, e)| e)
    }

    /// Edges of `G` between components `a` and `b`, as `(node in a, node in b, edge)`.
    pub fn between(&self, a: usize, b: usize) -> Vec<(Vertex, Vertex, EdgeId)> {
        let mut out = Vec::new();
        for &x in self.nodes(a) {
            for &(y, e) in self.g.adj(x) {
                if self.d.comp_of[y] == b {
                    out.push((x, y, e));
                }
            }
        }
        out.sort_by_key(|t| t.2);
        out
    }

    /// Whether the component graph is a tree.
    pub fn is_tree(&self) -> bool {
        let m: usize = self.nbrs.iter().map(|n| n.len()).sum::<usize>() / 2;
        m + 1 == self.count()
    }

    /// Cyclic node order of a cycle component.
    pub fn cycle_order(&self, c: usize) -> Vec<Vertex> {
        let edges = self.edges(c);
        let start = self.nodes(c)[0];
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = self
                .g
                .adj(cur)
                .iter()
                .find(|&&(w, e)| edges.contains(&e) && Some(w) != prev && w != cur)
                .map(|&(w, _)| w);
            match next {
                Some(w) if w != start => {
                    order.push(w);
                    prev = Some(cur);
                    cur = w;
                }
                _ => break,
            }
        }
        order
    }
}

/// A Hamiltonian path from `a` to `b` in `G[nodes]`, as edge ids.
pub(crate) fn hamiltonian_path(g: &Graph, nodes: &[Vertex], a: Vertex, b: Vertex) -> Option<Vec<EdgeId>> {
    fn extend(g: &Graph, nodes: &[Vertex], b: Vertex, path: &mut Vec<Vertex>, edges: &mut Vec<EdgeId>) -> bool {
        let cur = *path.last().expect("path starts at a");
        if path.len() == nodes.len() {
            return cur == b;
        }
        for &(w, e) in g.adj(cur) {
            if !nodes.contains(&w) || path.contains(&w) || (w == b && path.len() + 1 != nodes.len()) {
                continue;
            }
            path.push(w);
            edges.push(e);
            if extend(g, nodes, b, path, edges) {
                return true;
            }
            path.pop();
            edges.pop();
        }
        false
    }
    if a == b || !nodes.contains(&a) || !nodes.contains(&b) {
        return None;
    }
    let mut path = vec![a];
    let mut edges = Vec::new();
    extend(g, nodes, b, &mut path, &mut edges).then_some(edges)
}

/// Whether `edges` plus the virtual pairs `extra` form a 2-edge-connected
/// graph spanning exactly `nodes`.
pub(crate) fn two_ec_on(g: &Graph, nodes: &[Vertex], edges: &[EdgeId], extra: &[(Vertex, Vertex)]) -> bool {
    let local = |v: Vertex| nodes.iter().position(|&x| x == v);
    let mut pairs = Vec::new();
    for &e in edges {
        let (u, v) = g.ends(e);
        match (local(u), local(v)) {
            (Some(a), Some(b)) => pairs.push((a, b)),
            _ => return false,
        }
    }
    for &(u, v) in extra {
        match (local(u), local(v)) {
            (Some(a), Some(b)) => pairs.push((a, b)),
            _ => return false,
        }
    }
    let h = Graph::from_edges(nodes.len(), &pairs);
    is_two_edge_connected(&h, &h.all_edges())
}

/// Edge sets of the 2EC components of `h` with fewer than seven edges.
pub fn small_components(g: &Graph, h: &EdgeSet) -> BTreeSet<Vec<EdgeId>> {
    decompose(g, h)
        .components
        .iter()
        .filter(|c| c.is_two_ec() && c.edges.len() < 7)
        .map(|c| c.edges.to_vec())
        .collect()
}

/// Checks that every 2EC component of `s` is one of `original` or has at
/// least seven edges.
pub fn check_small_invariant(g: &Graph, s: &EdgeSet, original: &BTreeSet<Vec<EdgeId>>) -> Result<()> {
    for c in decompose(g, s).components.iter().filter(|c| c.is_two_ec()) {
        if c.edges.len() < 7 && !original.contains(&c.edges.to_vec()) {
            return violation(format!("component on {:?} has {} edges and is not a cycle of H", c.nodes, c.edges.len()));
        }
    }
    Ok(())
}

/// Accepts `next` as a gluing step from `cur` when every component stays
/// 2EC, the count drops, every new component has at least seven edges and
/// the cost does not rise.
pub(crate) fn accept_glue(cur: &Gluing, next: &EdgeSet, monitor: &Monitor) -> bool {
    let d = decompose(cur.g, next);
    let old: BTreeSet<Vec<EdgeId>> = cur.d.components.iter().map(|c| c.edges.to_vec()).collect();
    d.components.iter().all(|c| c.is_two_ec())
        && d.components.len() < cur.count()
        && d.components.iter().all(|c| c.edges.len() >= 7 || old.contains(&c.edges.to_vec()))
        && monitor.peek(cur.g, next) <= monitor.current.cost
}

/// Which rule produced one step of the few-triangles regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FewStep {
    Bridge(BridgeCase),
    Local(LocalMerge),
    Tree(TreeCase),
    NonTree(ClosureShape),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FewOutcome {
    pub solution: EdgeSet,
    pub lower_bound: usize,
    pub initial: CostSnapshot,
    pub steps: Vec<FewStep>,
    /// Bridge count after each bridge-covering step, starting with `H`.
    pub bridge_trace: Vec<usize>,
    /// Component count after each gluing step, starting after bridge covering.
    pub component_trace: Vec<usize>,
    pub log: Vec<LogEntry>,
}

/// Runs the few-triangles regime on a canonical cover `h` of a structured graph.
pub fn solve_few(g: &Graph, h: &EdgeSet) -> Result<FewOutcome> {
    let d0 = decompose(g, h);
    let stats = cover_stats(&d0);
    let initial = initial_cost_check(g, h, &stats, Scheme::F)?;
    let original = small_components(g, h);
    let mut monitor = Monitor::new(g, h, Scheme::F, LightFlags::new());
    let mut s = h.clone();
    let mut steps = Vec::new();
    let mut bridge_trace = vec![d0.bridges.len()];
    let step_cap = d0.components.len() + d0.bridges.len() + 1;

    while !decompose(g, &s).bridges.is_empty() {
        if steps.len() > step_cap {
            return violation("bridge covering did not terminate");
        }
        let step = bridge_cover_step(g, &s, &monitor)?;
        monitor.step(g, &step.s, &format!("bridge cover: {:?}", step.case))?;
        check_small_invariant(g, &step.s, &original)?;
        bridge_trace.push(decompose(g, &step.s).bridges.len());
        steps.push(FewStep::Bridge(step.case));
        s = step.s;
    }

    let mut component_trace = vec![decompose(g, &s).components.len()];
    loop {
        let cur = Gluing::new(g, &s)?;
        if cur.count() == 1 {
            break;
        }
        if steps.len() > step_cap {
            return violation("gluing did not terminate");
        }
        let (next, kind) = if let Some(step) = local_merge(&cur, &monitor)? {
            (step.s, FewStep::Local(step.kind))
        } else if cur.is_tree() {
            let step = glue_tree_case(&cur, &monitor)?;
            (step.s, FewStep::Tree(step.case))
        } else {
            let step = glue_non_tree_case(&cur, &monitor)?;
            (step.s, FewStep::NonTree(step.shape))
        };
        let after = decompose(g, &next);
        if !after.is_all_two_ec() || after.components.len() >= cur.count() {
            return violation(format!("gluing step {kind:?} did not merge components"));
        }
        monitor.step(g, &next, &format!("gluing: {kind:?}"))?;
        check_small_invariant(g, &next, &original)?;
        component_trace.push(after.components.len());
        steps.push(kind);
        s = next;
    }

    if !is_two_edge_connected(g, &s) {
        return violation("few-triangles result is not 2EC");
    }
    if monitor.current.cost > monitor.initial.cost {
        return violation("final cost exceeds cost(H)");
    }
    Ok(FewOutcome {
        solution: s,
        lower_bound: h.len(),
        initial,
        steps,
        bridge_trace,
        component_trace,
        log: monitor.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{canonicalize, min_two_edge_cover};
    use crate::credit::initial_factor;
    use crate::oracle::{exact_2ecss, OracleLimits};
    use crate::reduction::{structured_certificate, ReductionParams};
    use crate::Rational;
    use proptest::prelude::*;

    fn prism() -> Graph {
        Graph::simple(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap()
    }

    #[test]
    fn spanning_component_is_returned_at_once() {
        let g = Graph::simple(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let h: EdgeSet = (0..5).collect();
        let out = solve_few(&g, &h).unwrap();
        assert_eq!(out.solution, h);
        assert!(out.steps.is_empty());
        assert_eq!(out.lower_bound, 5);
    }

    #[test]
    fn two_triangles_of_the_prism_are_glued() {
        let g = prism();
        let h: EdgeSet = (0..6).collect();
        let err = solve_few(&g, &h).unwrap_err();
        // The prism's two triangles with three rungs are a 3-swap away from a 6-cycle.
        assert!(matches!(err, crate::Error::ThreeOptimalityBreach(_)), "{err:?}");
    }

    #[test]
    fn hamiltonian_path_helper() {
        let g = Graph::simple(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let p = hamiltonian_path(&g, &[0, 1, 2, 3, 4], 0, 1).unwrap();
        assert_eq!(p.len(), 4);
        assert!(hamiltonian_path(&g, &[0, 1, 2, 3, 4], 0, 0).is_none());
        assert!(two_ec_on(&g, &[0, 1, 2, 3, 4], &p, &[(0, 1)]));
    }

    #[test]
    fn cycle_order_walks_the_cycle() {
        let g = Graph::simple(6, &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]).unwrap();
        let cur = Gluing::new(&g, &g.all_edges()).unwrap();
        let order = cur.cycle_order(0);
        assert_eq!(order.len(), 6);
        for i in 0..6 {
            assert!(g.edge_between(order[i], order[(i + 1) % 6]).is_some());
        }
    }

    /// A Hamiltonian cycle on `n` nodes plus random chords.
    fn sparse_2vc(n: usize, chords: &[(usize, usize)]) -> Graph {
        let mut e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        for &(a, b) in chords {
            let (a, b) = (a % n, b % n);
            if a != b && !e.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                e.push((a, b));
            }
        }
        Graph::simple(n, &e).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 50_000, ..ProptestConfig::default() })]

        #[test]
        fn few_regime_is_sound_on_structured_graphs(n in 8usize..13, chords in proptest::collection::vec((0usize..13, 0usize..13), 6..14)) {
            let g = sparse_2vc(n, &chords);
            let p = ReductionParams { exact_base_bound: 5, ..ReductionParams::default() };
            prop_assume!(structured_certificate(&g, &p).holds());
            let h = canonicalize(&g, &min_two_edge_cover(&g).unwrap()).unwrap();
            let out = solve_few(&g, &h).unwrap();
            prop_assert!(is_two_edge_connected(&g, &out.solution));
            prop_assert!(out.bridge_trace.windows(2).all(|w| w[1] < w[0]));
            prop_assert!(out.component_trace.windows(2).all(|w| w[1] < w[0]));
            prop_assert!(out.log.iter().all(|l| l.delta >= Rational::from_integer(0)));
            let stats = cover_stats(&decompose(&g, &h));
            prop_assert!(Rational::from_integer(out.solution.len() as i64) <= initial_factor(&stats, Scheme::F) * Rational::from_integer(h.len() as i64));
            let opt = exact_2ecss(&g, &OracleLimits { max_nodes: 13, max_edges: 30, ..OracleLimits::default() }).unwrap();
            prop_assert!(out.lower_bound <= opt.len());
        }
    }
}
