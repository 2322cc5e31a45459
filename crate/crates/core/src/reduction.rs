//! Recursive reduction from arbitrary 2EC multigraphs to structured
//! instances, with a replayable trace of every step.
//!
//! The recursion checks, in order: exact base case, cut vertex, loop or
//! parallel edge, small contractible subgraph, irrelevant edge, and
//! non-isolating 2-vertex-cut. Only graphs that pass all of these reach the
//! structured solver.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{violation, Error, Result};
use crate::graph_core::{
    components, components_without, cut_vertices, is_two_edge_connected, is_two_vertex_connected, low_link,
    two_edge_classes, two_vertex_cuts, CutKind, EdgeId, EdgeSet, Graph, SubgraphMap, Vertex,
};
use crate::oracle::{exact_2ecss, verify_2ec_spanning, OracleLimits};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    #[serde(with = "crate::serde_rational")]
    pub alpha: Rational,
    /// Only reported; the exact base case is gated by `exact_base_bound`.
    #[serde(with = "crate::serde_rational")]
    pub epsilon: Rational,
    /// Largest node set searched for contractible subgraphs.
    pub contractible_bound: usize,
    /// Graphs with at most this many nodes are solved exactly.
    pub exact_base_bound: usize,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams {
            alpha: Rational::new(5, 4),
            epsilon: Rational::new(1, 24),
            contractible_bound: 6,
            exact_base_bound: 12,
        }
    }
}

impl ReductionParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha < Rational::new(6, 5) {
            return Err(Error::BadSpec(format!("alpha = {} < 6/5", self.alpha)));
        }
        if self.epsilon <= Rational::from_integer(0) {
            return Err(Error::BadSpec(format!("epsilon = {} must be positive", self.epsilon)));
        }
        if self.contractible_bound < 3 {
            return Err(Error::BadSpec(format!("contractible bound {} < 3", self.contractible_bound)));
        }
        // A non-isolating cut on five or fewer nodes has no two-sided partition.
        if self.exact_base_bound < 5 {
            return Err(Error::BadSpec(format!("exact base bound {} < 5", self.exact_base_bound)));
        }
        Ok(())
    }
}

/// Shape of a subgraph of one side of a 2-vertex-cut `{u, v}` after
/// contracting its 2EC components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbcType {
    /// One super-node holding everything.
    A,
    /// A path of super-nodes from the one holding `u` to the one holding `v`.
    B,
    /// Two isolated super-nodes, one holding `u` and one holding `v`.
    C,
}

/// Type of `(V(g), h)` with respect to `{u, v}`, if it has one.
pub fn classify(g: &Graph, h: &EdgeSet, u: Vertex, v: Vertex) -> Option<AbcType> {
    let adj = g.adjacency_of(h);
    let (comp, count) = components(&adj);
    let bridges = low_link(&adj).bridges;
    match count {
        1 if bridges.is_empty() => Some(AbcType::A),
        1 => {
            let (class, k) = two_edge_classes(g, h);
            let mut deg = vec![0usize; k];
            for &e in &bridges {
                let (a, b) = g.ends(e);
                deg[class[a]] += 1;
                deg[class[b]] += 1;
            }
            let (cu, cv) = (class[u], class[v]);
            let path = cu != cv
                && deg[cu] == 1
                && deg[cv] == 1
                && (0..k).all(|c| c == cu || c == cv || deg[c] == 2);
            path.then_some(AbcType::B)
        }
        2 if bridges.is_empty() && comp[u] != comp[v] => Some(AbcType::C),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcOptima {
    pub opt_a: Option<EdgeSet>,
    pub opt_b: Option<EdgeSet>,
    pub opt_c: Option<EdgeSet>,
    pub opt_min: EdgeSet,
    pub min_type: AbcType,
}

/// Minimum type A, B and C subgraphs of the small side `g1` of the cut
/// `{u, v}`. A type C optimum is kept only when the other side is 2EC, a type
/// B optimum only when the other side admits a type A or B subgraph.
pub fn abc_optima(g1: &Graph, u: Vertex, v: Vertex, g2_is_2ec: bool, g2_has_type_ab: bool) -> Result<AbcOptima> {
    let edges: Vec<EdgeId> = g1.edges().collect();
    if edges.len() > 24 {
        return Err(Error::LimitExceeded(format!("abc_optima: {} edges", edges.len())));
    }
    let mut found: [Option<EdgeSet>; 3] = [None, None, None];
    'sizes: for k in 0..=edges.len() {
        for pick in edges.iter().copied().combinations(k) {
            let h: EdgeSet = pick.into_iter().collect();
            if let Some(t) = classify(g1, &h, u, v) {
                let slot = &mut found[t as usize];
                if slot.is_none() {
                    *slot = Some(h);
                    if found.iter().all(|f| f.is_some()) {
                        break 'sizes;
                    }
                }
            }
        }
    }
    let [opt_a, opt_b, opt_c] = found;
    let opt_b = opt_b.filter(|_| g2_has_type_ab);
    let opt_c = opt_c.filter(|_| g2_is_2ec);
    let (min_type, opt_min) = [(AbcType::A, &opt_a), (AbcType::B, &opt_b), (AbcType::C, &opt_c)]
        .into_iter()
        .filter_map(|(t, s)| s.as_ref().map(|s| (t, s)))
        .min_by_key(|&(t, s)| (s.len(), t))
        .map(|(t, s)| (t, s.clone()))
        .ok_or(Error::NoFeasibleType)?;
    Ok(AbcOptima { opt_a, opt_b, opt_c, opt_min, min_type })
}

/// Connected vertex sets of size `3..=max`, ordered by size and then
/// lexicographically.
fn connected_sets(g: &Graph, max: usize) -> Vec<Vec<Vertex>> {
    fn extend(g: &Graph, root: Vertex, set: &mut Vec<Vertex>, frontier: Vec<Vertex>, max: usize, out: &mut Vec<Vec<Vertex>>) {
        if set.len() >= 3 {
            let mut s = set.clone();
            s.sort_unstable();
            out.push(s);
        }
        if set.len() == max {
            return;
        }
        let mut frontier = frontier;
        while let Some(w) = frontier.pop() {
            let mut next = frontier.clone();
            for &(x, _) in g.adj(w) {
                if x > root && !set.contains(&x) && !next.contains(&x) && !is_neighbour_of(g, set, x) {
                    next.push(x);
                }
            }
            set.push(w);
            extend(g, root, set, next, max, out);
            set.pop();
        }
    }
    fn is_neighbour_of(g: &Graph, set: &[Vertex], x: Vertex) -> bool {
        set.iter().any(|&s| g.adj(s).iter().any(|&(y, _)| y == x))
    }
    let mut out = Vec::new();
    for root in 0..g.n() {
        let mut frontier: Vec<Vertex> = g.adj(root).iter().map(|&(x, _)| x).filter(|&x| x > root).collect();
        frontier.sort_unstable();
        frontier.dedup();
        let mut set = vec![root];
        extend(g, root, &mut set, frontier, max, &mut out);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.dedup();
    out
}

/// Whether some set of `keep` internal edges of `inside`, with every other
/// internal edge deleted, leaves `g` 2EC.
fn can_keep_only(g: &Graph, internal: &[EdgeId], keep: usize) -> bool {
    let all = g.all_edges();
    let outside = all.without(internal);
    let base_deg = g.degrees_in(&outside);
    let touched: Vec<Vertex> = internal.iter().flat_map(|&e| [g.ends(e).0, g.ends(e).1]).unique().collect();
    internal.iter().copied().combinations(keep).any(|k| {
        let s = outside.with(&k);
        let mut deg = base_deg.clone();
        for &e in &k {
            let (a, b) = g.ends(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        touched.iter().all(|&x| deg[x] >= 2) && is_two_edge_connected(g, &s)
    })
}

/// First node set `W` with `3 <= |W| <= contractible_bound` whose induced
/// subgraph is 2EC and contractible: every 2EC spanning subgraph of `g` keeps
/// at least `|OPT(G[W])| / alpha` edges inside `W`. Returns `W` and the
/// minimum 2EC spanning subgraph of `G[W]` as edges of `g`.
pub fn find_contractible(g: &Graph, p: &ReductionParams) -> Option<(Vec<Vertex>, EdgeSet)> {
    let all = g.all_edges();
    for w in connected_sets(g, p.contractible_bound) {
        let (gw, map) = g.induced(&w);
        if !is_two_edge_connected(&gw, &gw.all_edges()) {
            continue;
        }
        let Ok(opt) = exact_2ecss(&gw, &OracleLimits::nodes_only(w.len())) else {
            continue;
        };
        // Largest kept count that would still be below |OPT'| / alpha.
        let need = (Rational::from_integer(opt.len() as i64) / p.alpha).ceil().to_integer() as usize;
        if need == 0 {
            return Some((w, map.lift(&opt)));
        }
        let internal = map.lift(&gw.all_edges()).to_vec();
        // Greedy deletion gives a quick witness that few internal edges suffice.
        let mut kept = all.clone();
        for &e in &internal {
            let trial = kept.without(&[e]);
            if is_two_edge_connected(g, &trial) {
                kept = trial;
            }
        }
        if internal.iter().filter(|e| kept.contains(e)).count() < need {
            continue;
        }
        if !can_keep_only(g, &internal, need - 1) {
            return Some((w, map.lift(&opt)));
        }
    }
    None
}

/// Smallest edge id whose endpoints form a 2-vertex-cut.
pub fn find_irrelevant_edge(g: &Graph) -> Option<EdgeId> {
    if g.n() < 4 {
        return None;
    }
    g.edges().find(|&e| {
        let (u, v) = g.ends(e);
        u != v && components_without(g, u, v).len() >= 2
    })
}

/// The four checks a graph must pass before it reaches the structured solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredCertificate {
    pub simple_2vc: bool,
    pub no_irrelevant_edge: bool,
    pub no_non_isolating_cut: bool,
    pub no_contractible: bool,
}

impl StructuredCertificate {
    pub fn holds(&self) -> bool {
        self.simple_2vc && self.no_irrelevant_edge && self.no_non_isolating_cut && self.no_contractible
    }
}

/// Run all four structural checks from scratch.
pub fn structured_certificate(g: &Graph, p: &ReductionParams) -> StructuredCertificate {
    StructuredCertificate {
        simple_2vc: g.is_simple() && is_two_vertex_connected(g),
        no_irrelevant_edge: find_irrelevant_edge(g).is_none(),
        no_non_isolating_cut: two_vertex_cuts(g).iter().all(|c| c.kind == CutKind::Isolating),
        no_contractible: find_contractible(g, p).is_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Step {
    ExactBase,
    CutNodeSplit { v: Vertex, sides: (Vec<Vertex>, Vec<Vertex>) },
    SimplifyEdge { e: EdgeId },
    Contract { w: Vec<Vertex>, c_edges: Vec<EdgeId> },
    DeleteIrrelevant { e: EdgeId },
    NonIsolatingLargeSide { cut: (Vertex, Vertex), f_prime: Vec<EdgeId> },
    NonIsolatingDummyEdge { cut: (Vertex, Vertex), opt_1min: Vec<EdgeId>, min_type: AbcType, f_second: Vec<EdgeId> },
    NonIsolatingDummyNode { cut: (Vertex, Vertex), opt_1min: Vec<EdgeId>, min_type: AbcType },
    StructuredSolve { certificate: StructuredCertificate },
}

/// A child problem and the map from its edge ids to the parent's
/// (`None` marks a dummy edge).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildLink {
    pub node: usize,
    pub edge_map: Vec<Option<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub n: usize,
    pub m: usize,
    pub edge_bound: usize,
    pub step: Step,
    /// Edges this step adds on top of the lifted child solutions.
    pub own_edges: Vec<EdgeId>,
    pub children: Vec<ChildLink>,
    pub result: Vec<EdgeId>,
}

/// Trace nodes in post-order; the root is the last node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub nodes: Vec<TraceNode>,
}

impl ReductionTrace {
    pub fn root(&self) -> Option<&TraceNode> {
        self.nodes.last()
    }

    /// Rebuild every node's result from its own edges and its lifted
    /// children, checking each against the recorded result. Returns the
    /// root's reconstruction.
    pub fn replay(&self) -> Result<EdgeSet> {
        let mut rebuilt: Vec<EdgeSet> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let mut s: EdgeSet = node.own_edges.iter().copied().collect();
            for c in &node.children {
                if c.node >= i {
                    return violation(format!("trace node {i} links to later node {}", c.node));
                }
                for &e in rebuilt[c.node].iter() {
                    if let Some(pe) = c.edge_map[e] {
                        s.insert(pe);
                    }
                }
            }
            if s.iter().any(|&e| e >= node.edge_bound) {
                return violation(format!("trace node {i} holds an edge outside its graph"));
            }
            if s.to_vec() != node.result {
                return violation(format!("trace node {i} does not replay to its recorded result"));
            }
            rebuilt.push(s);
        }
        rebuilt.pop().ok_or_else(|| Error::StructureViolation("empty trace".into()))
    }

    pub fn structured_calls(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.step, Step::StructuredSolve { .. })).count()
    }

    pub fn is_leaf_sound(&self) -> bool {
        self.nodes.iter().all(|n| {
            n.children.is_empty() == matches!(n.step, Step::ExactBase | Step::StructuredSolve { .. })
        })
    }
}

/// Callback that solves a structured instance.
pub type StructuredSolver<'a> = dyn FnMut(&Graph) -> Result<EdgeSet> + 'a;

/// Solve 2-ECSS on `g` by recursive reduction, handing structured instances
/// to `solver`. Every intermediate result is verified 2EC spanning.
pub fn red_solve(g: &Graph, p: &ReductionParams, solver: &mut StructuredSolver<'_>) -> Result<(EdgeSet, ReductionTrace)> {
    p.validate()?;
    if !is_two_edge_connected(g, &g.all_edges()) {
        return Err(Error::NotTwoEc("red_solve input".into()));
    }
    let mut red = Red { p: *p, solver, nodes: Vec::new() };
    let (s, _) = red.solve(g)?;
    Ok((s, ReductionTrace { nodes: red.nodes }))
}

struct Red<'a, 'b> {
    p: ReductionParams,
    solver: &'a mut StructuredSolver<'b>,
    nodes: Vec<TraceNode>,
}

fn problem_size(g: &Graph) -> u128 {
    let (n, m) = (g.n() as u128, g.m() as u128);
    n * n + m * m
}

/// Renumber edges densely and mark the graph simple when it is.
fn normalized(mut h: Graph) -> Graph {
    let simple = h.is_simple();
    h.set_simple_mode(simple);
    h
}

fn compose(outer: &SubgraphMap, inner: &SubgraphMap) -> SubgraphMap {
    SubgraphMap {
        vertex_to_parent: inner.vertex_to_parent.iter().map(|v| v.and_then(|v| outer.vertex_to_parent[v])).collect(),
        edge_to_parent: inner.edge_to_parent.iter().map(|e| e.and_then(|e| outer.edge_to_parent[e])).collect(),
    }
}

fn without_edge(g: &Graph, e: EdgeId) -> (Graph, SubgraphMap) {
    let mut h = g.clone();
    h.remove_edge(e);
    let all: Vec<Vertex> = (0..g.n()).collect();
    let (h, map) = h.induced(&all);
    (normalized(h), map)
}

fn position(nodes: &[Vertex], x: Vertex) -> Vertex {
    nodes.iter().position(|&y| y == x).expect("vertex in side")
}

/// Smallest set of at most `max` edges of `g` outside `h` whose addition makes `h` 2EC spanning.
fn patch(g: &Graph, h: &EdgeSet, max: usize) -> Option<Vec<EdgeId>> {
    let candidates: Vec<EdgeId> = g.edges().filter(|e| !h.contains(e)).collect();
    (0..=max).find_map(|k| candidates.iter().copied().combinations(k).find(|f| is_two_edge_connected(g, &h.with(f))))
}

impl Red<'_, '_> {
    fn solve(&mut self, g: &Graph) -> Result<(EdgeSet, usize)> {
        stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || self.solve_inner(g))
    }

    fn child(&mut self, parent: &Graph, child: &Graph, map: SubgraphMap) -> Result<(EdgeSet, ChildLink)> {
        if problem_size(child) >= problem_size(parent) {
            return violation(format!(
                "child ({}, {}) is not smaller than parent ({}, {})",
                child.n(),
                child.m(),
                parent.n(),
                parent.m()
            ));
        }
        let (s, node) = self.solve(child)?;
        Ok((map.lift(&s), ChildLink { node, edge_map: map.edge_to_parent }))
    }

    fn record(&mut self, g: &Graph, step: Step, own: &EdgeSet, children: Vec<ChildLink>, result: EdgeSet) -> Result<(EdgeSet, usize)> {
        let check = verify_2ec_spanning(g, &result);
        if !check.ok {
            return violation(format!("{step:?} produced a non-2EC result: {:?}", check.witness));
        }
        self.nodes.push(TraceNode {
            n: g.n(),
            m: g.m(),
            edge_bound: g.edge_bound(),
            step,
            own_edges: own.to_vec(),
            children,
            result: result.to_vec(),
        });
        Ok((result, self.nodes.len() - 1))
    }

    fn solve_inner(&mut self, g: &Graph) -> Result<(EdgeSet, usize)> {
        let n = g.n();
        if n <= self.p.exact_base_bound {
            let s = exact_2ecss(g, &OracleLimits::nodes_only(self.p.exact_base_bound))?;
            return self.record(g, Step::ExactBase, &s, Vec::new(), s.clone());
        }

        if let Some(&v) = cut_vertices(g).first() {
            let parts = components_without(g, v, v);
            let mut side1 = parts[0].clone();
            let mut side2: Vec<Vertex> = parts[1..].concat();
            side1.sort_unstable();
            side2.sort_unstable();
            let mut result = EdgeSet::new();
            let mut links = Vec::new();
            for side in [&side1, &side2] {
                let mut nodes = side.clone();
                nodes.push(v);
                nodes.sort_unstable();
                let (h, map) = g.induced(&nodes);
                let (s, link) = self.child(g, &normalized(h), map)?;
                result = result.union(&s);
                links.push(link);
            }
            let step = Step::CutNodeSplit { v, sides: (side1, side2) };
            return self.record(g, step, &EdgeSet::new(), links, result);
        }

        if let Some(e) = redundant_edge(g) {
            let (h, map) = without_edge(g, e);
            let (s, link) = self.child(g, &h, map)?;
            return self.record(g, Step::SimplifyEdge { e }, &EdgeSet::new(), vec![link], s);
        }

        if let Some((w, c)) = find_contractible(g, &self.p) {
            let (h, _, map) = g.contract(&w);
            let (s, link) = self.child(g, &normalized(h), map)?;
            let step = Step::Contract { w, c_edges: c.to_vec() };
            return self.record(g, step, &c, vec![link], s.union(&c));
        }

        if let Some(e) = find_irrelevant_edge(g) {
            let (h, map) = without_edge(g, e);
            let (s, link) = self.child(g, &h, map)?;
            return self.record(g, Step::DeleteIrrelevant { e }, &EdgeSet::new(), vec![link], s);
        }

        let cuts = two_vertex_cuts(g);
        if let Some(cut) = cuts.iter().find(|c| c.kind == CutKind::NonIsolating) {
            let (u, v) = (cut.u, cut.v);
            let Some((v1, v2)) = cut.sides.clone() else {
                return violation(format!("non-isolating cut {{{u},{v}}} without a partition"));
            };
            let with_cut = |side: &[Vertex]| {
                let mut nodes = side.to_vec();
                nodes.extend([u, v]);
                nodes.sort_unstable();
                nodes
            };
            let (nodes1, nodes2) = (with_cut(&v1), with_cut(&v2));
            if v1.len() + 2 > self.p.contractible_bound {
                return self.large_side(g, (u, v), [nodes1, nodes2]);
            }
            return self.small_side(g, (u, v), nodes1, nodes2);
        }

        let certificate = StructuredCertificate {
            simple_2vc: g.is_simple() && is_two_vertex_connected(g),
            no_irrelevant_edge: true,
            no_non_isolating_cut: true,
            no_contractible: true,
        };
        if !certificate.holds() {
            return violation("structured solver reached with a graph that is not simple and 2VC".to_string());
        }
        let s = (self.solver)(g)?;
        self.record(g, Step::StructuredSolve { certificate }, &s, Vec::new(), s.clone())
    }

    fn large_side(&mut self, g: &Graph, cut: (Vertex, Vertex), sides: [Vec<Vertex>; 2]) -> Result<(EdgeSet, usize)> {
        let mut h = EdgeSet::new();
        let mut links = Vec::new();
        for nodes in &sides {
            let (gi, map) = g.induced(nodes);
            let (gc, _, cmap) = gi.contract(&[position(nodes, cut.0), position(nodes, cut.1)]);
            let (s, link) = self.child(g, &normalized(gc), compose(&map, &cmap))?;
            h = h.union(&s);
            links.push(link);
        }
        let Some(f) = patch(g, &h, 2) else {
            return violation(format!("no F' of at most 2 edges for cut {cut:?}"));
        };
        let own: EdgeSet = f.iter().copied().collect();
        let step = Step::NonIsolatingLargeSide { cut, f_prime: f };
        self.record(g, step, &own, links, h.union(&own))
    }

    fn small_side(&mut self, g: &Graph, cut: (Vertex, Vertex), nodes1: Vec<Vertex>, nodes2: Vec<Vertex>) -> Result<(EdgeSet, usize)> {
        let (g1, map1) = g.induced(&nodes1);
        let (g2, map2) = g.induced(&nodes2);
        let (u2, v2) = (position(&nodes2, cut.0), position(&nodes2, cut.1));
        let mut g2_plus = g2.clone();
        g2_plus.set_simple_mode(false);
        g2_plus.add_edge(u2, v2);
        let g2_is_2ec = is_two_edge_connected(&g2, &g2.all_edges());
        let g2_has_type_ab = is_two_edge_connected(&g2_plus, &g2_plus.all_edges());
        let abc = abc_optima(&g1, position(&nodes1, cut.0), position(&nodes1, cut.1), g2_is_2ec, g2_has_type_ab)?;
        let opt_min = map1.lift(&abc.opt_min);
        let c_cheap = match (&abc.opt_c, &abc.opt_b) {
            (Some(c), Some(b)) => c.len() < b.len(),
            (Some(_), None) => true,
            _ => false,
        };
        let mut dummy_map = map2.clone();
        if c_cheap {
            dummy_map.edge_to_parent.push(None);
            let (s, link) = self.child(g, &normalized(g2_plus), dummy_map)?;
            let h = opt_min.union(&s);
            let Some(f) = patch(g, &h, 1) else {
                return violation(format!("no F'' of at most 1 edge for cut {cut:?}"));
            };
            let own = opt_min.with(&f);
            let step =
                Step::NonIsolatingDummyEdge { cut, opt_1min: opt_min.to_vec(), min_type: abc.min_type, f_second: f };
            return self.record(g, step, &own, vec![link], h.union(&own));
        }
        let mut g2_node = g2;
        g2_node.set_simple_mode(false);
        let w = g2_node.add_vertex();
        g2_node.add_edge(w, u2);
        g2_node.add_edge(w, v2);
        dummy_map.vertex_to_parent.push(None);
        dummy_map.edge_to_parent.extend([None, None]);
        let (s, link) = self.child(g, &normalized(g2_node), dummy_map)?;
        let step = Step::NonIsolatingDummyNode { cut, opt_1min: opt_min.to_vec(), min_type: abc.min_type };
        self.record(g, step, &opt_min, vec![link], opt_min.union(&s))
    }
}

/// A self-loop, or the highest id among parallel copies of some pair.
fn redundant_edge(g: &Graph) -> Option<EdgeId> {
    let mut seen = std::collections::BTreeMap::new();
    let mut worst = None;
    for e in g.edges() {
        let (a, b) = g.ends(e);
        if a == b {
            return Some(e);
        }
        if seen.insert((a.min(b), a.max(b)), e).is_some() {
            worst = Some(e);
        }
    }
    worst
}
