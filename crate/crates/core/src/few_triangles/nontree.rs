use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{accept_glue, hamiltonian_path, local::c5c4_to_nine, Gluing, Kind};
use crate::credit::Monitor;
use crate::error::{violation, Result};
use crate::graph_core::{EdgeId, EdgeSet, Vertex};

/// Upper bound on gluing paths examined in one step.
const STATE_LIMIT: usize = 200_000;

/// The components left after repeatedly removing degree-1 components from
/// the component graph, and the surviving component each removed one hangs from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeeledCore {
    pub surviving_components: BTreeSet<usize>,
    pub peeled: BTreeMap<usize, usize>,
}

/// Peels the component graph given by its neighbour sets.
pub fn peel(nbrs: &[BTreeSet<usize>]) -> PeeledCore {
    let k = nbrs.len();
    let mut deg: Vec<usize> = nbrs.iter().map(|n| n.len()).collect();
    let mut alive = vec![true; k];
    let mut queue: VecDeque<usize> = (0..k).filter(|&c| deg[c] <= 1).collect();
    while let Some(c) = queue.pop_front() {
        if !alive[c] {
            continue;
        }
        alive[c] = false;
        for &n in &nbrs[c] {
            if alive[n] {
                deg[n] -= 1;
                if deg[n] == 1 {
                    queue.push_back(n);
                }
            }
        }
    }
    let surviving_components: BTreeSet<usize> = (0..k).filter(|&c| alive[c]).collect();
    let mut peeled = BTreeMap::new();
    let mut queue: VecDeque<(usize, usize)> = surviving_components.iter().map(|&c| (c, c)).collect();
    while let Some((c, root)) = queue.pop_front() {
        for &n in &nbrs[c] {
            if !alive[n] && !peeled.contains_key(&n) {
                peeled.insert(n, root);
                queue.push_back((n, root));
            }
        }
    }
    PeeledCore { surviving_components, peeled }
}

/// A path `C_0, e_1, C_1, ..., e_l, C_l` through distinct components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingPath {
    pub components: Vec<usize>,
    pub edges: Vec<EdgeId>,
    /// `(out_{i-1}, in_i)` for each edge `e_i`.
    pub ends: Vec<(Vertex, Vertex)>,
}

impl GluingPath {
    /// Builds the path, rejecting repeated components, edges that do not
    /// join consecutive components, and inner triangles or 4-cycles whose
    /// entry and exit nodes are not adjacent.
    pub(crate) fn new(cur: &Gluing, components: Vec<usize>, hops: Vec<(EdgeId, Vertex, Vertex)>) -> Option<GluingPath> {
        if hops.len() + 1 != components.len() {
            return None;
        }
        let distinct: BTreeSet<usize> = components.iter().copied().collect();
        if distinct.len() != components.len() {
            return None;
        }
        for (i, &(e, x, y)) in hops.iter().enumerate() {
            let (p, q) = cur.g.ends(e);
            if !((p, q) == (x, y) || (q, p) == (x, y)) {
                return None;
            }
            if cur.d.comp_of[x] != components[i] || cur.d.comp_of[y] != components[i + 1] {
                return None;
            }
        }
        let path = GluingPath {
            components,
            edges: hops.iter().map(|h| h.0).collect(),
            ends: hops.iter().map(|h| (h.1, h.2)).collect(),
        };
        for j in 1..path.len() {
            if cur.kinds[path.components[j]].is_short() {
                let (a, b) = (path.entry(j).expect("inner"), path.exit(j).expect("inner"));
                if a == b || cur.s_edge(a, b).is_none() {
                    return None;
                }
            }
        }
        Some(path)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `in_j`, for `j >= 1`.
    pub fn entry(&self, j: usize) -> Option<Vertex> {
        j.checked_sub(1).and_then(|i| self.ends.get(i)).map(|p| p.1)
    }

    /// `out_j`, for `j < l`.
    pub fn exit(&self, j: usize) -> Option<Vertex> {
        self.ends.get(j).map(|p| p.0)
    }

    pub fn last(&self) -> usize {
        *self.components.last().expect("paths have a first component")
    }

    fn hops(&self) -> Vec<(EdgeId, Vertex, Vertex)> {
        self.edges.iter().zip(&self.ends).map(|(&e, &(x, y))| (e, x, y)).collect()
    }
}

/// How the last component is crossed when the path is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndMove {
    Keep,
    /// Drop the cycle edge between the entry node and the closing node.
    DropEntryEdge,
    /// Replace the 5-cycle by a Hamiltonian path from entry to closing node.
    HamiltonianPath,
    /// Replace the 5-cycle and a pendant 4-cycle by nine edges.
    NineEdgePendant,
}

/// How the component the closing edge lands in is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMove {
    Keep,
    /// Drop the cycle edge between the landing node and the path's exit node.
    DropExitEdge,
}

/// Summary of the closure that produced a non-tree gluing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureShape {
    pub path_len: usize,
    /// Index on the path of the component the closing edge lands in.
    pub back_to: usize,
    pub end: EndMove,
    pub start: StartMove,
    /// Rerouting moves applied before the path closed.
    pub reroutes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonTreeStep {
    pub s: EdgeSet,
    pub core: PeeledCore,
    pub path: GluingPath,
    pub closing_edge: EdgeId,
    pub shape: ClosureShape,
    /// Gluing paths examined.
    pub explored: usize,
}

struct Engine<'c, 'a> {
    cur: &'c Gluing<'a>,
    monitor: &'c Monitor,
    core: PeeledCore,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Fresh,
    Close,
}

impl Engine<'_, '_> {
    fn alive(&self, c: usize) -> bool {
        self.core.surviving_components.contains(&c)
    }

    /// Start paths: one edge between two surviving components.
    fn starts(&self) -> Vec<GluingPath> {
        let mut out = Vec::new();
        for &c in &self.core.surviving_components {
            for &n in self.cur.nbrs[c].iter().filter(|&&n| self.alive(n)) {
                for (x, y, e) in self.cur.between(c, n) {
                    out.extend(GluingPath::new(self.cur, vec![c, n], vec![(e, x, y)]));
                }
            }
        }
        out
    }

    /// Paths one longer, through a surviving component not yet on the path.
    fn extensions(&self, p: &GluingPath) -> Vec<GluingPath> {
        let last = p.last();
        let mut out = Vec::new();
        for &n in self.cur.nbrs[last].iter().filter(|&&n| self.alive(n) && !p.components.contains(&n)) {
            for (x, y, e) in self.cur.between(last, n) {
                let mut comps = p.components.clone();
                comps.push(n);
                let mut hops = p.hops();
                hops.push((e, x, y));
                out.extend(GluingPath::new(self.cur, comps, hops));
            }
        }
        out.sort_by_key(|q| *q.edges.last().expect("non-empty"));
        out
    }

    /// Edges from the last component back to an earlier one, as
    /// `(index on path, node in last, node in earlier, edge)`, farthest back first.
    fn closing_edges(&self, p: &GluingPath) -> Vec<(usize, Vertex, Vertex, EdgeId)> {
        let l = p.len();
        let mut out = Vec::new();
        for &a in self.cur.nodes(p.last()) {
            for &(b, e) in self.cur.g.adj(a) {
                let Some(k) = p.components.iter().position(|&c| c == self.cur.d.comp_of[b]) else { continue };
                if k < l && e != p.edges[l - 1] {
                    out.push((k, a, b, e));
                }
            }
        }
        out.sort_by_key(|&(k, _, _, e)| (k, e));
        out
    }

    fn end_moves(&self, last: usize) -> Vec<EndMove> {
        match self.cur.kinds[last] {
            Kind::Cycle5 if self.pendant_four_cycle(last).is_some() => {
                vec![EndMove::NineEdgePendant, EndMove::HamiltonianPath, EndMove::DropEntryEdge, EndMove::Keep]
            }
            Kind::Cycle5 => vec![EndMove::HamiltonianPath, EndMove::DropEntryEdge, EndMove::Keep],
            Kind::Triangle | Kind::Cycle4 => vec![EndMove::DropEntryEdge, EndMove::Keep],
            Kind::Cycle6 | Kind::Large => vec![EndMove::Keep, EndMove::DropEntryEdge],
        }
    }

    /// A peeled 4-cycle hanging directly from `c`.
    fn pendant_four_cycle(&self, c: usize) -> Option<usize> {
        self.cur.nbrs[c]
            .iter()
            .copied()
            .find(|n| self.core.peeled.get(n) == Some(&c) && self.cur.kinds[*n] == Kind::Cycle4)
    }

    /// The edge set obtained by closing `p` with `(k, a, b, x)`, or `None`
    /// when a move does not apply.
    fn closure(&self, p: &GluingPath, (k, a, b, x): (usize, Vertex, Vertex, EdgeId), end: EndMove, start: StartMove) -> Option<EdgeSet> {
        let cur = self.cur;
        let l = p.len();
        let last = p.last();
        let entry = p.entry(l).expect("paths have at least one edge");
        let mut s = cur.s.with(&p.edges[k..]).with(&[x]);
        for j in k + 1..l {
            if cur.kinds[p.components[j]].is_short() {
                let inner = cur.s_edge(p.entry(j)?, p.exit(j)?)?;
                s.remove(&inner);
            }
        }
        match end {
            EndMove::Keep => {}
            EndMove::DropEntryEdge => {
                let e = cur.s_edge(entry, a).filter(|e| cur.edges(last).contains(e))?;
                s.remove(&e);
            }
            EndMove::HamiltonianPath => {
                let h = hamiltonian_path(cur.g, cur.nodes(last), entry, a)?;
                s = s.minus(cur.edges(last)).with(&h);
            }
            EndMove::NineEdgePendant => {
                let c4 = self.pendant_four_cycle(last)?;
                if entry == a {
                    return None;
                }
                let f = c5c4_to_nine(cur.g, cur.edges(last), cur.edges(c4), entry, a)?;
                s = s.minus(cur.edges(last)).minus(cur.edges(c4)).with(&f);
            }
        }
        if start == StartMove::DropExitEdge {
            let out_k = p.exit(k)?;
            let e = cur.s_edge(b, out_k).filter(|e| cur.edges(p.components[k]).contains(e))?;
            s.remove(&e);
        }
        Some(s)
    }

    fn try_close(&self, p: &GluingPath, reroutes: usize) -> Option<(EdgeSet, EdgeId, ClosureShape)> {
        let ends = self.end_moves(p.last());
        for closing in self.closing_edges(p) {
            for &end in &ends {
                for start in [StartMove::Keep, StartMove::DropExitEdge] {
                    let Some(s) = self.closure(p, closing, end, start) else { continue };
                    if accept_glue(self.cur, &s, self.monitor) {
                        let shape = ClosureShape { path_len: p.len(), back_to: closing.0, end, start, reroutes };
                        return Some((s, closing.3, shape));
                    }
                }
            }
        }
        None
    }

    /// Same-length paths through the same components: swap the last edge, or
    /// enter the last component from further back and walk the tail in reverse.
    fn reroutes(&self, p: &GluingPath) -> Vec<GluingPath> {
        let l = p.len();
        let mut out = Vec::new();
        let prev = p.components[l - 1];
        for (x, y, e) in self.cur.between(prev, p.last()) {
            if e != p.edges[l - 1] {
                let mut hops = p.hops();
                hops[l - 1] = (e, x, y);
                out.extend(GluingPath::new(self.cur, p.components.clone(), hops));
            }
        }
        for (k, a, b, x) in self.closing_edges(p) {
            if k + 2 > l {
                continue;
            }
            let mut comps = p.components[..=k].to_vec();
            comps.push(p.last());
            comps.extend(p.components[k + 1..l].iter().rev());
            let mut hops = p.hops()[..k].to_vec();
            hops.push((x, b, a));
            for i in (k + 1..l).rev() {
                let (e, from, to) = p.hops()[i];
                hops.push((e, to, from));
            }
            out.extend(GluingPath::new(self.cur, comps, hops));
        }
        out
    }
}

/// Glues components along a gluing path through the peeled component graph
/// when that graph is not a tree and no local merge applies.
pub fn glue_non_tree_case(cur: &Gluing, monitor: &Monitor) -> Result<NonTreeStep> {
    let core = peel(&cur.nbrs);
    if core.surviving_components.len() < 2 {
        return violation("peeled component graph has fewer than two components");
    }
    let engine = Engine { cur, monitor, core };
    let mut stack: Vec<(GluingPath, Phase, usize)> = engine.starts().into_iter().rev().map(|p| (p, Phase::Fresh, 0)).collect();
    let mut seen: HashSet<(Vec<usize>, Vec<EdgeId>)> = HashSet::new();
    let mut explored = 0;
    while let Some((p, phase, reroutes)) = stack.pop() {
        if phase == Phase::Fresh {
            if !seen.insert((p.components.clone(), p.edges.clone())) {
                continue;
            }
            explored += 1;
            if explored > STATE_LIMIT {
                return violation(format!("no gluing path closed within {STATE_LIMIT} paths"));
            }
            let ext = engine.extensions(&p);
            if !ext.is_empty() {
                stack.push((p, Phase::Close, reroutes));
                stack.extend(ext.into_iter().rev().map(|q| (q, Phase::Fresh, reroutes)));
                continue;
            }
        }
        if let Some((s, closing_edge, shape)) = engine.try_close(&p, reroutes) {
            return Ok(NonTreeStep { s, core: engine.core, path: p, closing_edge, shape, explored });
        }
        stack.extend(engine.reroutes(&p).into_iter().rev().map(|q| (q, Phase::Fresh, reroutes + 1)));
    }
    violation(format!("every gluing path ({explored} examined) failed to extend or close"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credit::{LightFlags, Scheme};
    use crate::graph_core::{decompose, Graph};

    fn cycle(base: usize, len: usize) -> Vec<(usize, usize)> {
        (0..len).map(|i| (base + i, base + (i + 1) % len)).collect()
    }

    fn setup(n: usize, comps: &[(usize, usize)], extra: &[(usize, usize)]) -> (Graph, EdgeSet) {
        let mut e = Vec::new();
        for &(b, l) in comps {
            e.extend(cycle(b, l));
        }
        let s: EdgeSet = (0..e.len()).collect();
        e.extend_from_slice(extra);
        (Graph::simple(n, &e).unwrap(), s)
    }

    #[test]
    fn peeling_keeps_the_cycle_and_roots_the_hanging_tree() {
        let nbrs: Vec<BTreeSet<usize>> = vec![
            BTreeSet::from([1, 2]),
            BTreeSet::from([0, 2, 3]),
            BTreeSet::from([0, 1]),
            BTreeSet::from([1, 4]),
            BTreeSet::from([3]),
        ];
        let core = peel(&nbrs);
        assert_eq!(core.surviving_components, BTreeSet::from([0, 1, 2]));
        assert_eq!(core.peeled, BTreeMap::from([(3, 1), (4, 1)]));
    }

    #[test]
    fn inner_four_cycle_needs_adjacent_entry_and_exit() {
        // 6-cycles at 0 and 10, 4-cycle at 6.
        let extra = [(0, 6), (7, 10), (8, 11)];
        let (g, s) = setup(16, &[(0, 6), (6, 4), (10, 6)], &extra);
        let cur = Gluing::new(&g, &s).unwrap();
        let e = |x, y| g.edge_between(x, y).unwrap();
        assert!(GluingPath::new(&cur, vec![0, 1, 2], vec![(e(0, 6), 0, 6), (e(7, 10), 7, 10)]).is_some());
        assert!(GluingPath::new(&cur, vec![0, 1, 2], vec![(e(0, 6), 0, 6), (e(8, 11), 8, 11)]).is_none());
    }

    #[test]
    fn ring_of_six_cycles_closes_into_one_component() {
        // Three 6-cycles in a ring, each pair joined by a single edge.
        let extra = [(0, 6), (9, 12), (15, 3)];
        let (g, s) = setup(18, &[(0, 6), (6, 6), (12, 6)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        assert!(!cur.is_tree());
        let step = glue_non_tree_case(&cur, &m).unwrap();
        assert_eq!(decompose(&g, &step.s).components.len(), 1);
        assert_eq!(step.shape.path_len, 2);
        assert_eq!(step.shape.back_to, 0);
        assert!(m.peek(&g, &step.s) <= m.current.cost);
    }

    #[test]
    fn five_cycle_end_absorbs_its_pendant_four_cycle() {
        // Ring of two 6-cycles and a 5-cycle; a 4-cycle hangs off the 5-cycle.
        let extra = [(0, 6), (9, 12), (14, 3), (13, 17), (15, 18), (16, 19)];
        let (g, s) = setup(21, &[(0, 6), (6, 6), (12, 5), (17, 4)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        let step = glue_non_tree_case(&cur, &m).unwrap();
        assert_eq!(step.core.peeled, BTreeMap::from([(3, 2)]));
        assert_eq!(step.shape.end, EndMove::NineEdgePendant);
        assert_eq!(step.shape.back_to, 0);
        assert_eq!(decompose(&g, &step.s).components.len(), 1);
        assert_eq!(step.s.len(), 24);
        // 27 3/10 before, 24 + 2 after.
        assert_eq!(m.current.cost - m.peek(&g, &step.s), crate::Rational::new(13, 10));
    }

    #[test]
    fn four_cycles_on_the_path_give_up_their_crossing_edge() {
        // 6-cycle, 4-cycle, 4-cycle, 6-cycle, closed back to the start.
        let extra = [(0, 6), (7, 10), (11, 14), (17, 3)];
        let (g, s) = setup(20, &[(0, 6), (6, 4), (10, 4), (14, 6)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        let step = glue_non_tree_case(&cur, &m).unwrap();
        assert_eq!(step.shape.path_len, 3);
        assert!(!step.s.contains(&g.edge_between(6, 7).unwrap()));
        assert!(!step.s.contains(&g.edge_between(10, 11).unwrap()));
        assert_eq!(step.s.len(), s.len() + 4 - 2);
        assert_eq!(decompose(&g, &step.s).components.len(), 1);
    }
}
