//! Gluing steps: merge 2EC components of the current solution without
//! raising its scheme-M cost.

use serde::{Deserialize, Serialize};

use super::nice::{collapsed_cycle, nice_cycle, Partition};
use crate::credit::LightFlags;
use crate::error::{violation, Error, Result};
use crate::graph_core::{decompose, ComponentShape, CoverDecomposition, EdgeId, EdgeSet, Graph, Vertex};

/// The components of a solution whose components are all 2EC, with their
/// light flags resolved.
#[derive(Clone, Debug)]
pub struct ComponentView {
    pub d: CoverDecomposition,
    pub light: Vec<bool>,
}

impl ComponentView {
    pub fn new(g: &Graph, s: &EdgeSet, flags: &LightFlags) -> Result<Self> {
        let d = decompose(g, s);
        if d.components.iter().any(|c| c.shape == ComponentShape::Bridged) {
            return Err(Error::ComponentsNotTwoEc);
        }
        let light = d.components.iter().map(|c| !c.edges.is_empty() && flags.contains(&c.edges.to_vec())).collect();
        Ok(ComponentView { d, light })
    }

    pub fn count(&self) -> usize {
        self.d.components.len()
    }

    fn end_in(&self, g: &Graph, e: EdgeId, c: usize) -> Vertex {
        let (u, v) = g.ends(e);
        if self.d.comp_of[u] == c {
            u
        } else {
            v
        }
    }
}

/// Edges outside the solution forming one cycle once components are
/// collapsed, touching every light component at two distinct nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergingCycle {
    pub edges: Vec<EdgeId>,
    /// Touched components with their two attachment nodes.
    pub touched: Vec<(usize, Vertex, Vertex)>,
    pub n_light: usize,
    pub n_heavy: usize,
}

impl MergingCycle {
    pub fn new(g: &Graph, s: &EdgeSet, view: &ComponentView, edges: Vec<EdgeId>) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| s.contains(e)) {
            return violation(format!("merging cycle edge {e} is already in the solution"));
        }
        let Some(touched) = collapsed_cycle(g, &view.d.comp_of, &edges) else {
            return violation(format!("edges {edges:?} do not form a cycle over the components"));
        };
        if let Some(&(c, x, _)) = touched.iter().find(|&&(c, x, y)| view.light[c] && x == y) {
            return violation(format!("merging cycle meets light component {c} twice at {x}"));
        }
        let n_light = touched.iter().filter(|t| view.light[t.0]).count();
        let n_heavy = touched.len() - n_light;
        Ok(MergingCycle { edges, touched, n_light, n_heavy })
    }

    /// Applying the cycle cannot raise the cost: `n_heavy + n_light / 2 >= 2`.
    pub fn is_cheap(&self) -> bool {
        2 * self.n_heavy + self.n_light >= 4
    }

    /// Add the cycle and drop, in every light component, the edge between
    /// its two attachment nodes.
    pub fn apply(&self, g: &Graph, s: &EdgeSet, view: &ComponentView) -> Result<EdgeSet> {
        let mut out = s.with(&self.edges);
        for &(c, x, y) in self.touched.iter().filter(|t| view.light[t.0]) {
            let Some(chord) = view.d.components[c].edges.iter().copied().find(|&e| {
                let (p, q) = g.ends(e);
                (p, q) == (x, y) || (p, q) == (y, x)
            }) else {
                return violation(format!("light component {c} has no edge {x}-{y}"));
            };
            out = out.without(&[chord]);
        }
        Ok(out)
    }
}

/// An expensive merging cycle recorded as an edge of the auxiliary forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestEdge {
    pub light: usize,
    pub heavy: usize,
    pub a: EdgeId,
    pub b: EdgeId,
}

/// Forest on the components whose edges are expensive merging cycles.
#[derive(Clone, Debug, Default)]
pub struct AuxForest {
    pub count: usize,
    pub edges: Vec<ForestEdge>,
}

impl AuxForest {
    pub fn new(count: usize) -> Self {
        AuxForest { count, edges: Vec::new() }
    }

    fn neighbours(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|f| {
                if f.light == c {
                    Some(f.heavy)
                } else if f.heavy == c {
                    Some(f.light)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge(&self, c1: usize, c2: usize) -> Option<&ForestEdge> {
        self.edges.iter().find(|f| (f.light, f.heavy) == (c1, c2) || (f.light, f.heavy) == (c2, c1))
    }

    /// Tree index of every component and the number of trees.
    pub fn trees(&self) -> (Vec<usize>, usize) {
        let mut tree = vec![usize::MAX; self.count];
        let mut t = 0;
        for start in 0..self.count {
            if tree[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            tree[start] = t;
            while let Some(c) = stack.pop() {
                for w in self.neighbours(c) {
                    if tree[w] == usize::MAX {
                        tree[w] = t;
                        stack.push(w);
                    }
                }
            }
            t += 1;
        }
        (tree, t)
    }

    /// Components on the forest path from `from` to `to`, both included.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.count];
        prev[from] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(c) = queue.pop_front() {
            if c == to {
                let mut out = vec![to];
                let mut x = to;
                while x != from {
                    x = prev[x];
                    out.push(x);
                }
                out.reverse();
                return Some(out);
            }
            for w in self.neighbours(c) {
                if prev[w] == usize::MAX {
                    prev[w] = c;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn add(&mut self, e: ForestEdge) -> Result<()> {
        let (tree, _) = self.trees();
        if tree[e.light] == tree[e.heavy] {
            return violation(format!("forest edge {}-{} would close a cycle", e.light, e.heavy));
        }
        self.edges.push(e);
        Ok(())
    }
}

/// Edges along the forest path `path`, one per forest edge, chosen so that
/// consecutive edges meet every light component at distinct nodes. `start`
/// is where the incoming edge meets `path[0]`; `end` is where the closing
/// edge meets the last component.
fn splice_path(g: &Graph, view: &ComponentView, forest: &AuxForest, path: &[usize], start: Vertex, end: Vertex) -> Result<Vec<EdgeId>> {
    let k = path.len();
    let mut prev = start;
    let mut out = Vec::with_capacity(k.saturating_sub(1));
    for i in 0..k.saturating_sub(1) {
        let (ci, cj) = (path[i], path[i + 1]);
        let Some(fe) = forest.edge(ci, cj) else {
            return violation(format!("components {ci} and {cj} are not adjacent in the forest"));
        };
        let last = i + 2 == k;
        let pick = [fe.a, fe.b].into_iter().find(|&e| {
            (!view.light[ci] || view.end_in(g, e, ci) != prev)
                && (!last || !view.light[cj] || view.end_in(g, e, cj) != end)
        });
        let Some(e) = pick else {
            return violation(format!("no usable witness edge between {ci} and {cj}"));
        };
        prev = view.end_in(g, e, cj);
        out.push(e);
    }
    Ok(out)
}

/// A merging cycle touching at least two trees of the forest, built from a
/// nice cycle of the partition into tree node sets.
pub fn find_merging_cycle(g: &Graph, s: &EdgeSet, view: &ComponentView, forest: &AuxForest) -> Result<MergingCycle> {
    let (tree, t) = forest.trees();
    let mut sets = vec![Vec::new(); t];
    for v in 0..g.n() {
        sets[tree[view.d.comp_of[v]]].push(v);
    }
    let part = Partition::new(g.n(), sets)?;
    let nc = nice_cycle(g, &part)?;
    let mut edges = nc.edges();
    let Some(attach) = collapsed_cycle(g, &part.set_of, &edges) else {
        return violation("nice cycle lost its shape".to_string());
    };
    for (_, x1, x2) in attach {
        let (c1, c2) = (view.d.comp_of[x1], view.d.comp_of[x2]);
        if c1 != c2 {
            let Some(path) = forest.path(c1, c2) else {
                return violation(format!("components {c1} and {c2} share a tree but no path"));
            };
            edges.extend(splice_path(g, view, forest, &path, x1, x2)?);
        }
    }
    MergingCycle::new(g, s, view, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingKind {
    /// A cheap merging cycle across forest trees.
    CheapCycle,
    /// A non-forest edge closed along a forest path.
    ForestPath,
    /// A light component joined with two forest neighbours.
    LightBetweenHeavies,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingStep {
    pub s: EdgeSet,
    pub kind: GluingKind,
    pub forest_edges: usize,
}

/// One gluing step on a solution with at least two components, all 2EC.
/// The result has fewer components and all of them are 2EC.
pub fn gluing_step(g: &Graph, s: &EdgeSet, flags: &LightFlags) -> Result<GluingStep> {
    let view = ComponentView::new(g, s, flags)?;
    if view.count() < 2 {
        return violation("gluing step on a connected solution".to_string());
    }
    let mut forest = AuxForest::new(view.count());
    while forest.trees().1 >= 2 {
        let m = find_merging_cycle(g, s, &view, &forest)?;
        if m.is_cheap() {
            let out = m.apply(g, s, &view)?;
            return Ok(GluingStep { s: out, kind: GluingKind::CheapCycle, forest_edges: forest.edges.len() });
        }
        if (m.n_light, m.n_heavy) != (1, 1) {
            return Err(Error::ThreeOptimalityBreach(format!(
                "merging cycle {:?} touches only {} light components",
                m.edges, m.n_light
            )));
        }
        let light = m.touched.iter().find(|t| view.light[t.0]).expect("one light").0;
        let heavy = m.touched.iter().find(|t| !view.light[t.0]).expect("one heavy").0;
        forest.add(ForestEdge { light, heavy, a: m.edges[0], b: m.edges[1] })?;
    }

    // One tree: first look for an edge between components that are not
    // forest neighbours.
    for e in g.edges().filter(|e| !s.contains(e)) {
        let (u, v) = g.ends(e);
        let (c1, c2) = (view.d.comp_of[u], view.d.comp_of[v]);
        if c1 == c2 || forest.edge(c1, c2).is_some() {
            continue;
        }
        let Some(path) = forest.path(c1, c2) else {
            return violation(format!("single tree without a path from {c1} to {c2}"));
        };
        let mut edges = vec![e];
        edges.extend(splice_path(g, &view, &forest, &path, u, v)?);
        let m = MergingCycle::new(g, s, &view, edges)?;
        if !m.is_cheap() {
            return violation(format!("forest path cycle {:?} is not cheap", m.edges));
        }
        let out = m.apply(g, s, &view)?;
        return Ok(GluingStep { s: out, kind: GluingKind::ForestPath, forest_edges: forest.edges.len() });
    }

    // Every non-solution edge joins forest neighbours: merge a light
    // component with two of its heavy neighbours.
    for c in (0..view.count()).filter(|&c| view.light[c]) {
        let nbrs = forest.neighbours(c);
        if nbrs.len() < 2 {
            continue;
        }
        if let Some(out) = light_between_heavies(g, s, &view, c, &nbrs) {
            return Ok(GluingStep { s: out, kind: GluingKind::LightBetweenHeavies, forest_edges: forest.edges.len() });
        }
    }
    violation("single forest tree admits no gluing".to_string())
}

fn light_between_heavies(g: &Graph, s: &EdgeSet, view: &ComponentView, c: usize, nbrs: &[usize]) -> Option<EdgeSet> {
    let tri = &view.d.components[c].nodes;
    if tri.len() != 3 {
        return None;
    }
    let into = |v: Vertex, h: usize| -> Option<EdgeId> {
        g.adj(v).iter().filter(|&&(w, _)| view.d.comp_of[w] == h).map(|&(_, e)| e).min()
    };
    let chord = |x: Vertex, y: Vertex| view.d.components[c].edges.iter().copied().find(|&e| {
        let (p, q) = g.ends(e);
        (p, q) == (x, y) || (p, q) == (y, x)
    });
    for (i, &h1) in nbrs.iter().enumerate() {
        for &h2 in &nbrs[i + 1..] {
            for [v1, v2, v3] in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]].map(|p| p.map(|i| tri[i])) {
                let (Some(a1), Some(b1), Some(a2), Some(b2)) = (into(v1, h1), into(v2, h1), into(v2, h2), into(v3, h2)) else {
                    continue;
                };
                let (Some(c12), Some(c23)) = (chord(v1, v2), chord(v2, v3)) else {
                    continue;
                };
                return Some(s.without(&[c12, c23]).with(&[a1, b1, a2, b2]));
            }
        }
    }
    None
}
