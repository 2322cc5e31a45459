//! Solver regime for covers rich in triangle components.

mod finish;
mod gluing;
mod nice;

pub use finish::{finish_basic, finish_refined, matroid_intersection, min_t_join, minimize_components, PseudoEdge, RefinedFinish, TJoinInstance};
pub use gluing::{find_merging_cycle, gluing_step, AuxForest, ComponentView, ForestEdge, GluingKind, GluingStep, MergingCycle};
pub use nice::{collapsed_cycle, is_nice_cycle, nice_cycle, orient, NiceCycle, Partition, Step};

use crate::cover::cover_stats;
use crate::credit::{initial_cost_check, triangle_flags, CostSnapshot, LightFlags, LogEntry, Monitor, Scheme};
use crate::error::{violation, Result};
use crate::graph_core::{decompose, EdgeId, EdgeSet, Graph, SizeClass, Vertex};

/// One core component plus `k` triangles whose nodes are pairwise non-adjacent
/// across triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreTriangleCover {
    pub core: EdgeSet,
    pub core_nodes: Vec<Vertex>,
    pub triangles: Vec<[Vertex; 3]>,
    pub triangle_edges: Vec<EdgeSet>,
    pub alpha_s: Option<usize>,
    pub q_star: Option<EdgeSet>,
}

/// One valid way of hooking a triangle onto the core: drop the chord `ab`
/// and add `e` at `a` and `f` at `b`, both ending in the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QChoice {
    pub chord: EdgeId,
    pub e: EdgeId,
    pub f: EdgeId,
    /// Core endpoints of `e` and `f`.
    pub core_ends: (Vertex, Vertex),
    /// The four edges of the choice.
    pub edges: EdgeSet,
}

impl CoreTriangleCover {
    pub fn k(&self) -> usize {
        self.triangles.len()
    }

    /// All edges of the cover.
    pub fn edges(&self) -> EdgeSet {
        self.triangle_edges.iter().fold(self.core.clone(), |acc, t| acc.union(t))
    }

    /// Every valid attachment choice for triangle `i`, in deterministic order.
    pub fn q_options(&self, g: &Graph, i: usize) -> Vec<QChoice> {
        let in_core = crate::graph_core::mask(g.n(), &self.core_nodes);
        let tri = self.triangles[i];
        let mut out = Vec::new();
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let (a, b) = (tri[x], tri[y]);
            let chord = match self.triangle_edges[i].iter().copied().find(|&e| {
                let (p, q) = g.ends(e);
                (p, q) == (a, b) || (p, q) == (b, a)
            }) {
                Some(c) => c,
                None => continue,
            };
            for &(ca, e) in g.adj(a).iter().filter(|&&(w, _)| in_core[w]) {
                for &(cb, f) in g.adj(b).iter().filter(|&&(w, _)| in_core[w]) {
                    let edges = self.triangle_edges[i].without(&[chord]).with(&[e, f]);
                    out.push(QChoice { chord, e, f, core_ends: (ca, cb), edges });
                }
            }
        }
        out
    }
}

/// Drop the bridges of the cover `h`. Triangle components of `h` become the
/// light components.
pub fn strip_bridges(g: &Graph, h: &EdgeSet) -> (EdgeSet, LightFlags) {
    let d = decompose(g, h);
    (h.minus(&d.bridges), triangle_flags(&d))
}

/// Read `s` as one core plus triangles with no edge of `g` between two
/// triangles. When every component is a triangle, a heavy one is preferred
/// as the core.
pub fn as_core_triangle(g: &Graph, s: &EdgeSet, view: &ComponentView) -> Option<CoreTriangleCover> {
    let comps = &view.d.components;
    let is_triangle = |c: usize| comps[c].class() == Some(SizeClass::Triangle);
    let others: Vec<usize> = (0..comps.len()).filter(|&c| !is_triangle(c)).collect();
    let candidates: Vec<usize> = match others.len() {
        0 => {
            let mut all: Vec<usize> = (0..comps.len()).collect();
            all.sort_by_key(|&c| view.light[c]);
            all
        }
        1 => others,
        _ => return None,
    };
    'core: for core in candidates {
        for (c, comp) in comps.iter().enumerate().filter(|&(c, _)| c != core) {
            for &v in &comp.nodes {
                if g.adj(v).iter().any(|&(w, _)| view.d.comp_of[w] != c && view.d.comp_of[w] != core) {
                    continue 'core;
                }
            }
        }
        let tri: Vec<usize> = (0..comps.len()).filter(|&c| c != core).collect();
        return Some(CoreTriangleCover {
            core: s.iter().copied().filter(|&e| view.d.comp_of[g.ends(e).0] == core).collect(),
            core_nodes: comps[core].nodes.clone(),
            triangles: tri.iter().map(|&c| [comps[c].nodes[0], comps[c].nodes[1], comps[c].nodes[2]]).collect(),
            triangle_edges: tri.iter().map(|&c| comps[c].edges.clone()).collect(),
            alpha_s: None,
            q_star: None,
        });
    }
    None
}

/// Everything the triangle-rich regime produced.
#[derive(Clone, Debug)]
pub struct ManyOutcome {
    /// The smaller of the two finishes.
    pub solution: EdgeSet,
    /// `max(|H|, 4k + alpha_s - 1)`.
    pub lower_bound: usize,
    pub basic: EdgeSet,
    pub refined: RefinedFinish,
    /// The core-triangle solution both finishes start from.
    pub core_triangle: CoreTriangleCover,
    pub initial: CostSnapshot,
    pub gluing: Vec<GluingKind>,
    /// Component count before the first gluing step and after every step.
    pub component_trace: Vec<usize>,
    pub log: Vec<LogEntry>,
}

/// The triangle-rich regime on a structured graph `g` with a canonical
/// 2-edge-cover `h`.
pub fn solve_many(g: &Graph, h: &EdgeSet) -> Result<ManyOutcome> {
    let stats = cover_stats(&decompose(g, h));
    let initial = initial_cost_check(g, h, &stats, Scheme::M)?;
    let (mut s, light) = strip_bridges(g, h);
    let mut monitor = Monitor::new(g, &s, Scheme::M, light.clone());
    let mut gluing = Vec::new();
    let mut view = ComponentView::new(g, &s, &light)?;
    let mut component_trace = vec![view.count()];
    while as_core_triangle(g, &s, &view).is_none() {
        let step = gluing_step(g, &s, &light)?;
        let next = ComponentView::new(g, &step.s, &light)?;
        if next.count() >= view.count() {
            return violation(format!("gluing step left {} components from {}", next.count(), view.count()));
        }
        monitor.step(g, &step.s, &format!("gluing: {:?}", step.kind))?;
        component_trace.push(next.count());
        gluing.push(step.kind);
        s = step.s;
        view = next;
    }

    // Heavy triangles pay for their own attachment.
    loop {
        let ct = as_core_triangle(g, &s, &view).expect("core-triangle shape is kept");
        let heavy = (0..ct.k()).find(|&i| !light.contains(&ct.triangle_edges[i].to_vec()));
        let Some(i) = heavy else { break };
        let Some(q) = ct.q_options(g, i).into_iter().next() else {
            return violation(format!("heavy triangle {:?} has no attachment", ct.triangles[i]));
        };
        let next = s.minus(&ct.triangle_edges[i]).union(&q.edges);
        monitor.step(g, &next, "heavy triangle into core")?;
        s = next;
        view = ComponentView::new(g, &s, &light)?;
        component_trace.push(view.count());
    }

    let mut ct = as_core_triangle(g, &s, &view).expect("core-triangle shape is kept");
    let basic = finish_basic(&ct, g)?;
    let refined = finish_refined(&ct, g)?;
    ct.alpha_s = Some(refined.alpha_s);
    ct.q_star = Some(refined.q.clone());
    let lower_bound = h.len().max(4 * ct.k() + refined.alpha_s - 1);
    let solution = if refined.solution.len() < basic.len() { refined.solution.clone() } else { basic.clone() };
    Ok(ManyOutcome {
        solution,
        lower_bound,
        basic,
        refined,
        core_triangle: ct,
        initial,
        gluing,
        component_trace,
        log: monitor.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{canonicalize, min_two_edge_cover};
    use crate::graph_core::is_two_edge_connected;
    use crate::oracle::{exact_2ecss, OracleLimits};
    use crate::reduction::{structured_certificate, ReductionParams};
    use proptest::prelude::*;

    /// `k` triangles in a ring: node 2 of each triangle meets node 0 of the
    /// next, plus extra chords.
    fn triangle_ring(k: usize, chords: &[(usize, usize)]) -> Graph {
        let n = 3 * k;
        let mut e = Vec::new();
        for t in 0..k {
            let b = 3 * t;
            e.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b)]);
            e.push((b + 2, (b + 3) % n));
        }
        for &(a, b) in chords {
            let (a, b) = (a % n, b % n);
            if a != b && !e.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                e.push((a, b));
            }
        }
        Graph::simple(n, &e).unwrap()
    }

    fn run(g: &Graph) -> (EdgeSet, ManyOutcome) {
        let h = canonicalize(g, &min_two_edge_cover(g).unwrap()).unwrap();
        let out = solve_many(g, &h).unwrap();
        (h, out)
    }

    #[test]
    fn strip_bridges_marks_triangles_light() {
        // triangles 0,1,2 and 3,4,5 joined by the bridge 2-3
        let g = Graph::simple(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        let (s, light) = strip_bridges(&g, &g.all_edges());
        assert_eq!(s.len(), 6);
        assert!(light.is_empty());
        let (s, light) = strip_bridges(&g, &(0..6).collect());
        assert_eq!(s.len(), 6);
        assert_eq!(light.len(), 2);
    }

    #[test]
    fn core_triangle_shape_is_recognised() {
        // core 6-cycle with triangles hanging off 0,1 and 3,4
        let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.extend([(6, 7), (7, 8), (8, 6), (9, 10), (10, 11), (11, 9)]);
        e.extend([(6, 0), (7, 1), (9, 3), (10, 4)]);
        let g = Graph::simple(12, &e).unwrap();
        let s: EdgeSet = (0..12).collect();
        let view = ComponentView::new(&g, &s, &triangle_flags(&decompose(&g, &s))).unwrap();
        let ct = as_core_triangle(&g, &s, &view).unwrap();
        assert_eq!(ct.k(), 2);
        assert_eq!(ct.core_nodes, (0..6).collect::<Vec<_>>());
        // an edge between the two triangles breaks the shape
        let mut e2 = e.clone();
        e2.push((8, 11));
        let g2 = Graph::simple(12, &e2).unwrap();
        let view = ComponentView::new(&g2, &s, &triangle_flags(&decompose(&g2, &s))).unwrap();
        assert!(as_core_triangle(&g2, &s, &view).is_none());
    }

    #[test]
    fn triangle_ring_is_glued_and_finished() {
        let g = triangle_ring(4, &[(1, 7)]);
        let (h, out) = run(&g);
        assert!(is_two_edge_connected(&g, &out.solution));
        assert!(out.component_trace.windows(2).all(|w| w[1] < w[0]));
        assert!(out.log.iter().all(|l| l.delta >= crate::Rational::from_integer(0)));
        assert_eq!(out.basic.len(), out.core_triangle.core.len() + 4 * out.core_triangle.k());
        let opt = exact_2ecss(&g, &OracleLimits::default()).unwrap().len();
        assert!(out.solution.len() >= opt);
        assert!(h.len() <= opt);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn many_regime_is_sound_on_triangle_rings(
            k in 2usize..5,
            chords in proptest::collection::vec((0usize..12, 0usize..12), 0..5),
        ) {
            let g = triangle_ring(k, &chords);
            let (h, out) = run(&g);
            prop_assert!(is_two_edge_connected(&g, &out.solution));
            prop_assert!(out.component_trace.windows(2).all(|w| w[1] < w[0]));
            let ct = &out.core_triangle;
            prop_assert_eq!(out.basic.len(), ct.core.len() + 4 * ct.k());
            let alpha = ct.alpha_s.unwrap();
            prop_assert_eq!(out.refined.solution.len(), 4 * ct.k() + alpha - 1 + out.refined.join.len());
            let opt = exact_2ecss(&g, &OracleLimits::default()).unwrap().len();
            prop_assert!(out.solution.len() >= opt);
            let p = ReductionParams { exact_base_bound: 5, ..ReductionParams::default() };
            if structured_certificate(&g, &p).holds() {
                prop_assert!(out.lower_bound <= opt, "lower bound {} above opt {}", out.lower_bound, opt);
            }
            prop_assert!(h.len() <= opt);
        }
    }
}
