use serde::{Deserialize, Serialize};

use super::{accept_glue, Gluing, Kind};
use crate::credit::Monitor;
use crate::error::{violation, Error, Result};
use crate::graph_core::{EdgeId, EdgeSet, Vertex};

/// Which rewrite of the tree case fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeCase {
    /// A 6-cycle or large neighbour meets two adjacent nodes of the 6-cycle.
    AdjacentPair,
    /// All neighbours meet one parity class; a chord of the other class is used.
    ChordSwap,
    /// Neighbours meet both parity classes; both are hooked in at once.
    TwoSided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStep {
    pub s: EdgeSet,
    pub case: TreeCase,
    /// The 6-cycle and the neighbours merged into it.
    pub components: Vec<usize>,
}

/// Edges from cycle position `i` into component `c`, as `(outer node, edge)`.
fn hooks(cur: &Gluing, order: &[Vertex], i: usize, c: usize) -> Vec<(Vertex, EdgeId)> {
    cur.g.adj(order[i % 6]).iter().filter(|&&(w, _)| cur.d.comp_of[w] == c).copied().collect()
}

/// Two hooks from positions `i` and `j` into `c` with distinct outer ends.
fn hook_pair(cur: &Gluing, order: &[Vertex], i: usize, j: usize, c: usize) -> Option<((Vertex, EdgeId), (Vertex, EdgeId))> {
    for a in hooks(cur, order, i, c) {
        for b in hooks(cur, order, j, c) {
            if a.0 != b.0 {
                return Some((a, b));
            }
        }
    }
    None
}

/// Glues a 6-cycle with its neighbours when the component graph is a tree
/// and no local merge applies. Every 6-cycle is tried in component order; the first failure is reported
/// if none of them merges.
pub fn glue_tree_case(cur: &Gluing, monitor: &Monitor) -> Result<TreeStep> {
    let mut first_err = None;
    for c in (0..cur.count()).filter(|&c| cur.kinds[c] == Kind::Cycle6) {
        match glue_at(cur, monitor, c) {
            Ok(step) => return Ok(step),
            Err(e @ Error::ThreeOptimalityBreach(_)) => return Err(e),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or_else(|| {
        Error::StructureViolation(format!("component graph is a tree without a 6-cycle (kinds {:?})", cur.kinds))
    }))
}

fn glue_at(cur: &Gluing, monitor: &Monitor, c: usize) -> Result<TreeStep> {
    let order = cur.cycle_order(c);
    let cyc = |i: usize| cur.s_edge(order[i % 6], order[(i + 1) % 6]).expect("consecutive cycle nodes are joined");
    let nbrs: Vec<usize> = cur.nbrs[c].iter().copied().collect();
    let accept = |s: EdgeSet, case: TreeCase, comps: Vec<usize>| accept_glue(cur, &s, monitor).then_some(TreeStep { s, case, components: comps });

    for &n in nbrs.iter().filter(|&&n| cur.kinds[n] == Kind::Triangle) {
        if (0..6).any(|i| hook_pair(cur, &order, i, i + 1, n).is_some()) {
            return Err(Error::ThreeOptimalityBreach(format!("triangle {n} meets two adjacent nodes of 6-cycle {c}")));
        }
    }
    for &n in nbrs.iter().filter(|&&n| matches!(cur.kinds[n], Kind::Cycle6 | Kind::Large)) {
        for i in 0..6 {
            let pair = hook_pair(cur, &order, i, i + 1, n).or_else(|| {
                let (a, b) = (hooks(cur, &order, i, n), hooks(cur, &order, i + 1, n));
                Some((*a.first()?, *b.first()?))
            });
            if let Some(((_, e), (_, f))) = pair {
                if let Some(step) = accept(cur.s.without(&[cyc(i)]).with(&[e, f]), TreeCase::AdjacentPair, vec![c, n]) {
                    return Ok(step);
                }
            }
        }
    }

    // Parity class of the cycle positions each neighbour touches.
    let touched = |n: usize, p: usize| (0..3).any(|k| !hooks(cur, &order, 2 * k + p, n).is_empty());
    let class: Vec<Vec<usize>> = (0..2).map(|p| nbrs.iter().copied().filter(|&n| touched(n, p)).collect()).collect();
    if let Some(&n) = class[0].iter().find(|n| class[1].contains(n)) {
        return violation(format!("neighbour {n} of 6-cycle {c} touches both parity classes"));
    }

    if class[0].is_empty() || class[1].is_empty() {
        // p is the touched parity; the other three positions are free.
        let p = if class[0].is_empty() { 1 } else { 0 };
        let mut chord_found = false;
        for i in (0..6).filter(|i| i % 2 != p) {
            let Some(chord) = cur.g.edge_between(order[i], order[(i + 2) % 6]) else { continue };
            chord_found = true;
            for &n in &class[p] {
                // Nodes i+1 and i+3 are touched; drop the cycle edges leaving i and i+2 forward.
                let Some(((_, e), (_, f))) = hook_pair(cur, &order, i + 1, i + 3, n) else { continue };
                if cur.kinds[n] == Kind::Triangle {
                    return Err(Error::ThreeOptimalityBreach(format!("triangle {n} closes a chord swap on 6-cycle {c}")));
                }
                let s = cur.s.without(&[cyc(i), cyc(i + 2)]).with(&[e, f, chord]);
                if let Some(step) = accept(s, TreeCase::ChordSwap, vec![c, n]) {
                    return Ok(step);
                }
            }
            for &n in &class[p] {
                // The mirror image: nodes i+1 and i-1 are touched.
                let Some(((_, e), (_, f))) = hook_pair(cur, &order, i + 1, i + 5, n) else { continue };
                if cur.kinds[n] == Kind::Triangle {
                    return Err(Error::ThreeOptimalityBreach(format!("triangle {n} closes a chord swap on 6-cycle {c}")));
                }
                let s = cur.s.without(&[cyc(i + 1), cyc(i + 5)]).with(&[e, f, chord]);
                if let Some(step) = accept(s, TreeCase::ChordSwap, vec![c, n]) {
                    return Ok(step);
                }
            }
        }
        if !chord_found {
            return violation(format!("6-cycle {c} has no chord on its free nodes and is contractible"));
        }
        return violation(format!("no chord swap on 6-cycle {c} passed verification"));
    }

    for i in 0..6 {
        for &a in &class[i % 2] {
            for &b in &class[(i + 1) % 2] {
                let (Some(((x1, e1), (x2, e2))), Some(((y1, f1), (y2, f2)))) =
                    (hook_pair(cur, &order, i, i + 2, a), hook_pair(cur, &order, i + 1, i + 3, b))
                else {
                    continue;
                };
                let mut drop = vec![cyc(i), cyc(i + 2)];
                if cur.kinds[a] == Kind::Triangle {
                    drop.push(cur.s_edge(x1, x2).expect("triangle nodes are adjacent"));
                }
                if cur.kinds[b] == Kind::Triangle {
                    drop.push(cur.s_edge(y1, y2).expect("triangle nodes are adjacent"));
                }
                let s = cur.s.without(&drop).with(&[e1, e2, f1, f2]);
                if let Some(step) = accept(s, TreeCase::TwoSided, vec![c, a, b]) {
                    return Ok(step);
                }
            }
        }
    }
    violation(format!("no two-sided merge on 6-cycle {c} passed verification"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credit::{LightFlags, Scheme};
    use crate::graph_core::Graph;
    use crate::Rational;

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
    fn large_neighbour_on_adjacent_nodes() {
        let (g, s) = setup(14, &[(0, 6), (6, 8)], &[(0, 6), (1, 9)]);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        assert!(cur.is_tree());
        let step = glue_tree_case(&cur, &m).unwrap();
        assert_eq!(step.case, TreeCase::AdjacentPair);
        // -1 + 18/10 + 2 - 2 = 4/5 gained.
        assert_eq!(m.current.cost - m.peek(&g, &step.s), Rational::new(4, 5));
    }

    #[test]
    fn triangles_on_both_parities_are_hooked_in_together() {
        // 6-cycle 0..6, triangle 6..9 at positions 0, 2, 4, triangle 9..12 at 1, 3, 5.
        let extra = [(0, 6), (2, 7), (4, 8), (1, 9), (3, 10), (5, 11)];
        let (g, s) = setup(12, &[(0, 6), (6, 3), (9, 3)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        let step = glue_tree_case(&cur, &m).unwrap();
        assert_eq!(step.case, TreeCase::TwoSided);
        // 18/10 + 1 + 1 - 2 = 9/5 gained.
        assert_eq!(m.current.cost - m.peek(&g, &step.s), Rational::new(9, 5));
    }

    #[test]
    fn chordless_free_side_is_contractible() {
        let extra = [(0, 6), (2, 10), (4, 12)];
        let (g, s) = setup(14, &[(0, 6), (6, 8)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        let err = glue_tree_case(&cur, &m).unwrap_err();
        assert!(matches!(err, Error::StructureViolation(ref msg) if msg.contains("contractible")), "{err:?}");
    }

    #[test]
    fn chord_on_the_free_side_is_swapped_in() {
        let extra = [(0, 6), (2, 10), (4, 12), (1, 3)];
        let (g, s) = setup(14, &[(0, 6), (6, 8)], &extra);
        let m = Monitor::new(&g, &s, Scheme::F, LightFlags::new());
        let cur = Gluing::new(&g, &s).unwrap();
        let step = glue_tree_case(&cur, &m).unwrap();
        assert_eq!(step.case, TreeCase::ChordSwap);
        assert_eq!(step.s.len(), s.len() + 1);
    }
}
