//! Minimum 2-edge-covers and their canonical form.

use serde::{Deserialize, Serialize};

use crate::error::{violation, Error, Result};
use crate::graph_core::{components, decompose, mask, CoverDecomposition, EdgeId, EdgeSet, Graph, SizeClass, Vertex};
use crate::matching::max_simple_2_matching;
use crate::Rational;

/// Fractions of cover edges lying in triangle components (`t`) and in bridges (`b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    #[serde(with = "crate::serde_rational")]
    pub t: Rational,
    #[serde(with = "crate::serde_rational")]
    pub b: Rational,
    pub size: usize,
}

/// Minimum-size 2-edge-cover: a maximum simple 2-matching plus one extra
/// edge per unit of deficiency, followed by removal of redundant edges.
pub fn min_two_edge_cover(g: &Graph) -> Result<EdgeSet> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(Error::UncoverableNode(v));
    }
    let mut h = max_simple_2_matching(g);
    let mut deg = g.degrees_in(&h);
    for v in 0..g.n() {
        let mut extra: Vec<(EdgeId, Vertex)> =
            g.adj(v).iter().filter(|&&(_, e)| !h.contains(&e)).map(|&(w, e)| (e, w)).collect();
        extra.sort_unstable();
        for (e, w) in extra {
            if deg[v] >= 2 {
                break;
            }
            h.insert(e);
            deg[v] += 1;
            deg[w] += 1;
        }
    }
    drop_removable(g, &mut h);
    Ok(h)
}

/// Remove, in id order, every edge whose endpoints both keep degree at least 2.
fn drop_removable(g: &Graph, h: &mut EdgeSet) -> bool {
    let mut deg = g.degrees_in(h);
    let mut changed = false;
    for e in h.to_vec() {
        let (u, v) = g.ends(e);
        if deg[u] > 2 && deg[v] > 2 {
            h.remove(&e);
            deg[u] -= 1;
            deg[v] -= 1;
            changed = true;
        }
    }
    changed
}

fn first_removable(g: &Graph, h: &EdgeSet) -> Option<EdgeId> {
    let deg = g.degrees_in(h);
    h.iter().copied().find(|&e| {
        let (u, v) = g.ends(e);
        deg[u] > 2 && deg[v] > 2
    })
}

/// Edge exchange keeping the size: remove `removed`, add `added`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Swap {
    pub removed: Vec<EdgeId>,
    pub added: Vec<EdgeId>,
}

fn component_count(g: &Graph, s: &EdgeSet) -> usize {
    components(&g.adjacency_of(s)).1
}

struct SwapSearch<'a> {
    g: &'a Graph,
    h: &'a EdgeSet,
    base: usize,
    size: usize,
    /// Added-edge candidates for the free slots: non-cover edges joining distinct cover components.
    bridging: Vec<EdgeId>,
    non_cover: Vec<EdgeId>,
}

impl SwapSearch<'_> {
    fn candidate(&self, s: &EdgeSet, added: &[EdgeId]) -> Option<Vec<EdgeId>> {
        let free = self.size - added.len();
        if free == 0 {
            return (component_count(self.g, s) < self.base).then(|| added.to_vec());
        }
        if component_count(self.g, s) < self.base {
            let extra: Vec<EdgeId> =
                self.non_cover.iter().copied().filter(|e| !added.contains(e)).take(free).collect();
            if extra.len() == free {
                let mut all = added.to_vec();
                all.extend(extra);
                return Some(all);
            }
            return None;
        }
        let pool: Vec<EdgeId> = self.bridging.iter().copied().filter(|e| !added.contains(e)).collect();
        let mut pick = Vec::new();
        self.fill(s, &pool, 0, free, &mut pick).map(|extra| {
            let mut all = added.to_vec();
            all.extend(extra);
            all
        })
    }

    fn fill(&self, s: &EdgeSet, pool: &[EdgeId], from: usize, free: usize, pick: &mut Vec<EdgeId>) -> Option<Vec<EdgeId>> {
        if pick.len() == free {
            let t = s.with(pick);
            return (component_count(self.g, &t) < self.base).then(|| pick.clone());
        }
        for i in from..pool.len() {
            pick.push(pool[i]);
            if let Some(r) = self.fill(s, pool, i + 1, free, pick) {
                return Some(r);
            }
            pick.pop();
        }
        None
    }

    /// Cover the deficient vertices of `s` with at most `size` added edges.
    fn repair(&self, s: &mut EdgeSet, deg: &mut [usize], added: &mut Vec<EdgeId>) -> Option<Vec<EdgeId>> {
        let Some(v) = (0..self.g.n()).find(|&v| deg[v] < 2) else {
            return self.candidate(s, added);
        };
        if added.len() == self.size {
            return None;
        }
        let mut options: Vec<(EdgeId, Vertex)> = self
            .g
            .adj(v)
            .iter()
            .filter(|&&(_, e)| !self.h.contains(&e) && !added.contains(&e))
            .map(|&(w, e)| (e, w))
            .collect();
        options.sort_unstable();
        for (e, w) in options {
            added.push(e);
            s.insert(e);
            deg[v] += 1;
            deg[w] += 1;
            let r = self.repair(s, deg, added);
            deg[v] -= 1;
            deg[w] -= 1;
            s.remove(&e);
            added.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// First swap of at most three edges that keeps `h` a 2-edge-cover and
/// lowers its component count. Sizes 1, 2, 3 are tried in turn; removed sets
/// are enumerated in id order before added sets.
pub fn find_3_swap(g: &Graph, h: &EdgeSet) -> Option<Swap> {
    let (comp, base) = components(&g.adjacency_of(h));
    let non_cover: Vec<EdgeId> = g.edges().filter(|e| !h.contains(e)).collect();
    let bridging: Vec<EdgeId> = non_cover
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.ends(e);
            comp[u] != comp[v]
        })
        .collect();
    if bridging.is_empty() {
        return None;
    }
    let cover: Vec<EdgeId> = h.to_vec();
    let deg0 = g.degrees_in(h);
    for size in 1..=3usize.min(cover.len()) {
        let search = SwapSearch { g, h, base, size, bridging: bridging.clone(), non_cover: non_cover.clone() };
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let removed: Vec<EdgeId> = idx.iter().map(|&i| cover[i]).collect();
            let mut deg = deg0.clone();
            for &e in &removed {
                let (u, v) = g.ends(e);
                deg[u] -= 1;
                deg[v] -= 1;
            }
            let deficit: usize = deg.iter().map(|&d| 2usize.saturating_sub(d)).sum();
            if deficit <= 2 * size {
                let mut s = h.without(&removed);
                if let Some(added) = search.repair(&mut s, &mut deg, &mut Vec::new()) {
                    return Some(Swap { removed, added });
                }
            }
            if !next_combination(&mut idx, cover.len()) {
                break;
            }
        }
    }
    None
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CanonicalProperty {
    /// 2EC components are 3..6-cycles or have at least 7 edges.
    ComponentShape,
    /// Leaf blocks have at least 6 edges, inner blocks at least 4.
    BlockSize,
    /// No size-preserving swap of at most 3 edges lowers the component count.
    ThreeOptimality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalViolation {
    pub property: CanonicalProperty,
    pub nodes: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub prop_i_ok: bool,
    pub prop_ii_ok: bool,
    pub prop_iii_ok: bool,
    pub violations: Vec<CanonicalViolation>,
}

impl CanonicalReport {
    pub fn is_canonical(&self) -> bool {
        self.prop_i_ok && self.prop_ii_ok && self.prop_iii_ok
    }
}

/// Check the three canonical properties of a 2-edge-cover.
pub fn check_canonical(g: &Graph, h: &EdgeSet) -> CanonicalReport {
    let d = decompose(g, h);
    let mut violations = Vec::new();
    for c in &d.components {
        if c.class() == Some(SizeClass::Irregular) {
            violations.push(CanonicalViolation {
                property: CanonicalProperty::ComponentShape,
                nodes: c.nodes.clone(),
                edges: c.edges.to_vec(),
            });
        }
    }
    for b in &d.blocks {
        let floor = if b.is_leaf() { 6 } else { 4 };
        if b.edges.len() < floor {
            violations.push(CanonicalViolation {
                property: CanonicalProperty::BlockSize,
                nodes: b.nodes.clone(),
                edges: b.edges.to_vec(),
            });
        }
    }
    if let Some(sw) = find_3_swap(g, h) {
        violations.push(CanonicalViolation {
            property: CanonicalProperty::ThreeOptimality,
            nodes: Vec::new(),
            edges: sw.removed.iter().chain(&sw.added).copied().collect(),
        });
    }
    let has = |p| violations.iter().any(|v: &CanonicalViolation| v.property == p);
    CanonicalReport {
        prop_i_ok: !has(CanonicalProperty::ComponentShape),
        prop_ii_ok: !has(CanonicalProperty::BlockSize),
        prop_iii_ok: !has(CanonicalProperty::ThreeOptimality),
        violations,
    }
}

/// Lexicographic progress measure of the rewrite loop.
fn potential(g: &Graph, h: &EdgeSet) -> (usize, usize, usize) {
    let d = decompose(g, h);
    (h.len(), d.components.len(), d.bridges.len())
}

/// One applied rewrite of the canonicalization loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: String,
    pub removed: Vec<EdgeId>,
    pub added: Vec<EdgeId>,
}

/// Turn a 2-edge-cover of a structured graph into a canonical one of no larger size.
pub fn canonicalize(g: &Graph, h: &EdgeSet) -> Result<EdgeSet> {
    canonicalize_logged(g, h).map(|(c, _)| c)
}

/// As [`canonicalize`], also returning the applied rewrites in order.
pub fn canonicalize_logged(g: &Graph, h: &EdgeSet) -> Result<(EdgeSet, Vec<RewriteStep>)> {
    if let Some(v) = (0..g.n()).find(|&v| g.degrees_in(h)[v] < 2) {
        return Err(Error::NotACover(v));
    }
    let mut cur = h.clone();
    let mut log = Vec::new();
    let mut pot = potential(g, &cur);
    while let Some(step) = next_rewrite(g, &cur)? {
        cur = cur.without(&step.removed).with(&step.added);
        let next = potential(g, &cur);
        if next >= pot {
            return violation(format!("rewrite {} did not decrease (|H|, components, bridges): {pot:?} -> {next:?}", step.rule));
        }
        pot = next;
        log.push(step);
    }
    Ok((cur, log))
}

fn step(rule: &str, removed: Vec<EdgeId>, added: Vec<EdgeId>) -> Option<RewriteStep> {
    Some(RewriteStep { rule: rule.to_string(), removed, added })
}

fn next_rewrite(g: &Graph, h: &EdgeSet) -> Result<Option<RewriteStep>> {
    if let Some(e) = first_removable(g, h) {
        return Ok(step("drop-redundant", vec![e], vec![]));
    }
    if let Some(sw) = find_3_swap(g, h) {
        return Ok(step("merge-swap", sw.removed, sw.added));
    }
    let d = decompose(g, h);
    for c in &d.components {
        if c.class() == Some(SizeClass::Irregular) {
            return fix_small_component(g, &c.nodes, &c.edges).map(Some);
        }
    }
    if let Some(s) = fix_small_block(g, h, &d)? {
        return Ok(Some(s));
    }
    Ok(None)
}

fn edge_in(g: &Graph, s: &EdgeSet, a: Vertex, b: Vertex) -> Option<EdgeId> {
    g.adj(a).iter().filter(|&&(w, e)| w == b && s.contains(&e)).map(|&(_, e)| e).min()
}

/// Rewrite a 5-node bowtie or K_{2,3} component into a 5-cycle.
fn fix_small_component(g: &Graph, nodes: &[Vertex], edges: &EdgeSet) -> Result<RewriteStep> {
    let deg = g.degrees_in(edges);
    let all = g.all_edges();
    let e = |a, b| edge_in(g, &all, a, b).expect("edge of the new cycle exists");
    if nodes.len() != 5 {
        return violation(format!("irregular component on {} nodes after redundant edges are gone", nodes.len()));
    }
    let hubs: Vec<Vertex> = nodes.iter().copied().filter(|&v| deg[v] == 4).collect();
    if edges.len() == 6 && hubs.len() == 1 {
        let u = hubs[0];
        let rest: Vec<Vertex> = nodes.iter().copied().filter(|&v| v != u).collect();
        let x = rest[0];
        let y = rest.iter().copied().find(|&y| y != x && edge_in(g, edges, x, y).is_some()).expect("bowtie partner");
        let (t1, t2): (Vec<Vertex>, Vec<Vertex>) = (vec![x, y], rest.iter().copied().filter(|&v| v != x && v != y).collect());
        for &a in &t1 {
            for &b in &t2 {
                if edge_in(g, &all, a, b).is_some() {
                    let a2 = t1.iter().copied().find(|&v| v != a).unwrap();
                    let b2 = t2.iter().copied().find(|&v| v != b).unwrap();
                    let keep: EdgeSet = [e(a, b), e(b, b2), e(b2, u), e(u, a2), e(a2, a)].into_iter().collect();
                    return Ok(RewriteStep {
                        rule: "bowtie-to-5-cycle".into(),
                        removed: edges.minus(&keep).to_vec(),
                        added: keep.minus(edges).to_vec(),
                    });
                }
            }
        }
        return Err(Error::ThreeOptimalityBreach(format!("bowtie at {u} has no chord and no escape handled by a merge swap")));
    }
    let big: Vec<Vertex> = nodes.iter().copied().filter(|&v| deg[v] == 3).collect();
    let small: Vec<Vertex> = nodes.iter().copied().filter(|&v| deg[v] == 2).collect();
    if edges.len() == 6 && big.len() == 2 && small.len() == 3 {
        let (v1, v2) = (big[0], big[1]);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (wa, wb) = (small[i], small[j]);
            if edge_in(g, &all, wa, wb).is_some() {
                let wc = small[3 - i - j];
                let cycle = [e(wa, wb), e(wb, v1), e(v1, wc), e(wc, v2), e(v2, wa)];
                let keep: EdgeSet = cycle.into_iter().collect();
                let added = keep.minus(edges).to_vec();
                return Ok(RewriteStep { rule: "k23-to-5-cycle".into(), removed: edges.minus(&keep).to_vec(), added });
            }
        }
        if small.iter().all(|&w| g.degree(w) == 2) {
            return violation("K_{2,3} component whose degree-2 side makes it contractible");
        }
        return Err(Error::ThreeOptimalityBreach("K_{2,3} with an escape edge not caught by a merge swap".into()));
    }
    violation(format!("irregular 5-node component with {} edges is neither a bowtie nor a K_{{2,3}}", edges.len()))
}

/// Repair a block of at most 5 edges whose outside cover edges all meet one node.
fn fix_small_block(g: &Graph, h: &EdgeSet, d: &CoverDecomposition) -> Result<Option<RewriteStep>> {
    for b in &d.blocks {
        if b.edges.len() > 5 {
            continue;
        }
        let inside = mask(g.n(), &b.nodes);
        let mut attach: Vec<Vertex> = Vec::new();
        for &e in h.iter() {
            let (u, v) = g.ends(e);
            if inside[u] != inside[v] {
                attach.push(if inside[u] { u } else { v });
            }
        }
        attach.sort_unstable();
        attach.dedup();
        if attach.len() != 1 {
            continue;
        }
        let v1 = attach[0];
        let cyc = block_cycle(g, &b.edges, v1)?;
        let l = cyc.len();
        let outside = |z: Vertex| -> Option<EdgeId> {
            let mut es: Vec<EdgeId> = g.adj(z).iter().filter(|&&(w, _)| !inside[w]).map(|&(_, e)| e).collect();
            es.sort_unstable();
            es.first().copied()
        };
        for z in [cyc[1], cyc[l - 1]] {
            if let Some(zw) = outside(z) {
                let v1z = edge_in(g, &b.edges, v1, z).expect("cycle edge");
                return Ok(step("small-block-reattach", vec![v1z], vec![zw]));
            }
        }
        if l != 5 {
            return violation(format!("block of length {l} at {v1} has no 3-matching to the rest of the graph"));
        }
        let all = g.all_edges();
        let Some(chord) = edge_in(g, &all, cyc[1], cyc[4]) else {
            return violation("5-cycle block without the chord v2v5 is contractible");
        };
        for (zi, far, near) in [(2usize, (0usize, 4usize), (1usize, 2usize)), (3, (0, 1), (4, 3))] {
            if let Some(zw) = outside(cyc[zi]) {
                let r1 = edge_in(g, &b.edges, cyc[far.0], cyc[far.1]).expect("cycle edge");
                let r2 = edge_in(g, &b.edges, cyc[near.0], cyc[near.1]).expect("cycle edge");
                let mut removed = vec![r1, r2];
                removed.sort_unstable();
                let mut added = vec![zw, chord];
                added.sort_unstable();
                return Ok(step("small-block-rotate", removed, added));
            }
        }
        return violation(format!("node {v1} is a cut vertex of the graph"));
    }
    Ok(None)
}

/// Vertices of a cycle block in cycle order starting at `v1`, walking first
/// towards the smaller-id neighbour.
fn block_cycle(g: &Graph, edges: &EdgeSet, v1: Vertex) -> Result<Vec<Vertex>> {
    let deg = g.degrees_in(edges);
    if deg.iter().any(|&x| x > 2) {
        return violation("small block is not a cycle");
    }
    let adj = g.adjacency_of(edges);
    let mut order = vec![v1];
    let (mut cur, mut via) = adj[v1].iter().min_by_key(|&&(w, _)| w).copied().expect("cycle neighbour");
    while cur != v1 {
        order.push(cur);
        let &(next, e) = adj[cur].iter().find(|&&(_, f)| f != via).expect("cycle continues");
        cur = next;
        via = e;
    }
    Ok(order)
}

/// Exact `t` and `b` of a decomposed cover.
pub fn cover_stats(h: &CoverDecomposition) -> CoverStats {
    let size: usize = h.components.iter().map(|c| c.edges.len()).sum();
    if size == 0 {
        return CoverStats { t: Rational::from_integer(0), b: Rational::from_integer(0), size };
    }
    let tri: usize = h
        .components
        .iter()
        .filter(|c| c.class() == Some(SizeClass::Triangle))
        .map(|c| c.edges.len())
        .sum();
    CoverStats {
        t: Rational::new(tri as i64, size as i64),
        b: Rational::new(h.bridges.len() as i64, size as i64),
        size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_min_2edge_cover, OracleLimits};

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

    #[test]
    fn named_cover_sizes() {
        assert_eq!(min_two_edge_cover(&cycle(7)).unwrap().len(), 7);
        let bowtie = Graph::simple(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(min_two_edge_cover(&bowtie).unwrap().len(), 6);
        assert_eq!(exact_min_2edge_cover(&bowtie, &OracleLimits::default()).unwrap().len(), 6);
        assert_eq!(min_two_edge_cover(&complete(5)).unwrap().len(), 5);
        let path = Graph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(min_two_edge_cover(&path), Err(Error::UncoverableNode(0)));
    }

    #[test]
    fn canonical_fixed_point() {
        let g = cycle(7);
        let h = g.all_edges();
        let (out, log) = canonicalize_logged(&g, &h).unwrap();
        assert_eq!(out, h);
        assert!(log.is_empty());
        assert!(check_canonical(&g, &h).is_canonical());
    }

    #[test]
    fn bowtie_with_chord_becomes_a_five_cycle() {
        // bowtie triangles {1,2,0} and {3,4,0} plus the chord 1-3
        let g = Graph::simple(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let h: EdgeSet = (0..6).collect();
        let out = canonicalize(&g, &h).unwrap();
        assert_eq!(out.len(), 5);
        assert!(crate::graph_core::is_two_edge_connected(&g, &out));
        assert_eq!(g.degrees_in(&out), vec![2; 5]);
    }

    #[test]
    fn k23_with_inner_edge_becomes_a_five_cycle() {
        // sides {0,1} and {2,3,4}, plus w1w2 = 2-3
        let g = Graph::simple(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3)]).unwrap();
        let h: EdgeSet = (0..6).collect();
        let rep = check_canonical(&g, &h);
        assert!(!rep.prop_i_ok);
        let out = canonicalize(&g, &h).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.contains(&6));
        assert_eq!(g.degrees_in(&out), vec![2; 5]);
    }

    #[test]
    fn short_leaf_block_is_reported() {
        // 5-cycle leaf block 0..4 and 6-cycle 6..11, joined by bridges 0-5 and 5-6
        let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..6).map(|i| (6 + i, 6 + (i + 1) % 6)));
        e.extend([(0, 5), (5, 6)]);
        let g = Graph::simple(12, &e).unwrap();
        let h = g.all_edges();
        let rep = check_canonical(&g, &h);
        assert!(!rep.prop_ii_ok);
        let w = rep.violations.iter().find(|v| v.property == CanonicalProperty::BlockSize).unwrap();
        assert_eq!(w.nodes, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn two_triangles_merge_by_a_two_swap() {
        // triangles 0,1,2 and 3,4,5 with the ladder edges 0-3 and 1-4
        let g = Graph::simple(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4)]).unwrap();
        let h: EdgeSet = (0..6).collect();
        let rep = check_canonical(&g, &h);
        assert!(!rep.prop_iii_ok);
        let sw = find_3_swap(&g, &h).unwrap();
        assert_eq!(sw.removed.len(), 2);
        let out = canonicalize(&g, &h).unwrap();
        assert_eq!(out.len(), 6);
        assert_eq!(decompose(&g, &out).components.len(), 1);
    }

    #[test]
    fn stats_of_simple_covers() {
        let mut e = Vec::new();
        for t in 0..4 {
            e.extend([(3 * t, 3 * t + 1), (3 * t + 1, 3 * t + 2), (3 * t + 2, 3 * t)]);
        }
        let g = Graph::simple(12, &e).unwrap();
        let s = cover_stats(&decompose(&g, &g.all_edges()));
        assert_eq!((s.t, s.b, s.size), (Rational::from_integer(1), Rational::from_integer(0), 12));
        let c = cycle(12);
        let s = cover_stats(&decompose(&c, &c.all_edges()));
        assert_eq!((s.t, s.b), (Rational::from_integer(0), Rational::from_integer(0)));
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

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(80))]
        #[test]
        fn cover_is_minimum(n in 3usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10), 0..9)) {
            let g = random_graph(n, raw);
            proptest::prop_assume!(g.m() <= 18);
            let h = min_two_edge_cover(&g).unwrap();
            proptest::prop_assert!(g.degrees_in(&h).iter().all(|&d| d >= 2));
            let lim = OracleLimits::default();
            proptest::prop_assert_eq!(h.len(), exact_min_2edge_cover(&g, &lim).unwrap().len());
            let two_ec = crate::oracle::exact_2ecss(&g, &lim).unwrap();
            proptest::prop_assert!(h.len() <= two_ec.len());
        }

        #[test]
        fn swaps_keep_size_and_cover(n in 4usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10), 0..10)) {
            let g = random_graph(n, raw);
            let h = min_two_edge_cover(&g).unwrap();
            if let Some(sw) = find_3_swap(&g, &h) {
                proptest::prop_assert_eq!(sw.removed.len(), sw.added.len());
                let s = h.without(&sw.removed).with(&sw.added);
                proptest::prop_assert_eq!(s.len(), h.len());
                proptest::prop_assert!(g.degrees_in(&s).iter().all(|&d| d >= 2));
                proptest::prop_assert!(component_count(&g, &s) < component_count(&g, &h));
            }
        }
    }
}
