//! Nice cycles of a vertex partition, built by the inductive
//! almost-nice-cycle construction.
//!
//! A nice cycle of a partition is an edge set whose edges join distinct
//! parts, which forms one cycle once every part is collapsed to a node, and
//! whose two edges at any part of size at least two touch distinct nodes.

use crate::error::{violation, Result};
use crate::graph_core::{EdgeId, Graph, Vertex};

/// A partition of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub sets: Vec<Vec<Vertex>>,
    pub set_of: Vec<usize>,
}

impl Partition {
    /// Fails unless `sets` are non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, sets: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut set_of = vec![usize::MAX; n];
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return violation(format!("partition set {i} is empty"));
            }
            for &v in s {
                if v >= n || set_of[v] != usize::MAX {
                    return violation(format!("vertex {v} is out of range or in two sets"));
                }
                set_of[v] = i;
            }
        }
        if let Some(v) = set_of.iter().position(|&s| s == usize::MAX) {
            return violation(format!("vertex {v} is in no set"));
        }
        Ok(Partition { sets, set_of })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn size(&self, i: usize) -> usize {
        self.sets[i].len()
    }
}

/// An edge traversed in a fixed direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: Vertex,
    pub to: Vertex,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceCycle {
    /// Steps in cycle order: each step ends in the part the next one starts from.
    pub steps: Vec<Step>,
    /// Indices of the parts the cycle passes through, in the same order.
    pub partition_sets_touched: Vec<usize>,
}

impl NiceCycle {
    pub fn edges(&self) -> Vec<EdgeId> {
        self.steps.iter().map(|s| s.edge).collect()
    }
}

/// For each part an edge set touches: the part and its two attachment nodes.
/// `None` unless the edges join distinct parts and form a single cycle after
/// collapsing the parts.
pub fn collapsed_cycle(g: &Graph, set_of: &[usize], edges: &[EdgeId]) -> Option<Vec<(usize, Vertex, Vertex)>> {
    if edges.is_empty() {
        return None;
    }
    let mut touch: std::collections::BTreeMap<usize, Vec<Vertex>> = std::collections::BTreeMap::new();
    let mut parent: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    fn find(p: &mut std::collections::BTreeMap<usize, usize>, x: usize) -> usize {
        let up = *p.entry(x).or_insert(x);
        if up == x {
            x
        } else {
            let r = find(p, up);
            p.insert(x, r);
            r
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for &e in edges {
        let (u, v) = g.ends(e);
        let (a, b) = (set_of[u], set_of[v]);
        if a == b || !seen.insert(e) {
            return None;
        }
        touch.entry(a).or_default().push(u);
        touch.entry(b).or_default().push(v);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent.insert(ra, rb);
    }
    let root = find(&mut parent, *touch.keys().next()?);
    let keys: Vec<usize> = touch.keys().copied().collect();
    if keys.iter().any(|&k| find(&mut parent, k) != root) {
        return None;
    }
    touch.into_iter().map(|(s, nodes)| (nodes.len() == 2).then(|| (s, nodes[0], nodes[1]))).collect()
}

/// Both nice-cycle conditions, checked directly.
pub fn is_nice_cycle(g: &Graph, part: &Partition, edges: &[EdgeId]) -> bool {
    match collapsed_cycle(g, &part.set_of, edges) {
        Some(t) => t.iter().all(|&(s, a, b)| part.size(s) == 1 || a != b),
        None => false,
    }
}

/// Orient an edge set that forms a collapsed cycle.
pub fn orient(g: &Graph, set_of: &[usize], edges: &[EdgeId]) -> Result<Vec<Step>> {
    if collapsed_cycle(g, set_of, edges).is_none() {
        return violation("edge set is not a collapsed cycle".to_string());
    }
    let (u, v) = g.ends(edges[0]);
    let mut steps = vec![Step { from: u, to: v, edge: edges[0] }];
    let mut used = vec![edges[0]];
    while used.len() < edges.len() {
        let last = *steps.last().expect("non-empty");
        let here = set_of[last.to];
        let Some(&next) = edges.iter().find(|&&e| {
            let (a, b) = g.ends(e);
            !used.contains(&e) && (set_of[a] == here || set_of[b] == here)
        }) else {
            return violation("collapsed cycle closes early".to_string());
        };
        let (a, b) = g.ends(next);
        let step = if set_of[a] == here { Step { from: a, to: b, edge: next } } else { Step { from: b, to: a, edge: next } };
        steps.push(step);
        used.push(next);
    }
    Ok(steps)
}

/// A nice cycle of `part` in the simple 2VC graph `g`.
pub fn nice_cycle(g: &Graph, part: &Partition) -> Result<NiceCycle> {
    let edges = nice_edges(g, part)?;
    if !is_nice_cycle(g, part, &edges) {
        return violation(format!("constructed edge set {edges:?} is not a nice cycle"));
    }
    let steps = orient(g, &part.set_of, &edges)?;
    let partition_sets_touched = steps.iter().map(|s| part.set_of[s.from]).collect();
    Ok(NiceCycle { steps, partition_sets_touched })
}

/// A nice path starting at the anchor node `u0` and ending at `end`.
#[derive(Clone, Debug)]
struct NicePath {
    edges: Vec<EdgeId>,
    end: Vertex,
}

/// Almost-nice cycle: the anchor part `sets[0]` with anchor node `u0`, and
/// for every further part two nice paths from `u0` that end at distinct
/// nodes of the part unless it is a singleton.
struct Almost {
    u0: Vertex,
    sets: Vec<usize>,
    paths: Vec<(NicePath, NicePath)>,
}

impl Almost {
    /// One of the two paths to part `sets[i]` (`i >= 1`) that does not end at `avoid`.
    fn path_avoiding(&self, part: &Partition, i: usize, avoid: Vertex) -> Result<&NicePath> {
        let (p1, p2) = &self.paths[i - 1];
        if part.size(self.sets[i]) == 1 || p1.end != avoid {
            Ok(p1)
        } else if p2.end != avoid {
            Ok(p2)
        } else {
            violation(format!("both nice paths end at {avoid}"))
        }
    }
}

fn nice_edges(g: &Graph, part: &Partition) -> Result<Vec<EdgeId>> {
    match part.len() {
        0 | 1 => violation(format!("nice cycle needs at least two parts, got {}", part.len())),
        2 => base_case(g, part),
        _ => match walk(g, part)? {
            Walked::Cycle(edges) => Ok(edges),
            Walked::Almost(a) => grow(g, part, a),
        },
    }
}

fn base_case(g: &Graph, part: &Partition) -> Result<Vec<EdgeId>> {
    let (a, b) = (0, 1);
    if part.size(a) > 1 && part.size(b) > 1 {
        let ma = crate::graph_core::mask(g.n(), &part.sets[a]);
        let mb = crate::graph_core::mask(g.n(), &part.sets[b]);
        let m = crate::graph_core::matching_between(g, &ma, &mb);
        if m.len() < 2 {
            return violation("two parts without a 2-matching between them".to_string());
        }
        return Ok(vec![m[0], m[1]]);
    }
    let single = if part.size(a) == 1 { part.sets[a][0] } else { part.sets[b][0] };
    let mut es: Vec<EdgeId> = g.adj(single).iter().map(|&(_, e)| e).collect();
    es.sort_unstable();
    if es.len() < 2 {
        return violation(format!("singleton part {single} has degree < 2"));
    }
    Ok(vec![es[0], es[1]])
}

enum Walked {
    Cycle(Vec<EdgeId>),
    Almost(Almost),
}

/// Smallest-id edge leaving part `p` from a node other than `avoid`, other
/// than the edge `came` the walk arrived by.
fn leave(g: &Graph, part: &Partition, p: usize, avoid: Option<Vertex>, came: Option<EdgeId>) -> Option<Step> {
    part.sets[p]
        .iter()
        .filter(|&&v| Some(v) != avoid)
        .flat_map(|&v| g.adj(v).iter().map(move |&(u, e)| Step { from: v, to: u, edge: e }))
        .filter(|s| part.set_of[s.to] != p && Some(s.edge) != came)
        .min_by_key(|s| s.edge)
}

/// Grow a walk of distinct parts until it closes into a nice cycle or
/// yields an almost-nice cycle.
fn walk(g: &Graph, part: &Partition) -> Result<Walked> {
    let mut seq = vec![0usize];
    let mut pos = vec![None; part.len()];
    pos[0] = Some(0);
    let Some(first) = leave(g, part, 0, None, None) else {
        return violation("part 0 has no leaving edge".to_string());
    };
    let mut steps = vec![first];
    seq.push(part.set_of[first.to]);
    pos[part.set_of[first.to]] = Some(1);
    loop {
        let k = seq.len() - 1;
        let cur = seq[k];
        let entry = steps[k - 1].to;
        let avoid = (part.size(cur) > 1).then_some(entry);
        let Some(next) = leave(g, part, cur, avoid, Some(steps[k - 1].edge)) else {
            return violation(format!("no edge leaves part {cur} avoiding {entry}"));
        };
        let target = part.set_of[next.to];
        match pos[target] {
            None => {
                pos[target] = Some(seq.len());
                seq.push(target);
                steps.push(next);
            }
            Some(j) => {
                let u = next.to;
                let mut cycle: Vec<EdgeId> = steps[j..].iter().map(|s| s.edge).collect();
                cycle.push(next.edge);
                if part.size(seq[j]) == 1 || steps[j].from != u {
                    return Ok(Walked::Cycle(cycle));
                }
                let r = k - j;
                let mut paths = Vec::with_capacity(r);
                for i in 1..=r {
                    let forward =
                        NicePath { edges: steps[j..j + i].iter().map(|s| s.edge).collect(), end: steps[j + i - 1].to };
                    let mut back = vec![next.edge];
                    back.extend(steps[j + i..k].iter().rev().map(|s| s.edge));
                    let end = if i == r { next.from } else { steps[j + i].from };
                    paths.push((forward, NicePath { edges: back, end }));
                }
                return Ok(Walked::Almost(Almost { u0: u, sets: seq[j..].to_vec(), paths }));
            }
        }
    }
}

/// Enlarge the almost-nice cycle until a nice cycle of `part` appears.
fn grow(g: &Graph, part: &Partition, mut a: Almost) -> Result<Vec<EdgeId>> {
    loop {
        let mut in_a = vec![false; part.len()];
        for &s in &a.sets {
            in_a[s] = true;
        }
        let anchor = a.sets[0];
        let index_in_a = |s: usize| a.sets.iter().position(|&x| x == s);

        if a.sets.len() == part.len() {
            // Every part is in the almost-nice cycle: close it with an edge
            // from the anchor part that avoids u0.
            let e = part.sets[anchor]
                .iter()
                .filter(|&&v| v != a.u0)
                .flat_map(|&v| g.adj(v).iter().map(move |&(w, e)| (v, w, e)))
                .filter(|&(_, w, _)| part.set_of[w] != anchor)
                .min_by_key(|&(_, _, e)| e);
            let Some((_, w, e)) = e else {
                return violation(format!("anchor {} is a cut node", a.u0));
            };
            let i = index_in_a(part.set_of[w]).expect("every part is in the cycle");
            let p = a.path_avoiding(part, i, w)?;
            let mut out = p.edges.clone();
            out.push(e);
            return Ok(out);
        }

        // Merge the almost-nice parts into one and recurse.
        let mut merged: Vec<Vertex> = a.sets.iter().flat_map(|&s| part.sets[s].iter().copied()).collect();
        merged.sort_unstable();
        let mut sets = vec![merged];
        let mut old_of_new = vec![usize::MAX];
        for (i, s) in part.sets.iter().enumerate() {
            if !in_a[i] {
                sets.push(s.clone());
                old_of_new.push(i);
            }
        }
        let coarse = Partition::new(g.n(), sets)?;
        let inner = nice_edges(g, &coarse)?;
        let steps = orient(g, &coarse.set_of, &inner)?;
        let at_merged: Vec<Vertex> = steps
            .iter()
            .flat_map(|s| [s.from, s.to])
            .filter(|&x| coarse.set_of[x] == 0)
            .collect();
        if at_merged.is_empty() {
            return Ok(inner);
        }
        let (z1, z2) = (at_merged[0], at_merged[1]);
        if part.set_of[z1] == part.set_of[z2] {
            return Ok(inner);
        }
        let off_anchor = |z: Vertex| part.set_of[z] == anchor && z != a.u0;
        if off_anchor(z1) || off_anchor(z2) {
            let w = if off_anchor(z1) { z2 } else { z1 };
            let i = index_in_a(part.set_of[w]).expect("touched part is in the cycle");
            let p = a.path_avoiding(part, i, w)?;
            let mut out = p.edges.clone();
            out.extend(inner);
            return Ok(out);
        }

        // The inner cycle meets the merged part only at u0 or at further
        // parts: every other part it visits joins the almost-nice cycle.
        let len = steps.len();
        let mut additions = Vec::new();
        for p in 0..len {
            let x = coarse.set_of[steps[p].from];
            if x == 0 {
                continue;
            }
            // Forward from the step leaving x until the merged part is reached.
            let mut fwd = Vec::new();
            let mut q = p;
            loop {
                fwd.push(steps[q]);
                if coarse.set_of[steps[q].to] == 0 {
                    break;
                }
                q = (q + 1) % len;
            }
            // Backward from the step entering x.
            let mut bwd = Vec::new();
            let mut q = (p + len - 1) % len;
            loop {
                let s = steps[q];
                bwd.push(Step { from: s.to, to: s.from, edge: s.edge });
                if coarse.set_of[s.from] == 0 {
                    break;
                }
                q = (q + len - 1) % len;
            }
            let original = old_of_new[x];
            let p1 = splice(part, &a, &fwd)?;
            let p2 = if part.size(original) == 1 { p1.clone() } else { splice(part, &a, &bwd)? };
            additions.push((original, p1, p2));
        }
        for (s, p1, p2) in additions {
            a.sets.push(s);
            a.paths.push((p1, p2));
        }
    }
}

/// Turn a path `q` from a new part into the merged part into a nice path
/// from `u0`, continuing inside the almost-nice cycle where needed.
fn splice(part: &Partition, a: &Almost, q: &[Step]) -> Result<NicePath> {
    let start = q[0].from;
    let z = q.last().expect("non-empty path").to;
    let reversed: Vec<EdgeId> = q.iter().rev().map(|s| s.edge).collect();
    if part.set_of[z] == a.sets[0] {
        if z != a.u0 {
            return violation(format!("path enters the anchor part at {z}, not at u0"));
        }
        return Ok(NicePath { edges: reversed, end: start });
    }
    let i = a.sets.iter().position(|&s| s == part.set_of[z]).expect("entry part is in the cycle");
    let mut edges = a.path_avoiding(part, i, z)?.edges.clone();
    edges.extend(reversed);
    Ok(NicePath { edges, end: start })
}
