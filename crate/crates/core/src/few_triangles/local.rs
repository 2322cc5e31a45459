use serde::{Deserialize, Serialize};

use super::{accept_glue, two_ec_on, Gluing, Kind};
use crate::credit::Monitor;
use crate::error::{Error, Result};
use crate::graph_core::{matching_between, EdgeId, EdgeSet, Graph, Vertex};

/// Which local merge fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalMerge {
    /// A 4-cycle and a 6-cycle or large component.
    FourCycle,
    /// A triangle and a large component.
    Triangle,
    /// A 5-cycle and a 5-cycle, 6-cycle or large component.
    FiveCycle,
    /// Two large components.
    LargePair,
    /// A 4-cycle with a 3-matching to each of two 5-cycles.
    FourBetweenFives,
    /// A 5-cycle with a 3-matching to each of two 4-cycles.
    FiveBetweenFours,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStep {
    pub s: EdgeSet,
    pub kind: LocalMerge,
    pub components: Vec<usize>,
}

/// Nine edges on the nodes of a 5-cycle and a 4-cycle that, together with
/// a virtual edge `xy` between two nodes of the 5-cycle, form a 2EC graph.
/// Each candidate drops one edge of each cycle and adds two edges between
/// them.
pub fn c5c4_to_nine(g: &Graph, c5: &EdgeSet, c4: &EdgeSet, x: Vertex, y: Vertex) -> Option<Vec<EdgeId>> {
    let ends = |s: &EdgeSet| {
        let mut v: Vec<Vertex> = s.iter().flat_map(|&e| [g.ends(e).0, g.ends(e).1]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (n5, n4) = (ends(c5), ends(c4));
    let mut nodes = n5.clone();
    nodes.extend(&n4);
    let mut cross: Vec<EdgeId> = n5
        .iter()
        .flat_map(|&v| g.adj(v).iter().filter(|&&(w, _)| n4.contains(&w)).map(|&(_, e)| e))
        .collect();
    cross.sort_unstable();
    for &a in c5.iter() {
        for &b in c4.iter() {
            for (i, &p) in cross.iter().enumerate() {
                for &q in &cross[i + 1..] {
                    let mut f: Vec<EdgeId> = c5.iter().copied().filter(|&e| e != a).collect();
                    f.extend(c4.iter().copied().filter(|&e| e != b));
                    f.extend([p, q]);
                    if two_ec_on(g, &nodes, &f, &[(x, y)]) {
                        return Some(f);
                    }
                }
            }
        }
    }
    None
}

fn three_matching(cur: &Gluing, a: usize, b: usize) -> Option<Vec<EdgeId>> {
    let m = matching_between(cur.g, &cur.mask(a), &cur.mask(b));
    (m.len() >= 3).then_some(m)
}

/// Endpoint of `e` inside component `c`, and the other endpoint.
fn split(cur: &Gluing, e: EdgeId, c: usize) -> (Vertex, Vertex) {
    let (u, v) = cur.g.ends(e);
    if cur.d.comp_of[u] == c {
        (u, v)
    } else {
        (v, u)
    }
}

/// Two matching edges whose ends in `c` are joined by an edge of `c`,
/// returned with that edge.
fn adjacent_pair(cur: &Gluing, m: &[EdgeId], c: usize) -> Option<(EdgeId, EdgeId, EdgeId)> {
    for (i, &e) in m.iter().enumerate() {
        for &f in &m[i + 1..] {
            let (x, y) = (split(cur, e, c).0, split(cur, f, c).0);
            if let Some(chord) = cur.s_edge(x, y).filter(|ch| cur.edges(c).contains(ch)) {
                return Some((e, f, chord));
            }
        }
    }
    None
}

fn breach(what: &str, a: usize, b: usize) -> Error {
    Error::ThreeOptimalityBreach(format!("{what} between components {a} and {b}"))
}

/// Looks for the first applicable local merge, by rule order and then
/// component order.
pub fn local_merge(cur: &Gluing, monitor: &Monitor) -> Result<Option<LocalStep>> {
    let k = cur.count();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let kind = |c: usize| cur.kinds[c];
    let done = |s: EdgeSet, kind: LocalMerge, components: Vec<usize>| -> Result<Option<LocalStep>> {
        if accept_glue(cur, &s, monitor) {
            Ok(Some(LocalStep { s, kind, components }))
        } else {
            Err(Error::StructureViolation(format!("local merge {kind:?} on {components:?} was rejected")))
        }
    };

    for &(a, b) in &pairs {
        if kind(a) != Kind::Cycle4 || kind(b) == Kind::Cycle5 {
            continue;
        }
        let Some(m) = three_matching(cur, a, b) else { continue };
        if kind(b).is_short() {
            return Err(breach("3-matching from a 4-cycle to a short cycle", a, b));
        }
        let Some((e, f, chord)) = adjacent_pair(cur, &m, a) else { continue };
        return done(cur.s.without(&[chord]).with(&[e, f]), LocalMerge::FourCycle, vec![a, b]);
    }
    for &(a, b) in &pairs {
        if kind(a) != Kind::Triangle || matches!(kind(b), Kind::Cycle6 | Kind::Cycle4) {
            continue;
        }
        let Some(m) = three_matching(cur, a, b) else { continue };
        if kind(b) != Kind::Large {
            return Err(breach("3-matching from a triangle to a triangle or 5-cycle", a, b));
        }
        let Some((e, f, chord)) = adjacent_pair(cur, &m, a) else { continue };
        return done(cur.s.without(&[chord]).with(&[e, f]), LocalMerge::Triangle, vec![a, b]);
    }
    for &(a, b) in &pairs {
        if kind(a) != Kind::Cycle5 || kind(b).is_short() {
            continue;
        }
        let Some(m) = three_matching(cur, a, b) else { continue };
        let Some((e, f, chord)) = adjacent_pair(cur, &m, a) else { continue };
        return done(cur.s.without(&[chord]).with(&[e, f]), LocalMerge::FiveCycle, vec![a, b]);
    }
    for &(a, b) in &pairs {
        if a > b || kind(a) != Kind::Large || kind(b) != Kind::Large {
            continue;
        }
        let Some(m) = three_matching(cur, a, b) else { continue };
        return done(cur.s.with(&m[..2]), LocalMerge::LargePair, vec![a, b]);
    }
    for c1 in (0..k).filter(|&c| kind(c) == Kind::Cycle4) {
        let fives: Vec<usize> = (0..k).filter(|&c| kind(c) == Kind::Cycle5).collect();
        for (i, &c2) in fives.iter().enumerate() {
            for &c3 in &fives[i + 1..] {
                let (Some(m2), Some(m3)) = (three_matching(cur, c1, c2), three_matching(cur, c1, c3)) else { continue };
                let (Some((e1, e2, u12)), Some((f1, f2, w12))) = (adjacent_pair(cur, &m2, c2), adjacent_pair(cur, &m3, c3)) else {
                    continue;
                };
                let s = cur.s.without(&[u12, w12]).with(&[e1, e2, f1, f2]);
                return done(s, LocalMerge::FourBetweenFives, vec![c1, c2, c3]);
            }
        }
    }
    for c1 in (0..k).filter(|&c| kind(c) == Kind::Cycle5) {
        let fours: Vec<usize> = (0..k).filter(|&c| kind(c) == Kind::Cycle4).collect();
        for &c2 in &fours {
            for &c3 in fours.iter().filter(|&&c| c != c2) {
                let (Some(m2), Some(_)) = (three_matching(cur, c1, c2), three_matching(cur, c1, c3)) else { continue };
                let Some((e1, e2, z12)) = adjacent_pair(cur, &m2, c2) else { continue };
                let (vi, vj) = (split(cur, e1, c1).0, split(cur, e2, c1).0);
                let Some(f) = c5c4_to_nine(cur.g, cur.edges(c1), cur.edges(c3), vi, vj) else {
                    return Err(Error::StructureViolation(format!("no nine-edge set for components {c1} and {c3}")));
                };
                let mut s = cur.s.minus(cur.edges(c1)).minus(cur.edges(c3)).without(&[z12]);
                s.extend(f);
                s.extend([e1, e2]);
                return done(s, LocalMerge::FiveBetweenFours, vec![c1, c2, c3]);
            }
        }
    }
    Ok(None)
}
