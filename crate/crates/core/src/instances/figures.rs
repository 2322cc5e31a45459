//! Hand-encoded fixtures of the illustrations. Node names follow the
//! labels of the drawings; solid edges form the drawn edge set `S`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph_core::{is_two_edge_connected, two_edge_classes, EdgeSet, Graph, Vertex};

/// Figure identifiers with a fixture.
pub const FIGURE_IDS: [&str; 10] = ["1", "2", "3", "4", "5a", "5b", "6", "7", "8", "9"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure {
    pub id: String,
    pub graph: Graph,
    /// Node names in vertex order.
    pub names: Vec<String>,
    /// The solid edges of the drawing, when they form a distinguished subgraph.
    pub drawn: Option<EdgeSet>,
    /// Edges added so that a partial drawing becomes 2EC.
    pub completion: Vec<(Vertex, Vertex)>,
}

impl Figure {
    pub fn node(&self, name: &str) -> Vertex {
        self.names.iter().position(|n| n == name).unwrap_or_else(|| panic!("figure {} has no node {name}", self.id))
    }

    pub fn edge(&self, a: &str, b: &str) -> Option<usize> {
        self.graph.edge_between(self.node(a), self.node(b))
    }
}

type Pairs<'a> = &'a [(&'a str, &'a str)];

fn cycle<'a>(names: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    (0..names.len()).map(|i| (names[i], names[(i + 1) % names.len()])).collect()
}

fn build(id: &str, names: &[&str], solid: Pairs, dashed: Pairs, keep_drawn: bool) -> Result<Figure> {
    let index: BTreeMap<&str, Vertex> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let at = |n: &str| index.get(n).copied().ok_or_else(|| Error::BadSpec(format!("figure {id}: unknown node {n}")));
    let mut edges = Vec::new();
    for &(a, b) in solid.iter().chain(dashed) {
        edges.push((at(a)?, at(b)?));
    }
    let mut graph = Graph::simple(names.len(), &edges)?;
    let completion = complete_to_2ec(&mut graph);
    let drawn = keep_drawn.then(|| (0..solid.len()).collect());
    Ok(Figure { id: id.to_string(), graph, names: names.iter().map(|n| n.to_string()).collect(), drawn, completion })
}

/// Joins the 2-edge-connected classes of `g` by a ring of new edges, each
/// between the lowest non-adjacent pair of consecutive classes. Returns the
/// added pairs; a graph that is already 2EC is left alone.
pub fn complete_to_2ec(g: &mut Graph) -> Vec<(Vertex, Vertex)> {
    let mut added = Vec::new();
    while g.n() > 1 && !is_two_edge_connected(g, &g.all_edges()) {
        let (class, count) = two_edge_classes(g, &g.all_edges());
        let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); count];
        for v in 0..g.n() {
            members[class[v]].push(v);
        }
        members.sort();
        let ring = if count == 2 { 1 } else { count };
        let before = added.len();
        for i in 0..ring {
            let (a, b) = (&members[i], &members[(i + 1) % count]);
            let pair = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).find(|&(x, y)| g.edge_between(x, y).is_none());
            if let Some((x, y)) = pair {
                g.add_edge(x, y);
                added.push((x, y));
            }
        }
        assert!(added.len() > before, "no pair left to join two edge classes");
    }
    added
}

pub fn figure(id: &str) -> Result<Figure> {
    match id {
        "1" => forbidden_structures(),
        "2" => type_abc(),
        "3" => canonical_cover(),
        "4" => canonical_cases(),
        "5a" => merging_cycle(),
        "5" | "5b" => core_triangle(),
        "6" => gluing_path(),
        "7" => nice_cycle(),
        "8" => reachable_sets(),
        "9" => merged_bridge_paths(),
        _ => Err(Error::BadSpec(format!("no figure fixture `{id}`"))),
    }
}

/// A 5/4-contractible 5-cycle on 3, 4, 6, 7, 5; a non-isolating cut {1, 2};
/// an isolating cut {8, 10}; the irrelevant edge 1-2. Node 3 is `u`, node 6 is `v`.
fn forbidden_structures() -> Result<Figure> {
    let names = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"];
    let mut e = cycle(&["3", "4", "6", "7", "5"]);
    e.extend([("3", "7"), ("7", "4"), ("5", "2"), ("5", "1"), ("7", "2"), ("4", "1"), ("6", "5"), ("2", "1")]);
    e.extend([("10", "9"), ("9", "8"), ("8", "1"), ("1", "11"), ("11", "10"), ("10", "2"), ("2", "8"), ("8", "11")]);
    build("1", &names, &e, &[], false)
}

/// Subgraphs of type A, B and C on the side x, y, z of the cut {u, v}.
fn type_abc() -> Result<Figure> {
    let names = ["1", "2", "3", "5", "x", "y", "u", "v", "z"];
    let e = [
        ("u", "2"), ("v", "5"), ("v", "3"), ("u", "3"), ("5", "1"), ("1", "2"), ("1", "3"), ("2", "3"),
        ("u", "z"), ("x", "y"), ("z", "x"), ("y", "v"), ("z", "y"), ("z", "v"),
    ];
    build("2", &names, &e, &[], false)
}

/// A canonical cover: red leaf block lb1..lb6, brown inner block, a lonely
/// path through `u` = l1, and 2EC components of several sizes.
fn canonical_cover() -> Result<Figure> {
    let names = [
        "1", "2", "3", "a4", "a5", "a6", "4", "5", "7", "8", "9", "10", "11", "12", "13", "14", "15", "16", "l1", "l2",
        "l3", "18", "19", "20", "lb1", "lb2", "lb3", "lb4", "lb5", "lb6", "c1", "c2", "c3", "c4", "c5",
    ];
    let mut s = cycle(&["3", "a4", "a5", "a6"]);
    s.extend(cycle(&["c1", "c2", "c3", "c4", "c5"]));
    s.extend(cycle(&["lb1", "lb2", "lb3", "lb4", "lb5", "lb6"]));
    s.extend([("lb1", "4"), ("8", "l3"), ("l3", "l2"), ("l2", "l1"), ("l1", "9")]);
    s.extend([("9", "10"), ("10", "12"), ("12", "16"), ("16", "11"), ("11", "9")]);
    s.extend([("11", "13"), ("13", "14"), ("14", "15"), ("15", "12")]);
    s.extend(cycle(&["1", "2", "3"]));
    s.extend(cycle(&["4", "7", "8", "5"]));
    s.extend(cycle(&["18", "19", "20"]));
    build("3", &names, &s, &[("a5", "l3"), ("lb6", "2")], true)
}

/// (a) A bowtie on v1, v2, u, v3, v4 next to a triangle holding `w`.
/// (b) A K_{2,3} on v1, v2 | w1, w2, w3 next to a 4-cycle holding `u`.
fn canonical_cases() -> Result<Figure> {
    let names = ["a1", "a2", "w", "v1", "v2", "u", "v3", "v4", "c1", "c2", "c3", "cu", "w1", "w2", "w3", "k1", "k2"];
    let mut s = cycle(&["w", "a1", "a2"]);
    s.extend([("u", "v1"), ("v1", "v2"), ("v2", "u"), ("u", "v3"), ("v3", "v4"), ("v4", "u")]);
    s.extend(cycle(&["c1", "c2", "c3", "cu"]));
    s.extend([("k1", "w1"), ("w1", "k2"), ("k2", "w2"), ("w2", "k1"), ("k1", "w3"), ("w3", "k2")]);
    build("4", &names, &s, &[("w", "v1"), ("v1", "v3"), ("cu", "w1"), ("w1", "w2")], true)
}

/// A merging cycle through the triangle T (with chord uv), the brown
/// 4-cycle and the large component, via the lonely node 17.
fn merging_cycle() -> Result<Figure> {
    let names = ["1", "v", "u", "4", "5", "7", "8", "9", "10", "11", "12", "13", "14", "15", "16", "17", "18", "19", "20", "21"];
    let mut s = cycle(&["9", "10", "12", "16", "11"]);
    s.extend([("11", "13"), ("13", "14"), ("14", "15"), ("15", "12")]);
    s.extend(cycle(&["v", "1", "u"]));
    s.extend(cycle(&["5", "4", "7", "8"]));
    s.extend(cycle(&["18", "19", "20"]));
    build("5a", &names, &s, &[("u", "17"), ("17", "14"), ("11", "8"), ("4", "v")], true)
}

/// A core-triangle cover: the core on a0, a2..a7 and three triangles
/// T1 = {u, v, a14}, T2 = {a8, a11, a12}, T3 = {a9, a10, a13}. The drawing
/// has no node a1, so the graph has sixteen nodes. `x` = a5 and `y` = a3.
fn core_triangle() -> Result<Figure> {
    let names = ["a0", "a2", "y", "a4", "x", "a6", "a7", "a8", "a9", "a10", "a11", "a12", "a13", "a14", "v", "u"];
    let mut s = vec![("v", "a14"), ("u", "v"), ("u", "a14"), ("a11", "a8"), ("a8", "a12"), ("a11", "a12")];
    s.extend([("a9", "a10"), ("a10", "a13"), ("a9", "a13")]);
    s.extend([("a0", "a4"), ("a4", "x"), ("x", "a6"), ("a6", "a7"), ("a7", "a0"), ("a0", "y"), ("y", "a2"), ("a2", "a0")]);
    let dashed = [
        ("u", "x"), ("x", "a14"), ("a14", "a4"), ("a4", "a6"), ("a6", "a9"), ("a13", "x"), ("x", "a7"), ("a7", "a8"),
        ("a8", "a0"), ("v", "y"), ("a11", "a2"), ("a10", "a7"), ("y", "a12"),
    ];
    build("5b", &names, &s, &dashed, true)
}

/// Components C0..C4 (triangle, 5-cycle, triangle, two 4-cycles) chained by
/// e1..e4, with three candidate closing edges back into C0.
fn gluing_path() -> Result<Figure> {
    let names = ["a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5", "c1", "c2", "c3", "d1", "d2", "d3", "d4", "e1", "e2", "e3", "e4"];
    let mut s = cycle(&["a1", "a2", "a3"]);
    s.extend(cycle(&["b1", "b2", "b3", "b4", "b5"]));
    s.extend(cycle(&["c1", "c2", "c3"]));
    s.extend(cycle(&["d1", "d2", "d3", "d4"]));
    s.extend(cycle(&["e1", "e2", "e3", "e4"]));
    let dashed = [("a3", "b1"), ("b3", "c1"), ("c3", "d1"), ("d4", "e1"), ("e4", "a2"), ("e1", "a3"), ("e4", "a3")];
    build("6", &names, &s, &dashed, true)
}

/// Cover components in several trees of the auxiliary forest, with the
/// dashed edges of a nice cycle and of earlier merging cycles.
fn nice_cycle() -> Result<Figure> {
    let names = [
        "u", "v", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "20", "21", "22", "23", "24",
    ];
    let mut s = cycle(&["1", "2", "v"]);
    s.extend(cycle(&["3", "4", "5", "6", "7"]));
    s.extend(cycle(&["11", "12", "13", "14"]));
    s.extend(cycle(&["8", "9", "10"]));
    s.extend(cycle(&["20", "21", "22", "23"]));
    let dashed = [("u", "v"), ("u", "2"), ("2", "6"), ("1", "3"), ("1", "24"), ("24", "10"), ("8", "14"), ("12", "u")];
    build("7", &names, &s, &dashed, true)
}

/// A component with a hexagon block, a lonely node x, a 4-node block and a
/// leaf block, plus a red 4-cycle and a blue triangle as other components.
fn reachable_sets() -> Result<Figure> {
    let names = [
        "u1", "u2", "u3", "u4", "u5", "u6", "x", "y", "y'", "z", "z'", "w1", "w2", "a1", "a2", "a3", "a4", "a5", "a6", "r1",
        "r2", "r3", "r4", "s1", "s2", "s3",
    ];
    let mut s = cycle(&["u1", "u2", "u3", "u4", "u5", "u6"]);
    s.extend([("u1", "x"), ("x", "y"), ("y", "z'"), ("z'", "y'"), ("y'", "w1"), ("w1", "w2"), ("w2", "a1")]);
    s.extend([("a1", "a4"), ("a4", "a3"), ("a3", "a2"), ("a2", "a1"), ("a1", "a5"), ("a5", "a6"), ("a6", "a3")]);
    s.extend([("y", "z"), ("z", "y'")]);
    s.extend(cycle(&["r1", "r2", "r3", "r4"]));
    s.extend(cycle(&["s1", "s2", "s3"]));
    let dashed = [("r1", "w1"), ("r3", "w2"), ("x", "r1"), ("r1", "u2"), ("u2", "r4"), ("s2", "a5")];
    build("8", &names, &s, &dashed, true)
}

/// The bridge tree b - u1 - u2 - u3 - u4 - u5 with b'' hanging at u2 and b'
/// at u3, every block a triangle. The red path leaves b through the other
/// components C2 and C1 and enters u3; the green edge joins b' to u1.
fn merged_bridge_paths() -> Result<Figure> {
    let names = [
        "b", "b.1", "b.2", "u1", "u2", "u3", "u4", "u5", "u5.1", "u5.2", "b''", "b''.1", "b''.2", "b'", "b'.1", "b'.2",
        "c1", "c1.1", "c1.2", "c2", "c2.1", "c2.2",
    ];
    let mut s = Vec::new();
    for t in [["b", "b.1", "b.2"], ["u5", "u5.1", "u5.2"], ["b''", "b''.1", "b''.2"], ["b'", "b'.1", "b'.2"], ["c1", "c1.1", "c1.2"], ["c2", "c2.1", "c2.2"]] {
        s.extend(cycle(&t));
    }
    s.extend([("b", "u1"), ("u1", "u2"), ("u2", "u3"), ("u3", "u4"), ("u4", "u5"), ("u2", "b''"), ("u3", "b'")]);
    let dashed = [("b.1", "c2"), ("c2.1", "c1"), ("c1.1", "u3"), ("b'.1", "u1")];
    build("9", &names, &s, &dashed, true)
}
