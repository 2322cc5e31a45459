use super::connectivity::{components, low_link};
use super::{EdgeId, EdgeSet, Graph, Vertex};
use crate::error::{Error, Result};

/// Size class of a 2EC component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeClass {
    Triangle,
    Cycle4,
    Cycle5,
    Cycle6,
    /// At least seven edges.
    Large,
    /// Fewer than seven edges but not a cycle (bowtie, K_{2,3}, ...).
    Irregular,
}

impl SizeClass {
    pub fn of(g: &Graph, nodes: &[Vertex], edges: &EdgeSet) -> SizeClass {
        if edges.len() >= 7 {
            return SizeClass::Large;
        }
        let deg = g.degrees_in(edges);
        let is_cycle = edges.len() == nodes.len() && nodes.iter().all(|&v| deg[v] == 2);
        match (is_cycle, nodes.len()) {
            (true, 3) => SizeClass::Triangle,
            (true, 4) => SizeClass::Cycle4,
            (true, 5) => SizeClass::Cycle5,
            (true, 6) => SizeClass::Cycle6,
            _ => SizeClass::Irregular,
        }
    }

    /// Length of the cycle for the four cycle classes.
    pub fn cycle_len(self) -> Option<usize> {
        match self {
            SizeClass::Triangle => Some(3),
            SizeClass::Cycle4 => Some(4),
            SizeClass::Cycle5 => Some(5),
            SizeClass::Cycle6 => Some(6),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentShape {
    /// A single vertex with no edges.
    Singleton,
    TwoEc(SizeClass),
    /// Connected but with at least one bridge.
    Bridged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<Vertex>,
    pub edges: EdgeSet,
    pub shape: ComponentShape,
    /// Indices into `CoverDecomposition::blocks` (bridged components only).
    pub blocks: Vec<usize>,
    pub bridges: Vec<EdgeId>,
    pub lonely: Vec<Vertex>,
}

impl Component {
    pub fn is_two_ec(&self) -> bool {
        matches!(self.shape, ComponentShape::TwoEc(_))
    }

    pub fn class(&self) -> Option<SizeClass> {
        match self.shape {
            ComponentShape::TwoEc(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub component: usize,
    pub nodes: Vec<Vertex>,
    pub edges: EdgeSet,
    /// Number of bridges with an endpoint in the block.
    pub bridge_degree: usize,
}

impl Block {
    pub fn is_leaf(&self) -> bool {
        self.bridge_degree == 1
    }
}

/// An edge set split into connected components, and each non-2EC component
/// further split into blocks, bridges and lonely vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverDecomposition {
    pub components: Vec<Component>,
    pub blocks: Vec<Block>,
    pub bridges: EdgeSet,
    pub lonely_nodes: Vec<Vertex>,
    /// Component index of every vertex.
    pub comp_of: Vec<usize>,
    /// Block index of every vertex that lies in a block.
    pub block_of: Vec<Option<usize>>,
}

impl CoverDecomposition {
    pub fn two_ec_count(&self) -> usize {
        self.components.iter().filter(|c| c.is_two_ec()).count()
    }

    pub fn is_all_two_ec(&self) -> bool {
        self.components.iter().all(|c| !matches!(c.shape, ComponentShape::Bridged))
    }
}

/// Decompose an arbitrary edge set; components are ordered by smallest vertex.
pub fn decompose(g: &Graph, s: &EdgeSet) -> CoverDecomposition {
    let n = g.n();
    let adj = g.adjacency_of(s);
    let (comp_of, count) = components(&adj);
    let ll = low_link(&adj);
    let bridges: EdgeSet = ll.bridges.iter().copied().collect();
    let (class_of, class_count) = components(&g.adjacency_of(&s.minus(&bridges)));

    let mut comp_nodes = vec![Vec::new(); count];
    for v in 0..n {
        comp_nodes[comp_of[v]].push(v);
    }
    let mut comp_edges = vec![EdgeSet::new(); count];
    for &e in s.iter() {
        comp_edges[comp_of[g.ends(e).0]].insert(e);
    }
    let mut class_nodes = vec![Vec::new(); class_count];
    for v in 0..n {
        class_nodes[class_of[v]].push(v);
    }
    let mut class_bridge_deg = vec![0usize; class_count];
    for &e in bridges.iter() {
        let (u, v) = g.ends(e);
        class_bridge_deg[class_of[u]] += 1;
        class_bridge_deg[class_of[v]] += 1;
    }

    let mut components_out = Vec::with_capacity(count);
    let mut blocks = Vec::new();
    let mut block_of = vec![None; n];
    let mut lonely_nodes = Vec::new();
    let mut class_block = vec![usize::MAX; class_count];
    for c in 0..count {
        let nodes = std::mem::take(&mut comp_nodes[c]);
        let edges = std::mem::take(&mut comp_edges[c]);
        let comp_bridges: Vec<EdgeId> = edges.iter().copied().filter(|e| bridges.contains(e)).collect();
        let mut comp = Component {
            shape: ComponentShape::Singleton,
            nodes,
            edges,
            blocks: Vec::new(),
            bridges: comp_bridges,
            lonely: Vec::new(),
        };
        if comp.nodes.len() == 1 {
            comp.shape = if comp.edges.is_empty() {
                ComponentShape::Singleton
            } else {
                ComponentShape::TwoEc(SizeClass::Irregular)
            };
        } else if comp.bridges.is_empty() {
            comp.shape = ComponentShape::TwoEc(SizeClass::of(g, &comp.nodes, &comp.edges));
        } else {
            comp.shape = ComponentShape::Bridged;
            for &v in &comp.nodes {
                let k = class_of[v];
                if class_nodes[k].len() == 1 {
                    comp.lonely.push(v);
                    lonely_nodes.push(v);
                } else {
                    if class_block[k] == usize::MAX {
                        class_block[k] = blocks.len();
                        comp.blocks.push(blocks.len());
                        let inside = super::mask(n, &class_nodes[k]);
                        let edges: EdgeSet = comp
                            .edges
                            .iter()
                            .copied()
                            .filter(|&e| {
                                let (a, b) = g.ends(e);
                                inside[a] && inside[b] && !bridges.contains(&e)
                            })
                            .collect();
                        blocks.push(Block {
                            component: c,
                            nodes: class_nodes[k].clone(),
                            edges,
                            bridge_degree: class_bridge_deg[k],
                        });
                    }
                    block_of[v] = Some(class_block[k]);
                }
            }
        }
        components_out.push(comp);
    }
    CoverDecomposition { components: components_out, blocks, bridges, lonely_nodes, comp_of, block_of }
}

/// Decompose a 2-edge-cover, rejecting edge sets that leave some vertex with degree < 2.
pub fn bridges_and_blocks(g: &Graph, cover: &EdgeSet) -> Result<CoverDecomposition> {
    let deg = g.degrees_in(cover);
    if let Some(v) = (0..g.n()).find(|&v| deg[v] < 2) {
        return Err(Error::NotACover(v));
    }
    Ok(decompose(g, cover))
}

/// Graph with one node per connected component of `(V, s)` and an edge
/// `C1C2` whenever `g` has an edge between the two components. Also returns
/// the component index of every vertex.
pub fn component_graph(g: &Graph, s: &EdgeSet) -> Result<(Graph, Vec<usize>)> {
    let d = decompose(g, s);
    if d.components.iter().any(|c| matches!(c.shape, ComponentShape::Bridged)) {
        return Err(Error::ComponentsNotTwoEc);
    }
    let k = d.components.len();
    let mut pairs = std::collections::BTreeSet::new();
    for e in g.edges() {
        let (u, v) = g.ends(e);
        let (a, b) = (d.comp_of[u], d.comp_of[v]);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let pairs: Vec<_> = pairs.into_iter().collect();
    Ok((Graph::simple(k, &pairs)?, d.comp_of))
}
