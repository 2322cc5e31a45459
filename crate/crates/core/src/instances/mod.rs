//! Deterministic instance families and the figure fixtures.

mod figures;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use figures::{complete_to_2ec, figure, Figure, FIGURE_IDS};

use crate::error::{Error, Result};
use crate::graph_core::{is_two_edge_connected, Graph, Vertex};

/// Seed used when a spec names none and `TWOEC_SEED` is unset.
pub const DEFAULT_SEED: u64 = 1;

/// `TWOEC_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("TWOEC_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    Cycle { n: usize },
    Complete { n: usize },
    /// Two `n`-cycles joined by a perfect matching.
    Prism { n: usize },
    Petersen,
    Random2ec { n: usize, extra_edges: usize },
    /// A random 2EC core with `k` triangles, each joined to the core by two edges.
    TriangleRich { k: usize, core_n: usize },
    PaperFigure { id: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family) -> Self {
        InstanceSpec { family, seed: default_seed() }
    }

    /// A file-name friendly identifier.
    pub fn id(&self) -> String {
        self.to_string().replace([':', ','], "_")
    }
}

impl fmt::Display for InstanceSpec {
    /// The textual form accepted by [`InstanceSpec::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Cycle { n } => write!(f, "cycle:{n}"),
            Family::Complete { n } => write!(f, "complete:{n}"),
            Family::Prism { n } => write!(f, "prism:{n}"),
            Family::Petersen => write!(f, "petersen"),
            Family::Random2ec { n, extra_edges } => write!(f, "random_2ec:{n},{extra_edges},{}", self.seed),
            Family::TriangleRich { k, core_n } => write!(f, "triangle_rich:{k},{core_n},{}", self.seed),
            Family::PaperFigure { id } => write!(f, "paper_figure:{id}"),
        }
    }
}

impl FromStr for InstanceSpec {
    type Err = Error;

    /// Parses `cycle:7`, `complete:5`, `prism:4`, `petersen`,
    /// `random_2ec:n,extra[,seed]`, `triangle_rich:k,core_n[,seed]` and
    /// `paper_figure:5b` (or `fig:5b`).
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::BadSpec(format!("cannot parse instance spec `{text}`"));
        let (name, args) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
        let nums: Vec<u64> = if args.is_empty() || matches!(name, "paper_figure" | "fig") {
            Vec::new()
        } else {
            args.split(',').map(|a| a.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let arity = |lo: usize, hi: usize| if (lo..=hi).contains(&nums.len()) { Ok(()) } else { Err(bad()) };
        let seed = |i: usize| nums.get(i).copied().unwrap_or_else(default_seed);
        let family = match name {
            "cycle" => arity(1, 1).map(|_| Family::Cycle { n: nums[0] as usize })?,
            "complete" => arity(1, 1).map(|_| Family::Complete { n: nums[0] as usize })?,
            "prism" => arity(1, 1).map(|_| Family::Prism { n: nums[0] as usize })?,
            "petersen" => arity(0, 0).map(|_| Family::Petersen)?,
            "random_2ec" => arity(2, 3).map(|_| Family::Random2ec { n: nums[0] as usize, extra_edges: nums[1] as usize })?,
            "triangle_rich" => arity(2, 3).map(|_| Family::TriangleRich { k: nums[0] as usize, core_n: nums[1] as usize })?,
            "paper_figure" | "fig" if !args.is_empty() => Family::PaperFigure { id: args.trim().to_string() },
            _ => return Err(bad()),
        };
        Ok(InstanceSpec { family, seed: seed(2) })
    }
}

fn cycle_edges(vs: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    (0..vs.len()).map(|i| (vs[i], vs[(i + 1) % vs.len()])).collect()
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::BadSpec(msg.to_string()))
    }
}

/// Random simple 2EC graph built from a cycle by open ears, then
/// `extra_edges` chords (fewer when the graph fills up).
fn random_ears(n: usize, extra_edges: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let first = rng.gen_range(3..=n);
    let mut edges = cycle_edges(&(0..first).collect::<Vec<_>>());
    let mut next = first;
    while next < n {
        let inner = rng.gen_range(1..=(n - next).min(4));
        let u = rng.gen_range(0..next);
        let mut v = rng.gen_range(0..next - 1);
        if v >= u {
            v += 1;
        }
        let mut path = vec![u];
        path.extend(next..next + inner);
        path.push(v);
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        next += inner;
    }
    let mut absent: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)))
        .collect();
    absent.shuffle(rng);
    edges.extend(absent.into_iter().take(extra_edges));
    edges
}

pub fn generate(spec: &InstanceSpec) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = match &spec.family {
        &Family::Cycle { n } => {
            need(n >= 3, "a cycle needs at least 3 nodes")?;
            Graph::simple(n, &cycle_edges(&(0..n).collect::<Vec<_>>()))?
        }
        &Family::Complete { n } => {
            need(n >= 3, "a complete graph needs at least 3 nodes")?;
            let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            Graph::simple(n, &e)?
        }
        &Family::Prism { n } => {
            need(n >= 3, "a prism needs cycles of at least 3 nodes")?;
            let mut e = cycle_edges(&(0..n).collect::<Vec<_>>());
            e.extend(cycle_edges(&(n..2 * n).collect::<Vec<_>>()));
            e.extend((0..n).map(|i| (i, n + i)));
            Graph::simple(2 * n, &e)?
        }
        Family::Petersen => {
            let mut e = cycle_edges(&[0, 1, 2, 3, 4]);
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
            Graph::simple(10, &e)?
        }
        &Family::Random2ec { n, extra_edges } => {
            need(n >= 3, "a random 2EC graph needs at least 3 nodes")?;
            Graph::simple(n, &random_ears(n, extra_edges, &mut rng))?
        }
        &Family::TriangleRich { k, core_n } => {
            need(core_n >= 3, "the core needs at least 3 nodes")?;
            let mut e = random_ears(core_n, core_n / 2, &mut rng);
            for i in 0..k {
                let t = core_n + 3 * i;
                e.extend(cycle_edges(&[t, t + 1, t + 2]));
                let a = rng.gen_range(0..core_n);
                let mut b = rng.gen_range(0..core_n - 1);
                if b >= a {
                    b += 1;
                }
                let first = rng.gen_range(0..3);
                e.push((t + first, a));
                e.push((t + (first + 1 + rng.gen_range(0..2)) % 3, b));
            }
            Graph::simple(core_n + 3 * k, &e)?
        }
        Family::PaperFigure { id } => figure(id)?.graph,
    };
    if !is_two_edge_connected(&g, &g.all_edges()) {
        return Err(Error::NotTwoEc(format!("generated instance {spec}")));
    }
    Ok(g)
}
