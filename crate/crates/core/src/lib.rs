//! Approximation algorithms for the minimum 2-edge-connected spanning
//! subgraph problem, with exact oracles and the verification machinery the
//! solvers assert against.

pub mod error;
pub mod few_triangles;
pub mod graph_core;
pub mod instances;
pub mod io;
pub mod many_triangles;
pub mod cover;
pub mod credit;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod serde_rational;

pub use error::{Error, Result};
pub use graph_core::{EdgeId, EdgeSet, Graph, Vertex};

/// Exact rational used for credits, costs and ratios.
pub type Rational = num_rational::Ratio<i64>;

/// The book chapters, compiled as doctests so their examples stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/getting_started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/envelope.md")]
    mod envelope {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
