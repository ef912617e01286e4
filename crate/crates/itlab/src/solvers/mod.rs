//! Transversal solvers: exact search, greedy baseline, LLL sampling, the
//! semi-random nibble, and the reductions that feed them.

pub mod exact;
pub mod greedy;
pub mod listcolour;
pub mod lll;
pub mod nibble;
pub mod sparsify;

mod ktfree;

pub use exact::{count_transversals, exact_find, CountResult, ExactOutcome};
pub use greedy::greedy_find;
pub use ktfree::{kt_free_transversal, min_monochromatic_colouring, monochromatic_subgraph, KtFreeRun};
pub use listcolour::build_vertex_colour_graph;
pub use lll::{lll_sample, LllRun};
pub use nibble::{
    max_degree_trim, nibble_solve, CompletionKind, NibbleConfig, NibbleRun, NibbleState,
    TrimResult,
};
pub use sparsify::sparsify_local_degree;

use thiserror::Error;

use crate::hypergraph::StatsError;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver requires a graph (r = 2), got r = {0}")]
    GraphsOnly(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("part {part} has {size} vertices, needs at least {needed:.3}")]
    PartTooSmall {
        part: usize,
        size: usize,
        needed: f64,
    },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("trim postcondition failed: {0}")]
    TrimPostcondition(String),
    #[error("sparsification retries exhausted: {0}")]
    SparsifyExhausted(String),
    #[error("empty colour list for base vertex {0}")]
    EmptyList(usize),
    #[error(transparent)]
    Stats(StatsError),
}
