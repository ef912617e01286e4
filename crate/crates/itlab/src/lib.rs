//! Independent transversals in partitioned graphs and hypergraphs.
//!
//! The crate has four layers:
//!
//! * [`hypergraph`] / [`io`] — the data model (partitioned r-uniform
//!   hypergraphs, transversals, degree statistics) and its file formats;
//! * [`constructions`] — generators for extremal instances with no
//!   independent transversal: bipartite hosts, neighbourhood incidence
//!   graphs, projective-plane and norm-graph hosts, random hosts, padding
//!   to exact (n,k,r,s)-graphs;
//! * [`solvers`] — exact backtracking, a greedy baseline, Moser–Tardos
//!   style LLL sampling, the semi-random nibble, and the reductions
//!   (max-degree trim, local-degree sparsification, clique-free
//!   transversals, the list-colouring bridge);
//! * [`analysis`] — bound calculators, censuses that certify constructions,
//!   nibble trajectory diagnostics and the Monte-Carlo experiment harness.
//!
//! The `itlab` binary wires these together; see [`cli`].

pub mod analysis;
pub mod cli;
pub mod combi;
pub mod constructions;
pub mod hypergraph;
pub mod io;
pub mod rng;
pub mod solvers;

pub use hypergraph::{PartitionedHypergraph, Transversal, VertexId};
