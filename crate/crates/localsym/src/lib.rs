//! Graph symmetry analysis at every scale between a vertex's immediate
//! neighborhood and the whole graph.
//!
//! The library answers three families of questions about simple undirected
//! graphs:
//!
//! - symmetry: are two vertices interchangeable within their closed
//!   k-neighborhoods (k-local symmetry) or under a full automorphism
//!   (global symmetry)? Which vertices form symmetry classes?
//! - degree metrics: how far apart are two graphs' degree histograms
//!   (DSED), and how does that distance relate to optimal partial vertex
//!   matchings?
//! - random models: seeded G(n,p) and G(n,m) generators plus a Monte Carlo
//!   harness that estimates symmetry probabilities across parameter grids,
//!   with per-sample reproducible streams and CSV output.
//!
//! Symmetry queries reduce to canonical codes of rooted graphs, computed by
//! individualization-refinement with a node budget; budget exhaustion
//! surfaces as an explicit undecided result, never a wrong answer.

pub mod canonical;
pub mod config;
pub mod degree;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod random;
pub mod symmetry;

pub use canonical::{canonical_code, rooted_isomorphic, BudgetExceeded, CanonicalCode, RootedGraph};
pub use graph::{Diameter, Graph, InducedSubgraph, Vertex, VertexSet};
pub use symmetry::{
    egonet, graph_globally_symmetric, graph_k_locally_symmetric, globally_symmetric_pair,
    k_locally_symmetric, symmetry_partition, Locality, PairVerdict, QueryOpts,
    SymmetryClassPartition, SymmetryVerdict,
};
