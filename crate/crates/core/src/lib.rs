//! Asymmetric hypergraph containers and their application to counting sparse
//! induced-C4-free graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypergraph`] holds constraints `(A0, A1)`, `(k0, k1)`-uniform multi-hypergraphs
//!   and exact degree queries.
//! * [`container`] runs the container algorithm: the Δ schedule, single rounds,
//!   full container construction and the monotone wrapper.
//! * [`pregraph`] covers pregraphs `(M, E)`, good 4-cycles, the constraint
//!   hypergraphs and the permissible-hypergraph builder.
//! * [`split_counts`] counts split-like graphs exactly and in log space.
//! * [`oracle`] is brute-force ground truth: enumeration, recognisers and the
//!   deletion-method sampler.
//! * [`tree`] builds container trees over pregraphs and evaluates φ(m).
//! * [`experiment`] is configuration, seeding and artifact output shared by the
//!   `asymc` binary and the examples.

pub mod container;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod graph;
pub mod hypergraph;
pub mod oracle;
pub mod pregraph;
pub mod split_counts;
pub mod tree;

pub use error::{Error, Result};
pub use graph::LabeledGraph;
pub use hypergraph::{Assignment, Constraint, UniformHypergraph, VertexId};
