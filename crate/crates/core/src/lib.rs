//! Graph rewriting with PBPO+ over lattice-labeled multigraphs.
//!
//! Graphs carry labels from a finite lattice; morphisms may only raise
//! labels. On top of pullbacks and pushouts the crate provides the two toy
//! engines, full PBPO+ steps with matching and normalization, and BDD
//! reduction expressed as PBPO+ rules.

pub mod lattice;
pub mod graph;
mod search;
pub mod limits;
pub mod matching;
pub mod rewrite;
pub mod bdd;
pub mod io;
pub mod dot;

pub use bdd::{
    build_decision_tree, evaluate, is_reduced, oracle_reduce, reduce_bdd, validate_bdd, Bdd, BddError, TruthTable,
};
pub use dot::{emit_graph_dot, emit_trace_dot};
pub use io::{parse_workspace, IoError, Workspace};
pub use graph::{
    compose, disjoint_union, identity, is_isomorphic, validate_graph, validate_morphism, EdgeId, GraphError,
    GraphMorphism, LabeledGraph, NodeId,
};
pub use lattice::{validate_lattice, Label, Lattice, LatticeError, LatticeSpec};
pub use limits::{
    is_pullback_square, is_pushout_square, preimage, pullback, pushout, Cospan, LimitError, LimitResult,
    PullbackSquare, PushoutSquare, Span,
};
pub use matching::{check_strong_match, enumerate_homomorphisms, find_matches, Match, MatchError};
pub use rewrite::{
    complete_rule, normalize, pbpo_step, toypb_step, toypo_step, validate_rule, NormalizeStatus, PbpoRule, RSpec,
    RewriteError, RewriteTrace, ToyPbRule, ToyPoRule,
};
