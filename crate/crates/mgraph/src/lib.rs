//! Multiplication graphs on finite abelian groups.
//!
//! For a finite abelian group `H` (written additively) and an integer
//! multiplier `m >= 2`, the *m-graph* of `H` has the group elements as
//! vertices, with an undirected edge between distinct `a` and `b` whenever
//! `m * a = b` or `m * b = a`. Self-loops are dropped and parallel edges are
//! stored once.
//!
//! The crate provides:
//!
//! * explicit graph construction with a brute-force structural report
//!   (connectivity, degrees, bipartiteness, tree check, diameter) in
//!   [`graph`];
//! * closed-form predictions for the same quantities in [`closed_form`],
//!   derived from the arithmetic of the multiplier and the group's
//!   invariant factors;
//! * explicit vertex bijections between isomorphic multiplication graphs
//!   in [`iso`];
//! * canonical tree encodings and tree-isomorphism tooling in [`tree`];
//! * search routines that realize a given tree as a multiplication graph,
//!   plus direct constructions for common families, in [`realize`];
//! * a check registry and sweep driver that compares every closed form
//!   against the brute-force report over ranges of groups in [`verify`].
//!
//! Every closed form in this crate is testable against the explicit graph;
//! the sweep driver in [`verify`] is the supported way to do that at scale.

pub mod closed_form;
pub mod error;
pub mod graph;
pub mod group;
pub mod iso;
pub mod realize;
pub mod tree;
pub mod verify;

pub use closed_form::{
    count_connected_variants, least_power_w, predict_connected, predict_degree,
    predict_degree_census, predict_diameter_cyclic, predict_diameter_cyclic_qk,
    predict_diameter_product, predict_distance_to_zero, DegreeCensus, DiameterCase,
    DiameterPrediction, DiameterWitnesses,
};
pub use error::{Error, Result};
pub use graph::{
    build_mgraph, build_mgraph_with_limit, AdjGraph, Distance, GraphReport, MGraph,
    DEFAULT_VERTEX_LIMIT,
};
pub use group::{
    invariant_chains_of_order, invariant_factors, solve_scalar_equation, CongruenceSolution,
    GroupElement, GroupSpec,
};
pub use iso::{
    build_product_graph, iso_map_cyclic, iso_map_cyclic_detailed, iso_map_product,
    verify_graph_isomorphism, IsoConstruction, VertexBijection,
};
pub use realize::{
    check_notree_obstruction, construct_for_diameter, construct_tree1, construct_tree2,
    realize_tree, realize_tree_with_limit, Realization, REALIZE_DEFAULT_VERTEX_LIMIT,
};
pub use tree::{
    ahu_encode, ahu_encode_graph, graph_to_tree, tree_mapping, CanonicalTreeCode, TreeSpec,
};
pub use verify::{
    checks_by_name, configure_worker_threads, configure_worker_threads_from_env, registry,
    run_case, run_cyclic_sweep, run_product_sweep, Comparison, Discrepancy, Row, SweepResult,
    TheoremCheck,
};
