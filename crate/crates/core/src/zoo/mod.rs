//! Exact constructions of known states as hidden-unit models, and conversions
//! between representations.

mod convert;
mod graph;
mod lattice;
mod number;
mod topo;

pub use convert::{cpd_to_two_layer, nqs_to_mps, universal_nqs, DEFAULT_MPS_BOND_CAP, DEFAULT_SUPPRESSION};
pub use graph::{build_graph_state_nqs, build_weighted_graph_superposition, Graph};
pub use lattice::{SectorLabel, TorusLattice};
pub use number::{
    build_laughlin_nqs, build_uniform_number_nqs, build_uniform_number_nqs_with, build_w_state_nqs,
    DEFAULT_CANCELLATION_A,
};
pub use topo::{
    build_dimer_nqs, build_fpl_nqs, build_rvb_deep_nqs, build_rvb_deep_nqs_oriented, build_toric_code_nqs,
    build_toric_code_nqs_with_paths,
};
