//! Chamfer distance under translation.
//!
//! For finite point sets A and B, `CD(A, B) = Σ_{a∈A} min_{b∈B} d(a, b)` and
//! the translation-invariant version minimises `CD(A + t, B)` over all
//! translations `t`. This crate provides exact solvers for one dimension and
//! for ℓ1/ℓ∞ in low dimension, sampled approximation algorithms, a decision
//! procedure for well-separated inputs, hardness gadgets, and brute-force
//! oracles used to audit all of the above.

pub mod ann;
pub mod approx;
pub mod chamfer;
pub mod decision;
pub mod error;
pub mod gadgets;
pub mod index;
pub mod localnet;
pub mod metric;
pub mod oracle;
pub mod point_set;
pub mod rng;
pub mod sweep1d;

pub use ann::{AnnAnswer, LadderConfig, ScaleLadder};
pub use approx::{cdut_approx_v1, cdut_approx_v1_with, cdut_approx_v2, ApproxConfig, ChamferEstimator};
pub use chamfer::{chamfer, chamfer_translated, Algorithm, ChamferReport};
pub use decision::{
    check_separation, decide_cdut, geometric_median, verify_emd_equivalence, Answer,
    DecisionConfig, DecisionOutcome, DifferenceSet, MedianResult, SeparationCertificate,
};
pub use error::{Error, Result};
pub use gadgets::{combine_gadgets, gadget_a, gadget_b, BitVector, GadgetInstance};
pub use index::{Backend, NearestIndex, Neighbor};
pub use localnet::{build_net, cdut_localnet, cdut_localnet_union, LocalNetConfig, NetSpec};
pub use metric::Metric;
pub use oracle::{oracle_cdut_1d, oracle_cdut_grid, GridSearchSpec};
pub use point_set::PointSet;
pub use sweep1d::{cdut_exact_1d, cdut_exact_l1_linf};
