//! Load thresholds for k-ary cuckoo hashing.
//!
//! The analytic side ([`thresholds`]) solves the Poisson fixed-point
//! equations for the density of the ℓ-core of a random k-uniform
//! hypergraph and locates the load `c_{k,ℓ}` at which that density reaches
//! ℓ−1, for fixed and mixed numbers of choices per key. The empirical side
//! samples random hypergraphs ([`hypergraph`]), peels their cores, orients
//! them with the generalized selfless heuristic or an exact matching
//! ([`orientation`]), solves the associated random XORSAT systems
//! ([`xorsat`]), and sweeps load factors to fit the observed transition
//! ([`experiments`]).

// Argument guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod orientation;
pub mod rng;
pub mod thresholds;
pub mod xorsat;

pub use error::{Error, Result};
pub use experiments::{
    fit_sigmoid, run_sweep, sigmoid, Degrees, Method, SigmoidFit, SweepConfig, SweepRecord,
};
pub use hypergraph::{peel, sample_mixed, sample_regular, CoreStats, Hypergraph, Peeled};
pub use orientation::{matching_orient, selfless_orient, verify, Orientation, Status};
pub use thresholds::{
    beta_of_c, core_appearance, g, mixed_fixed_point, mixed_threshold, optimal_distribution,
    orientation_threshold, poisson_tail, predict_core, CorePrediction, DegreeSpec, ThresholdResult,
};
pub use xorsat::{from_hypergraph, rank_and_solve, Gf2System, Solution};
