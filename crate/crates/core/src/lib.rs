//! Unique sink orientations of the hypercube and their phases.
//!
//! Vertices and outmaps are `u64` bitmasks with dimension 1 at bit 0. The
//! library indexes dimensions from 0 (`axis`); text formats and the CLI use
//! 1-based dimensions and print bit strings with dimension 1 first.

pub mod cli;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod orientation;
pub mod phases;
pub mod recognition;
pub mod reduction;
pub mod unionfind;

pub use constructions::{
    enumerate_usos, markov_step, partial_swap, replace_hypervertex, sample_uniform, schurr, uniform,
};
pub use cube::{faces, Edge, Face, N_MAX, ORACLE_N_MAX};
pub use error::{Error, Result};
pub use orientation::{flip, restrict, DenseOrientation, EdgeSet, OracleOrientation, Orientation};
pub use phases::{
    compute_phases_fast, compute_phases_naive, in_direct_phase, in_phase, is_flippable,
    PhasePartition,
};
pub use recognition::{is_uso_fast, is_uso_naive};
pub use reduction::{eval_qbf, parse_qbf, reduce_to_2ip, QbfInstance};
