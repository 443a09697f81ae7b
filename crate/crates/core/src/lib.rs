//! Exact moments of multiple Wigner (free) and Wiener (classical) stochastic
//! integrals over discretized kernels.
//!
//! The library has three legs that check each other:
//!
//! * [`pairings`] — exact enumeration of perfect matchings, noncrossing
//!   pairings, respectful pairings relative to interval partitions, and the
//!   bijection with contraction words;
//! * [`kernel`] / [`moments`] / [`malliavin`] — a dense kernel algebra on a
//!   uniform grid (adjoints, contractions, inner products) feeding a moment
//!   engine that sums pairing integrals, plus kernel-level Malliavin
//!   operators and the quantitative semicircle-distance bound for double
//!   integrals;
//! * [`matrixsim`] — Hermitian matrix Brownian motion as a Monte Carlo
//!   approximation of free Brownian motion, an independent statistical oracle
//!   for the combinatorial results.

pub mod chaos;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod kernel_io;
pub mod malliavin;
pub mod matrixsim;
pub mod moments;
pub mod numeric;
pub mod pairings;

pub use chaos::ChaosElement;
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use kernel::{Kernel, Symmetry};
pub use malliavin::{
    clark_ocone, clark_ocone_reconstruct, distance_bound_order2, equivalence_norms_order2,
    fourth_moment_gap, gradient, DistanceBoundReport, EquivalenceNorms, GradientKernels,
};
pub use matrixsim::{
    empirical_moments, empirical_operator_norm, empirical_summary, matrix_wigner_integral,
    sample_path, CMatrix, MatrixPath, MomentEstimate, SampleSummary, SimConfig,
};
pub use moments::{
    chebyshev_u, pairing_integral, product_expand, semicircle_moment, wiener_mixed_moment,
    wiener_mixed_moment_with_cap, wigner_mixed_moment, wigner_mixed_moment_with_cap, MomentEngine,
    MomentReport,
};
pub use pairings::{
    catalan, compose, connected_components, decompose, enumerate_all_pairings, enumerate_nc2,
    enumerate_nc2_respecting, respects, ContractionWord, IntervalPartition, LinkGraph, Pairing,
};

pub use num_complex::Complex64;
