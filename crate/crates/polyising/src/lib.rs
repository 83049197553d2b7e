//! Polynomial unconstrained binary optimization over spin variables:
//! sparse multilinear polynomials, five iterative solvers behind one
//! interface, random cubic benchmark instances, degree reduction to
//! quadratic form, a 2D lattice protein-folding encoding, and a benchmark
//! harness with hyperparameter tuning.
//!
//! Everything is deterministic: runs are pure functions of (input, config,
//! seed) via a counter-based seed-derivation scheme, so batch results are
//! independent of thread count and scheduling.

pub mod harness;
pub mod instances;
pub mod protein;
pub mod pubo;
pub mod reduction;
pub mod rng;
pub mod solvers;
