//! Exact decision procedures for random-walk symmetry properties of finite
//! simple graphs.
//!
//! The crate answers questions of the form "does a simple random walk on this
//! graph look the same from every vertex?" with exact rational arithmetic:
//!
//! * [`walks`] counts closed walks and return probabilities, decides
//!   walk-regularity, and runs seeded Monte Carlo walk simulations.
//! * [`electrical`] computes hitting times, effective resistances, the
//!   degree- and stationary-weighted resistance invariants, and decides
//!   whether all pairwise hitting times are symmetric.
//! * [`symmetry`] produces canonical labelings, automorphism orbits,
//!   vertex-transitivity, and distance-regularity certificates.
//! * [`graph`] holds the bitset graph type, graph6 round-tripping, standard
//!   families, and exhaustive enumeration of small connected graphs.
//! * [`scanner`] classifies whole corpora and tabulates where the properties
//!   separate.
//!
//! All decision procedures are exact: probabilities, hitting times, and
//! resistances are `BigRational` values, never floats. The only floating
//! point outputs are the spectral gap estimate and Monte Carlo summaries,
//! which are labeled as estimates.

pub mod electrical;
pub mod graph;
pub mod linalg;
pub mod scanner;
pub mod symmetry;
pub mod walks;

pub use graph::Graph;
pub use linalg::Rational;
