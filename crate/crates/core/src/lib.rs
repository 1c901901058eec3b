//! Midpoint and Jensen gap functionals of convex functions, their global
//! bounds, weighted Hermite-Hadamard integral enclosures, and brute-force
//! oracles that check every inequality numerically.
//!
//! Batch work (grid scans, verification campaigns) runs on rayon when the
//! default `parallel` feature is enabled; see [`exec::Execution`].

pub mod bounds;
pub mod campaign;
pub mod cli;
pub mod domain;
pub mod error;
pub mod exec;
pub mod function;
pub mod gap;
pub mod harness;
pub mod quadrature;
pub mod report;
pub mod tolerance;

pub use bounds::{prop_z_check, t_opt, t_prime, BoundReport, PropZCheck};
pub use domain::{Interval, WeightPair, WeightVector};
pub use error::{Error, Result};
pub use exec::Execution;
pub use function::{Certificate, ConvexFunction, PiecewiseLinear, QuadHinge};
pub use gap::{
    chain4_bounds, chord_sum_check, jensen_functional, lemma1_check, midpoint_gap, weighted_gap, Chain,
    Lemma1Check,
};
pub use harness::{
    fstar_counterexample_search, generate_convex, grid_max_f, grid_max_fstar, ConvexGeneratorSpec,
    CounterexampleRecord, GridOracleResult,
};
pub use quadrature::{
    hh_recover, integrate, symmetric_convolution_enclosure, weighted_enclosure, Enclosure, Kernel,
    SineVariant,
};
pub use tolerance::Tolerance;
