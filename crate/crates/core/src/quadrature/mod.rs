//! Adaptive quadrature, the kernel catalog and weighted Hermite-Hadamard
//! enclosures.

mod enclosure;
mod kernel;
mod simpson;

pub use enclosure::{
    hh_recover, reflected_function_integral, symmetric_convolution_enclosure, weighted_enclosure,
    weighted_enclosure_with, Enclosure, HhRecovery, DEFAULT_HH_POINTS, DOMAIN_MATCH_TOL,
};
pub use kernel::{Kernel, SineVariant, KERNEL_NEG_TOL, KERNEL_PROBE_POINTS};
pub use simpson::{integrate, DEFAULT_QUAD_TOL, MAX_DEPTH};
