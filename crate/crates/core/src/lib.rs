//! Density of states, Lyapunov exponents and continuity bounds for discrete
//! random Schrödinger operators.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]
pub mod bounds;
pub mod dos;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod lyapunov;
pub mod measures;
pub mod quad;
pub(crate) mod rng;
pub mod special;
pub mod util;

pub use bounds::{BoundId, BoundReport, Verdict, VerifyConfig};
pub use error::{Error, Result};
pub use measures::{dw, dw_upper_bound, mollify, rescale, Kernel, MeasurePairDescriptor, ProbabilityMeasure};
pub use dos::{DosEstimate, EstimateKind, FunctionalEstimate, TestFunction};
pub use lattice::{HamiltonianBox, ModelSpec, Region};
pub use lyapunov::{LyapunovResult, Method};
