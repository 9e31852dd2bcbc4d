//! Free-particle quantum backflow, from one particle to N bosons.
//!
//! The crate evolves positive-momentum free-particle states, evaluates the
//! probability current and the half-line probabilities, and builds the
//! N-boson product-state quantities (the probability that at least one boson
//! sits on the negative half-line, its change `Δ_N` and the analytic bounds
//! sandwiching it).
//!
//! All quantities use dimensionless units with `α = ħ = m = 1`: positions are
//! `x' = αx/ħ`, times `t' = α²t/(mħ)`, momenta are measured in units of `α`.
//!
//! The crate is `no_std` and only needs `alloc`. Transcendental functions come
//! from `libm`, so results are bit-identical across platforms for a fixed
//! configuration.

#![no_std]
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod manybody;
pub mod momentum;
pub mod numerics;
pub mod observables;
pub mod propagator;

pub use analysis::{build_report, delta_n_max, find_t1, BackflowReport, ReportMeta};
pub use error::{Error, Result};
pub use manybody::{BosonEnsemble, BoundsRow, BRACKEN_MELLOY};
pub use momentum::{MomentumAmplitude, Term};
pub use numerics::{Estimate, QuadratureSpec, TailPolicy};
pub use observables::ProbabilitySeries;
pub use propagator::{Backend, WaveEvaluator};

pub use num_complex::Complex64;
