//! Van der Pol oscillator through its dual Hamiltonian: closed-form Lie-series
//! results, limit-cycle measurement, the Hannay angle of a parameter loop
//! and a direct geometric-phase estimate from slow parameter sweeps.

// `!(x > 0.0)` is written on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes and tableau constants keep the digits they are tabulated with.
#![allow(clippy::excessive_precision)]

pub mod dual;
pub mod error;
pub mod geophase;
pub mod hannay;
pub mod limit_cycle;
pub mod loops;
pub mod ode;
pub mod quad;
pub mod resonance;
pub mod series;

pub use dual::Params;
pub use error::{Error, Result};
pub use loops::ParamLoop;
