//! Open quantum Brownian motion of a detector coupled to a (possibly
//! squeezed, possibly parametrically driven) thermal scalar bath.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath_kernels;
pub mod energy_fdr;
pub mod error;
pub mod gaussian_state;
mod ode;
pub mod oscillator_dynamics;
pub mod parallel;
pub mod parametric_mode;
pub mod quadrature;

pub use error::{Error, Result};
