//! Batch front end for the squeezed-bath oscillator toolkit: TOML run
//! configs, parameter sweeps, figure presets, CSV products and a JSON
//! manifest per run.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;
