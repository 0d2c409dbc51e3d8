//! Open quantum dynamics on finite-dimensional systems: Lindblad semigroups
//! and channels, quantum detailed balance checks, and energy-exchange
//! fluctuation relations.

// NaN must fail the parameter checks, which `!(x > 0.0)` does
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balance;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod examples;
pub mod fluctuation;
pub mod matlin;
pub mod random;
pub mod states;

pub use error::{Error, Result};
