//! Command-line sweeps of the entanglement-production measure.
//!
//! The binary is a thin shell over [`commands`]; everything here is usable
//! in-process, which is how the integration tests drive it.

// `!(x >= y)` is used on purpose so that NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod operator_file;
pub mod output;
pub mod spec;

pub use commands::{cmd_evolve, cmd_measure, cmd_period, cmd_thermal, Format};
pub use error::CliError;
pub use spec::{Model, SweepSpec, TimeUnits, Variable};
