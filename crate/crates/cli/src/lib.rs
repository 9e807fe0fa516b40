//! Command-line front end for decoscat: configuration handling, sweep and
//! dispersion runs, estimates, self-checks and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod output;
