//! Library surface of the batch front-end: run-configuration parsing and
//! deterministic output rendering, shared by the binary and its tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

pub mod config;
pub mod output;
