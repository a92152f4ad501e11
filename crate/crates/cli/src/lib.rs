//! Command-line front end for `wavenorm-core`: config parsing, sweeps,
//! reports and the verification suite.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod grammar;
pub mod model;
pub mod oracle;
pub mod report;
pub mod sweep;
