//! Command-line front end for the `qwalk-core` numerics.
//!
//! The binary is a thin wrapper over [`cli::main_with`]; [`checks`] holds
//! the numerical acceptance checks used by `qwalk verify` and by the
//! `acceptance` test target.

pub mod checks;
pub mod cli;
pub mod output;
